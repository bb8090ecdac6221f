from __future__ import absolute_import, division, print_function

from slotbench.scenegen.roster import ROSTER_PAIRS


def _name_list(names, kind):
    if names is None:
        return None
    if not isinstance(names, (list, tuple)):
        raise ValueError(
            "Not a recognized {} list: {!r}. Must be a list or tuple of strings".format(
                kind, names
            )
        )
    return list(names)


class Collector(object):
    def __init__(self):
        self._n_blocks = None
        self._seeds = None
        self._variables = None
        self._features = None
        self._data_fraction = None

    def get_n_blocks(self):
        """
            The roster size episodes are drawn with (1, 3, 4 or 8 blocks)
        """
        return self._n_blocks

    def set_n_blocks(self, n_blocks):
        if n_blocks is not None and n_blocks not in ROSTER_PAIRS:
            raise ValueError(
                "Not a recognized roster size: {!r}. Must be one of {}".format(
                    n_blocks, sorted(ROSTER_PAIRS)
                )
            )
        self._n_blocks = n_blocks

    n_blocks = property(get_n_blocks, set_n_blocks)

    def get_seeds(self):
        """
            The episode index range to collect as a (start, stop) tuple
        """
        return self._seeds

    def set_seeds(self, seeds):
        seeds = tuple(seeds)
        span = -1
        if len(seeds) == 2:
            span = seeds[1] - seeds[0]
        if span <= 0 or seeds[0] < 0:
            raise ValueError(
                "Not a recognized episode range: {!r}. Must be in format: (start, stop)".format(
                    seeds
                )
            )
        self._seeds = (int(seeds[0]), int(seeds[1]))

    seeds = property(get_seeds, set_seeds)

    def get_variables(self):
        """
            The perception variants to collect as a list of strings.
        """
        return self._variables

    def set_variables(self, variables):
        self._variables = _name_list(variables, "variable")

    variables = property(get_variables, set_variables)

    def get_features(self):
        """
            The scene entities (blocks, effector) to collect as a list of strings.
        """
        return self._features

    def set_features(self, features):
        self._features = _name_list(features, "feature")

    features = property(get_features, set_features)

    def get_data_fraction(self):
        """
            Fraction of the episodes to keep, counted from the first one
        """
        return self._data_fraction

    def set_data_fraction(self, fraction):
        if fraction is not None:
            fraction = float(fraction)
            if not 0 < fraction <= 1:
                raise ValueError(
                    "Not a recognized data fraction: {!r}. Must be in (0, 1]".format(
                        fraction
                    )
                )
        self._data_fraction = fraction

    data_fraction = property(get_data_fraction, set_data_fraction)

    def filter(self, **kwargs):
        if kwargs.get("n_blocks"):
            self.n_blocks = kwargs.pop("n_blocks")

        if kwargs.get("seeds"):
            self.seeds = kwargs.pop("seeds")

        if kwargs.get("variables"):
            self.variables = kwargs.pop("variables")

        if kwargs.get("features"):
            self.features = kwargs.pop("features")

        if kwargs.get("data_fraction"):
            self.data_fraction = kwargs.pop("data_fraction")

        if len(kwargs) > 0:
            # Apply custom filters that are left
            for k, v in kwargs.items():
                setattr(self, k, v)

        # Return self to enable chaining
        return self

    def clear(self):
        self._seeds = None
        self._variables = None
        self._features = None
        self._data_fraction = None

    def list_variables(self):
        """
            Lists the perception variants this collector can feed
            This should be overwritten by subclasses!
        """
        raise NotImplementedError

    def list_features(self):
        """
            Lists the scene entities available for this collector
            This should be overwritten by subclasses!
        """
        raise NotImplementedError

    def collect(self):
        """
            Do the actual work and return a list of TrajectoryRecords
            This should be overwritten by subclasses!
        """
        raise NotImplementedError

    def raw(self, format=None):
        """
            Do the actual work and return the raw per-frame records
            This should be overwritten by subclasses!
        """
        raise NotImplementedError
