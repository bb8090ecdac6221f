from __future__ import absolute_import, division, print_function

from concurrent.futures import ProcessPoolExecutor

from slotbench import logger
from slotbench.collectors.collector import Collector
from slotbench.parsers.trajectory import TrajectoryParser
from slotbench.scenegen.raster import render
from slotbench.scenegen.roster import entity_names, roster
from slotbench.scenegen.trajectory import (
    MAX_EPISODE_STEPS,
    Frame,
    TrajectoryRecord,
    episode_seed,
    rollout_expert,
)


class ExpertQuotaError(RuntimeError):
    pass


def _attempt(args):
    seed, attempt, n_blocks, max_steps = args
    return rollout_expert(
        episode_seed(seed, attempt), n_blocks, None, max_steps=max_steps
    )


class ExpertCollector(Collector):
    """
    Collects successful scripted-expert demonstrations from the simulator.

    Attempts are numbered 0, 1, 2, ... under the dataset ``seed``; failed
    attempts are dropped and the i-th retained one is episode i. The
    ``seeds`` filter picks the episode index range.
    """

    def __init__(self, **kwargs):
        super(ExpertCollector, self).__init__()
        self.n_blocks = kwargs.get("n_blocks", 8)
        self.resolution = tuple(kwargs.get("resolution", (64, 64)))
        self.max_steps = kwargs.get("max_steps", MAX_EPISODE_STEPS)
        self.seed = kwargs.get("seed", 0)
        self.workers = kwargs.get("workers", 1)
        self.attempt_factor = kwargs.get("attempt_factor", 2)
        self.parser = TrajectoryParser()

    def list_features(self):
        return entity_names(roster(self.n_blocks))

    def list_variables(self):
        return ["rgb", "rgb_plus_gt_segmentation"]

    def _episode_range(self):
        if self.seeds is None:
            raise ValueError(
                "You must set a filter for the episode range (seeds)"
            )
        return self.seeds

    def _attempts(self, stop):
        jobs = [
            (self.seed, k, self.n_blocks, self.max_steps)
            for k in range(self.attempt_factor * stop)
        ]
        if self.workers > 1:
            # results stay in attempt order, so sharding never changes output
            chunk = self.workers * 8
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                for i in range(0, len(jobs), chunk):
                    for record in pool.map(_attempt, jobs[i:i + chunk]):
                        yield record
        else:
            for job in jobs:
                yield _attempt(job)

    def iter_episodes(self, rendered=True):
        """
            Yields (index, TrajectoryRecord) for every episode in range.
        """
        start, stop = self._episode_range()
        retained = 0
        attempts = 0
        for record in self._attempts(stop):
            attempts += 1
            if not record.success:
                logger.debug(
                    "Dropping failed expert attempt {} (seed {})".format(
                        attempts - 1, record.seed
                    )
                )
                continue
            if retained >= start:
                yield retained, (self._render(record) if rendered else record)
            retained += 1
            if retained >= stop:
                break

        logger.info(
            "Expert retained {} of {} attempts".format(retained, attempts)
        )
        if retained < stop:
            raise ExpertQuotaError(
                "Expert reached only {} of {} episodes within {} attempts".format(
                    retained, stop, self.attempt_factor * stop
                )
            )

    def _render(self, record):
        frames = [
            Frame(render(f.state, self.resolution), f.state, f.action)
            for f in record.frames
        ]
        return TrajectoryRecord(
            frames,
            record.target_block,
            record.pole_pos,
            record.success,
            record.seed,
        )

    def collect(self, rendered=True):
        return [r for _, r in self.iter_episodes(rendered=rendered)]

    def raw(self, **kwargs):
        return [
            self.parser.serialize(r)
            for _, r in self.iter_episodes(rendered=False)
        ]
