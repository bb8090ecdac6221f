from __future__ import absolute_import, division, print_function

import copy
import hashlib
import json
import os

import yaml

from slotbench.models import REPRESENTATIONS
from slotbench.policy.observation import REPRESENTATION_KIND, VARIANTS
from slotbench.scenegen.roster import ROSTER_PAIRS

STAGES = (
    "gen-data",
    "train-repr",
    "train-localizer",
    "eval-pck",
    "train-policy",
    "eval-policy",
    "sweep",
    "report",
)

SWEEP_PARAMETERS = ("k", "data_fraction", "episodes")

ROOT_ENV = "SLOTBENCH_ROOT"
DEFAULT_ROOT = "artifacts"

DEFAULTS = {
    "name": "default",
    "seed": 0,
    "seeds": [0],
    "data_fraction": 1.0,
    "dataset": {
        "episodes": 1000,
        "n_blocks": 8,
        "resolution": [64, 64],
        "seed": 0,
        "max_steps": 200,
        "workers": 1,
    },
    "representation": {
        "model_kind": "slot_attention",
        # None picks the per-experiment slot count, see resolve_k
        "k": None,
        "slot_dim": 64,
        "iters": 3,
        "encoder_channels": [32, 32, 32, 32],
        "decoder_resolution": [8, 8],
        "steps": 20000,
        # None picks the model's own batch size, see BATCH_SIZES
        "batch_size": None,
        "lr": 4e-4,
        "warmup": 1000,
        "checkpoint_every": 1000,
        "frame_stride": 1,
        "max_frames": None,
        "ari_frames": 50,
    },
    "localizer": {
        "steps": 2000,
        "batch_size": 64,
        "lr": 1e-3,
        "frame_stride": 5,
        "train_frames": 2000,
        "eval_frames": 1000,
        "pck_threshold": 0.1,
    },
    "policy": {
        "variant": "rgb",
        "kind": "explicit",
        "steps": 5000,
        "batch_size": 64,
        "lr": 1e-3,
        "counter_examples": 256,
        "validation_episodes": 0,
        "checkpoint_every": 1000,
        "eval_episodes": 200,
        "max_steps": 200,
        "workers": 1,
        "dump_episodes": 0,
    },
    "sweep": {
        "parameter": "k",
        "values": [4, 8, 12, 16, 20],
        "stages": ["train-repr", "eval-pck"],
        "workers": 1,
    },
}

# Config sections each stage's output depends on
STAGE_KEYS = {
    "gen-data": ["dataset"],
    "train-repr": ["dataset", "data_fraction", "seed", "representation"],
    "train-localizer": ["dataset", "data_fraction", "seed", "representation", "localizer"],
    "eval-pck": ["dataset", "data_fraction", "seed", "representation", "localizer"],
    "train-policy": ["dataset", "data_fraction", "seeds", "policy"],
    "eval-policy": ["dataset", "data_fraction", "seeds", "policy"],
    "sweep": ["name", "dataset", "data_fraction", "seed", "seeds", "representation", "localizer", "policy", "sweep"],
}

# Policy fields that only matter at evaluation time
POLICY_EVAL_KEYS = ("eval_episodes", "max_steps", "workers", "dump_episodes")

# Slot counts for localization, by blocks on the table
LOCALIZATION_SLOTS = {1: 7, 4: 11, 8: 11}
# Other table sizes are desk-scale runs
DESK_SLOTS = 8
POLICY_SLOTS = 16

BATCH_SIZES = {"slot_attention": 8, "autoencoder": 8, "moco": 16}


def resolve_k(n_blocks, variant):
    """
    Slot count when ``representation.k`` is left unset: 16 when a policy
    reads the slots, otherwise the localization count for the table size.
    """
    if REPRESENTATION_KIND.get(variant) == "slot_attention":
        return POLICY_SLOTS
    return LOCALIZATION_SLOTS.get(int(n_blocks), DESK_SLOTS)


class ConfigError(ValueError):
    pass


def _merge(base, update, path=""):
    merged = copy.deepcopy(base)
    for key, value in update.items():
        name = "{}{}".format(path, key)
        if key not in base:
            raise ConfigError("Unknown config key {!r}".format(name))
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError("Config key {!r} must be a mapping".format(name))
            merged[key] = _merge(base[key], value, name + ".")
        else:
            merged[key] = value
    return merged


def content_hash(obj):
    """
        Git blob SHA-1 of the canonical JSON form of ``obj``.
    """
    data = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
    header = "blob {}\0".format(len(data)).encode("utf-8")
    return hashlib.sha1(header + data).hexdigest()


def artifact_root(root=None):
    return root or os.environ.get(ROOT_ENV) or DEFAULT_ROOT


class ExperimentConfig(object):
    """
    One experiment: a stage plus every section of settings, merged over
    DEFAULTS. Loaded from YAML, overridable from the command line.
    """

    def __init__(self, stage=None, **sections):
        self.data = _merge(DEFAULTS, sections)
        self.stage = stage
        self.validate()
        self._resolve()

    def _resolve(self):
        # concrete values, so sections and hashes never hold None
        r = self.data["representation"]
        if r["k"] is None:
            r["k"] = resolve_k(self.data["dataset"]["n_blocks"], self.data["policy"]["variant"])
        if r["batch_size"] is None:
            r["batch_size"] = BATCH_SIZES[r["model_kind"]]

    @classmethod
    def from_yaml(cls, path, stage=None):
        try:
            with open(path) as f:
                loaded = yaml.safe_load(f) or {}
        except IOError as e:
            raise ConfigError("Could not read config {}: {}".format(path, e))
        except yaml.YAMLError as e:
            raise ConfigError("Could not parse config {}: {}".format(path, e))
        if not isinstance(loaded, dict):
            raise ConfigError("Config {} must hold a mapping".format(path))
        stage = loaded.pop("stage", None) if stage is None else stage
        loaded.pop("stage", None)
        return cls(stage, **loaded)

    def get_stage(self):
        return self._stage

    def set_stage(self, stage):
        if stage is not None and stage not in STAGES:
            raise ConfigError(
                "Not a recognized stage: {!r}. Must be one of {}".format(
                    stage, ", ".join(STAGES)
                )
            )
        self._stage = stage

    stage = property(get_stage, set_stage)

    def __getitem__(self, key):
        return self.data[key]

    def validate(self):
        d = self.data
        if not 0 < float(d["data_fraction"]) <= 1:
            raise ConfigError(
                "data_fraction must be in (0, 1], got {!r}".format(d["data_fraction"])
            )
        if int(d["dataset"]["n_blocks"]) not in ROSTER_PAIRS:
            raise ConfigError(
                "dataset.n_blocks must be one of {}, got {!r}".format(
                    sorted(ROSTER_PAIRS), d["dataset"]["n_blocks"]
                )
            )
        if int(d["dataset"]["seed"]) >= 10 ** 6:
            raise ConfigError("dataset.seed must stay below 10**6")
        for key in ("k", "batch_size"):
            value = d["representation"][key]
            if value is not None and int(value) < 1:
                raise ConfigError("representation.{} must be >= 1".format(key))
        if d["representation"]["model_kind"] not in REPRESENTATIONS:
            raise ConfigError(
                "Not a recognized model_kind: {!r}. Must be one of {}".format(
                    d["representation"]["model_kind"], ", ".join(sorted(REPRESENTATIONS))
                )
            )
        if not float(d["localizer"]["pck_threshold"]) > 0:
            raise ConfigError("localizer.pck_threshold must be > 0")
        variant = d["policy"]["variant"]
        if variant not in VARIANTS:
            raise ConfigError(
                "Not a recognized policy variant: {!r}. Must be one of {}".format(
                    variant, ", ".join(VARIANTS)
                )
            )
        needed = REPRESENTATION_KIND.get(variant)
        if needed is not None and needed != d["representation"]["model_kind"]:
            raise ConfigError(
                "Policy variant {!r} needs representation.model_kind {!r}".format(
                    variant, needed
                )
            )
        if d["policy"]["kind"] not in ("explicit", "implicit"):
            raise ConfigError("policy.kind must be 'explicit' or 'implicit'")
        if not d["seeds"]:
            raise ConfigError("seeds must list at least one policy seed")
        if d["sweep"]["parameter"] not in SWEEP_PARAMETERS:
            raise ConfigError(
                "Not a recognized sweep parameter: {!r}. Must be one of {}".format(
                    d["sweep"]["parameter"], ", ".join(SWEEP_PARAMETERS)
                )
            )

    def with_overrides(self, seed=None, k=None, data_fraction=None, pck_threshold=None, episodes=None):
        data = copy.deepcopy(self.data)
        if seed is not None:
            data["seed"] = int(seed)
            data["seeds"] = [int(seed)]
        if k is not None:
            data["representation"]["k"] = int(k)
        if data_fraction is not None:
            data["data_fraction"] = float(data_fraction)
        if pck_threshold is not None:
            data["localizer"]["pck_threshold"] = float(pck_threshold)
        if episodes is not None:
            data["dataset"]["episodes"] = int(episodes)
        return ExperimentConfig(self.stage, **data)

    def with_stage(self, stage):
        return ExperimentConfig(stage, **copy.deepcopy(self.data))

    def needs_representation(self):
        return self.data["policy"]["variant"] in REPRESENTATION_KIND

    def section(self, stage=None):
        """
            The part of the config a stage's output depends on, with the stage.
        """
        stage = stage or self.stage
        if stage not in STAGE_KEYS:
            raise ConfigError("Stage {!r} has no run directory".format(stage))
        keys = list(STAGE_KEYS[stage])
        if stage in ("train-policy", "eval-policy") and self.needs_representation():
            keys += ["seed", "representation"]
        out = {"stage": stage}
        for key in keys:
            out[key] = copy.deepcopy(self.data[key])
        if stage == "train-policy":
            for key in POLICY_EVAL_KEYS:
                out["policy"].pop(key)
        return out

    def content_hash(self, stage=None):
        return content_hash(self.section(stage))

    def to_dict(self):
        out = copy.deepcopy(self.data)
        out["stage"] = self.stage
        return out

    def dumps(self):
        return yaml.safe_dump(self.to_dict(), default_flow_style=False, sort_keys=True)
