from __future__ import absolute_import, division, print_function

import math
import os
import shutil
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd

from slotbench import logger
from slotbench.collectors.disk.disk_collector import DiskCollector
from slotbench.harness.config import ConfigError, ExperimentConfig, artifact_root
from slotbench.harness.ledger import Ledger
from slotbench.localize.localizer import Localizer
from slotbench.models import (
    AutoencoderConfig,
    ContrastiveConfig,
    ConvAutoencoder,
    MomentumContrast,
    SlotAttentionAutoEncoder,
    SlotConfig,
    export_masks,
)
from slotbench.policy.bc import load_policy, train_policy
from slotbench.policy.evaluate import evaluate_policy, evaluation_seeds
from slotbench.scenegen.dataset import generate_dataset, to_uint8
from slotbench.scenegen.raster import ground_truth_masks
from slotbench.scenegen.roster import entity_names, roster
from slotbench.scenegen.trajectory import rollout_expert
from slotbench.training.checkpoint import load_model, parameter_checksum
from slotbench.training.trainers import images_to_tensor, train_representation
from slotbench.utils.dataorg import flatten_report
from slotbench.utils.files import atomic_write_json, atomic_write_text, read_json, run_lock
from slotbench.utils.metrics import mean_foreground_ari

CONFIG_NAME = "config.json"
STATUS_NAME = "status.json"


class MissingInputError(ConfigError):
    pass


class RunResult(object):
    def __init__(self, stage, run_dir, status, metrics):
        self.stage = stage
        self.run_dir = run_dir
        self.status = status
        self.metrics = metrics

    def to_dict(self):
        return {
            "stage": self.stage,
            "run_dir": self.run_dir,
            "status": self.status,
            "metrics": self.metrics,
        }


def heldout_samples(n_blocks, resolution, n_frames, stride=5, stream="evaluation"):
    """
    uint8 frames and states from expert rollouts on evaluation scenes, which
    never appear in a generated dataset.
    """
    images, states = [], []
    for seed in evaluation_seeds(max(n_frames, 1), stream):
        record = rollout_expert(seed, n_blocks, tuple(resolution))
        for frame in record.frames[::stride]:
            images.append(to_uint8(frame.image))
            states.append(frame.state)
            if len(states) >= n_frames:
                return np.stack(images), states
    return np.stack(images), states


def representation_factory(section, resolution):
    kind = section["model_kind"]
    resolution = tuple(resolution)
    if kind == "slot_attention":
        config = SlotConfig(
            num_slots=section["k"],
            slot_dim=section["slot_dim"],
            iters=section["iters"],
            resolution=resolution,
            encoder_channels=section["encoder_channels"],
            decoder_resolution=section["decoder_resolution"],
        )
        return lambda: SlotAttentionAutoEncoder(config)
    if kind == "autoencoder":
        config = AutoencoderConfig(
            resolution=resolution,
            encoder_channels=section["encoder_channels"],
            decoder_resolution=section["decoder_resolution"],
        )
        return lambda: ConvAutoencoder(config)
    config = ContrastiveConfig(
        resolution=resolution,
        encoder_channels=section["encoder_channels"],
        batch_size=section["batch_size"],
    )
    return lambda: MomentumContrast(config)


class Runner(object):
    """
    Runs experiment stages into ``<root>/<stage>/<config hash>``. A run
    directory holds the frozen config echo, the stage outputs and, once
    everything else is on disk, ``status.json``; only then is the run
    appended to the ledger. Completed runs are cache hits unless ``force``.
    """

    def __init__(self, config, root=None, force=False):
        if not isinstance(config, ExperimentConfig):
            config = ExperimentConfig(**config)
        self.config = config
        self.root = artifact_root(root)
        self.force = force
        self.ledger = Ledger(self.root)

    # ---- paths

    def run_dir(self, stage):
        return os.path.join(self.root, stage, self.config.content_hash(stage)[:12])

    def lock_path(self, stage):
        return os.path.join(
            self.root, stage, ".{}.lock".format(self.config.content_hash(stage)[:12])
        )

    def is_complete(self, stage):
        return os.path.isfile(os.path.join(self.run_dir(stage), STATUS_NAME))

    def dataset_root(self):
        return os.path.join(self.run_dir("gen-data"), "data")

    def training_seeds(self):
        """Scene seeds of every episode in the generated dataset."""
        self._require("gen-data")
        return [e["seed"] for e in DiskCollector(self.dataset_root()).manifest.episodes]

    def representation_path(self):
        return os.path.join(self.run_dir("train-repr"), "checkpoints", "best.pt")

    def _require(self, stage):
        if not self.is_complete(stage):
            raise MissingInputError(
                "Missing input: run `slotbench {}` with this config first ({})".format(
                    stage, self.run_dir(stage)
                )
            )

    # ---- driver

    def run(self, stage=None, force=None):
        stage = stage or self.config.stage
        force = self.force if force is None else force
        if stage == "report":
            from slotbench.harness.report import report

            return RunResult(stage, self.root, "complete", report(self.root).to_dict())

        # sweep points that share a run directory take turns on it
        with run_lock(self.lock_path(stage)):
            return self._run_locked(stage, force)

    def _run_locked(self, stage, force):
        section = self.config.section(stage)
        config_hash = self.config.content_hash(stage)
        run_dir = self.run_dir(stage)
        config_path = os.path.join(run_dir, CONFIG_NAME)
        status_path = os.path.join(run_dir, STATUS_NAME)

        if os.path.isfile(config_path) and read_json(config_path) != section:
            raise ConfigError(
                "Hash collision at {}: stored config differs from this one".format(run_dir)
            )
        if os.path.isfile(status_path) and not force:
            logger.info("{} cached at {}".format(stage, run_dir))
            return RunResult(stage, run_dir, "cached", read_json(status_path)["metrics"])

        if os.path.isdir(run_dir):
            shutil.rmtree(run_dir)
        os.makedirs(run_dir)
        atomic_write_json(config_path, section)

        logger.info("Running {} into {}".format(stage, run_dir))
        started = time.time()
        metrics = getattr(self, "_" + stage.replace("-", "_"))(run_dir)
        wall_clock = time.time() - started

        atomic_write_json(
            status_path,
            {"status": "complete", "metrics": metrics, "wall_clock": wall_clock},
        )
        self.ledger.append(
            self.config["name"], config_hash, stage, run_dir, metrics, wall_clock
        )
        return RunResult(stage, run_dir, "complete", metrics)

    def ensure(self, stage):
        """Run ``stage`` unless it already completed."""
        return self.run(stage, force=False)

    # ---- stages

    def _gen_data(self, run_dir):
        d = self.config["dataset"]
        manifest = generate_dataset(
            os.path.join(run_dir, "data"),
            d["episodes"],
            n_blocks=d["n_blocks"],
            resolution=d["resolution"],
            seed=d["seed"],
            max_steps=d["max_steps"],
            workers=d["workers"],
        )
        frames = sum(e["n_frames"] for e in manifest.episodes)
        return {"episodes": manifest.n_episodes, "frames": frames, "n_blocks": manifest.n_blocks}

    def _collector(self):
        self._require("gen-data")
        return DiskCollector(self.dataset_root()).filter(
            data_fraction=self.config["data_fraction"]
        )

    def _train_repr(self, run_dir):
        r = self.config["representation"]
        collector = self._collector()
        images = collector.images(stride=r["frame_stride"], limit=r["max_frames"])
        resolution = images.shape[1:3]
        result = train_representation(
            representation_factory(r, resolution),
            images,
            steps=r["steps"],
            batch_size=r["batch_size"],
            lr=r["lr"],
            warmup=r["warmup"],
            checkpoint_every=r["checkpoint_every"],
            seed=self.config["seed"],
            output_dir=os.path.join(run_dir, "checkpoints"),
        )
        atomic_write_text(
            os.path.join(run_dir, "loss_curve.csv"),
            pd.DataFrame(
                {"step": np.arange(1, len(result.losses) + 1), "loss": result.losses}
            ).to_csv(index=False),
        )
        metrics = {
            "model_kind": r["model_kind"],
            "k": r["k"],
            "frames": int(len(images)),
            "initial_loss": result.initial_loss,
            "final_loss": result.final_loss,
            "best_loss": result.best_loss,
            "best_step": result.best_step,
        }
        model = load_model(self.representation_path())
        metrics["checksum"] = parameter_checksum(model)
        if r["model_kind"] == "slot_attention" and r["ari_frames"]:
            metrics["foreground_ari"] = self._object_discovery(model, resolution, run_dir)
        return metrics

    def _object_discovery(self, model, resolution, run_dir):
        n_blocks = self.config["dataset"]["n_blocks"]
        images, states = heldout_samples(
            n_blocks, resolution, self.config["representation"]["ari_frames"]
        )
        stack = model.extract_masks(images_to_tensor(images))
        pred = stack.masks.numpy()
        gt = [ground_truth_masks(s, resolution).masks for s in states]
        export_masks(pred[0], os.path.join(run_dir, "masks"), meta={"scene": 0})
        return mean_foreground_ari(pred, gt)

    def _train_localizer(self, run_dir):
        self._require("train-repr")
        loc_cfg = self.config["localizer"]
        upstream = load_model(self.representation_path())
        collector = self._collector()
        images, states = collector.samples(
            stride=loc_cfg["frame_stride"], limit=loc_cfg["train_frames"]
        )
        names = collector.list_features()
        localizer = Localizer(
            upstream,
            names,
            steps=loc_cfg["steps"],
            batch_size=loc_cfg["batch_size"],
            lr=loc_cfg["lr"],
            seed=self.config["seed"],
        )
        result = localizer.fit(images, collector.targets(states))
        localizer.save(os.path.join(run_dir, "localizer.pt"))
        return {
            "variant": localizer.variant,
            "frames": int(len(images)),
            "final_loss": result.final_loss,
            "upstream_checksum": localizer.upstream_checksum,
        }

    def _eval_pck(self, run_dir):
        self._require("train-repr")
        self.ensure("train-localizer")
        loc_cfg = self.config["localizer"]
        upstream = load_model(self.representation_path())
        localizer = Localizer.load(
            os.path.join(self.run_dir("train-localizer"), "localizer.pt"), upstream
        )
        n_blocks = self.config["dataset"]["n_blocks"]
        resolution = self.config["dataset"]["resolution"]
        images, states = heldout_samples(
            n_blocks, resolution, loc_cfg["eval_frames"], loc_cfg["frame_stride"]
        )
        targets = np.stack([s.positions() for s in states])
        report = localizer.evaluate(images, targets, loc_cfg["pck_threshold"])
        report.write(run_dir)
        metrics = report.to_dict()
        metrics["model_kind"] = self.config["representation"]["model_kind"]
        metrics["n_blocks"] = n_blocks
        metrics["names"] = entity_names(roster(n_blocks))
        return metrics

    def _train_policy(self, run_dir):
        p = self.config["policy"]
        representation = None
        rep_path = None
        if self.config.needs_representation():
            self._require("train-repr")
            rep_path = self.representation_path()
            representation = load_model(rep_path)
        transitions = self._collector().transitions()
        metrics = {"variant": p["variant"], "kind": p["kind"], "seeds": {}}
        for seed in self.config["seeds"]:
            seed_dir = os.path.join(run_dir, "seed_{}".format(seed))
            policy, result = train_policy(
                transitions,
                p["variant"],
                kind=p["kind"],
                representation=representation,
                steps=p["steps"],
                batch_size=p["batch_size"],
                lr=p["lr"],
                counter_examples=p["counter_examples"],
                validation_episodes=p["validation_episodes"],
                checkpoint_every=p["checkpoint_every"],
                seed=seed,
                output_dir=seed_dir,
            )
            policy.save(os.path.join(seed_dir, "policy.pt"), rep_path)
            metrics["seeds"][str(seed)] = {
                "final_loss": result.final_loss,
                "validation": result.validation,
            }
        return metrics

    def _eval_policy(self, run_dir):
        self.ensure("train-policy")
        p = self.config["policy"]
        d = self.config["dataset"]
        policies = {
            seed: load_policy(
                os.path.join(self.run_dir("train-policy"), "seed_{}".format(seed), "policy.pt"),
                seed=seed,
            )
            for seed in self.config["seeds"]
        }
        report = evaluate_policy(
            policies,
            d["n_blocks"],
            n_episodes=p["eval_episodes"],
            max_steps=p["max_steps"],
            resolution=d["resolution"],
            workers=p["workers"],
            dump_dir=os.path.join(run_dir, "rollouts") if p["dump_episodes"] else None,
            dump_episodes=p["dump_episodes"],
            variant=p["variant"],
            training_seeds=self.training_seeds(),
        )
        report.write(run_dir)
        metrics = report.to_dict()
        metrics["training_episodes"] = int(
            math.ceil(self.config["data_fraction"] * d["episodes"])
        )
        return metrics

    def _sweep(self, run_dir):
        s = self.config["sweep"]
        parameter = s["parameter"]
        points = [
            self.config.with_overrides(**{parameter: value}).to_dict()
            for value in s["values"]
        ]
        # shared datasets are generated once, before the parallel part
        for point in points:
            Runner(ExperimentConfig(**_strip_stage(point)), self.root).ensure("gen-data")

        jobs = [(point, self.root, list(s["stages"])) for point in points]
        if s["workers"] > 1:
            with ProcessPoolExecutor(max_workers=s["workers"]) as pool:
                results = list(pool.map(_sweep_point, jobs))
        else:
            results = [_sweep_point(job) for job in jobs]

        rows = []
        for value, stage_metrics in zip(s["values"], results):
            row = {"parameter": parameter, "value": value}
            row.update(_sweep_row(stage_metrics))
            rows.append(row)

        frame = pd.DataFrame(rows)
        atomic_write_text(os.path.join(run_dir, "sweep.csv"), frame.to_csv(index=False))
        atomic_write_json(os.path.join(run_dir, "sweep.json"), rows)
        metrics = {"parameter": parameter, "rows": rows}
        losses = [(r["best_loss"], r["value"]) for r in rows if r.get("best_loss") is not None]
        if parameter == "k" and losses:
            metrics["selected_by_loss"] = min(losses)[1]
        return metrics


def _strip_stage(point):
    point = dict(point)
    point.pop("stage", None)
    return point


def _sweep_point(job):
    point, root, stages = job
    runner = Runner(ExperimentConfig(**_strip_stage(point)), root)
    out = {}
    for stage in stages:
        out[stage] = runner.ensure(stage).metrics
    return out


def _sweep_row(stage_metrics):
    row = {}
    if "train-repr" in stage_metrics:
        m = stage_metrics["train-repr"]
        row["best_loss"] = m.get("best_loss")
        row["final_loss"] = m.get("final_loss")
        if "foreground_ari" in m:
            row["foreground_ari"] = m["foreground_ari"]
    if "eval-pck" in stage_metrics:
        row["pck_mean"] = stage_metrics["eval-pck"]["mean"]
    if "eval-policy" in stage_metrics:
        m = stage_metrics["eval-policy"]
        row["success_rate_mean"] = m["success_rate_mean"]
        row["success_rate_sd"] = m["success_rate_sd"]
        row["training_episodes"] = m["training_episodes"]
    return flatten_report(row)
