from __future__ import absolute_import, division, print_function

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from slotbench import logger  # noqa: E402
from slotbench.harness.ledger import Ledger  # noqa: E402
from slotbench.utils.dataorg import flatten_report  # noqa: E402
from slotbench.utils.files import atomic_write_json, atomic_write_text  # noqa: E402

SUMMARY_COLUMNS = [
    "experiment_id",
    "stage",
    "config_hash",
    "metric",
    "value",
    "timestamp",
    "wall_clock",
]
STRING_COLUMNS = ["experiment_id", "stage", "config_hash", "metric", "timestamp"]

EPISODE_COLUMNS = ["variant", "training_episodes", "success_rate_mean", "success_rate_sd", "config_hash"]
BLOCK_COLUMNS = ["model_kind", "n_blocks", "pck_mean", "config_hash"]


class EmptyResultsError(ValueError):
    pass


def _is_number(value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return False
    return math.isfinite(value)


def _latest(records):
    """One record per config hash, the most recent one."""
    by_hash = {}
    for record in records:
        by_hash[(record["stage"], record["config_hash"])] = record
    return sorted(by_hash.values(), key=lambda r: (r["stage"], r["config_hash"]))


def summary_frame(records):
    rows = []
    for record in records:
        metrics = flatten_report(record["metrics"])
        for metric in sorted(metrics):
            value = metrics[metric]
            if not _is_number(value):
                continue
            rows.append(
                {
                    "experiment_id": str(record["experiment_id"]),
                    "stage": record["stage"],
                    "config_hash": record["config_hash"],
                    "metric": metric,
                    "value": float(value),
                    "timestamp": record["timestamp"],
                    "wall_clock": float(record["wall_clock"]),
                }
            )
    frame = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    return frame.astype({c: "float64" for c in ("value", "wall_clock")})


def read_summary(path):
    frame = pd.read_csv(
        path,
        dtype={c: str for c in STRING_COLUMNS},
        float_precision="round_trip",
        keep_default_na=False,
    )
    return frame.astype({c: "float64" for c in ("value", "wall_clock")})


def episodes_frame(records):
    rows = [
        {
            "variant": r["metrics"].get("variant"),
            "training_episodes": int(r["metrics"]["training_episodes"]),
            "success_rate_mean": float(r["metrics"]["success_rate_mean"]),
            "success_rate_sd": float(r["metrics"]["success_rate_sd"]),
            "config_hash": r["config_hash"],
        }
        for r in records
        if r["stage"] == "eval-policy"
    ]
    frame = pd.DataFrame(rows, columns=EPISODE_COLUMNS)
    return frame.sort_values(["variant", "training_episodes"], kind="mergesort").reset_index(drop=True)


def blocks_frame(records):
    rows = [
        {
            "model_kind": r["metrics"].get("model_kind"),
            "n_blocks": int(r["metrics"]["n_blocks"]),
            "pck_mean": float(r["metrics"]["mean"]),
            "config_hash": r["config_hash"],
        }
        for r in records
        if r["stage"] == "eval-pck"
    ]
    frame = pd.DataFrame(rows, columns=BLOCK_COLUMNS)
    return frame.sort_values(["model_kind", "n_blocks"], kind="mergesort").reset_index(drop=True)


def sweep_frame(records, parameter="k"):
    rows = []
    for r in records:
        if r["stage"] != "sweep" or r["metrics"].get("parameter") != parameter:
            continue
        for row in r["metrics"]["rows"]:
            row = dict(row)
            row["config_hash"] = r["config_hash"]
            rows.append(row)
    if not rows:
        return pd.DataFrame(columns=["parameter", "value", "config_hash"])
    return pd.DataFrame(rows).sort_values("value", kind="mergesort").reset_index(drop=True)


def _plot(frame, group, x, y, yerr, xlabel, ylabel, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name, rows in frame.groupby(group, sort=True):
        errors = rows[yerr] if yerr else None
        ax.errorbar(rows[x], rows[y], yerr=errors, marker="o", capsize=3, label=str(name))
    if len(frame):
        ax.legend(loc="best", fontsize="small")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


class Summary(object):
    """
    Everything ``report`` emits, kept in memory: the long-form metric
    table, the success-vs-episodes and PCK-vs-blocks curve data and the
    K sweep rows.
    """

    def __init__(self, summary, episodes, blocks, k_sweep, output_dir):
        self.summary = summary
        self.episodes = episodes
        self.blocks = blocks
        self.k_sweep = k_sweep
        self.output_dir = output_dir

    def to_dict(self):
        return {
            "output_dir": self.output_dir,
            "metrics": int(len(self.summary)),
            "runs": int(self.summary["config_hash"].nunique()),
            "success_points": int(len(self.episodes)),
            "pck_points": int(len(self.blocks)),
            "k_sweep_rows": int(len(self.k_sweep)),
        }


def report(results_dir, output_dir=None):
    """
    Summarize every completed run in the ledger under ``results_dir``.

    Writes summary.csv, success_vs_episodes.{csv,png},
    pck_vs_blocks.{csv,png} and k_sweep.csv into ``output_dir`` (default
    ``<results_dir>/report``). Returns a Summary.
    """
    records = Ledger(results_dir).records()
    if not records:
        raise EmptyResultsError("No completed results in {}".format(results_dir))
    records = _latest(records)
    output_dir = output_dir or os.path.join(results_dir, "report")
    if not os.path.isdir(output_dir):
        os.makedirs(output_dir)

    summary = summary_frame(records)
    episodes = episodes_frame(records)
    blocks = blocks_frame(records)
    k_sweep = sweep_frame(records, "k")

    atomic_write_text(os.path.join(output_dir, "summary.csv"), summary.to_csv(index=False))
    atomic_write_text(os.path.join(output_dir, "success_vs_episodes.csv"), episodes.to_csv(index=False))
    atomic_write_text(os.path.join(output_dir, "pck_vs_blocks.csv"), blocks.to_csv(index=False))
    atomic_write_text(os.path.join(output_dir, "k_sweep.csv"), k_sweep.to_csv(index=False))

    _plot(
        episodes, "variant", "training_episodes", "success_rate_mean", "success_rate_sd",
        "training episodes", "success rate",
        os.path.join(output_dir, "success_vs_episodes.png"),
    )
    _plot(
        blocks, "model_kind", "n_blocks", "pck_mean", None,
        "blocks", "mean PCK",
        os.path.join(output_dir, "pck_vs_blocks.png"),
    )

    result = Summary(summary, episodes, blocks, k_sweep, output_dir)
    atomic_write_json(os.path.join(output_dir, "report.json"), result.to_dict())
    logger.info(
        "Report over {} runs written to {}".format(len(records), output_dir)
    )
    return result
