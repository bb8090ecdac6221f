from __future__ import absolute_import, division, print_function

from slotbench.harness.config import (
    STAGES,
    ConfigError,
    ExperimentConfig,
    artifact_root,
    content_hash,
)
from slotbench.harness.ledger import Ledger
from slotbench.harness.report import EmptyResultsError, Summary, read_summary, report
from slotbench.harness.runner import MissingInputError, Runner, RunResult, heldout_samples

__all__ = [
    "STAGES",
    "ConfigError",
    "EmptyResultsError",
    "ExperimentConfig",
    "Ledger",
    "MissingInputError",
    "RunResult",
    "Runner",
    "Summary",
    "artifact_root",
    "content_hash",
    "heldout_samples",
    "read_summary",
    "report",
]
