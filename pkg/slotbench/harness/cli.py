from __future__ import absolute_import, division, print_function

import argparse
import json
import logging
import sys

from slotbench import logger
from slotbench.harness.config import STAGES, ConfigError, ExperimentConfig, artifact_root
from slotbench.harness.report import report
from slotbench.harness.runner import Runner


def build_parser():
    p = argparse.ArgumentParser(
        prog="slotbench",
        description="Object-centric representation benchmark for tabletop manipulation",
    )
    p.add_argument("stage", choices=STAGES)
    p.add_argument("--config", help="experiment YAML file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="number of slots")
    p.add_argument("--data-fraction", type=float, default=None)
    p.add_argument("--pck-threshold", type=float, default=None)
    p.add_argument("--force", action="store_true", default=False)
    p.add_argument("--root", default=None, help="artifact root (overrides SLOTBENCH_ROOT)")
    p.add_argument("--results", default=None, help="results dir for the report stage")
    p.add_argument("--verbose", "-v", action="store_true", default=False)
    return p


def _configure_logging(verbose):
    if not any(type(h) is logging.StreamHandler for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def main(argv=None):
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.stage == "report":
            summary = report(args.results or artifact_root(args.root))
            print(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
            return 0

        if args.config:
            config = ExperimentConfig.from_yaml(args.config, stage=args.stage)
        else:
            config = ExperimentConfig(args.stage)
        config = config.with_overrides(
            seed=args.seed,
            k=args.k,
            data_fraction=args.data_fraction,
            pck_threshold=args.pck_threshold,
        )
        result = Runner(config, root=args.root, force=args.force).run(args.stage)
    except (ConfigError, ValueError, IOError) as e:
        logger.error(str(e))
        return 2
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
