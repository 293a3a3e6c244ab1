"""Command-line entry point.

    levymoead run --config FILE [--preset exp1|exp2] [--dataset NAME] [--reps N]
                  [--seed S] [--out DIR] [--max-gen G] [--workers K]
    levymoead metrics --front FILE --frontier FILE [--hv-ref R1,R2]
    levymoead stats --bundle DIR
    levymoead --dump-universe FILE
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .datasets import load_frontier, load_universe, universe_to_json
from .harness import ConfigError, ExperimentConfig, aggregate, experiment_presets, load_bundle, run_experiment
from .metrics import METRIC_NAMES, all_metrics, archive_from_csv
from .stats import grid_to_csv


def _build_parser():
    p = argparse.ArgumentParser(prog="levymoead", description=__doc__.splitlines()[0])
    p.add_argument("--dump-universe", metavar="FILE", help="print a parsed portfolio file as canonical JSON")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command")

    r = sub.add_parser("run", help="run an experiment and write a result bundle")
    r.add_argument("--config", metavar="FILE", help="JSON experiment config")
    r.add_argument("--preset", choices=["exp1", "exp2"])
    r.add_argument("--dataset")
    r.add_argument("--data-dir")
    r.add_argument("--reps", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--out")
    r.add_argument("--max-gen", type=int)
    r.add_argument("--workers", type=int)

    m = sub.add_parser("metrics", help="six indicators of a front CSV against a frontier file")
    m.add_argument("--front", required=True, metavar="FILE", help="CSV with header return,risk")
    m.add_argument("--frontier", required=True, metavar="FILE", help="portef-style frontier file")
    m.add_argument("--hv-ref", metavar="R1,R2", help="hypervolume reference (return,risk)")

    s = sub.add_parser("stats", help="recompute the aggregated grid of a bundle")
    s.add_argument("--bundle", required=True, metavar="DIR")
    return p


def _resolve_config(args):
    doc = {}
    if args.preset:
        doc = experiment_presets(args.preset).to_dict()
    if args.config:
        doc.update(json.loads(Path(args.config).read_text()))
    flags = {
        "dataset": args.dataset,
        "data_dir": args.data_dir,
        "repetitions": args.reps,
        "base_seed": args.seed,
        "out": args.out,
        "max_gen": args.max_gen,
        "workers": args.workers,
    }
    doc.update({k: v for k, v in flags.items() if v is not None})
    return ExperimentConfig.from_dict(doc)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    if args.dump_universe:
        print(universe_to_json(load_universe(args.dump_universe)))
        return 0

    try:
        if args.command == "run":
            if not (args.config or args.preset):
                raise ConfigError("config: give --config and/or --preset")
            cfg = _resolve_config(args)
            out = run_experiment(cfg)
            print(out)
            return 0
        if args.command == "metrics":
            pts = archive_from_csv(Path(args.front).read_text())
            ref = tuple(float(v) for v in args.hv_ref.split(",")) if args.hv_ref else None
            vals = all_metrics(pts, load_frontier(args.frontier), ref)
            for name in METRIC_NAMES:
                print(f"{name},{vals[name]:.12g}")
            return 0
        if args.command == "stats":
            cfg, records = load_bundle(args.bundle)
            marked = aggregate(records, cfg["algorithms"], cfg.get("dataset") or "dataset", cfg.get("alpha", 0.05))
            sys.stdout.write(grid_to_csv(marked, cfg["algorithms"]))
            return 0
    except (ConfigError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _build_parser().print_help()
    return 1


if __name__ == "__main__":
    sys.exit(main())
