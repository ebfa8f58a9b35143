"""Run every shipped config and print one line per detector row.

    python3 scripts/reproduce_examples.py [--workers 4] [--out out]
"""

import argparse
import os
from pathlib import Path

from nonautodyn.cli import exit_status, run_experiment
from nonautodyn.config import ExperimentConfig

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="out", help="parent directory for the reports")
    ap.add_argument("names", nargs="*", help="config stems to run (default: all)")
    args = ap.parse_args()
    worst = 0
    for path in sorted(CONFIGS.glob("*.json")):
        if args.names and path.stem not in args.names:
            continue
        cfg = ExperimentConfig.load(str(path))
        cfg = ExperimentConfig(cfg.entry, cfg.system_params, cfg.detectors, os.path.join(args.out, path.stem),
                               cfg.seed, cfg.version)
        rep = run_experiment(cfg, workers=args.workers)
        print(f"== {path.stem} ({rep['timing']['wall_clock_s']:.1f}s) -> {cfg.output}")
        for row in rep["rows"]:
            res = row.get("result", {})
            summary = res.get("outcome") or res.get("first_hits") or row.get("error", {}).get("message", "")
            print(f"   {row['id']:>5} {row['detector']:<24} {row['status']:<6} {summary}")
        for c in rep["consistency"]:
            print(f"   {c['flag']:<12} {c['row']}")
        worst = max(worst, exit_status(rep))
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
