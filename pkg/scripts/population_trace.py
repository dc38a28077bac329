"""Seed-averaged population and best value per step, written as CSV to stdout.

    python3 scripts/population_trace.py --preset schaffer-frequency --uf 50 > trace.csv
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from srs.experiment import build_config, derive_seed, simulate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="schaffer-frequency")
    ap.add_argument("--uf", type=int, default=50)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--survival-mode", default="deterministic")
    args = ap.parse_args()
    cfg = build_config(args.preset, overrides={"uf": args.uf, "survival_mode": args.survival_mode})
    pops, best, epochs = [], [], []
    for r in range(args.repeats):
        records, _ = simulate(cfg, derive_seed(args.seed, r))
        pops.append([x.population for x in records])
        best.append([np.nan if x.best_value is None else x.best_value for x in records])
        epochs = [x.epoch for x in records]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["t", "epoch", "mean_population", "mean_best_value"])
    for t, (p, b) in enumerate(zip(np.mean(pops, axis=0), np.nanmean(best, axis=0))):
        w.writerow([t, epochs[t], f"{p:.1f}", f"{b:.6g}"])


if __name__ == "__main__":
    main()
