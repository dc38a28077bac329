"""Success rate against target speed on the moving Ackley field.

    python3 scripts/speed_sweep.py --out runs/speed --repeats 10
"""

from __future__ import annotations

import argparse
import statistics
from collections import defaultdict

from srs.experiment import build_config, run_experiment

SPEEDS = (0, 0.5, 1, 1.5, 2, 3, 5, 10)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/speed")
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--survival-mode", default="deterministic")
    args = ap.parse_args()
    cfg = build_config(
        "ackley-speed",
        overrides={"repeats": args.repeats, "seed": args.seed, "jobs": args.jobs, "out": args.out, "survival_mode": args.survival_mode},
    )
    by_v = defaultdict(list)
    for r in run_experiment(cfg, "v", list(SPEEDS)):
        by_v[r.param_value].append((r.summary.success_rate, r.summary.records[-1].population))
    print("v      success  final_pop")
    for v, rows in sorted(by_v.items()):
        print(f"{v:<6g} {statistics.fmean(s for s, _ in rows):.3f}    {statistics.fmean(p for _, p in rows):.0f}")


if __name__ == "__main__":
    main()
