"""Schaffer tracking under growing severity, or under changing update frequency.

    python3 scripts/severity_sweep.py                    # s in 0.1 .. 1.5 at uf=50
    python3 scripts/severity_sweep.py --param uf         # uf in 50, 25, 10, 5 at s=1
"""

from __future__ import annotations

import argparse
import statistics
from collections import defaultdict

from srs.experiment import build_config, run_experiment

SWEEPS = {
    "s": ("schaffer-severity", (0.1, 0.2, 0.3, 0.5, 1.0, 1.5)),
    "uf": ("schaffer-frequency", (50, 25, 10, 5)),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--param", choices=sorted(SWEEPS), default="s")
    ap.add_argument("--out", default=None)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    preset, values = SWEEPS[args.param]
    out = args.out or f"runs/{preset}"
    cfg = build_config(preset, overrides={"repeats": args.repeats, "seed": args.seed, "jobs": args.jobs, "out": out})
    grouped = defaultdict(list)
    for r in run_experiment(cfg, args.param, list(values)):
        grouped[r.param_value].append(r.summary)
    print(f"{args.param:<6} success  median_reaction  censored")
    for value, summaries in grouped.items():
        reactions = [x for s in summaries for x in s.uncensored_reactions]
        med = statistics.median(reactions) if reactions else float("nan")
        print(f"{value:<6g} {statistics.fmean(s.success_rate for s in summaries):.3f}    {med:<15g}  {sum(s.censored_count for s in summaries)}")


if __name__ == "__main__":
    main()
