"""Reaction time after target jumps on the Ackley field for several update frequencies."""

from __future__ import annotations

import argparse
import statistics

from srs.experiment import build_config, derive_seed, simulate
from srs.metrics import reaction_times


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--survival-mode", default="deterministic")
    args = ap.parse_args()
    print("uf   median  uncensored  censored")
    for uf in (50, 25, 10, 5):
        cfg = build_config("ackley-jump", overrides={"uf": uf, "survival_mode": args.survival_mode})
        done, censored = [], 0
        for r in range(args.repeats):
            records, changes = simulate(cfg, derive_seed(args.seed, r))
            rt = reaction_times(records, changes)
            done += [x for x in rt if x is not None]
            censored += rt.count(None)
        med = statistics.median(done) if done else float("nan")
        print(f"{uf:<4d} {med:<7g} {len(done):<11d} {censored}")


if __name__ == "__main__":
    main()
