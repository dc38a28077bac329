"""Swarm best J per epoch against the exhaustive-grid optimum on the control landscape."""

from __future__ import annotations

import argparse

from srs.experiment import build_config, derive_seed, simulate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ode-steps", type=int, default=1000)
    args = ap.parse_args()
    cfg = build_config("control", overrides={"ode_steps": args.ode_steps})
    land = cfg.make_landscape()
    epochs = cfg.t_max // cfg.uf
    for r in range(args.repeats):
        records, _ = simulate(cfg, derive_seed(args.seed, r))
        ratios = []
        for e in range(epochs):
            window = [x.best_value for x in records[e * cfg.uf : (e + 1) * cfg.uf] if x.best_value is not None]
            ratios.append(max(window) / land.true_optimum(e * cfg.uf)[1] if window else 0.0)
        print(f"repeat {r}: best/optimum per epoch " + " ".join(f"{q:.3f}" for q in ratios))


if __name__ == "__main__":
    main()
