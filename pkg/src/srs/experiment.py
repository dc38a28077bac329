"""Experiment configuration, presets and the seeded run loop."""

from __future__ import annotations

import dataclasses
import json
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from srs import __version__
from srs.habitat import HabitatGrid, write_pheromone_snapshot
from srs.landscape import (
    AckleyLandscape,
    ControlLandscape,
    Dynamics,
    Landscape,
    SchafferLandscape,
    ackley_domain,
    control_domain,
    schaffer_domain,
)
from srs.metrics import RunSummary, StepRecord, record_step, records_to_csv, summarize, summary_row, summary_to_csv
from srs.swarm import SwarmParams, colony_step, init_colony


class ConfigError(ValueError):
    """Invalid or conflicting configuration; carries the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


PRESETS: dict[str, dict[str, Any]] = {
    "ackley-speed": {"t_max": 100, "dynamics": "linear_path", "v": 1.0},
    "ackley-jump": {"t_max": 100, "dynamics": "jump_cycle", "uf": 5},
    "ackley-circular": {"t_max": 100, "dynamics": "circular", "radius": 1.0, "omega": 0.05},
    "schaffer-severity": {"t_max": 400, "dynamics": "severity_drift", "s": 0.1, "uf": 50},
    "schaffer-frequency": {"t_max": 400, "dynamics": "severity_drift", "s": 1.0, "uf": 50},
    "control": {"t_max": 400, "dynamics": "severity_drift", "s": 0.1, "uf": 50, "delta_e": 0.01},
}
SWEEPABLE = ("v", "s", "uf", "delta_e", "beta", "gamma", "eta", "k", "p", "initial_density", "radius", "omega")


@dataclass
class ExperimentConfig:
    preset: str = "ackley-speed"
    width: int = 100
    height: int = 100
    t_max: int = 100
    dynamics: str = "linear_path"
    v: float = 0.0
    s: float = 0.0
    uf: int = 50
    radius: float = 1.0
    omega: float = 0.05
    beta: float = 3.5
    gamma: float = 0.2
    eta: float = 0.07
    k: float = 0.015
    p: float = 1.9
    delta_e: float = 0.1
    initial_density: float = 1.0 / 3.0
    survival_mode: str = "deterministic"
    children_age_immediately: bool = False
    reset_extremes_on_change: bool = True
    ode_steps: int = 1000
    seed: int = 0
    repeats: int = 1
    jobs: int = 1
    eps: float = 0.05
    out: str = "runs"
    snapshots: int = 0

    def validate(self) -> None:
        if self.preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {self.preset!r}; choose from {sorted(PRESETS)}")
        positive = ("width", "height", "t_max", "uf", "repeats", "jobs", "ode_steps")
        for key in positive:
            if getattr(self, key) < 1:
                raise ConfigError(key, f"must be >= 1, got {getattr(self, key)}")
        non_negative = ("v", "beta", "gamma", "eta", "p", "delta_e", "eps", "snapshots", "radius", "seed")
        for key in non_negative:
            if getattr(self, key) < 0:
                raise ConfigError(key, f"must be non-negative, got {getattr(self, key)}")
        if not 0.0 <= self.k <= 1.0:
            raise ConfigError("k", f"must lie in [0, 1], got {self.k}")
        if not 0.0 < self.initial_density < 1.0:
            raise ConfigError("initial_density", f"must lie in (0, 1), got {self.initial_density}")
        if self.survival_mode not in ("stochastic", "deterministic"):
            raise ConfigError("survival_mode", f"must be 'stochastic' or 'deterministic', got {self.survival_mode!r}")
        family = self.preset.split("-")[0]
        allowed = {"ackley": ("static", "linear_path", "jump_cycle", "circular")}.get(
            family, ("static", "severity_drift")
        )
        if self.dynamics not in allowed:
            raise ConfigError("dynamics", f"{self.dynamics!r} does not apply to preset {self.preset!r}")

    def swarm_params(self, objective: str) -> SwarmParams:
        return SwarmParams(
            beta=self.beta,
            gamma=self.gamma,
            eta=self.eta,
            k=self.k,
            p=self.p,
            delta_e=self.delta_e,
            objective=objective,
            initial_density=self.initial_density,
            survival_mode=self.survival_mode,
            children_age_immediately=self.children_age_immediately,
            reset_extremes_on_change=self.reset_extremes_on_change,
        )

    def make_landscape(self) -> Landscape:
        dyn = Dynamics(kind=self.dynamics, v=self.v, uf=self.uf, s=self.s, radius=self.radius, omega=self.omega)
        family = self.preset.split("-")[0]
        if family == "ackley":
            return AckleyLandscape(ackley_domain(self.width, self.height), dyn)
        if family == "schaffer":
            return SchafferLandscape(schaffer_domain(self.width, self.height), dyn)
        return ControlLandscape(control_domain(self.width, self.height), dyn, steps=self.ode_steps)


FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def coerce(key: str, raw: Any) -> Any:
    """Convert a raw value (usually text) to the type of config field ``key``."""
    if key not in FIELD_TYPES:
        raise ConfigError(key, "unknown configuration key")
    kind = FIELD_TYPES[key]
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if kind == "int":
            value = float(text)
            if not value.is_integer():
                raise ValueError
            return int(value)
        if kind == "float":
            return float(text)
        if kind == "bool":
            lowered = text.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r} as {kind}") from None
    return text


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Read flat ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, Any] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key in values:
            raise ConfigError(key, f"set twice in {path}")
        values[key] = coerce(key, raw)
    return values


def build_config(preset: str, file_values: dict[str, Any] | None = None, overrides: dict[str, Any] | None = None) -> ExperimentConfig:
    """Preset defaults, then file values, then explicit overrides."""
    if preset not in PRESETS:
        raise ConfigError("preset", f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    merged: dict[str, Any] = {"preset": preset, **PRESETS[preset]}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if key == "preset" and value != preset:
                raise ConfigError("preset", f"conflicting presets {preset!r} and {value!r}")
            merged[key] = coerce(key, value)
    cfg = ExperimentConfig(**merged)
    cfg.validate()
    return cfg


def derive_seed(master: int, repeat: int) -> int:
    """Per-repeat seed: ``(master, repeat)`` mixed once through ``SeedSequence``."""
    return int(np.random.SeedSequence([master, repeat]).generate_state(1)[0])


def _fmt_param(value: Any) -> str:
    return f"{value:g}" if isinstance(value, float) else str(value)


@dataclass
class RunResult:
    run_id: str
    seed: int
    repeat: int
    param: str
    param_value: Any
    summary: RunSummary
    change_steps: list[int]
    csv_text: str = field(repr=False)


def simulate(cfg: ExperimentConfig, seed: int, snapshot_dir: Path | None = None) -> tuple[list[StepRecord], list[int]]:
    """Run one colony for ``cfg.t_max`` steps; returns step records and change steps."""
    landscape = cfg.make_landscape()
    params = cfg.swarm_params(landscape.objective)
    rng = np.random.default_rng(seed)
    grid = HabitatGrid(cfg.width, cfg.height)
    colony = init_colony(grid, params.initial_density, rng)
    records = []
    epoch = 0
    for t in range(cfg.t_max):
        if t > 0 and landscape.epoch_key(t) != landscape.epoch_key(t - 1):
            epoch += 1
        outcome = colony_step(colony, grid, landscape, t, params, rng)
        _, opt_value = landscape.true_optimum(t)
        records.append(record_step(outcome.altitudes, t, opt_value, landscape.maximize, epoch, cfg.eps))
        if snapshot_dir is not None and cfg.snapshots and t % cfg.snapshots == 0:
            write_pheromone_snapshot(grid, snapshot_dir, t)
    return records, landscape.change_steps(cfg.t_max)


def _run_one(job: tuple[ExperimentConfig, int, str, Any, str | None]) -> RunResult:
    cfg, repeat, param, value, out = job
    seed = derive_seed(cfg.seed, repeat)
    run_id = f"{cfg.preset}_{param}={_fmt_param(value)}_r{repeat:02d}"
    snap_dir = None
    if out is not None and cfg.snapshots:
        snap_dir = Path(out) / "snapshots" / run_id
        snap_dir.mkdir(parents=True, exist_ok=True)
    records, changes = simulate(cfg, seed, snap_dir)
    return RunResult(run_id, seed, repeat, param, value, summarize(records, changes), changes, records_to_csv(records))


def _check_writable(out: Path) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError("out", f"output directory {out} is not writable ({exc})") from None


def run_experiment(
    cfg: ExperimentConfig,
    param: str | None = None,
    values: Sequence[Any] | None = None,
    write: bool = True,
) -> list[RunResult]:
    """Run every (value, repeat) pair and, if ``write``, emit CSVs and a manifest.

    Without a sweep the single run is labelled by the preset's main knob.
    """
    cfg.validate()
    if param is None:
        param = {"linear_path": "v", "jump_cycle": "uf", "severity_drift": "s"}.get(cfg.dynamics, "seed")
        values = [getattr(cfg, param)]
    elif param not in SWEEPABLE:
        raise ConfigError("param", f"cannot sweep {param!r}; choose from {SWEEPABLE}")
    if not values:
        raise ConfigError("values", "sweep needs at least one value")
    configs = []
    for value in values:
        c = dataclasses.replace(cfg, **{param: coerce(param, value)})
        c.validate()
        configs.append(c)
    out = Path(cfg.out)
    if write:
        _check_writable(out)

    started = time.time()
    jobs = [(c, r, param, getattr(c, param), str(out) if write else None) for c in configs for r in range(cfg.repeats)]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda r: (r.param_value, r.repeat))

    if write:
        runs_dir = out / "runs"
        runs_dir.mkdir(exist_ok=True)
        for r in results:
            (runs_dir / f"{r.run_id}.csv").write_text(r.csv_text)
        rows = [summary_row(r.run_id, r.seed, cfg.preset, r.param_value, r.summary) for r in results]
        (out / "summary.csv").write_text(summary_to_csv(rows))
        manifest = {
            "config": dataclasses.asdict(cfg),
            "sweep": {"param": param, "values": [getattr(c, param) for c in configs]},
            "seeds": {r.run_id: r.seed for r in results},
            "seed_rule": "SeedSequence([seed, repeat]).generate_state(1)[0]",
            "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "started": time.strftime("%Y-%m-%dT%H:%M:%S", time.localtime(started)),
            "wall_clock_s": round(time.time() - started, 3),
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return results
