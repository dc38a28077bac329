"""Time-varying objective fields sampled on the habitat lattice.

Cell ``(i, j)`` samples the point ``(x_lo + i * dx, y_lo + j * dy)`` with
``dx = (x_hi - x_lo) / width``: the lattice covers ``[lo, hi)`` and wraps at
``hi``, so domain points such as ``0`` or ``-0.1`` land exactly on a sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from srs import ode
from srs.habitat import CellCoord

ACKLEY_RANGE = (-2.0, 2.0)
SCHAFFER_RANGE = (-1.0, 1.0)
CONTROL_RANGE = ode.U_BOUNDS
# B, C, A in visiting order
JUMP_POINTS = ((0.0, 0.0), (1.0, -1.5), (-1.5, 1.0))


@dataclass(frozen=True)
class DomainMap:
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    width: int = 100
    height: int = 100

    @property
    def dx(self) -> float:
        return (self.x_range[1] - self.x_range[0]) / self.width

    @property
    def dy(self) -> float:
        return (self.y_range[1] - self.y_range[0]) / self.height

    def cell_to_point(self, c: CellCoord) -> tuple[float, float]:
        return self.x_range[0] + c.x * self.dx, self.y_range[0] + c.y * self.dy

    def point_to_cell(self, x: float, y: float) -> CellCoord:
        """Nearest sample to ``(x, y)``, halves rounding up, wrapped onto the torus."""
        i = math.floor((x - self.x_range[0]) / self.dx + 0.5)
        j = math.floor((y - self.y_range[0]) / self.dy + 0.5)
        return CellCoord(i % self.width, j % self.height)

    def axes(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        xs = self.x_range[0] + np.arange(self.width) * self.dx
        ys = self.y_range[0] + np.arange(self.height) * self.dy
        return xs, ys

    def mesh(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Sample coordinates as ``(X, Y)`` arrays of shape ``(height, width)``."""
        return np.meshgrid(*self.axes())


# --- base functions ---------------------------------------------------------


def ackley(x: ArrayLike, a: ArrayLike) -> float:
    """N-dimensional Ackley function centred on ``a`` (minimum 0 at ``x = a``)."""
    d = np.asarray(x, dtype=np.float64) - np.asarray(a, dtype=np.float64)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("x and a must be equal-length non-empty vectors")
    n = d.size
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(d * d) / n))
        - np.exp(np.sum(np.cos(2 * np.pi * d)) / n)
        + 20.0
        + np.e
    )


def ackley_2d(x, y, a: tuple[float, float]):
    """Vectorised two-dimensional :func:`ackley` over coordinate arrays."""
    dx = np.asarray(x) - a[0]
    dy = np.asarray(y) - a[1]
    return (
        -20.0 * np.exp(-0.2 * np.sqrt((dx * dx + dy * dy) / 2.0))
        - np.exp((np.cos(2 * np.pi * dx) + np.cos(2 * np.pi * dy)) / 2.0)
        + 20.0
        + np.e
    )


def schaffer_f7(x1, x2, delta: float):
    """Modified Schaffer F7 evaluated at ``X = x + delta``; peak 2.5 at ``X = 0``."""
    r2 = (np.asarray(x1) + delta) ** 2 + (np.asarray(x2) + delta) ** 2
    return 2.5 - r2**0.25 * (np.sin(50.0 * r2**0.1) ** 2 + 1.0)


def severity_shift(epoch: int, s: float) -> float:
    if epoch < 0:
        raise ValueError(f"epoch must be >= 0, got {epoch}")
    return epoch * s


def epoch_index(t: int, uf: int) -> int:
    if uf < 1:
        raise ValueError(f"update frequency must be >= 1, got {uf}")
    return t // uf


def linear_path_target(t: int, v: float, start: CellCoord, width: int, height: int) -> CellCoord:
    """Target after ``floor(v * t)`` diagonal cells towards the south-east."""
    if v < 0:
        raise ValueError(f"speed must be non-negative, got {v}")
    m = math.floor(v * t + 1e-9)
    return CellCoord((start.x + m) % width, (start.y - m) % height)


def jump_cycle_target(t: int, uf: int, points: Sequence[CellCoord]) -> CellCoord:
    if not points:
        raise ValueError("jump cycle needs at least one point")
    return points[epoch_index(t, uf) % len(points)]


def circular_target(t: int, radius: float, omega: float, center: tuple[float, float], domain: DomainMap) -> CellCoord:
    theta = omega * t
    return domain.point_to_cell(center[0] + radius * math.cos(theta), center[1] + radius * math.sin(theta))


# --- landscapes -------------------------------------------------------------


@dataclass(frozen=True)
class Dynamics:
    """How a landscape changes: ``static``, ``linear_path``, ``jump_cycle``,
    ``severity_drift`` or ``circular``."""

    kind: str = "static"
    v: float = 0.0
    uf: int = 50
    s: float = 0.0
    points: tuple[tuple[float, float], ...] = JUMP_POINTS
    radius: float = 1.0
    omega: float = 0.1

    def __post_init__(self) -> None:
        if self.kind not in ("static", "linear_path", "jump_cycle", "severity_drift", "circular"):
            raise ValueError(f"unknown dynamics kind {self.kind!r}")
        if self.v < 0:
            raise ValueError(f"v must be non-negative, got {self.v}")
        if self.uf < 1:
            raise ValueError(f"uf must be >= 1, got {self.uf}")


@dataclass
class Landscape:
    """Base class: subclasses map an epoch key to a full value grid."""

    domain: DomainMap
    dynamics: Dynamics = field(default_factory=Dynamics)
    objective: str = "minimize"
    _grids: dict = field(default_factory=dict, init=False, repr=False)
    _optima: dict = field(default_factory=dict, init=False, repr=False)

    @property
    def maximize(self) -> bool:
        return self.objective == "maximize"

    def epoch_key(self, t: int):
        return 0

    def _build(self, key) -> NDArray[np.float64]:
        raise NotImplementedError

    def value_grid(self, t: int) -> NDArray[np.float64]:
        """All cell values at step ``t``, shape ``(height, width)``; read-only."""
        key = self.epoch_key(t)
        grid = self._grids.get(key)
        if grid is None:
            grid = np.ascontiguousarray(self._build(key), dtype=np.float64)
            grid.setflags(write=False)
            self._grids[key] = grid
        return grid

    def value_at(self, cell: CellCoord, t: int) -> float:
        return float(self.value_grid(t)[cell.y, cell.x])

    def true_optimum(self, t: int) -> tuple[CellCoord, float]:
        """Best cell by exhaustive scan (first in row-major order on ties)."""
        key = self.epoch_key(t)
        if key not in self._optima:
            z = self.value_grid(t)
            flat = int(np.argmax(z) if self.maximize else np.argmin(z))
            j, i = divmod(flat, self.domain.width)
            self._optima[key] = (CellCoord(i, j), float(z[j, i]))
        return self._optima[key]

    def change_steps(self, t_max: int) -> list[int]:
        """Steps ``t`` in ``1..t_max-1`` whose landscape differs from step ``t - 1``."""
        return [t for t in range(1, t_max) if self.epoch_key(t) != self.epoch_key(t - 1)]

    def epoch(self, t: int) -> int:
        """Number of environmental changes up to and including step ``t``."""
        return sum(self.epoch_key(s) != self.epoch_key(s - 1) for s in range(1, t + 1))


@dataclass
class GridLandscape(Landscape):
    """A fixed field, e.g. a flat plane for tests."""

    values: NDArray[np.float64] | None = None

    def _build(self, key):
        return self.values


def flat_landscape(width: int = 100, height: int = 100, level: float = 0.0) -> GridLandscape:
    return GridLandscape(DomainMap((0.0, 1.0), (0.0, 1.0), width, height), values=np.full((height, width), level))


@dataclass
class AckleyLandscape(Landscape):
    """Ackley field whose centre rides a target cell, so the target scores exactly 0."""

    def __post_init__(self) -> None:
        if self.dynamics.kind == "severity_drift":
            raise ValueError("Ackley landscapes move their centre; use linear_path, jump_cycle or circular")
        self.objective = "minimize"
        self._points = tuple(self.domain.point_to_cell(*p) for p in self.dynamics.points)
        self._start = self.domain.point_to_cell(0.0, 0.0)
        self._mesh = self.domain.mesh()

    def target(self, t: int) -> CellCoord:
        dyn = self.dynamics
        if dyn.kind == "linear_path":
            return linear_path_target(t, dyn.v, self._start, self.domain.width, self.domain.height)
        if dyn.kind == "jump_cycle":
            return jump_cycle_target(t, dyn.uf, self._points)
        if dyn.kind == "circular":
            return circular_target(t, dyn.radius, dyn.omega, (0.0, 0.0), self.domain)
        return self._start

    def epoch_key(self, t: int):
        return self.target(t)

    def _build(self, key):
        return ackley_2d(*self._mesh, self.domain.cell_to_point(key))


@dataclass
class SeverityLandscape(Landscape):
    """Base for fields shifted by ``delta = T * s`` every ``uf`` steps."""

    def epoch_key(self, t: int):
        if self.dynamics.kind == "static":
            return 0
        return epoch_index(t, self.dynamics.uf)

    def delta(self, t: int) -> float:
        return severity_shift(self.epoch_key(t), self.dynamics.s)


@dataclass
class SchafferLandscape(SeverityLandscape):
    def __post_init__(self) -> None:
        self.objective = "maximize"
        self._mesh = self.domain.mesh()

    def _build(self, key):
        return schaffer_f7(*self._mesh, severity_shift(key, self.dynamics.s))


@dataclass
class ControlLandscape(SeverityLandscape):
    """``J = z(1)**2`` of the control plant over the ``(u1, u2)`` lattice."""

    steps: int = ode.DEFAULT_STEPS

    def __post_init__(self) -> None:
        self.objective = "maximize"
        self._mesh = self.domain.mesh()

    def _build(self, key):
        return ode.control_fitness_grid(*self._mesh, severity_shift(key, self.dynamics.s), self.steps)


def ackley_domain(width: int = 100, height: int = 100) -> DomainMap:
    return DomainMap(ACKLEY_RANGE, ACKLEY_RANGE, width, height)


def schaffer_domain(width: int = 100, height: int = 100) -> DomainMap:
    return DomainMap(SCHAFFER_RANGE, SCHAFFER_RANGE, width, height)


def control_domain(width: int = 100, height: int = 100) -> DomainMap:
    return DomainMap(CONTROL_RANGE, CONTROL_RANGE, width, height)


def count_strict_local_minima(z: NDArray[np.float64]) -> int:
    """Interior samples strictly below all 8 neighbours (no wrap-around)."""
    h, w = z.shape
    core = z[1:-1, 1:-1]
    mask = np.ones(core.shape, dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx or dy:
                mask &= core < z[1 + dy : h - 1 + dy, 1 + dx : w - 1 + dx]
    return int(mask.sum())
