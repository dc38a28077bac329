"""Self-regulated swarm kernel: movement, deposition, reproduction, ageing.

A colony step consumes uniforms in this order, ant by ant in ascending id:

1. one draw to pick the move (skipped when all 8 neighbours are occupied);
2. one reproduction draw when at least one neighbour is occupied;
3. on success, one draw for the child's cell and one for its heading.

After evaporation each ageing ant takes one survival draw (stochastic mode
only, and only if its energy is still positive). Every step pulls a fixed
block of ``6 * population`` uniforms from the run's generator, so the
generator state after a step depends only on the population size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numba import njit
from numpy.typing import NDArray

from srs.habitat import DX, DY, EMPTY, CellCoord, HabitatGrid

TURN_WEIGHTS = np.array([1.0, 1.0 / 2.0, 1.0 / 4.0, 1.0 / 12.0, 1.0 / 20.0])
REPRODUCTION_TABLE = np.array([0.0, 0.25, 0.5, 0.75, 1.0, 0.75, 0.5, 0.25, 0.0])
# energy below this counts as zero; repeated 0.1 decrements leave ~1e-16
ENERGY_EPS = 1e-9
DRAWS_PER_ANT = 6


@dataclass(frozen=True)
class SwarmParams:
    """Swarm constants. Defaults are the usual SRS settings.

    ``k = 0.015`` is the evaporation rate quoted in the text; the parameter
    table's ``k = 1.3`` cannot be a per-step fraction. ``survival_mode``
    ``"deterministic"`` kills an ant only when its energy runs out;
    ``"stochastic"`` also lets it survive each step with probability equal
    to its remaining energy.
    """

    beta: float = 3.5
    gamma: float = 0.2
    eta: float = 0.07
    k: float = 0.015
    p: float = 1.9
    delta_e: float = 0.1
    objective: str = "minimize"
    initial_density: float = 1.0 / 3.0
    survival_mode: str = "deterministic"
    children_age_immediately: bool = False
    reset_extremes_on_change: bool = True

    def __post_init__(self) -> None:
        for name in ("beta", "gamma", "eta", "p", "delta_e"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not 0.0 <= self.k <= 1.0:
            raise ValueError(f"k must lie in [0, 1], got {self.k}")
        if not 0.0 < self.initial_density < 1.0:
            raise ValueError(f"initial_density must lie in (0, 1), got {self.initial_density}")
        if self.objective not in ("minimize", "maximize"):
            raise ValueError(f"objective must be 'minimize' or 'maximize', got {self.objective!r}")
        if self.survival_mode not in ("stochastic", "deterministic"):
            raise ValueError(f"survival_mode must be 'stochastic' or 'deterministic', got {self.survival_mode!r}")

    @property
    def maximize(self) -> bool:
        return self.objective == "maximize"


@dataclass
class ColonyExtremes:
    """Highest and lowest altitudes the colony has stood on this epoch."""

    z_max: float = math.nan
    z_min: float = math.nan

    @property
    def populated(self) -> bool:
        return not math.isnan(self.z_max)

    def observe(self, z: float) -> None:
        if not self.populated:
            self.z_max = self.z_min = float(z)
        else:
            self.z_max = max(self.z_max, float(z))
            self.z_min = min(self.z_min, float(z))

    def reset(self) -> None:
        self.z_max = self.z_min = math.nan


@dataclass
class Ant:
    id: int
    pos: CellCoord
    heading: int
    energy: float = 1.0


class UniformSource(Protocol):
    def random(self) -> float: ...


class DrawStream:
    """Sequential reader over a pre-drawn block of uniforms."""

    def __init__(self, draws: NDArray[np.float64]):
        self.draws = draws
        self.cursor = 0

    def random(self) -> float:
        u = float(self.draws[self.cursor])
        self.cursor += 1
        return u


# --- scalar kernels, shared by the object API and the step loop -------------


@njit(cache=True)
def _pheromone_weight(sigma, beta, gamma):
    return (1.0 + sigma / (1.0 + gamma * sigma)) ** beta


@njit(cache=True)
def _direction_delta(heading, candidate):
    d = abs(heading - candidate) % 8
    return min(d, 8 - d)


@njit(cache=True)
def _fitness_ratio(z, z_max, z_min, maximize):
    span = abs(z_max - z_min)
    if not span > 0.0:
        return 0.0
    if maximize:
        return abs(z - z_min) / span
    return abs(z - z_max) / span


def pheromone_weight(sigma: float, params: SwarmParams) -> float:
    """Relative attraction ``(1 + s / (1 + gamma s)) ** beta`` of a cell with density ``s``."""
    return float(_pheromone_weight(float(sigma), params.beta, params.gamma))


def direction_delta(heading: int, candidate_dir: int) -> int:
    return int(_direction_delta(int(heading), int(candidate_dir)))


def fitness_ratio(z_here: float, extremes: ColonyExtremes, params: SwarmParams) -> float:
    """Distance from the worst altitude seen, as a fraction of the seen range."""
    return float(_fitness_ratio(float(z_here), extremes.z_max, extremes.z_min, params.maximize))


def deposit_rate(z_here: float, extremes: ColonyExtremes, params: SwarmParams) -> float:
    return params.eta + params.p * fitness_ratio(z_here, extremes, params)


def reproduction_base_prob(n: int) -> float:
    if not 0 <= n <= 8:
        raise ValueError(f"neighbour count must lie in 0..8, got {n}")
    return float(REPRODUCTION_TABLE[n])


def reproduction_prob(n: int, z_here: float, extremes: ColonyExtremes, params: SwarmParams) -> float:
    return reproduction_base_prob(n) * fitness_ratio(z_here, extremes, params)


def transition_probs(ant: Ant, grid: HabitatGrid, params: SwarmParams) -> list[tuple[CellCoord, float]]:
    """Move distribution over the free Moore neighbours of ``ant``.

    Returns an empty list when the ant is boxed in.
    """
    weights = []
    for d, cell in enumerate(grid.moore_neighbors(ant.pos)):
        if grid.is_occupied(cell):
            continue
        sigma = grid.pheromone[cell.y, cell.x]
        w = pheromone_weight(sigma, params) * TURN_WEIGHTS[direction_delta(ant.heading, d)]
        weights.append((cell, w))
    total = sum(w for _, w in weights)
    return [(cell, w / total) for cell, w in weights]


def try_reproduce(
    parent: Ant,
    grid: HabitatGrid,
    z_here: float,
    extremes: ColonyExtremes,
    params: SwarmParams,
    rng: UniformSource,
    child_id: int,
) -> Ant | None:
    """Run the reproduction test for ``parent``; on success the child is placed on ``grid``."""
    n = grid.occupied_neighbor_count(parent.pos)
    if n < 1:
        return None
    u = rng.random()
    if not u < reproduction_prob(n, z_here, extremes, params):
        return None
    free = grid.free_neighbors(parent.pos)
    if not free:
        return None
    cell = free[min(int(rng.random() * len(free)), len(free) - 1)]
    heading = min(int(rng.random() * 8), 7)
    grid.occupy(cell, child_id)
    return Ant(child_id, cell, heading, 1.0)


def apply_energy_and_survival(ant: Ant, params: SwarmParams, rng: UniformSource) -> bool:
    """Age ``ant`` by one step and return whether it survives."""
    ant.energy = ant.energy - params.delta_e
    if ant.energy < ENERGY_EPS:
        ant.energy = 0.0
        return False
    if params.survival_mode == "stochastic":
        return rng.random() < ant.energy
    return True


# --- colony -----------------------------------------------------------------


@dataclass
class Colony:
    """Struct-of-arrays colony, rows kept in ascending id order."""

    ids: NDArray[np.int64]
    x: NDArray[np.int64]
    y: NDArray[np.int64]
    heading: NDArray[np.int64]
    energy: NDArray[np.float64]
    next_id: int
    extremes: ColonyExtremes = field(default_factory=ColonyExtremes)
    epoch_key: object = None

    def __len__(self) -> int:
        return len(self.ids)

    @classmethod
    def empty(cls) -> Colony:
        z = np.zeros(0, dtype=np.int64)
        return cls(z, z.copy(), z.copy(), z.copy(), np.zeros(0), 0)

    @classmethod
    def from_ants(cls, ants: list[Ant], grid: HabitatGrid) -> Colony:
        """Build a colony from explicit ants and mark them on ``grid``."""
        ants = sorted(ants, key=lambda a: a.id)
        for a in ants:
            grid.occupy(a.pos, a.id)
        return cls(
            ids=np.array([a.id for a in ants], dtype=np.int64),
            x=np.array([a.pos.x for a in ants], dtype=np.int64),
            y=np.array([a.pos.y for a in ants], dtype=np.int64),
            heading=np.array([a.heading for a in ants], dtype=np.int64),
            energy=np.array([a.energy for a in ants], dtype=np.float64),
            next_id=max((a.id for a in ants), default=-1) + 1,
        )

    def ants(self) -> list[Ant]:
        return [
            Ant(int(i), CellCoord(int(x), int(y)), int(h), float(e))
            for i, x, y, h, e in zip(self.ids, self.x, self.y, self.heading, self.energy)
        ]

    def altitudes(self, z: NDArray[np.float64]) -> NDArray[np.float64]:
        return z[self.y, self.x]


def init_colony(grid: HabitatGrid, density: float, rng: np.random.Generator) -> Colony:
    """Scatter ``floor(density * cells)`` fresh ants on distinct random cells."""
    if grid.n_cells < 2:
        raise ValueError("grid needs at least two cells for ants to move")
    if not 0.0 < density < 1.0:
        raise ValueError(f"density must lie in (0, 1), got {density}")
    n = int(math.floor(density * grid.n_cells))
    if n < 1:
        raise ValueError(f"density {density} places no ants on a {grid.width}x{grid.height} grid")
    cells = rng.choice(grid.n_cells, size=n, replace=False)
    headings = rng.integers(0, 8, size=n)
    ids = np.arange(n, dtype=np.int64)
    x = (cells % grid.width).astype(np.int64)
    y = (cells // grid.width).astype(np.int64)
    grid.occupancy[y, x] = ids
    return Colony(ids, x, y, headings.astype(np.int64), np.ones(n), n)


@dataclass
class StepOutcome:
    t: int
    births: int
    deaths: int
    population: int
    altitudes: NDArray[np.float64]


class Landscape(Protocol):
    def value_grid(self, t: int) -> NDArray[np.float64]: ...

    def epoch_key(self, t: int) -> object: ...


@njit(cache=True)
def _step_kernel(
    ids, xs, ys, heading, energy, next_id,
    occupancy, pheromone, z, extremes,
    beta, gamma, eta, p, k, delta_e, maximize, stochastic, age_children,
    turn_weights, repro_table, dxs, dys, draws,
):  # fmt: skip
    height, width = occupancy.shape
    n = ids.shape[0]
    cap = 2 * n
    o_ids = np.empty(cap, np.int64)
    o_x = np.empty(cap, np.int64)
    o_y = np.empty(cap, np.int64)
    o_h = np.empty(cap, np.int64)
    o_e = np.empty(cap, np.float64)
    o_ids[:n] = ids
    o_x[:n] = xs
    o_y[:n] = ys
    o_h[:n] = heading
    o_e[:n] = energy
    total = n
    cursor = 0
    weights = np.empty(8, np.float64)
    free = np.empty(8, np.int64)

    for i in range(n):
        cx = o_x[i]
        cy = o_y[i]
        wsum = 0.0
        for d in range(8):
            nx = (cx + dxs[d]) % width
            ny = (cy + dys[d]) % height
            if occupancy[ny, nx] == -1:
                w = _pheromone_weight(pheromone[ny, nx], beta, gamma) * turn_weights[_direction_delta(o_h[i], d)]
            else:
                w = 0.0
            weights[d] = w
            wsum += w
        if wsum > 0.0:
            target = draws[cursor] * wsum
            cursor += 1
            chosen = -1
            acc = 0.0
            for d in range(8):
                if weights[d] > 0.0:
                    chosen = d
                    acc += weights[d]
                    if target < acc:
                        break
            nx = (cx + dxs[chosen]) % width
            ny = (cy + dys[chosen]) % height
            occupancy[cy, cx] = -1
            occupancy[ny, nx] = o_ids[i]
            o_x[i] = nx
            o_y[i] = ny
            o_h[i] = chosen
            cx = nx
            cy = ny

        zi = z[cy, cx]
        if extremes[0] != extremes[0]:
            extremes[0] = zi
            extremes[1] = zi
        else:
            if zi > extremes[0]:
                extremes[0] = zi
            if zi < extremes[1]:
                extremes[1] = zi
        ratio = _fitness_ratio(zi, extremes[0], extremes[1], maximize)
        pheromone[cy, cx] += eta + p * ratio

        n_occ = 0
        n_free = 0
        for d in range(8):
            nx = (cx + dxs[d]) % width
            ny = (cy + dys[d]) % height
            if occupancy[ny, nx] == -1:
                free[n_free] = d
                n_free += 1
            else:
                n_occ += 1
        if n_occ >= 1:
            u = draws[cursor]
            cursor += 1
            if u < repro_table[n_occ] * ratio and n_free > 0:
                pick = min(int(draws[cursor] * n_free), n_free - 1)
                cursor += 1
                child_h = min(int(draws[cursor] * 8), 7)
                cursor += 1
                d = free[pick]
                nx = (cx + dxs[d]) % width
                ny = (cy + dys[d]) % height
                o_ids[total] = next_id
                o_x[total] = nx
                o_y[total] = ny
                o_h[total] = child_h
                o_e[total] = 1.0
                occupancy[ny, nx] = next_id
                next_id += 1
                total += 1

    births = total - n
    pheromone *= 1.0 - k

    alive = np.ones(total, np.bool_)
    for j in range(total):
        if j >= n and not age_children:
            continue
        e = o_e[j] - delta_e
        if e < 1e-9:
            e = 0.0
            alive[j] = False
        elif stochastic:
            if not draws[cursor] < e:
                alive[j] = False
            cursor += 1
        o_e[j] = e
        if not alive[j]:
            occupancy[o_y[j], o_x[j]] = -1

    keep = np.flatnonzero(alive)
    return (o_ids[keep], o_x[keep], o_y[keep], o_h[keep], o_e[keep], next_id, births, total - keep.shape[0], cursor)


def resurvey_extremes(colony: Colony, z: NDArray[np.float64]) -> None:
    """Restart the extremes from the altitudes under the current ants."""
    colony.extremes.reset()
    if len(colony):
        alt = colony.altitudes(z)
        colony.extremes.z_max = float(alt.max())
        colony.extremes.z_min = float(alt.min())


def colony_step(
    colony: Colony,
    grid: HabitatGrid,
    landscape: Landscape,
    t: int,
    params: SwarmParams,
    rng: np.random.Generator,
) -> StepOutcome:
    """Advance ``colony`` by one step on ``landscape`` at time ``t`` (in place)."""
    z = landscape.value_grid(t)
    key = landscape.epoch_key(t)
    if params.reset_extremes_on_change and colony.epoch_key is not None and key != colony.epoch_key:
        resurvey_extremes(colony, z)
    colony.epoch_key = key

    draws = rng.random(DRAWS_PER_ANT * len(colony))
    extremes = np.array([colony.extremes.z_max, colony.extremes.z_min])
    ids, x, y, h, e, next_id, births, deaths, _ = _step_kernel(
        colony.ids, colony.x, colony.y, colony.heading, colony.energy, colony.next_id,
        grid.occupancy, grid.pheromone, z, extremes,
        params.beta, params.gamma, params.eta, params.p, params.k, params.delta_e,
        params.maximize, params.survival_mode == "stochastic", params.children_age_immediately,
        TURN_WEIGHTS, REPRODUCTION_TABLE, DX, DY, draws,
    )  # fmt: skip
    colony.ids, colony.x, colony.y, colony.heading, colony.energy = ids, x, y, h, e
    colony.next_id = int(next_id)
    colony.extremes.z_max, colony.extremes.z_min = float(extremes[0]), float(extremes[1])
    return StepOutcome(t, int(births), int(deaths), len(colony), colony.altitudes(z))
