"""Toroidal lattice holding the pheromone field and agent occupancy.

Arrays are indexed ``[y, x]`` (row, column). Row index grows northwards,
so the compass offsets below use ``dy = +1`` for north.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

EMPTY = -1

# Compass octants in the fixed order N, NE, E, SE, S, SW, W, NW.
DIRECTIONS: tuple[tuple[int, int], ...] = (
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
)
DIRECTION_NAMES = ("N", "NE", "E", "SE", "S", "SW", "W", "NW")
DX = np.array([d[0] for d in DIRECTIONS], dtype=np.int64)
DY = np.array([d[1] for d in DIRECTIONS], dtype=np.int64)


class CellCoord(NamedTuple):
    x: int
    y: int


class OccupancyError(RuntimeError):
    """Raised when occupying a full cell or vacating an empty one."""


@dataclass
class HabitatGrid:
    """Pheromone density and occupancy on a ``width`` x ``height`` torus.

    Attributes:
        width: Number of columns.
        height: Number of rows.
        pheromone: Non-negative density per cell, shape ``(height, width)``.
        occupancy: Agent id per cell, ``EMPTY`` where free.
    """

    width: int = 100
    height: int = 100
    pheromone: NDArray[np.float64] = field(init=False, repr=False)
    occupancy: NDArray[np.int64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width}x{self.height}")
        self.pheromone = np.zeros((self.height, self.width), dtype=np.float64)
        self.occupancy = np.full((self.height, self.width), EMPTY, dtype=np.int64)

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    def wrap(self, raw_x: int, raw_y: int) -> CellCoord:
        return CellCoord(int(raw_x) % self.width, int(raw_y) % self.height)

    def moore_neighbors(self, c: CellCoord) -> list[CellCoord]:
        """The 8 surrounding cells, ordered N, NE, E, SE, S, SW, W, NW."""
        return [self.wrap(c.x + dx, c.y + dy) for dx, dy in DIRECTIONS]

    def deposit(self, c: CellCoord, amount: float) -> None:
        if amount < 0:
            raise ValueError(f"deposit amount must be non-negative, got {amount}")
        self.pheromone[c.y, c.x] += amount

    def evaporate(self, k: float) -> None:
        if not 0.0 <= k <= 1.0:
            raise ValueError(f"evaporation rate must lie in [0, 1], got {k}")
        self.pheromone *= 1.0 - k

    def is_occupied(self, c: CellCoord) -> bool:
        return bool(self.occupancy[c.y, c.x] != EMPTY)

    def occupant(self, c: CellCoord) -> int | None:
        aid = int(self.occupancy[c.y, c.x])
        return None if aid == EMPTY else aid

    def occupy(self, c: CellCoord, agent_id: int) -> None:
        if self.occupancy[c.y, c.x] != EMPTY:
            raise OccupancyError(f"cell {tuple(c)} already holds agent {self.occupancy[c.y, c.x]}")
        self.occupancy[c.y, c.x] = agent_id

    def vacate(self, c: CellCoord) -> None:
        if self.occupancy[c.y, c.x] == EMPTY:
            raise OccupancyError(f"cell {tuple(c)} is already empty")
        self.occupancy[c.y, c.x] = EMPTY

    def occupied_neighbor_count(self, c: CellCoord) -> int:
        return sum(self.is_occupied(nb) for nb in self.moore_neighbors(c))

    def free_neighbors(self, c: CellCoord) -> list[CellCoord]:
        return [nb for nb in self.moore_neighbors(c) if not self.is_occupied(nb)]

    def copy(self) -> HabitatGrid:
        out = HabitatGrid(self.width, self.height)
        out.pheromone[...] = self.pheromone
        out.occupancy[...] = self.occupancy
        return out


def pheromone_to_pgm(pheromone: NDArray[np.float64]) -> str:
    """Render a field as plain (P2) PGM text, rescaled to 0-255 over its min/max.

    The top image row is the northernmost grid row.
    """
    lo = float(pheromone.min())
    hi = float(pheromone.max())
    if hi > lo:
        levels = np.rint((pheromone - lo) * (255.0 / (hi - lo))).astype(np.int64)
    else:
        levels = np.zeros(pheromone.shape, dtype=np.int64)
    levels = levels[::-1]
    height, width = pheromone.shape
    lines = ["P2", f"{width} {height}", "255"]
    lines.extend(" ".join(str(v) for v in row) for row in levels)
    return "\n".join(lines) + "\n"


def write_pheromone_snapshot(grid: HabitatGrid, out_dir: str | Path, step: int) -> Path:
    path = Path(out_dir) / f"pheromone_t{step}.pgm"
    path.write_text(pheromone_to_pgm(grid.pheromone))
    return path


def read_pgm(path: str | Path) -> NDArray[np.int64]:
    """Parse a plain PGM written by :func:`write_pheromone_snapshot` (top row first)."""
    tokens = [t for line in Path(path).read_text().splitlines() if not line.startswith("#") for t in line.split()]
    if tokens[0] != "P2":
        raise ValueError(f"not a plain PGM file: {path}")
    width, height, _maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    return np.array(tokens[4:], dtype=np.int64).reshape(height, width)
