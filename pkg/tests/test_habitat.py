import numpy as np
import pytest
from hypothesis import given, strategies as st

from srs.habitat import CellCoord, HabitatGrid, OccupancyError, pheromone_to_pgm, read_pgm, write_pheromone_snapshot


@pytest.fixture
def grid():
    return HabitatGrid(100, 100)


@pytest.mark.parametrize(
    "raw, expected",
    [((5, 5), (5, 5)), ((-1, 0), (99, 0)), ((205, -103), (5, 97))],
)
def test_wrap_examples(grid, raw, expected):
    assert grid.wrap(*raw) == CellCoord(*expected)


@given(st.integers(), st.integers(), st.integers(1, 50), st.integers(1, 50))
def test_wrap_is_total_and_canonical(x, y, w, h):
    g = HabitatGrid(w, h)
    c = g.wrap(x, y)
    assert 0 <= c.x < w and 0 <= c.y < h
    assert (c.x - x) % w == 0 and (c.y - y) % h == 0
    assert len(g.moore_neighbors(c)) == 8


def test_moore_order_and_corner_wrap(grid):
    nbs = grid.moore_neighbors(CellCoord(50, 50))
    assert nbs == [(50, 51), (51, 51), (51, 50), (51, 49), (50, 49), (49, 49), (49, 50), (49, 51)]
    corner = set(grid.moore_neighbors(CellCoord(0, 0)))
    assert {(99, 99), (0, 99), (99, 0)} <= corner


@given(st.integers(3, 20), st.integers(3, 20), st.data())
def test_moore_neighbors_distinct(w, h, data):
    g = HabitatGrid(w, h)
    c = CellCoord(data.draw(st.integers(0, w - 1)), data.draw(st.integers(0, h - 1)))
    nbs = g.moore_neighbors(c)
    assert len(set(nbs)) == 8 and c not in nbs


def test_deposit(grid):
    c = CellCoord(3, 4)
    grid.deposit(c, 0.07)
    assert grid.pheromone[4, 3] == 0.07
    grid.deposit(c, 0.0)
    assert grid.pheromone[4, 3] == 0.07
    grid.pheromone[4, 3] = 1.0
    grid.deposit(c, 1.97)
    assert grid.pheromone[4, 3] == pytest.approx(2.97, abs=1e-15)
    with pytest.raises(ValueError):
        grid.deposit(c, -0.1)


def test_evaporate(grid):
    grid.pheromone[:] = 1.0
    grid.evaporate(0.015)
    assert np.allclose(grid.pheromone, 0.985, rtol=0, atol=1e-15)
    before = grid.pheromone.copy()
    grid.evaporate(0.0)
    assert np.array_equal(grid.pheromone, before)
    grid.pheromone[:] = 2.0
    grid.evaporate(0.5)
    grid.evaporate(0.5)
    assert np.all(grid.pheromone == 0.5)
    with pytest.raises(ValueError):
        grid.evaporate(1.3)


@given(
    st.lists(
        st.one_of(
            st.tuples(st.just("dep"), st.integers(0, 24), st.floats(0, 10, allow_nan=False)),
            st.tuples(st.just("evap"), st.just(0), st.floats(0, 1)),
        ),
        max_size=40,
    )
)
def test_pheromone_stays_non_negative(ops):
    g = HabitatGrid(5, 5)
    for kind, cell, amount in ops:
        if kind == "dep":
            g.deposit(CellCoord(cell % 5, cell // 5), amount)
        else:
            before = g.pheromone.copy()
            g.evaporate(amount)
            assert np.allclose(g.pheromone, before * (1 - amount), rtol=1e-15, atol=0)
    assert np.all(g.pheromone >= 0)


def test_occupancy(grid):
    c = CellCoord(7, 8)
    grid.occupy(c, 12)
    assert grid.is_occupied(c) and grid.occupant(c) == 12
    with pytest.raises(OccupancyError):
        grid.occupy(c, 13)
    grid.vacate(c)
    assert not grid.is_occupied(c) and grid.occupant(c) is None
    with pytest.raises(OccupancyError):
        grid.vacate(c)


def test_pgm_roundtrip(tmp_path):
    g = HabitatGrid(4, 3)
    g.pheromone[:] = np.arange(12, dtype=float).reshape(3, 4)
    path = write_pheromone_snapshot(g, tmp_path, 25)
    assert path.name == "pheromone_t25.pgm"
    img = read_pgm(path)
    assert img.shape == (3, 4)
    assert img.min() == 0 and img.max() == 255
    # top image row is the northernmost grid row
    assert img[0, -1] == 255 and img[-1, 0] == 0
    assert pheromone_to_pgm(np.zeros((2, 2))).splitlines()[3:] == ["0 0", "0 0"]
