"""Fixed-step RK4 and the dynamic optimal-control fitness ``J = z(1)**2``.

The second-order plant

    z'' + sin(z) z' + sin(t) cos(z) z**3 = sin(t) U1**2 + cos(t) U2**2 + sin(t) U1 U2

is integrated as the first-order system ``(z, y)`` with ``y = z'``, from
``z(0) = 2, y(0) = 2`` to ``t = 1``. Controls are shifted, ``Ui = ui + delta``.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

U_BOUNDS = (-5.0, 5.0)
Z0 = 2.0
Y0 = 2.0
T_FINAL = 1.0
DEFAULT_STEPS = 1000


class OdeState(NamedTuple):
    z: float
    y: float
    t: float


def control_rhs(t, z, y, u1, u2):
    """Right-hand side ``(dz/dt, dy/dt)``; broadcasts over array arguments."""
    st = np.sin(t)
    forcing = st * u1 * u1 + np.cos(t) * u2 * u2 + st * u1 * u2
    dy = forcing - np.sin(z) * y - st * np.cos(z) * z**3
    return y, dy


def rk4(
    rhs: Callable[[float, NDArray[np.float64]], NDArray[np.float64]],
    x0: ArrayLike,
    t0: float,
    t_f: float,
    steps: int,
) -> NDArray[np.float64]:
    """Integrate ``x' = rhs(t, x)`` from ``t0`` to ``t_f`` with ``steps`` classical RK4 steps.

    Non-finite values propagate rather than raise; callers decide what a
    blown-up trajectory scores.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    x = np.array(x0, dtype=np.float64)
    h = (t_f - t0) / steps
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            t = t0 + i * h
            k1 = rhs(t, x)
            k2 = rhs(t + h / 2, x + h / 2 * k1)
            k3 = rhs(t + h / 2, x + h / 2 * k2)
            k4 = rhs(t + h, x + h * k3)
            x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def integrate(state0: OdeState, u1: ArrayLike, u2: ArrayLike, t_f: float = T_FINAL, steps: int = DEFAULT_STEPS):
    """Integrate the control plant from ``state0`` to ``t_f``.

    ``u1``/``u2`` are the already-shifted controls and may be arrays, in
    which case one trajectory is integrated per element.
    Returns ``(z, y)`` at ``t_f``.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    u1 = np.asarray(u1, dtype=np.float64)
    u2 = np.asarray(u2, dtype=np.float64)
    shape = np.broadcast(u1, u2).shape
    z = np.full(shape, state0.z)
    y = np.full(shape, state0.y)
    h = (t_f - state0.t) / steps

    def f(t, z, y):
        return control_rhs(t, z, y, u1, u2)

    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            t = state0.t + i * h
            k1z, k1y = f(t, z, y)
            k2z, k2y = f(t + h / 2, z + h / 2 * k1z, y + h / 2 * k1y)
            k3z, k3y = f(t + h / 2, z + h / 2 * k2z, y + h / 2 * k2y)
            k4z, k4y = f(t + h, z + h * k3z, y + h * k3y)
            z = z + h / 6 * (k1z + 2 * k2z + 2 * k3z + k4z)
            y = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
    return z, y


def control_fitness_grid(u1: ArrayLike, u2: ArrayLike, delta: float, steps: int = DEFAULT_STEPS) -> NDArray[np.float64]:
    """``J = z(1)**2`` for every control pair; blown-up trajectories score ``-inf``."""
    u1 = np.asarray(u1, dtype=np.float64)
    u2 = np.asarray(u2, dtype=np.float64)
    lo, hi = U_BOUNDS
    if np.any((u1 < lo) | (u1 > hi) | (u2 < lo) | (u2 > hi)):
        raise ValueError(f"controls must lie in [{lo}, {hi}]")
    z, _ = integrate(OdeState(Z0, Y0, 0.0), u1 + delta, u2 + delta, T_FINAL, steps)
    with np.errstate(over="ignore", invalid="ignore"):
        j = z * z
    return np.where(np.isfinite(j), j, -np.inf)


def control_fitness(u1: float, u2: float, delta: float, steps: int = DEFAULT_STEPS) -> float:
    return float(control_fitness_grid(u1, u2, delta, steps))
