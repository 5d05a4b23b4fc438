"""Hastings-McLeod solution of Painleve II, q'' = s q + 2 q^3, q ~ Ai(s) at +inf.

The solution is a separatrix: integrating from the right, any error in the
initial data excites a component that either blows up or decays into
oscillations, and that component grows as s decreases.  Starting at
s0 >= 8 with q(s0) = Ai(s0) makes the initial error of order Ai(s0)^2
relative, and a tolerance near machine precision keeps the solution on
the separatrix well past s = -8.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .errors import InstabilityError, ParameterError
from .specfun import airy_ai, airy_ai_prime, airy_tail_integral

__all__ = ["PainleveSolution", "painleve_solve", "default_solution"]

BLOWUP = 1.0e3
# scipy clamps rtol to 100 * eps; ask for exactly that by default
DEFAULT_TOLERANCE = 2.3e-14
# the stored grid is fine enough for a 4th-order difference check of the ODE
DEFAULT_GRID_STEP = 1.0 / 256.0


@dataclass(frozen=True, eq=False)
class PainleveSolution:
    """q, q' and U(s) = 1/2 int_s^inf q on a grid decreasing from s0 to s_min."""

    s_grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        # CubicHermiteSpline wants increasing abscissae; U' = -q/2
        spline = CubicHermiteSpline(self.s_grid[::-1], self.U[::-1], -0.5 * self.q[::-1])
        object.__setattr__(self, "_U_spline", spline)

    @property
    def s0(self) -> float:
        return float(self.s_grid[0])

    @property
    def s_min(self) -> float:
        return float(self.s_grid[-1])

    def U_at(self, s):
        """U(s) by Hermite interpolation; beyond s0 the seed relation U = 1/2 int Ai is used."""
        arr = np.asarray(s, dtype=float)
        if np.any(arr < self.s_min - 1e-12):
            raise ParameterError(f"s below the solved range [{self.s_min}, {self.s0}]")
        out = np.where(arr > self.s0, 0.5 * airy_tail_integral(np.maximum(arr, self.s0)), 0.0)
        inside = arr <= self.s0
        if np.any(inside):
            out = np.where(inside, self._U_spline(np.minimum(arr, self.s0)), out)
        return float(out) if out.ndim == 0 else out

    def ode_residual(self) -> np.ndarray:
        """|q'' - s q - 2 q^3| with q'' from a 4th-order difference of stored q'."""
        h = self.s_grid[0] - self.s_grid[1]
        qp = self.q_prime
        qpp = (-qp[4:] + 8 * qp[3:-1] - 8 * qp[1:-3] + qp[:-4]) / (12 * -h)
        s, q = self.s_grid[2:-2], self.q[2:-2]
        return np.abs(qpp - s * q - 2 * q**3)


def _rhs(s, y):
    q, p, _ = y
    return [p, s * q + 2.0 * q**3, -0.5 * q]


def _blowup(s, y):
    return BLOWUP - abs(y[0])


_blowup.terminal = True


def painleve_solve(
    s_min: float = -10.0,
    s0: float = 8.0,
    step_tolerance: float = DEFAULT_TOLERANCE,
    grid_step: float = DEFAULT_GRID_STEP,
) -> PainleveSolution:
    """Integrate Painleve II from s0 down to s_min with the DOP853 scheme.

    Initial data q(s0) = Ai(s0), q'(s0) = Ai'(s0), U(s0) = 1/2 int_{s0}^inf Ai.
    The dense output is sampled on a uniform grid with spacing at most
    ``grid_step``.
    """
    if s_min < -10.0:
        raise ParameterError("s_min must be >= -10")
    if s0 < 8.0:
        raise ParameterError("s0 must be >= 8 for the Airy seed to be accurate")
    if not s_min < s0:
        raise ParameterError("need s_min < s0")
    if not step_tolerance > 0:
        raise ParameterError("step_tolerance must be positive")
    y0 = [airy_ai(s0), airy_ai_prime(s0), 0.5 * airy_tail_integral(s0)]
    sol = solve_ivp(
        _rhs,
        (s0, s_min),
        y0,
        method="DOP853",
        rtol=max(step_tolerance, DEFAULT_TOLERANCE),
        atol=1e-30,
        dense_output=True,
        events=_blowup,
    )
    if sol.status == 1:
        reached = float(sol.t_events[0][0])
        raise InstabilityError(f"|q| exceeded {BLOWUP:g} at s = {reached:.6f}", s_reached=reached)
    if sol.status != 0:
        raise InstabilityError(f"integration failed: {sol.message}", s_reached=float(sol.t[-1]))
    count = int(math.ceil((s0 - s_min) / grid_step - 1e-9))
    grid = np.linspace(s0, s_min, count + 1)
    q, qp, U = sol.sol(grid)
    return PainleveSolution(grid, q, qp, U)


@functools.lru_cache(maxsize=4)
def default_solution() -> PainleveSolution:
    return painleve_solve()
