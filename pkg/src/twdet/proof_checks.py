"""Numerical checks of the operator identities behind det(1 - B(s)) = F1(s).

Every check returns an :class:`IdentityReport` comparing two independently
assembled sides.  Contractions with the delta function at the origin go
through the kernel row at x = 0 (see :mod:`twdet.operators`).

Notation: B = B(s) with kernel Ai(x + y + s), D = d/dx, and <delta, T u> is
(T u)(0).  Inverses of 1 - B^2 are applied in the factored form

    (1 - B^2)^{-1} = ((1 - B)^{-1} + (1 + B)^{-1}) / 2
    (1 - B^2)^{-1} B = ((1 - B)^{-1} - (1 + B)^{-1}) / 2

which avoids squaring the condition number of 1 - B near s = -8.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ParameterError
from .operators import (
    DEFAULT_NODES,
    DiscretizedOperator,
    airy_derivative_kernel,
    airy_kernel,
    apply,
    assemble,
    compose,
    delta_bracket,
    solve_id_minus,
    solve_id_plus,
    spectral_norm,
    trace,
    truncation_length,
)
from .quadrature import gauss_legendre, map_to_interval
from .specfun import airy_ai

__all__ = [
    "CHECK_NAMES",
    "EXP",
    "GAUSS",
    "IdentityReport",
    "SUITE_GRID",
    "SUITE_MANIFEST",
    "TestFunction",
    "check_eq10",
    "check_eq3",
    "check_eqfin",
    "check_lemma1",
    "check_lemma2",
    "check_norm_bound",
    "reports_to_json",
    "run_suite",
]

EXACT_TOL = 1e-9
DEFAULT_H = 1e-4
SUITE_GRID = (-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0)


@dataclass(frozen=True)
class TestFunction:
    """A probe function on the half line with its analytic derivative."""

    __test__ = False  # keep pytest from collecting this class

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]


EXP = TestFunction("exp", lambda x: np.exp(-x), lambda x: -np.exp(-x))
GAUSS = TestFunction("gauss", lambda x: np.exp(-(x**2)), lambda x: -2.0 * x * np.exp(-(x**2)))
ZERO = TestFunction("zero", lambda x: np.zeros_like(x), lambda x: np.zeros_like(x))
TEST_FUNCTIONS = {"exp": EXP, "gauss": GAUSS}


@dataclass(frozen=True)
class IdentityReport:
    name: str
    s: float
    lhs: float
    rhs: float
    abs_diff: float
    tolerance: float
    passed: bool

    @classmethod
    def build(cls, name: str, s: float, lhs: float, rhs: float, tolerance: float) -> "IdentityReport":
        diff = abs(lhs - rhs)
        # NaN compares false, so a NaN diff fails
        return cls(name, float(s), float(lhs), float(rhs), float(diff), float(tolerance), bool(diff <= tolerance))

    @classmethod
    def from_vectors(cls, name: str, s: float, lhs: np.ndarray, rhs: np.ndarray, tolerance: float) -> "IdentityReport":
        """Sup-norm comparison; lhs/rhs record the values at the worst node."""
        diff = np.abs(np.asarray(lhs) - np.asarray(rhs))
        i = int(np.argmax(diff)) if diff.size else 0
        if not np.all(np.isfinite(diff)):
            i = int(np.flatnonzero(~np.isfinite(diff))[0])
        return cls.build(name, s, float(lhs[i]), float(rhs[i]), tolerance)

    def to_dict(self) -> dict:
        return asdict(self)


def _check_range(s: float, lo: float, hi: float) -> float:
    s = float(s)
    if not (math.isfinite(s) and lo <= s <= hi):
        raise ParameterError(f"s = {s} outside [{lo}, {hi}]")
    return s


def _check_h(h: float) -> float:
    if not 1e-6 <= h <= 1e-3:
        raise ParameterError("finite-difference step must lie in [1e-6, 1e-3]")
    return float(h)


def _fd_tolerance(h: float) -> float:
    return max(1e-6, 10.0 * h * h)


def _airy(s: float, n: int, fault: float) -> DiscretizedOperator:
    return assemble(airy_kernel(s, fault), n)


def _bracket_resolvent_plus(b: DiscretizedOperator, phi: np.ndarray, phi0: float) -> float:
    """<delta, (1 + B)^{-1} phi> = phi(0) - (B u)(0) with u = (1 + B)^{-1} phi."""
    return delta_bracket(b, solve_id_plus(b, phi), phi0, -1.0)


def _delta_resolvent_b_delta(b: DiscretizedOperator) -> float:
    """<delta, (1 - B^2)^{-1} B delta>.

    Equal to ( <delta, B(1 - B)^{-1} delta> + <delta, B(1 + B)^{-1} delta> ) / 2,
    and B(1 -+ B)^{-1} delta = B delta +- B(1 -+ B)^{-1} B delta.
    """
    col = b.delta_col
    minus = delta_bracket(b, solve_id_minus(b, col), b.corner, 1.0)
    plus = delta_bracket(b, solve_id_plus(b, col), b.corner, -1.0)
    return 0.5 * (minus + plus)


def check_eq3(s: float, n: int = DEFAULT_NODES, fault: float = 0.0) -> IdentityReport:
    """det(1 - B) = det(1 + B) <delta, (1 + B)^{-1} 1>."""
    from .operators import det_id_minus

    s = _check_range(s, -8.0, 10.0)
    b = _airy(s, n, fault)
    lhs = det_id_minus(b, 1)
    rhs = det_id_minus(b, -1) * _bracket_resolvent_plus(b, np.ones(b.size), 1.0)
    return IdentityReport.build("eq3", s, lhs, rhs, EXACT_TOL)


def check_lemma1(s: float, power: int = 1, n: int = DEFAULT_NODES, fault: float = 0.0) -> IdentityReport:
    """2 Tr(D A) = -<delta, A delta> for A = B (power 1) or A = B^2 (power 2).

    Power 1: Tr(D B) is the quadrature sum of Ai'(2x + s); the right side is
    -Ai(s) in closed form.  Power 2: Tr(D B B) from the composed matrices;
    the right side -int_0^inf Ai(z + s)^2 dz on an independent finer rule.
    """
    s = _check_range(s, -8.0, 10.0)
    b = _airy(s, n, fault)
    db = assemble(airy_derivative_kernel(s), n)
    if power == 1:
        lhs = 2.0 * trace(db)
        rhs = -airy_ai(s)
        return IdentityReport.build("lemma1", s, lhs, rhs, EXACT_TOL)
    if power == 2:
        lhs = 2.0 * trace(compose(db, b))
        fine = map_to_interval(gauss_legendre(2 * n + 40), 0.0, truncation_length(s))
        rhs = -fine.integrate(lambda z: airy_ai(z + s) ** 2)
        return IdentityReport.build("lemma1_b2", s, lhs, rhs, 1e-8)
    raise ParameterError("power must be 1 or 2")


def check_eq10(s: float, phi: TestFunction = EXP, n: int = DEFAULT_NODES, fault: float = 0.0) -> IdentityReport:
    """D B phi = -B D phi - P phi with P = |B delta><delta|, compared at the nodes."""
    s = _check_range(s, -8.0, 10.0)
    b = _airy(s, n, fault)
    db = assemble(airy_derivative_kernel(s), n)
    x = b.rule.nodes
    zero = np.zeros(1)
    lhs = apply(db, phi.value(x))
    rhs = -apply(b, phi.derivative(x)) - b.delta_col * float(phi.value(zero)[0])
    return IdentityReport.from_vectors(f"eq10[{phi.name}]", s, lhs, rhs, EXACT_TOL)


def check_lemma2(
    s: float, phi: TestFunction = EXP, h: float = DEFAULT_H, n: int = DEFAULT_NODES, fault: float = 0.0
) -> IdentityReport:
    """d/ds (1 + B)^{-1} phi = (1 - B^2)^{-1} (B D phi + B delta <delta, (1 + B)^{-1} phi>).

    The left side is a central difference in s on a fixed rule.
    """
    s = _check_range(s, -8.0, 10.0)
    h = _check_h(h)
    b = _airy(s, n, fault)
    rule = b.rule
    x = rule.nodes
    v = phi.value(x)
    phi0 = float(phi.value(np.zeros(1))[0])
    up = solve_id_plus(assemble(airy_kernel(s + h, fault), rule=rule), v)
    down = solve_id_plus(assemble(airy_kernel(s - h, fault), rule=rule), v)
    lhs = (up - down) / (2.0 * h)

    r = apply(b, phi.derivative(x)) + b.delta_col * _bracket_resolvent_plus(b, v, phi0)
    rhs = 0.5 * (solve_id_minus(b, r) + solve_id_plus(b, r))
    return IdentityReport.from_vectors(f"lemma2[{phi.name}]", s, lhs, rhs, _fd_tolerance(h))


def check_eqfin(s: float, h: float = DEFAULT_H, n: int = DEFAULT_NODES, fault: float = 0.0) -> list:
    """The three closing steps of the proof, one report each.

    eq6:   -2 Tr((1 - B^2)^{-1} D B) = <delta, (1 - B^2)^{-1} B delta>
    eq7:   d/ds <delta, (1 + B)^{-1} 1> = <delta, (1 - B^2)^{-1} B delta> <delta, (1 + B)^{-1} 1>
    eqfin: -2 Tr((1 - B^2)^{-1} dB/ds) = d/ds log <delta, (1 + B)^{-1} 1>

    In eqfin both derivatives are central differences in s.
    """
    s = _check_range(s, -8.0, 10.0)
    h = _check_h(h)
    tol = _fd_tolerance(h)
    b = _airy(s, n, fault)
    rule = b.rule
    m = b.matrix
    eye = np.eye(b.size)
    resolvent = 0.5 * (np.linalg.inv(eye - m) + np.linalg.inv(eye + m))
    contraction = _delta_resolvent_b_delta(b)

    db = assemble(airy_derivative_kernel(s), rule=rule)
    lhs6 = -2.0 * float(np.sum(resolvent * db.matrix.T))
    eq6 = IdentityReport.build("eq6", s, lhs6, contraction, 1e-8)

    ones = np.ones(b.size)
    b_up = assemble(airy_kernel(s + h, fault), rule=rule)
    b_down = assemble(airy_kernel(s - h, fault), rule=rule)
    br = _bracket_resolvent_plus(b, ones, 1.0)
    br_up = _bracket_resolvent_plus(b_up, ones, 1.0)
    br_down = _bracket_resolvent_plus(b_down, ones, 1.0)
    d_br = (br_up - br_down) / (2.0 * h)
    eq7 = IdentityReport.build("eq7", s, d_br, contraction * br, tol)

    dm = (b_up.matrix - b_down.matrix) / (2.0 * h)
    lhs_fin = -2.0 * float(np.sum(resolvent * dm.T))
    fin = IdentityReport.build("eqfin", s, lhs_fin, d_br / br, tol)
    return [eq6, eq7, fin]


def check_norm_bound(s: float, n: int = DEFAULT_NODES, fault: float = 0.0) -> IdentityReport:
    """||B(s)|| < 1.  lhs is the norm, rhs the bound 1; passes when the margin is positive."""
    s = _check_range(s, -10.0, 10.0)
    norm = spectral_norm(_airy(s, n, fault))
    margin = 1.0 - norm
    return IdentityReport("norm_bound", s, norm, 1.0, abs(margin), 1.0, bool(margin > 0.0))


CHECK_NAMES = ("eq3", "lemma1", "eq10", "lemma2", "eqfin", "norm")

# eq4 is the logarithm of eq3 and adds nothing numerically
SUITE_MANIFEST = {
    "eq3": "check_eq3",
    "eq4": "covered-by-eq3",
    "eq5": "covered-by-eqfin",
    "eqfin": "check_eqfin",
    "eq6": "check_eqfin",
    "eq7": "check_eqfin",
    "lemma1": "check_lemma1",
    "lemma2": "check_lemma2",
    "eq10": "check_eq10",
    "norm": "check_norm_bound",
}


def run_suite(
    grid: Iterable[float] = SUITE_GRID,
    checks: Optional[Sequence[str]] = None,
    n: int = DEFAULT_NODES,
    h: float = DEFAULT_H,
    fault: float = 0.0,
) -> list:
    """Run the selected checks over ``grid`` and both test functions."""
    checks = tuple(checks) if checks else CHECK_NAMES
    unknown = [c for c in checks if c not in CHECK_NAMES]
    if unknown:
        raise ParameterError(f"unknown checks {unknown}; choose from {', '.join(CHECK_NAMES)}")
    reports = []
    for s in grid:
        if "eq3" in checks:
            reports.append(check_eq3(s, n, fault))
        if "lemma1" in checks:
            reports.append(check_lemma1(s, 1, n, fault))
            reports.append(check_lemma1(s, 2, n, fault))
        for phi in TEST_FUNCTIONS.values():
            if "eq10" in checks:
                reports.append(check_eq10(s, phi, n, fault))
            if "lemma2" in checks:
                reports.append(check_lemma2(s, phi, h, n, fault))
        if "eqfin" in checks:
            reports.extend(check_eqfin(s, h, n, fault))
        if "norm" in checks:
            reports.append(check_norm_bound(s, n, fault))
    return reports


def reports_to_json(reports: Sequence[IdentityReport], indent: int = 2) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent)
