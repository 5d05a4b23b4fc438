"""Tracy-Widom distribution functions from Fredholm determinants of B(s).

B(s) is the operator on L^2(0, inf) with kernel Ai(x + y + s).  Every
distribution here is a determinant built from it:

    F1(s)            = det(1 - B)
    F2(s)            = det(1 - B^2)
    F1(s)^2          = det(1 - B^2 - |g><f|),   g = Ai(. + s), f = 1 - int Ai
    F_SA(s)          = det(1 - A_s),            A_s(x, y) = 1/2 Ai((x + y)/2 + s)
    F4(s / sqrt 2)   = (det(1 - B) + det(1 + B)) / 2

and, independently of the determinants, through the Hastings-McLeod
solution q of Painleve II with U(s) = 1/2 int_s^inf q:

    F1(s)          = exp(-U(s)) F2(s)^(1/2)
    F4(s / sqrt 2) = cosh(U(s)) F2(s)^(1/2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericalDegeneracyError, ParameterError
from .operators import (
    DEFAULT_NODES,
    DiscretizedOperator,
    add,
    airy_kernel,
    assemble,
    compose,
    det_and_complement,
    det_complement,
    det_id_minus,
    rank_one,
    sasamoto_kernel,
)
from .painleve import PainleveSolution, default_solution
from .specfun import airy_ai, airy_tail_integral

__all__ = [
    "ForresterParts",
    "S_RANGE",
    "U_RANGE",
    "airy_operator",
    "det_one_minus_b_power",
    "f1",
    "f1_forrester",
    "f1_painleve",
    "f2",
    "f4",
    "f4_painleve",
    "f_sa_direct",
    "forrester_parts",
    "tw_cdf",
]

S_RANGE = (-10.0, 10.0)
# f4 evaluates B at u * sqrt(2); the lower end keeps that inside S_RANGE
U_RANGE = (-7.0, 10.0)
SQRT2 = math.sqrt(2.0)


def _check_s(s: float, lo: float = S_RANGE[0], hi: float = S_RANGE[1]) -> float:
    s = float(s)
    if not (math.isfinite(s) and lo <= s <= hi):
        raise ParameterError(f"argument {s} outside the supported range [{lo}, {hi}]")
    return s


def airy_operator(s: float, n: int = DEFAULT_NODES) -> DiscretizedOperator:
    return assemble(airy_kernel(s), n)


def _probability(value: float, what: str) -> float:
    if not value > 0.0:
        raise NumericalDegeneracyError(f"{what} gave a non-positive determinant {value!r}")
    return value


def _det(op: DiscretizedOperator, sign: int = 1) -> float:
    """det(1 - sign T), with 1 - det kept to full precision near the right tail.

    Plain LU leaves +-1e-16 noise on values next to 1, enough to break
    monotonicity of the distribution functions on their plateau.
    """
    return det_and_complement(op, sign)[0]


def f1(s: float, n: int = DEFAULT_NODES) -> float:
    """GOE Tracy-Widom distribution F1(s) = det(1 - B(s))."""
    s = _check_s(s)
    return _probability(_det(airy_operator(s, n)), "det(1 - B)")


def f2(s: float, n: int = DEFAULT_NODES) -> float:
    """GUE Tracy-Widom distribution F2(s) = det(1 - B(s)^2)."""
    s = _check_s(s)
    b = airy_operator(s, n)
    return _probability(_det(compose(b, b)), "det(1 - B^2)")


def det_one_minus_b_power(s: float, power: int, n: int = DEFAULT_NODES) -> float:
    """det(1 - B(s)^power)."""
    if power < 1:
        raise ParameterError("power must be >= 1")
    b = airy_operator(s, n)
    op = b
    for _ in range(power - 1):
        op = compose(op, b)
    return det_id_minus(op, 1)


@dataclass(frozen=True, eq=False)
class ForresterParts:
    """Node values of g(x) = Ai(x + s) and f(y) = 1 - int_0^inf Ai(y + l + s) dl."""

    g: np.ndarray
    f: np.ndarray


def forrester_parts(op: DiscretizedOperator) -> ForresterParts:
    s = op.spec.shift
    x = op.rule.nodes
    return ForresterParts(airy_ai(x + s), 1.0 - airy_tail_integral(x + s))


def f1_forrester(s: float, n: int = DEFAULT_NODES) -> float:
    """F1 from the rank-one perturbed GUE determinant: sqrt(det(1 - B^2 - |g><f|))."""
    s = _check_s(s)
    b = airy_operator(s, n)
    parts = forrester_parts(b)
    op = add(compose(b, b), rank_one(b.rule, parts.g, parts.f))
    return math.sqrt(_probability(det_id_minus(op, 1), "det(1 - B^2 - |g><f|)"))


def f_sa_direct(s: float, n: int = DEFAULT_NODES) -> float:
    """Sasamoto's F_SA(s) = det(1 - A) with A(x, y) = 1/2 Ai((x + y)/2) on (s, inf)."""
    s = _check_s(s)
    return _probability(_det(assemble(sasamoto_kernel(s), n)), "det(1 - A)")


def f4(u: float, n: int = DEFAULT_NODES) -> float:
    """GSE Tracy-Widom distribution at the physical argument u.

    Uses F4(s / sqrt 2) = (det(1 - B(s)) + det(1 + B(s))) / 2 with s = u sqrt 2.
    """
    u = _check_s(u, *U_RANGE)
    b = assemble(airy_kernel(u * SQRT2), n)
    # 1 - (d_minus + d_plus)/2 from the two complements; their leading
    # terms +-Tr B cancel exactly in the sum
    deficit = 0.5 * (det_complement(b, 1) + det_complement(b, -1))
    return _probability(1.0 - deficit, "F4 determinant pair")


def f1_painleve(s: float, solution: Optional[PainleveSolution] = None, n: int = DEFAULT_NODES) -> float:
    """F1(s) = exp(-U(s)) sqrt(F2(s)) with U from the Hastings-McLeod solution."""
    s = _check_s(s)
    solution = solution or default_solution()
    return math.exp(-solution.U_at(s)) * math.sqrt(f2(s, n))


def f4_painleve(u: float, solution: Optional[PainleveSolution] = None, n: int = DEFAULT_NODES) -> float:
    """F4(u) = cosh(U(s)) sqrt(F2(s)) at s = u sqrt 2."""
    u = _check_s(u, *U_RANGE)
    s = u * SQRT2
    solution = solution or default_solution()
    b = assemble(airy_kernel(s), n)
    return math.cosh(solution.U_at(s)) * math.sqrt(_det(compose(b, b)))


def tw_cdf(x) -> np.ndarray:
    """F1 on arbitrary reals: clamped to 0 / 1 outside [-10, 10].

    At the clamping points F1(-10) ~ 3e-22 and 1 - F1(10) ~ 2e-11, so this is
    a reference CDF for goodness-of-fit tests, not an extension of f1.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(arr)
    for i, v in enumerate(arr):
        if v <= S_RANGE[0]:
            out[i] = 0.0
        elif v >= S_RANGE[1]:
            out[i] = 1.0
        else:
            out[i] = f1(v)
    return out
