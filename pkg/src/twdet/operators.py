"""Nystrom discretization of integral operators on L^2(0, inf).

A kernel k(x, y) on the half line is truncated to (0, L) and sampled at the
nodes of a Gauss-Legendre rule.  The stored matrix is the symmetrized form
``sqrt(w_i) k(x_i, x_j) sqrt(w_j)``, which is similar to the plain Nystrom
matrix ``k(x_i, x_j) w_j`` and therefore has the same determinant,
eigenvalues and traces.

Functions on the half line are passed around as *node values* (unweighted
samples at the rule nodes).  The delta function at the origin never enters
the discrete space; contractions against it are evaluated through the
kernel row at x = 0, i.e. by Nystrom extension of the operator to the point
0.  Each operator therefore carries, next to its matrix,

* ``delta``  -- the row t(0, x_j), so that (T u)(0) = sum_j w_j t(0, x_j) u_j,
* ``delta_col`` -- the column t(x_i, 0), which is (T delta)(x_i),
* ``corner`` -- t(0, 0) = <delta, T delta>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import NumericalDegeneracyError, NumericalError, ParameterError
from .quadrature import QuadratureRule, gauss_legendre, map_to_interval
from .specfun import airy_ai, airy_ai_prime

__all__ = [
    "DEFAULT_NODES",
    "DeltaVector",
    "DiscretizedOperator",
    "KernelSpec",
    "add",
    "airy_derivative_kernel",
    "airy_kernel",
    "apply",
    "assemble",
    "compose",
    "delta_bracket",
    "det_and_complement",
    "det_complement",
    "det_id_minus",
    "rank_one",
    "sasamoto_kernel",
    "solve_id_minus",
    "solve_id_plus",
    "spectral_norm",
    "trace",
    "truncation_length",
    "zero_kernel",
]

DEFAULT_NODES = 80
MIN_NODES = 8

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class KernelSpec:
    """A kernel k(x, y) for x, y >= 0 with its distribution argument ``shift``.

    ``evaluator`` must broadcast over array arguments and already include
    the shift.  ``length_factor`` scales the truncation length used by
    :func:`assemble` when no rule is supplied.
    """

    evaluator: Evaluator
    shift: float
    symmetric: bool = True
    length_factor: float = 1.0
    name: str = "kernel"

    def __call__(self, x, y):
        return self.evaluator(x, y)


def truncation_length(s: float) -> float:
    """Half-line cutoff L(s) = 12 + max(0, -s); beyond it x + y + s >= 12."""
    return 12.0 + max(0.0, -s)


def airy_kernel(s: float, fault: float = 0.0) -> KernelSpec:
    """Kernel Ai(x + y + s) of B(s).

    ``fault`` adds ``fault * exp(-x - y)``; it exists so that the identity
    checks can be shown to detect a corrupted kernel.
    """
    if fault:
        def ev(x, y):
            return airy_ai(x + y + s) + fault * np.exp(-(x + y))
    else:
        def ev(x, y):
            return airy_ai(x + y + s)
    return KernelSpec(ev, float(s), True, 1.0, "B")


def airy_derivative_kernel(s: float) -> KernelSpec:
    """Kernel d/dx Ai(x + y + s) = Ai'(x + y + s) of DB(s) = dB/ds."""
    return KernelSpec(lambda x, y: airy_ai_prime(x + y + s), float(s), True, 1.0, "DB")


def sasamoto_kernel(s: float) -> KernelSpec:
    """Shifted Sasamoto kernel 1/2 Ai((x + y)/2 + s), living on (0, 2 L(s))."""
    return KernelSpec(lambda x, y: 0.5 * airy_ai(0.5 * (x + y) + s), float(s), True, 2.0, "A")


def zero_kernel(s: float = 0.0) -> KernelSpec:
    return KernelSpec(lambda x, y: np.zeros(np.broadcast(x, y).shape), float(s), True, 1.0, "0")


@dataclass(frozen=True, eq=False)
class DeltaVector:
    """Kernel row t(0, x_j) at the nodes of ``rule``."""

    values: np.ndarray
    rule: QuadratureRule

    def __post_init__(self):
        if self.values.shape != (self.rule.size,):
            raise ParameterError("delta vector length does not match the rule")


@dataclass(frozen=True, eq=False)
class DiscretizedOperator:
    matrix: np.ndarray
    rule: QuadratureRule
    spec: Optional[KernelSpec] = None
    delta: Optional[DeltaVector] = None
    delta_col: Optional[np.ndarray] = None
    corner: Optional[float] = None
    _sqrt_w: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.rule.size
        if self.matrix.shape != (n, n):
            raise ParameterError(f"matrix shape {self.matrix.shape} does not match rule size {n}")
        self.matrix.setflags(write=False)
        object.__setattr__(self, "_sqrt_w", np.sqrt(self.rule.weights))

    @property
    def size(self) -> int:
        return self.rule.size

    @property
    def sqrt_weights(self) -> np.ndarray:
        return self._sqrt_w

    def kernel_values(self) -> np.ndarray:
        """Unsymmetrized kernel samples t(x_i, x_j)."""
        return self.matrix / np.outer(self._sqrt_w, self._sqrt_w)

    def has_delta(self) -> bool:
        return self.delta is not None and self.delta_col is not None and self.corner is not None


def _default_rule(spec: KernelSpec, n: int) -> QuadratureRule:
    if n < MIN_NODES:
        raise ParameterError(f"need at least {MIN_NODES} nodes, got {n}")
    length = spec.length_factor * truncation_length(spec.shift)
    return map_to_interval(gauss_legendre(n), 0.0, length)


def assemble(spec: KernelSpec, n: int = DEFAULT_NODES, rule: Optional[QuadratureRule] = None) -> DiscretizedOperator:
    """Sample ``spec`` on ``rule`` (default: n-point rule on (0, L(shift)))."""
    if rule is None:
        rule = _default_rule(spec, n)
    x = rule.nodes
    sw = np.sqrt(rule.weights)
    k = np.asarray(spec(x[:, None], x[None, :]), dtype=float)
    if spec.symmetric:
        k = 0.5 * (k + k.T)
    matrix = sw[:, None] * k * sw[None, :]
    zero = np.zeros(1)
    row = np.asarray(spec(zero, x), dtype=float).reshape(-1)
    col = np.asarray(spec(x, zero), dtype=float).reshape(-1)
    corner = float(np.asarray(spec(zero, zero)).reshape(-1)[0])
    return DiscretizedOperator(matrix, rule, spec, DeltaVector(row, rule), col, corner)


def _check_same_rule(a: DiscretizedOperator, b: DiscretizedOperator):
    if not a.rule.same_as(b.rule):
        raise ParameterError("operators are discretized on different rules")


def compose(a: DiscretizedOperator, b: DiscretizedOperator) -> DiscretizedOperator:
    """Quadrature-consistent product a b, including its delta data."""
    _check_same_rule(a, b)
    matrix = a.matrix @ b.matrix
    delta = delta_col = corner = None
    if a.has_delta() and b.has_delta():
        w = a.rule.weights
        sw = a.sqrt_weights
        # (ab)(0, x_j) = sum_m a(0, x_m) w_m b(x_m, x_j)
        row = (a.delta.values * sw) @ b.matrix / sw
        col = a.matrix @ (sw * b.delta_col) / sw
        corner = float(np.sum(a.delta.values * w * b.delta_col))
        delta, delta_col = DeltaVector(row, a.rule), col
    return DiscretizedOperator(matrix, a.rule, None, delta, delta_col, corner)


def add(a: DiscretizedOperator, b: DiscretizedOperator, scale: float = 1.0) -> DiscretizedOperator:
    """a + scale * b."""
    _check_same_rule(a, b)
    matrix = a.matrix + scale * b.matrix
    if a.has_delta() and b.has_delta():
        return DiscretizedOperator(
            matrix,
            a.rule,
            None,
            DeltaVector(a.delta.values + scale * b.delta.values, a.rule),
            a.delta_col + scale * b.delta_col,
            a.corner + scale * b.corner,
        )
    return DiscretizedOperator(matrix, a.rule)


def rank_one(rule: QuadratureRule, g: np.ndarray, f: np.ndarray) -> DiscretizedOperator:
    """The operator |g><f| from node values of g and f."""
    sw = np.sqrt(rule.weights)
    return DiscretizedOperator(np.outer(sw * g, sw * f), rule)


def apply(op: DiscretizedOperator, u: np.ndarray) -> np.ndarray:
    """Node values of T u for node values u."""
    sw = op.sqrt_weights
    return op.matrix @ (sw * u) / sw


def _lu(op: DiscretizedOperator, sign: float):
    a = np.eye(op.size) - sign * op.matrix
    try:
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise NumericalDegeneracyError(str(exc)) from exc
    diag = np.diag(lu)
    if np.any(diag == 0.0) or not np.all(np.isfinite(diag)):
        raise NumericalDegeneracyError("singular factorization of I - sign*T")
    return lu, piv


def det_id_minus(op: DiscretizedOperator, sign: int = 1) -> float:
    """det(I - sign * T) by partially pivoted LU.

    ``sign=+1`` approximates the Fredholm determinant det(1 - T),
    ``sign=-1`` gives det(1 + T).
    """
    if sign not in (1, -1):
        raise ParameterError("sign must be +1 or -1")
    lu, piv = _lu(op, sign)
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    det = float(np.prod(np.diag(lu)))
    return -det if swaps % 2 else det


def det_and_complement(op: DiscretizedOperator, sign: int = 1) -> tuple:
    """(det(I - sign T), 1 - det(I - sign T)), each to full relative precision.

    Forming I - T in floating point rounds away everything below 1e-16
    absolute, which is all of 1 - det once T is small.  When the Frobenius
    norm of T is at most 1/2, log det(I - sign T) = -sum_k tr((sign T)^k)/k
    converges geometrically and is summed directly; otherwise the LU
    determinant is used, and the complement loses nothing by subtraction.
    """
    if sign not in (1, -1):
        raise ParameterError("sign must be +1 or -1")
    m = sign * op.matrix
    if np.linalg.norm(m) > 0.5:
        det = det_id_minus(op, sign)
        return det, 1.0 - det
    logdet = 0.0
    power = m
    for k in range(1, 200):
        term = float(np.trace(power)) / k
        logdet -= term
        if abs(term) <= 1e-18 * abs(logdet) or not np.any(power):
            break
        power = power @ m
    complement = -math.expm1(logdet)
    return 1.0 - complement, complement


def det_complement(op: DiscretizedOperator, sign: int = 1) -> float:
    """1 - det(I - sign T); see :func:`det_and_complement`."""
    return det_and_complement(op, sign)[1]


def _solve(op: DiscretizedOperator, rhs, sign: float) -> np.ndarray:
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != op.size:
        raise ParameterError("right-hand side length does not match the operator")
    lu_piv = _lu(op, sign)
    sw = op.sqrt_weights
    scale = sw if rhs.ndim == 1 else sw[:, None]
    return scipy.linalg.lu_solve(lu_piv, scale * rhs) / scale


def solve_id_plus(op: DiscretizedOperator, rhs) -> np.ndarray:
    """Node values u with (1 + T) u = rhs."""
    return _solve(op, rhs, -1.0)


def solve_id_minus(op: DiscretizedOperator, rhs) -> np.ndarray:
    """Node values u with (1 - T) u = rhs."""
    return _solve(op, rhs, 1.0)


def delta_bracket(op: DiscretizedOperator, u, offset: float = 0.0, sign: float = 1.0) -> float:
    """Evaluate ``offset + sign * (T u)(0)`` by Nystrom extension.

    With ``u = (1 + T)^{-1} r`` the point value at the origin is
    ``r(0) - (T u)(0)``, so ``delta_bracket(op, u, r(0), -1)`` is
    <delta, (1 + T)^{-1} r>.
    """
    if op.delta is None:
        raise ParameterError("operator carries no kernel row at the origin")
    u = np.asarray(u, dtype=float)
    return float(offset + sign * np.dot(op.rule.weights * op.delta.values, u))


def trace(op: DiscretizedOperator) -> float:
    """Quadrature approximation of the integral of t(x, x)."""
    return float(np.trace(op.matrix))


def spectral_norm(op: DiscretizedOperator, tol: float = 1e-10, max_iter: int = 10_000, block: int = 24) -> float:
    """Largest |eigenvalue| of a symmetric operator by block power iteration.

    A block of ``block`` vectors is multiplied by the matrix and
    re-orthonormalized each sweep, with a Rayleigh-Ritz step on the block.
    Eigenvalues of B(s) come in near-+-1 pairs at negative s, where a
    single-vector iteration stalls; the block converges at the rate
    |lambda_{block+1} / lambda_1| instead.  Iteration stops once the
    residual of the top Ritz pair is below ``tol`` (which bounds the
    eigenvalue error for symmetric matrices).
    """
    m = op.matrix
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-13 * max(1.0, np.abs(m).max())):
        raise ParameterError("spectral_norm needs a symmetric operator")
    if not np.any(m):
        return 0.0
    n = op.size
    k = min(block, n)
    rng = np.random.default_rng(0x5EED)
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    for it in range(1, max_iter + 1):
        q, _ = np.linalg.qr(m @ q)
        theta, vecs = np.linalg.eigh(q.T @ m @ q)
        top = np.argmax(np.abs(theta))
        v = q @ vecs[:, top]
        residual = np.linalg.norm(m @ v - theta[top] * v)
        if residual <= tol:
            return float(abs(theta[top]))
        q = q @ vecs
    raise NumericalError(f"power iteration did not converge after {max_iter} iterations (residual {residual:.3e})")
