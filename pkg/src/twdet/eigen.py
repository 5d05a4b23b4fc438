"""Largest eigenvalue of a real symmetric matrix.

Householder reduction to tridiagonal form followed by bisection on the
Sturm sequence count.  Only the top eigenvalue is located, so the cost is
the O(n^3) reduction plus O(n) per bisection step.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import NumericalError, ParameterError

__all__ = [
    "largest_symmetric_eigenvalue",
    "largest_tridiagonal_eigenvalue",
    "sturm_count",
    "tridiagonalize",
]

SYMMETRY_TOL = 1e-12


@numba.njit(cache=True)
def _householder(a, d, e):
    """Reduce symmetric ``a`` (overwritten) to tridiagonal (d, e)."""
    n = a.shape[0]
    v = np.empty(n)
    p = np.empty(n)
    for k in range(n - 2):
        m = n - k - 1
        norm2 = 0.0
        for i in range(m):
            v[i] = a[k + 1 + i, k]
            norm2 += v[i] * v[i]
        norm = np.sqrt(norm2)
        if norm == 0.0:
            d[k] = a[k, k]
            e[k] = 0.0
            continue
        alpha = -norm if v[0] >= 0.0 else norm
        # v = x - alpha e1, normalized
        vnorm2 = norm2 - v[0] * v[0]
        v[0] -= alpha
        vnorm2 += v[0] * v[0]
        scale = 1.0 / np.sqrt(vnorm2)
        for i in range(m):
            v[i] *= scale
        # p = S v, K = v.p, w = p - K v; S <- S - 2 v w^T - 2 w v^T
        kk = 0.0
        for i in range(m):
            acc = 0.0
            for j in range(m):
                acc += a[k + 1 + i, k + 1 + j] * v[j]
            p[i] = acc
            kk += v[i] * acc
        for i in range(m):
            p[i] -= kk * v[i]
        for i in range(m):
            for j in range(m):
                a[k + 1 + i, k + 1 + j] -= 2.0 * (v[i] * p[j] + p[i] * v[j])
        d[k] = a[k, k]
        e[k] = alpha
    if n >= 2:
        d[n - 2] = a[n - 2, n - 2]
        e[n - 2] = a[n - 1, n - 2]
    d[n - 1] = a[n - 1, n - 1]


@numba.njit(cache=True)
def _sturm_count(d, e, x):
    """Number of eigenvalues of the tridiagonal (d, e) strictly below x."""
    n = d.shape[0]
    count = 0
    q = d[0] - x
    tiny = 1e-300
    if q < 0.0:
        count += 1
    for i in range(1, n):
        if q == 0.0:
            q = tiny
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True)
def _largest_tridiagonal(d, e):
    n = d.shape[0]
    lo = np.inf
    hi = -np.inf
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    span = max(abs(lo), abs(hi))
    if span == 0.0:
        return 0.0, 0
    # invariant: count(lo) <= n - 1 and count(hi) = n
    lo -= 1e-12 * span
    hi += 1e-12 * span
    steps = 0
    while hi - lo > 4.0 * 2.220446049250313e-16 * max(abs(lo), abs(hi)) + 1e-300:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _sturm_count(d, e, mid) == n:
            hi = mid
        else:
            lo = mid
        steps += 1
        if steps > 2000:
            return 0.5 * (lo + hi), -1
    return 0.5 * (lo + hi), steps


def tridiagonalize(matrix) -> tuple:
    """Diagonal and off-diagonal of a tridiagonal matrix similar to ``matrix``."""
    a = _as_symmetric(matrix)
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    if n == 1:
        d[0] = a[0, 0]
        return d, e
    _householder(a, d, e)
    return d, e


def sturm_count(d, e, x: float) -> int:
    return int(_sturm_count(np.asarray(d, float), np.asarray(e, float), float(x)))


def largest_tridiagonal_eigenvalue(d, e) -> float:
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    if d.size == 0 or e.size != max(d.size - 1, 0):
        raise ParameterError("need len(e) == len(d) - 1 >= 0")
    if d.size == 1:
        return float(d[0])
    value, steps = _largest_tridiagonal(d, e if e.size else np.zeros(1))
    if steps < 0:
        raise NumericalError("Sturm bisection did not converge")
    return float(value)


def _as_symmetric(matrix) -> np.ndarray:
    a = np.array(matrix, dtype=float, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ParameterError(f"need a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ParameterError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > SYMMETRY_TOL * scale:
        raise ParameterError("matrix is not symmetric")
    return a


def largest_symmetric_eigenvalue(matrix) -> float:
    """Largest eigenvalue of a real symmetric matrix."""
    d, e = tridiagonalize(matrix)
    return largest_tridiagonal_eigenvalue(d, e)
