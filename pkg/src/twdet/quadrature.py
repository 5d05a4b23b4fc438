"""Gauss-Legendre rules and their affine images."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError

__all__ = ["QuadratureRule", "gauss_legendre", "map_to_interval"]

MAX_NODES = 512


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights for integration over ``interval``."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        a, b = self.interval
        if not a < b:
            raise ParameterError(f"empty interval {self.interval}")
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ParameterError("nodes and weights must be 1-d arrays of equal length")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, f) -> float:
        """Apply the rule to a vectorized integrand."""
        return float(np.dot(self.weights, f(self.nodes)))

    def same_as(self, other: "QuadratureRule") -> bool:
        return self is other or (
            self.interval == other.interval
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )


def _legendre(n: int, x: np.ndarray):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@functools.lru_cache(maxsize=64)
def gauss_legendre(n: int, tol: float = 1e-15) -> QuadratureRule:
    """n-point Gauss-Legendre rule on (-1, 1).

    Roots of P_n are found by Newton iteration started from the
    Chebyshev-like guesses ``cos(pi (i - 1/4) / (n + 1/2))``; only the
    positive half is iterated and mirrored, so the rule is exactly
    symmetric.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_NODES:
        raise ParameterError(f"number of nodes must be an integer in [1, {MAX_NODES}], got {n!r}")
    n = int(n)
    if n == 1:
        return QuadratureRule(np.array([0.0]), np.array([2.0]), (-1.0, 1.0))

    half = (n + 1) // 2
    i = np.arange(1, half + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    else:
        raise NumericalError(f"Legendre root iteration did not converge for n={n}")
    _, dp = _legendre(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    if n % 2:
        x[-1] = 0.0
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return QuadratureRule(nodes, weights, (-1.0, 1.0))


def map_to_interval(rule: QuadratureRule, a: float, b: float) -> QuadratureRule:
    """Affine image of ``rule`` on ``(a, b)``."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ParameterError("interval endpoints must be finite")
    if not a < b:
        raise ParameterError(f"need a < b, got ({a}, {b})")
    lo, hi = rule.interval
    if (lo, hi) == (a, b):
        return rule
    scale = (b - a) / (hi - lo)
    nodes = a + (rule.nodes - lo) * scale
    return QuadratureRule(nodes, rule.weights * scale, (float(a), float(b)))
