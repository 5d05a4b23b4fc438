"""Empirical distribution functions and the Kolmogorov-Smirnov distance."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .errors import ParameterError

__all__ = ["EmpiricalCdf", "ks_distance", "ks_two_sample"]


class EmpiricalCdf:
    """Right-continuous step function x -> #{samples <= x} / n."""

    def __init__(self, samples: Iterable[float]):
        arr = np.sort(np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float).ravel())
        if np.isnan(arr).any():
            raise ParameterError("samples contain NaN")
        arr.setflags(write=False)
        self._samples = arr

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    def __len__(self) -> int:
        return self._samples.size

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self._samples.size == 0:
            raise ParameterError("empirical CDF of an empty sample")
        out = np.searchsorted(self._samples, x, side="right") / self._samples.size
        return float(out) if out.ndim == 0 else out

    def left_limit(self, x):
        """#{samples < x} / n."""
        x = np.asarray(x, dtype=float)
        if self._samples.size == 0:
            raise ParameterError("empirical CDF of an empty sample")
        out = np.searchsorted(self._samples, x, side="left") / self._samples.size
        return float(out) if out.ndim == 0 else out


def ks_distance(ecdf: EmpiricalCdf, F: Callable, grid: Iterable[float] = ()) -> float:
    """sup |ecdf - F| over the sample points and ``grid``.

    At each distinct sample both one-sided values of the step are compared
    with F, which is where the supremum of a step function against a
    continuous F is attained.  ``F`` must accept an array.
    """
    if len(ecdf) == 0:
        raise ParameterError("KS distance of an empty sample")
    atoms = np.unique(ecdf.samples)
    grid = np.asarray(list(grid), dtype=float)
    f_atoms = np.asarray(F(atoms), dtype=float)
    dist = max(
        float(np.max(np.abs(ecdf(atoms) - f_atoms))),
        float(np.max(np.abs(ecdf.left_limit(atoms) - f_atoms))),
    )
    if grid.size:
        dist = max(dist, float(np.max(np.abs(ecdf(grid) - np.asarray(F(grid), dtype=float)))))
    return dist


def ks_two_sample(a: EmpiricalCdf, b: EmpiricalCdf) -> float:
    """sup |a - b| for two empirical CDFs.

    Both are right-continuous and constant between the pooled atoms, so
    the supremum is attained at one of them.
    """
    if len(a) == 0 or len(b) == 0:
        raise ParameterError("KS distance of an empty sample")
    atoms = np.union1d(a.samples, b.samples)
    return float(np.max(np.abs(a(atoms) - b(atoms))))
