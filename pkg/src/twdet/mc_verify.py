"""Monte Carlo checks of the limit laws against F1.

Collects the sampling pieces in one namespace: GOE largest eigenvalues,
half-flat TASEP heights, empirical CDFs and the KS distance.
"""

from .ecdf import EmpiricalCdf, ks_distance, ks_two_sample
from .eigen import largest_symmetric_eigenvalue
from .goe import GoeSampleSpec, sample_goe_xi
from .tasep import TasepBatch, TasepSpec, TasepState, sample_tasep_xi, simulate, tasep_run

__all__ = [
    "EmpiricalCdf",
    "GoeSampleSpec",
    "TasepBatch",
    "TasepSpec",
    "TasepState",
    "ks_distance",
    "ks_two_sample",
    "largest_symmetric_eigenvalue",
    "sample_goe_xi",
    "sample_tasep_xi",
    "simulate",
    "tasep_run",
]
