"""TASEP with half-flat initial data, simulated exactly by the Gillespie method.

Particles jump one site to the right at rate 1 when the target is empty.
Initially every second site of the negative half line is occupied and the
positive half line is empty (phase 0: occupied sites 0, -2, -4, ...).

The height function is

    h(j, t) = 2 N_t + sum_{i=1}^{j} (1 - 2 eta_i(t))       j >= 1
    h(0, t) = 2 N_t
    h(j, t) = 2 N_t - sum_{i=j+1}^{0} (1 - 2 eta_i(t))     j <= -1

with N_t the number of jumps across the bond (0, 1).  At j = -3t/2 the
height grows like t/2 and its t^(1/3) fluctuations are GOE Tracy-Widom
distributed after the orientation fix in :func:`xi_from_height`.

Only a finite window of sites is simulated.  Both truncations are detected
exactly rather than estimated:

* right end: a particle arriving on the last site could not move on, so
  the run is rejected the moment that happens;
* left end: particles never feel anything to their left, so the missing
  particles beyond the window only matter if one of them would cross the
  bond (j, j + 1).  Particles keep their order, so that can only happen
  after the leftmost simulated particle has crossed it; the run is rejected
  then.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from .errors import ParameterError, WindowTooSmallError
from .rng import run_generator

__all__ = [
    "TasepBatch",
    "TasepSpec",
    "TasepState",
    "default_window",
    "half_flat_occupations",
    "sample_tasep_xi",
    "simulate",
    "tasep_run",
    "xi_from_height",
]

BUFFER = 1 << 16

_NEED_DRAWS = 0
_DONE = 1
_RIGHT_EDGE = 2
_LEFT_EDGE = 3


def default_window(t: float) -> tuple:
    """(W, W') for the site interval [-W, W'].

    The front particle moves freely at first, so it travels about t sites;
    W' leaves ten standard deviations of a Poisson(t) count on top.
    """
    left = math.ceil(1.5 * t) + math.ceil(2 * t) + 10
    right = math.ceil(t) + 10 * math.ceil(math.sqrt(t)) + 10
    return left, right


@dataclass(frozen=True)
class TasepSpec:
    t: float
    seed: int = 0
    window: Optional[tuple] = None
    run_index: int = 0
    phase: int = 0

    def __post_init__(self):
        t = float(self.t)
        if not (math.isfinite(t) and t >= 0):
            raise ParameterError("time must be finite and non-negative")
        if abs(1.5 * t - round(1.5 * t)) > 1e-9:
            raise ParameterError("3t/2 must be an integer")
        if self.phase not in (0, 1):
            raise ParameterError("phase must be 0 or 1")
        if self.window is None:
            object.__setattr__(self, "window", default_window(t))
        left, right = self.window
        if left < math.ceil(1.5 * t) + 1 or right < 1:
            raise ParameterError("window must contain the sites -3t/2 .. 1")

    @property
    def site(self) -> int:
        """The observation site j = -3t/2."""
        return -int(round(1.5 * self.t))


def half_flat_occupations(left: int, right: int, phase: int = 0) -> np.ndarray:
    """Occupations of sites -left .. right.  Phase 0 puts the rightmost particle at 0, phase 1 at -1."""
    sites = np.arange(-left, right + 1)
    return ((sites <= -phase) & ((sites + phase) % 2 == 0)).astype(np.uint8)


@dataclass
class TasepState:
    """Configuration on the sites -offset .. len(occupations) - offset - 1."""

    occupations: np.ndarray
    offset: int
    n_passed: int = 0
    clock: float = 0.0
    jump_sites: Optional[np.ndarray] = field(default=None, repr=False)
    jump_times: Optional[np.ndarray] = field(default=None, repr=False)

    def eta(self, site: int) -> int:
        return int(self.occupations[site + self.offset])

    def height(self, j: int) -> int:
        o = self.offset
        if j >= 1:
            return 2 * self.n_passed + int(np.sum(1 - 2 * self.occupations[o + 1 : o + j + 1].astype(np.int64)))
        if j == 0:
            return 2 * self.n_passed
        return 2 * self.n_passed - int(np.sum(1 - 2 * self.occupations[o + j + 1 : o + 1].astype(np.int64)))

    def height_profile(self, lo: int, hi: int) -> np.ndarray:
        return np.array([self.height(j) for j in range(lo, hi + 1)])


@numba.njit(cache=True)
def _init_mobile(occ, mob, where):
    n = occ.shape[0]
    nmob = 0
    for k in range(n):
        where[k] = -1
    for k in range(n - 1):
        if occ[k] == 1 and occ[k + 1] == 0:
            mob[nmob] = k
            where[k] = nmob
            nmob += 1
    return nmob


@numba.njit(cache=True)
def _add(k, mob, where, nmob):
    mob[nmob] = k
    where[k] = nmob
    return nmob + 1


@numba.njit(cache=True)
def _remove(k, mob, where, nmob):
    i = where[k]
    last = mob[nmob - 1]
    mob[i] = last
    where[last] = i
    where[k] = -1
    return nmob - 1


@numba.njit(cache=True)
def _gillespie(occ, mob, where, nmob, clock, t_end, origin, bond, n_left, counters, exps, unifs, log_sites, log_times, record):
    """Advance until t_end or until the draws run out.

    counters = [n_passed, crossings of the observation bond].  Returns
    (status, draws used, clock, nmob).
    """
    n = occ.shape[0]
    used = 0
    while used < exps.shape[0]:
        if nmob == 0:
            return 1, used, t_end, nmob
        clock += exps[used] / nmob
        if clock > t_end:
            return 1, used + 1, t_end, nmob
        pick = int(unifs[used] * nmob)
        if pick >= nmob:
            pick = nmob - 1
        k = mob[pick]
        if record:
            log_sites[used] = k
            log_times[used] = clock
        used += 1
        # move k -> k + 1
        occ[k] = 0
        occ[k + 1] = 1
        nmob = _remove(k, mob, where, nmob)
        if k + 2 < n and occ[k + 2] == 0:
            nmob = _add(k + 1, mob, where, nmob)
        if k >= 1 and occ[k - 1] == 1:
            nmob = _add(k - 1, mob, where, nmob)
        if k == origin:
            counters[0] += 1
        if k == bond:
            counters[1] += 1
            if counters[1] >= n_left:
                return 3, used, clock, nmob
        if k + 1 == n - 1:
            return 2, used, clock, nmob
    return 0, used, clock, nmob


def simulate(spec: TasepSpec, rng: Optional[np.random.Generator] = None, record: bool = False) -> TasepState:
    """Evolve the half-flat configuration to time spec.t.

    Raises WindowTooSmallError when either window sentinel fires.  With
    ``record`` the state carries the site and time of every jump.
    """
    if rng is None:
        rng = run_generator(spec.seed, spec.run_index)
    left, right = spec.window
    occ = half_flat_occupations(left, right, spec.phase)
    n = occ.size
    mob = np.empty(n, dtype=np.int64)
    where = np.empty(n, dtype=np.int64)
    nmob = _init_mobile(occ, mob, where)
    bond = left + spec.site
    n_left = int(occ[: bond + 1].sum())
    counters = np.zeros(2, dtype=np.int64)
    clock = 0.0
    sites_log, times_log = [], []
    log_sites = np.empty(BUFFER if record else 1, dtype=np.int64)
    log_times = np.empty(BUFFER if record else 1)
    status = _NEED_DRAWS if spec.t > 0 else _DONE
    while status == _NEED_DRAWS:
        exps = rng.standard_exponential(BUFFER)
        unifs = rng.random(BUFFER)
        status, used, clock, nmob = _gillespie(
            occ, mob, where, nmob, clock, float(spec.t), left, bond, n_left, counters,
            exps, unifs, log_sites, log_times, record,
        )
        if record:
            # the final draw that overshoots t is not a jump
            jumps = used - 1 if status == _DONE else used
            sites_log.append(log_sites[:jumps] - left)
            times_log.append(log_times[:jumps].copy())
    if status == _RIGHT_EDGE:
        raise WindowTooSmallError(f"a particle reached the right end of the window before t = {spec.t}")
    if status == _LEFT_EDGE:
        raise WindowTooSmallError(f"the leftmost particle crossed the observation bond before t = {spec.t}")
    state = TasepState(occ, left, int(counters[0]), float(min(clock, spec.t)))
    if record:
        state.jump_sites = np.concatenate(sites_log) if sites_log else np.empty(0, dtype=np.int64)
        state.jump_times = np.concatenate(times_log) if times_log else np.empty(0)
    return state


def xi_from_height(h: float, t: float) -> float:
    """Rescaled height fluctuation, oriented so that it is F1 distributed.

    With h growing as particles pass, large h means an early crossing, so
    the height fluctuation is sign-reversed relative to F1:
    xi = 2 (t/2 - h) / t^(1/3).
    """
    if t <= 0:
        raise ParameterError("the rescaled height needs t > 0")
    return 2.0 * (0.5 * t - h) / t ** (1.0 / 3.0)


def tasep_run(spec: TasepSpec, rng: Optional[np.random.Generator] = None) -> float:
    """One sample of the rescaled height at j = -3t/2."""
    if spec.t <= 0:
        raise ParameterError("the rescaled height needs t > 0")
    state = simulate(spec, rng)
    return xi_from_height(state.height(spec.site), spec.t)


@dataclass
class TasepBatch:
    values: list  # NaN marks a rejected run
    invalid: int

    @property
    def invalid_fraction(self) -> float:
        return self.invalid / len(self.values) if self.values else 0.0

    def valid(self) -> np.ndarray:
        arr = np.asarray(self.values, dtype=float)
        return arr[~np.isnan(arr)]


def _batch(args) -> list:
    t, seed, phase, window, indices = args
    out = []
    for i in indices:
        try:
            out.append(tasep_run(TasepSpec(t, seed, window, i, phase)))
        except WindowTooSmallError:
            out.append(float("nan"))
    return out


def sample_tasep_xi(
    t: float, count: int, seed: int, phase: int = 0, window: Optional[tuple] = None, workers: Optional[int] = None
) -> TasepBatch:
    """``count`` independent runs; run i uses the substream (seed, i)."""
    if count < 0:
        raise ParameterError("count must be non-negative")
    TasepSpec(t, seed, window, 0, phase)  # validate once up front
    indices = list(range(count))
    if not workers or workers <= 1 or count < 2 * workers:
        values = _batch((t, seed, phase, window, indices))
    else:
        chunks = [indices[k::workers] for k in range(workers)]
        values = [0.0] * count
        with ProcessPoolExecutor(workers) as pool:
            jobs = [(t, seed, phase, window, c) for c in chunks]
            for chunk, vals in zip(chunks, pool.map(_batch, jobs)):
                for i, v in zip(chunk, vals):
                    values[i] = v
    invalid = sum(1 for v in values if math.isnan(v))
    return TasepBatch(values, invalid)
