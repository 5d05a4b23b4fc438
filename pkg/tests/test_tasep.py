import math

import numpy as np
import pytest
from scipy import stats

from twdet.distributions import tw_cdf
from twdet.ecdf import EmpiricalCdf, ks_distance
from twdet.errors import ParameterError, WindowTooSmallError
from twdet.rng import run_generator
from twdet.tasep import (
    BUFFER,
    TasepSpec,
    _gillespie,
    _init_mobile,
    half_flat_occupations,
    sample_tasep_xi,
    simulate,
    tasep_run,
    xi_from_height,
)


def initial_height(j, phase=0):
    eta = lambda i: int(i <= -phase and (i + phase) % 2 == 0)
    if j >= 0:
        return sum(1 - 2 * eta(i) for i in range(1, j + 1))
    return -sum(1 - 2 * eta(i) for i in range(j + 1, 1))


def naive_height(t, j, rng, lo=-60, hi=40):
    """Pure Python Gillespie on [lo, hi]; rescans the configuration every step."""
    occ = {i: int(i <= 0 and i % 2 == 0) for i in range(lo, hi + 1)}
    clock, crossed = 0.0, 0
    while True:
        movers = [i for i in range(lo, hi) if occ[i] and not occ[i + 1]]
        clock += rng.exponential(1.0 / len(movers))
        if clock > t:
            break
        i = movers[rng.integers(len(movers))]
        occ[i], occ[i + 1] = 0, 1
        if i == j:
            crossed += 1
    return 2 * crossed + initial_height(j)


def lpp_heights(t, j, count, rng, kmax):
    """Heights at j from last passage times G(n, k) = max(G(n, k-1), G(n-1, k-1)) + w.

    Particle n starts at -2n; its k-th jump needs particle n-1 to have jumped
    k-1 times.  Bond (j, j+1) is crossed by particle n at jump k = j + 2n + 1.
    """
    n_first = math.ceil(-(j + 1) / 2 + 1e-9)  # first particle with k >= 1
    n_last = (kmax - j - 1) // 2
    prev = None
    crossed = np.zeros(count, dtype=int)
    for n in range(n_last + 1):
        g = np.zeros((kmax + 1, count))
        w = rng.exponential(1.0, (kmax + 1, count))
        for k in range(1, kmax + 1):
            g[k] = g[k - 1] if prev is None else np.maximum(g[k - 1], prev[k - 1])
            g[k] = g[k] + w[k]
        k_n = j + 2 * n + 1
        if n >= n_first and 1 <= k_n <= kmax:
            crossed += g[k_n] <= t
        prev = g
    return 2 * crossed + initial_height(j)


def test_default_window_and_site():
    spec = TasepSpec(512)
    assert spec.site == -768
    assert spec.window == (768 + 1024 + 10, 512 + 230 + 10)


def test_spec_validation():
    with pytest.raises(ParameterError):
        TasepSpec(1.0)  # 3t/2 not integer
    with pytest.raises(ParameterError):
        TasepSpec(-2)
    with pytest.raises(ParameterError):
        TasepSpec(2, phase=2)
    with pytest.raises(ParameterError):
        TasepSpec(64, window=(10, 10))
    with pytest.raises(ParameterError):
        tasep_run(TasepSpec(0))
    with pytest.raises(ParameterError):
        xi_from_height(0.0, 0.0)


def test_initial_configuration():
    occ = half_flat_occupations(6, 3)
    assert occ.tolist() == [1, 0, 1, 0, 1, 0, 1, 0, 0, 0]
    assert half_flat_occupations(6, 3, phase=1).tolist() == [0, 1, 0, 1, 0, 1, 0, 0, 0, 0]


def test_time_zero_height():
    state = simulate(TasepSpec(0))
    assert state.n_passed == 0
    for j in range(-9, 6):
        assert state.height(j) == initial_height(j)
    assert state.height(0) == 0


def test_deterministic():
    a = [tasep_run(TasepSpec(64, 5, run_index=i)) for i in range(5)]
    b = [tasep_run(TasepSpec(64, 5, run_index=i)) for i in range(5)]
    assert a == b
    assert sample_tasep_xi(64, 5, 5).values == a


def test_workers_do_not_change_result():
    assert sample_tasep_xi(16, 10, 3, workers=2).values == sample_tasep_xi(16, 10, 3).values


@pytest.mark.parametrize("phase", [0, 1])
def test_jump_log_consistency(phase):
    spec = TasepSpec(32, 9, phase=phase)
    state = simulate(spec, record=True)
    left, right = spec.window
    occ = half_flat_occupations(left, right, phase)
    n_particles = occ.sum()
    assert np.all(np.diff(state.jump_times) > 0) and state.jump_times[-1] <= 32
    for site in state.jump_sites:
        k = site + left
        assert occ[k] == 1 and occ[k + 1] == 0
        occ[k], occ[k + 1] = 0, 1
    assert np.array_equal(occ, state.occupations)
    assert state.occupations.sum() == n_particles
    assert state.n_passed == int(np.sum(state.jump_sites == 0))
    sites, counts = np.unique(state.jump_sites, return_counts=True)
    crossings = dict(zip(sites.tolist(), counts.tolist()))
    for j in range(-48, 20):
        h0 = initial_height(j, phase)
        assert state.height(j) - h0 == 2 * crossings.get(j, 0)


def test_height_increments():
    state = simulate(TasepSpec(64, 2))
    prof = state.height_profile(-96, 40)
    assert set(np.abs(np.diff(prof)).tolist()) == {1}


def test_exponential_clock():
    # a lone particle always has rate one, so waiting times are Exp(1)
    n = 20_010
    occ = np.zeros(n, dtype=np.uint8)
    occ[0] = 1
    mob = np.empty(n, dtype=np.int64)
    where = np.empty(n, dtype=np.int64)
    nmob = _init_mobile(occ, mob, where)
    rng = np.random.default_rng(17)
    exps, unifs = rng.standard_exponential(BUFFER), rng.random(BUFFER)
    sites = np.empty(BUFFER, dtype=np.int64)
    times = np.empty(BUFFER)
    counters = np.zeros(2, dtype=np.int64)
    status, used, clock, _ = _gillespie(occ, mob, where, nmob, 0.0, 10_000.0, -1, -1, 1 << 40, counters,
                                        exps, unifs, sites, times, True)
    waits = np.diff(np.concatenate([[0.0], times[: used - 1]]))
    assert np.array_equal(sites[: used - 1], np.arange(used - 1))
    assert ks_distance(EmpiricalCdf(waits), stats.expon.cdf) < 0.02


def test_right_window_sentinel():
    with pytest.raises(WindowTooSmallError):
        simulate(TasepSpec(64, 1, window=(400, 5)))


def test_left_window_sentinel():
    with pytest.raises(WindowTooSmallError):
        simulate(TasepSpec(64, 1, window=(97, 200)))


def test_batch_counts_rejections():
    batch = sample_tasep_xi(64, 6, 1, window=(400, 5))
    assert batch.invalid == 6 and batch.invalid_fraction == 1.0
    assert all(math.isnan(v) for v in batch.values) and batch.valid().size == 0


def test_default_window_rarely_rejects():
    assert sample_tasep_xi(128, 200, 4).invalid == 0


def test_against_naive_simulation():
    t, j = 8, -12
    rng = np.random.default_rng(2024)
    naive = [naive_height(t, j, rng) for _ in range(2000)]
    ours = [simulate(TasepSpec(t, 31, run_index=i)).height(j) for i in range(2000)]
    assert stats.ks_2samp(naive, ours).pvalue > 1e-3
    assert abs(np.mean(naive) - np.mean(ours)) < 5 * np.std(ours) / np.sqrt(1000)


def test_against_last_passage_percolation():
    t, j = 32, -48
    ref = lpp_heights(t, j, 2000, np.random.default_rng(77), kmax=96)
    ours = [simulate(TasepSpec(t, 32, run_index=i)).height(j) for i in range(2000)]
    assert stats.ks_2samp(ref, ours).pvalue > 1e-3
    assert abs(np.mean(ref) - np.mean(ours)) < 5 * np.std(ours) / np.sqrt(1000)


def test_orientation():
    # the unflipped fluctuation 2 (h - t/2) / t^(1/3) is centred near +1.2
    xi = sample_tasep_xi(128, 400, 6).valid()
    assert 0.8 < np.mean(-xi) < 1.6
    assert ks_distance(EmpiricalCdf(xi), tw_cdf) < ks_distance(EmpiricalCdf(-xi), tw_cdf)
