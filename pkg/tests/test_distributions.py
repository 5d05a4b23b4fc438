import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twdet import distributions as tw
from twdet.errors import InstabilityError, ParameterError
from twdet.operators import det_id_minus, sasamoto_kernel, assemble
from twdet.painleve import default_solution, painleve_solve
from twdet.specfun import airy_ai, airy_tail_integral

SQ2 = math.sqrt(2.0)


@pytest.fixture(scope="module")
def sol():
    return default_solution()


def test_right_end_values():
    for fn in (tw.f1, tw.f2, tw.f_sa_direct):
        assert abs(fn(10.0) - 1.0) < 1e-9
    assert abs(tw.f1_forrester(10.0) - 1.0) < 1e-8
    assert abs(tw.f4(7.0) - 1.0) < 1e-8
    assert abs(tw.f1_painleve(8.0) - 1.0) < 1e-8


def test_left_tail():
    assert tw.f1(-10.0) < 1e-3


@pytest.mark.parametrize("fn", [tw.f1, tw.f2, tw.f1_forrester, tw.f_sa_direct, tw.f1_painleve])
@pytest.mark.parametrize("s", [-10.5, 10.5, math.nan])
def test_range_checks(fn, s):
    with pytest.raises(ParameterError):
        fn(s)


def test_f4_range():
    with pytest.raises(ParameterError):
        tw.f4(-7.5)
    with pytest.raises(ParameterError):
        tw.f4_painleve(10.5)


def test_known_values():
    # reference values of the Tracy-Widom distributions at 0
    assert tw.f1(0.0) == pytest.approx(0.83190806620295, abs=1e-12)
    assert tw.f2(0.0) == pytest.approx(0.96937282835526, abs=1e-12)


def test_f1_matches_painleve_at_zero():
    assert abs(tw.f1(0.0) - tw.f1_painleve(0.0)) < 1e-6


def test_factorization_at_zero():
    from twdet.distributions import airy_operator
    b = airy_operator(0.0)
    assert abs(tw.f2(0.0) - det_id_minus(b, 1) * det_id_minus(b, -1)) < 1e-10


@pytest.mark.parametrize("s", [0.0, -4.0])
def test_forrester_equals_f1(s):
    assert abs(tw.f1_forrester(s) - tw.f1(s)) < 1e-8


@pytest.mark.parametrize("s", [0.0, -2.0])
def test_sasamoto_equals_f1(s):
    assert abs(tw.f_sa_direct(s) - tw.f1(s)) < 1e-9


def test_forrester_parts():
    b = tw.airy_operator(1.0)
    parts = tw.forrester_parts(b)
    x = b.rule.nodes
    assert np.all(parts.g > 0)
    assert np.allclose(parts.g, airy_ai(x + 1.0))
    assert np.allclose(parts.f, 1 - airy_tail_integral(x + 1.0))
    assert np.all(np.diff(parts.f[x > 2]) >= 0) and abs(parts.f[-1] - 1) < 1e-12


def test_f4_examples(sol):
    s0 = 0.0
    assert abs(tw.f4(0.0) - math.cosh(sol.U_at(s0)) * math.sqrt(tw.f2(s0))) < 1e-6
    s = -2 * SQ2
    assert abs(tw.f4(-2.0) - 0.5 * (tw.f1(s) + tw.f2(s) / tw.f1(s))) < 1e-9


@pytest.mark.parametrize("s", [0.0, -6.0])
def test_painleve_route(s):
    tol = 1e-6 if s == 0 else 1e-5
    assert abs(tw.f1_painleve(s) - tw.f1(s)) < tol


def test_route_agreement_grid():
    for s in np.arange(-8, 7):
        assert abs(tw.f1(s) - tw.f1_forrester(s)) < 1e-8
        assert abs(tw.f1(s) - tw.f_sa_direct(s)) < 1e-9


def test_painleve_consistency(sol):
    for s in np.arange(-6, 6.01, 0.25):
        assert abs(tw.f1(s) ** 2 - math.exp(-2 * sol.U_at(s)) * tw.f2(s)) < 1e-5


def test_falsified_guess():
    s = -2.0
    assert abs(tw.det_one_minus_b_power(s, 4) - tw.f4(s / SQ2)) > 1e-3


def test_cdf_shape():
    s = np.arange(-10, 10.01, 0.5)
    for fn in (tw.f1, tw.f2):
        vals = np.array([fn(v) for v in s])
        assert np.all(np.diff(vals) >= 0) and np.all((vals > 0) & (vals <= 1))
        assert abs(vals[-1] - 1) < 1e-8
    u = np.arange(-7, 10.01, 0.5)
    vals = np.array([tw.f4(v) for v in u])
    assert np.all(np.diff(vals) >= 0) and np.all((vals > 0) & (vals <= 1))


@given(st.floats(-9.5, 9.5), st.floats(0.01, 0.5))
def test_monotone_property(s, ds):
    assert tw.f1(s) <= tw.f1(min(s + ds, 10.0)) + 1e-14


@given(st.floats(-8, 8))
def test_f2_below_f1(s):
    # F2 = F1 det(1 + B) and det(1 + B) <= 1 is not guaranteed, but F1^2 = e^{-2U} F2 <= F2
    assert tw.f1(s) ** 2 <= tw.f2(s) + 1e-14


def test_sasamoto_self_convergence():
    for s in (-8.0, 0.0, 6.0):
        a = det_id_minus(assemble(sasamoto_kernel(s), 60), 1)
        b = det_id_minus(assemble(sasamoto_kernel(s), 100), 1)
        assert abs(a - b) < 1e-9


# Painleve solution


def test_solution_invariants(sol):
    assert np.all(sol.q > 0)
    assert np.all(np.diff(sol.s_grid) < 0)
    right = sol.s_grid >= 4
    assert np.max(np.abs(sol.q[right] - airy_ai(sol.s_grid[right]))) < 1e-10
    assert np.max(sol.ode_residual()) < 1e-8
    assert np.all(np.diff(sol.U) > 0) and sol.U[0] >= 0


def test_q_matches_airy_at_six(sol):
    i = np.argmin(np.abs(sol.s_grid - 6.0))
    assert sol.s_grid[i] == 6.0
    assert abs(sol.q[i] - airy_ai(6.0)) < 1e-10


def test_left_asymptote(sol):
    assert 0.95 < sol.q[-1] / math.sqrt(5.0) < 1.05
    assert sol.s_min == -10.0


def test_step_tolerance_stability():
    a = painleve_solve(step_tolerance=2.3e-14)
    b = painleve_solve(step_tolerance=4.6e-14)
    i = np.argmin(np.abs(a.s_grid + 4.0))
    assert abs(a.q[i] - b.q[i]) < 1e-8


def test_crude_tolerance_leaves_separatrix():
    # a loose tolerance is enough to fall off the separatrix before s = -10
    loose = painleve_solve(step_tolerance=1e-8)
    tight = default_solution()
    assert abs(loose.q[-1] - tight.q[-1]) > 1e-3


def test_blowup_detected():
    # seeding with 1.01 * Ai excites the growing component, which blows up
    from twdet import painleve

    orig = painleve.airy_ai
    painleve.airy_ai = lambda x: 1.01 * orig(x)
    try:
        with pytest.raises(InstabilityError) as info:
            painleve_solve()
    finally:
        painleve.airy_ai = orig
    assert info.value.s_reached is not None and -10 < info.value.s_reached < 8


def test_solver_arguments():
    with pytest.raises(ParameterError):
        painleve_solve(s_min=-11)
    with pytest.raises(ParameterError):
        painleve_solve(s0=6)
    with pytest.raises(ParameterError):
        painleve_solve(step_tolerance=0)


def test_U_interpolation(sol):
    # Hermite interpolant reproduces grid values and continues with the seed relation
    assert sol.U_at(sol.s_grid[10]) == pytest.approx(sol.U[10], abs=1e-15)
    assert sol.U_at(9.0) == pytest.approx(0.5 * airy_tail_integral(9.0), rel=1e-14)
    with pytest.raises(ParameterError):
        sol.U_at(-10.5)
