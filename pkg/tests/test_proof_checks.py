import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twdet.errors import ParameterError
from twdet.proof_checks import (
    EXP,
    GAUSS,
    SUITE_MANIFEST,
    ZERO,
    IdentityReport,
    TestFunction,
    check_eq10,
    check_eq3,
    check_eqfin,
    check_lemma1,
    check_lemma2,
    check_norm_bound,
    reports_to_json,
    run_suite,
)


@pytest.mark.parametrize("phi", [EXP, GAUSS])
def test_test_function_derivative_central(phi):
    x = np.linspace(0.01, 6, 60)
    h = 1e-6
    fd = (phi.value(x + h) - phi.value(x - h)) / (2 * h)
    assert np.max(np.abs(fd - phi.derivative(x))) < 1e-8


def test_report_passed_flag():
    r = IdentityReport.build("x", 0.0, 1.0, 1.0 + 1e-10, 1e-9)
    assert r.passed and r.abs_diff == pytest.approx(1e-10)
    r = IdentityReport.build("x", 0.0, 1.0, 1.1, 1e-9)
    assert not r.passed
    r = IdentityReport.build("x", 0.0, math.nan, 1.0, 1e-9)
    assert not r.passed
    assert set(r.to_dict()) == {"name", "s", "lhs", "rhs", "abs_diff", "tolerance", "passed"}


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(1e-12, 1.0))
def test_report_invariant(lhs, rhs, tol):
    r = IdentityReport.build("p", 0.0, lhs, rhs, tol)
    assert r.passed == (r.abs_diff <= r.tolerance)


@pytest.mark.parametrize("s", [10.0, 0.0, -6.0])
def test_eq3(s):
    r = check_eq3(s)
    assert r.passed, r
    if s == 10.0:
        assert abs(r.lhs - 1) < 1e-10 and r.abs_diff < 1e-10


@pytest.mark.parametrize("s", [10.0, 4.0, 0.0, -3.0, -8.0])
def test_lemma1(s):
    r = check_lemma1(s)
    assert r.passed, r
    r2 = check_lemma1(s, power=2)
    assert r2.passed, r2
    with pytest.raises(ParameterError):
        check_lemma1(s, power=3)


def test_eq10_examples():
    assert check_eq10(0.0, ZERO).abs_diff == 0.0
    assert check_eq10(0.0, EXP).passed
    assert check_eq10(-3.0, GAUSS).passed


@pytest.mark.parametrize("s", [10.0, 0.0, -4.0])
def test_lemma2_examples(s):
    r = check_lemma2(s, EXP, 1e-4)
    assert r.passed, r
    if s == 10.0:
        assert abs(r.lhs) < 1e-8


@pytest.mark.parametrize("s", [10.0, 0.0, -5.0])
def test_eqfin_examples(s):
    reports = check_eqfin(s, 1e-4)
    assert [r.name for r in reports] == ["eq6", "eq7", "eqfin"]
    assert all(r.passed for r in reports), reports


def test_step_range():
    with pytest.raises(ParameterError):
        check_lemma2(0.0, EXP, 1e-2)
    with pytest.raises(ParameterError):
        check_eqfin(0.0, 1e-7)


def test_lemma2_second_order_in_h():
    # at s = -6 the difference quotient error dominates; it must shrink as h^2
    d1 = check_lemma2(-6.0, EXP, 4e-4).abs_diff
    d2 = check_lemma2(-6.0, EXP, 2e-4).abs_diff
    assert d1 > 1e-6 and 3.0 <= d1 / d2 <= 5.0


def test_eqfin_second_order_in_h():
    d1 = check_eqfin(-6.0, 1e-3)[1].abs_diff
    d2 = check_eqfin(-6.0, 5e-4)[1].abs_diff
    assert 3.0 <= d1 / d2 <= 5.0


@pytest.mark.parametrize("s", [10.0, 0.0, -10.0])
def test_norm_bound(s):
    r = check_norm_bound(s)
    assert r.passed and 0 <= r.lhs < 1
    if s == 10.0:
        assert r.lhs < 1e-8


def test_norm_closest_to_one_at_left_end():
    norms = [check_norm_bound(s).lhs for s in range(-10, 7, 2)]
    assert norms[0] == max(norms)


def test_fault_is_detected():
    r = check_eq3(0.0, fault=1e-3)
    assert not r.passed
    assert not check_eq10(0.0, EXP, fault=1e-3).passed


def test_suite_selection_and_json():
    reports = run_suite(grid=(0.0,), checks=["eq3", "norm"])
    assert [r.name for r in reports] == ["eq3", "norm_bound"]
    data = json.loads(reports_to_json(reports))
    assert data[0]["name"] == "eq3" and data[0]["passed"] is True
    assert set(data[0]) == {"name", "s", "lhs", "rhs", "abs_diff", "tolerance", "passed"}
    with pytest.raises(ParameterError):
        run_suite(checks=["nope"])


def test_suite_manifest_covers_eq4():
    assert SUITE_MANIFEST["eq4"] == "covered-by-eq3"


def test_custom_test_function():
    phi = TestFunction("poly-exp", lambda x: (1 + x) * np.exp(-x), lambda x: -x * np.exp(-x))
    assert check_eq10(-1.0, phi).passed
    assert check_lemma2(-1.0, phi).passed
