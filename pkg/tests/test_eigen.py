import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twdet.eigen import largest_symmetric_eigenvalue, largest_tridiagonal_eigenvalue, sturm_count, tridiagonalize
from twdet.errors import ParameterError


def power_iteration_top(a, iters=40_000):
    """Top eigenvalue by power iteration on A + sigma I, sigma making it positive definite."""
    sigma = np.linalg.norm(a, "fro")
    b = a + sigma * np.eye(a.shape[0])
    v = np.ones(a.shape[0]) / np.sqrt(a.shape[0])
    for _ in range(iters):
        w = b @ v
        v = w / np.linalg.norm(w)
    return float(v @ a @ v)


def random_symmetric(n, seed):
    g = np.random.default_rng(seed).standard_normal((n, n))
    return (g + g.T) / 2


def test_identity():
    assert largest_symmetric_eigenvalue(np.eye(7)) == pytest.approx(1.0, abs=1e-14)


def test_diagonal():
    assert largest_symmetric_eigenvalue(np.diag([1.0, 2.0, 3.0])) == pytest.approx(3.0, abs=1e-14)
    assert largest_symmetric_eigenvalue(np.diag([3.0, -5.0, 1.0])) == pytest.approx(3.0, abs=1e-14)


def test_one_by_one():
    assert largest_symmetric_eigenvalue([[-2.5]]) == -2.5


def test_random_50_vs_power_iteration():
    a = random_symmetric(50, 7)
    ours = largest_symmetric_eigenvalue(a)
    assert abs(ours - power_iteration_top(a)) < 1e-9
    assert abs(ours - np.linalg.eigvalsh(a)[-1]) < 1e-9


def test_rejects_asymmetric():
    a = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ParameterError):
        largest_symmetric_eigenvalue(a)
    with pytest.raises(ParameterError):
        largest_symmetric_eigenvalue(np.ones((2, 3)))
    with pytest.raises(ParameterError):
        largest_symmetric_eigenvalue([[np.nan]])


def test_tridiagonal_similarity():
    a = random_symmetric(20, 3)
    d, e = tridiagonalize(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(a), atol=1e-12)


def test_sturm_count_brute_force():
    a = random_symmetric(15, 4)
    d, e = tridiagonalize(a)
    ev = np.linalg.eigvalsh(a)
    for x in np.linspace(ev[0] - 1, ev[-1] + 1, 31):
        assert sturm_count(d, e, x) == int(np.sum(ev < x))


def test_tridiagonal_input_checked():
    with pytest.raises(ParameterError):
        largest_tridiagonal_eigenvalue([1.0, 2.0], [1.0, 1.0])


@settings(max_examples=40)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_matches_eigvalsh(n, seed, scale):
    a = scale * random_symmetric(n, seed)
    ref = np.linalg.eigvalsh(a)[-1]
    assert abs(largest_symmetric_eigenvalue(a) - ref) <= 1e-12 * scale * max(1.0, n)
