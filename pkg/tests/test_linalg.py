import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from singleproxy.errors import DimensionError, NotPSDError, SingularMatrixError
from singleproxy.linalg import hadamard, solve_psd, sqrt_psd

from oracles import loop_gram


def random_gram(rng, n, sigma=1.0, dim=2):
    x = rng.normal(size=(n, dim))
    return loop_gram(x, x, sigma)


def test_hadamard_identity():
    np.testing.assert_array_equal(hadamard(np.eye(2), np.eye(2)), np.eye(2))


def test_hadamard_zero():
    out = hadamard([[1, 2], [2, 4]], np.zeros((2, 2)))
    np.testing.assert_array_equal(out, np.zeros((2, 2)))


def test_hadamard_matches_scalar_loop():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(5, 5)), rng.normal(size=(5, 5))
    out = hadamard(a, b)
    for i in range(5):
        for j in range(5):
            assert out[i, j] == a[i, j] * b[i, j]


def test_hadamard_shape_mismatch():
    with pytest.raises(DimensionError):
        hadamard(np.eye(2), np.eye(3))


# integer-valued entries keep every triple product exactly representable
finite = st.integers(-1000, 1000).map(float)


@given(arrays(float, (3, 4), elements=finite), arrays(float, (3, 4), elements=finite),
       arrays(float, (3, 4), elements=finite))
def test_hadamard_commutative_associative(a, b, c):
    np.testing.assert_array_equal(hadamard(a, b), hadamard(b, a))
    np.testing.assert_array_equal(hadamard(hadamard(a, b), c), hadamard(a, hadamard(b, c)))


def test_schur_product_is_psd():
    rng = np.random.default_rng(1)
    g = hadamard(random_gram(rng, 15), random_gram(rng, 15, 0.5))
    ev = np.linalg.eigvalsh(g)
    assert ev[0] >= -1e-10 * ev[-1]


def test_solve_identity():
    b = np.array([1.0, -2.0, 3.0])
    np.testing.assert_allclose(solve_psd(np.eye(3), 0.0, b), b)


def test_solve_diagonal_with_ridge():
    np.testing.assert_allclose(solve_psd(np.diag([1.0, 3.0]), 1.0, [1.0, 1.0]), [0.5, 0.25])


def test_solve_residual_on_gram():
    rng = np.random.default_rng(2)
    k = random_gram(rng, 10)
    rhs = rng.normal(size=(10, 3))
    x = solve_psd(k, 1e-3, rhs)
    resid = np.linalg.norm((k + 1e-3 * np.eye(10)) @ x - rhs)
    assert resid <= 1e-8 * (np.linalg.norm(k, 2) + 1e-3) * np.linalg.norm(x)


def test_solve_recovers_identity():
    rng = np.random.default_rng(3)
    k = random_gram(rng, 12)
    c = 0.1
    x = solve_psd(k, c, k + c * np.eye(12))
    assert np.linalg.norm(x - np.eye(12)) <= 1e-8 * np.linalg.norm(np.eye(12))


def test_solve_keeps_vector_shape():
    assert solve_psd(np.eye(4), 0.5, np.ones(4)).shape == (4,)


def test_solve_jitter_rescues_singular_gram():
    x = solve_psd(np.ones((3, 3)), 0.0, np.ones(3))
    assert np.all(np.isfinite(x))


def test_solve_indefinite_reports_last_jitter():
    with pytest.raises(SingularMatrixError) as info:
        solve_psd(np.diag([1.0, -1.0]), 0.0, np.ones(2))
    # trace is zero, so the jitter scale falls back to 1
    assert info.value.jitter == pytest.approx(1e-6)


def test_solve_rejects_negative_ridge():
    with pytest.raises(ValueError):
        solve_psd(np.eye(2), -1.0, np.ones(2))


def test_solve_rhs_rows_checked():
    with pytest.raises(DimensionError):
        solve_psd(np.eye(3), 0.0, np.ones(2))


def test_sqrt_identity():
    np.testing.assert_allclose(sqrt_psd(np.eye(4)), np.eye(4), atol=1e-15)


def test_sqrt_diagonal():
    np.testing.assert_allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


def test_sqrt_reconstructs_gram():
    rng = np.random.default_rng(4)
    g = random_gram(rng, 20)
    s = sqrt_psd(g)
    np.testing.assert_array_equal(s, s.T)
    assert np.linalg.norm(s @ s - g) <= 1e-8 * np.linalg.norm(g)
    assert np.linalg.eigvalsh(s)[0] >= -1e-10 * np.linalg.norm(s, 2)


def test_sqrt_clips_roundoff_negatives():
    rng = np.random.default_rng(5)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    g = (q * [1.0, 0.5, -1e-13]) @ q.T
    s = sqrt_psd(0.5 * (g + g.T))
    assert np.all(np.isfinite(s))


def test_sqrt_rejects_indefinite():
    with pytest.raises(NotPSDError) as info:
        sqrt_psd(np.diag([1.0, -1.0]))
    assert info.value.eigenvalue == pytest.approx(-1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 25), st.floats(0.2, 3.0), st.integers(0, 2**32 - 1))
def test_gram_eigenvalues_nonnegative(n, sigma, seed):
    g = random_gram(np.random.default_rng(seed), n, sigma)
    ev = np.linalg.eigvalsh(g)
    assert ev[0] >= -1e-10 * ev[-1]
