import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from conimhd.characteristics import build_quasilinear
from conimhd.errors import ConvergenceError, SingularPencilError
from conimhd.geometry import flat_metric
from conimhd.state import IdealGas, SurfaceState
from conimhd.verify.eigen import balance, dense_eigen, generalized_eigen, hessenberg

METHODS = ("lapack", "qr")


def _sorted(z):
    z = np.asarray(z)
    return z[np.lexsort((np.round(z.imag, 12), np.round(z.real, 12)))]


@pytest.mark.parametrize("method", METHODS)
def test_identity(method):
    np.testing.assert_allclose(dense_eigen(np.eye(8), method).values, np.ones(8), atol=1e-14)


@pytest.mark.parametrize("method", METHODS)
def test_rotation(method):
    vals = _sorted(dense_eigen([[0.0, -1.0], [1.0, 0.0]], method).values)
    np.testing.assert_allclose(vals, [-1j, 1j], atol=1e-14)


@pytest.mark.parametrize("method", METHODS)
def test_companion_roots_of_unity(method):
    # companion matrix of x^4 - 1
    C = np.zeros((4, 4))
    C[1:, :3] = np.eye(3)
    C[0, 3] = 1.0
    vals = _sorted(dense_eigen(C, method).values)
    np.testing.assert_allclose(vals, _sorted([-1, -1j, 1j, 1]), atol=1e-13)


def test_hessenberg_is_similar():
    A = np.random.default_rng(1).normal(size=(7, 7))
    H = hessenberg(A)
    assert np.allclose(np.tril(H, -2), 0.0)
    np.testing.assert_allclose(np.trace(H), np.trace(A), atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(H), np.linalg.norm(A), rtol=1e-12)


def test_balance_preserves_spectrum():
    A = np.random.default_rng(2).normal(size=(6, 6)) * np.logspace(-3, 3, 6)
    np.testing.assert_allclose(_sorted(np.linalg.eigvals(balance(A))), _sorted(np.linalg.eigvals(A)),
                               rtol=1e-10, atol=1e-10)


@given(arrays(float, (8, 8), elements=st.floats(-3, 3)))
def test_qr_agrees_with_lapack(A):
    a = dense_eigen(A, "qr").values
    b = dense_eigen(A, "lapack").values
    # defective clusters move by eps**(1/k), so compare backward errors
    # and the trace rather than the eigenvalues themselves
    scale = max(1.0, np.linalg.norm(A))
    for lam in a:
        s = np.linalg.svd(A - lam * np.eye(8), compute_uv=False)
        assert s[-1] <= 1e-9 * scale
    assert abs(a.sum() - b.sum()) <= 1e-9 * scale


@given(arrays(float, (6, 6), elements=st.floats(-2, 2)))
def test_characteristic_polynomial_residual(A):
    # det(A - lam I) relative to the product of singular values ~ 0
    for lam in dense_eigen(A, "qr").values:
        s = np.linalg.svd(A - lam * np.eye(6), compute_uv=False)
        assert s[-1] <= 1e-9 * max(1.0, s[0])


@given(arrays(float, (8, 8), elements=st.floats(-2, 2)))
def test_conjugate_pairs(A):
    vals = dense_eigen(A, "qr").values
    cplx = vals[np.abs(vals.imag) > 1e-12]
    for z in cplx:
        assert np.min(np.abs(cplx - np.conj(z))) <= 1e-10 * max(1.0, abs(z))


def test_dense_rejects_bad_input():
    with pytest.raises(ValueError):
        dense_eigen(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        dense_eigen(np.eye(17))
    with pytest.raises(ConvergenceError):
        dense_eigen(np.array([[np.nan, 0], [0, 1.0]]))


def test_generalized_diagonal():
    res = generalized_eigen(np.diag([2.0, 3.0]), np.eye(2))
    np.testing.assert_allclose(np.sort(res.values.real), [2.0, 3.0])
    assert res.n_infinite == 0


def test_generalized_infinite():
    res = generalized_eigen(np.eye(2), np.diag([1.0, 0.0]))
    assert res.n_infinite == 1
    np.testing.assert_allclose(res.finite, [1.0])


def test_generalized_singular_pencil():
    A = np.diag([1.0, 0.0])
    B = np.diag([1.0, 0.0])
    with pytest.raises(SingularPencilError):
        generalized_eigen(A, B)


def test_generalized_matches_inverse_product(rng):
    for _ in range(50):
        A = rng.normal(size=(8, 8))
        B = rng.normal(size=(8, 8)) + 4 * np.eye(8)
        if np.linalg.cond(B) > 1e6:
            continue
        a = _sorted(generalized_eigen(A, B).values)
        b = _sorted(dense_eigen(np.linalg.solve(B, A)).values)
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9)


def test_shifted_path_matches_direct():
    A = np.random.default_rng(3).normal(size=(5, 5))
    B = np.random.default_rng(4).normal(size=(5, 5))
    direct = _sorted(generalized_eigen(A, B).values)
    shifted = _sorted(generalized_eigen(A, B, cond_limit=0.0).values)
    np.testing.assert_allclose(shifted, direct, rtol=1e-9, atol=1e-9)


def test_degenerate_state_has_infinite_eigenvalue():
    s = SurfaceState(1.0, 0.0, 2.0, 0.1, 1.0, 0.0, 0.7, 0.3)
    q = build_quasilinear(s, flat_metric(), IdealGas(1.4))
    assert generalized_eigen(q.C2, q.C1).n_infinite >= 1
