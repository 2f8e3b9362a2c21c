import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_unitary
from xycrit.states import IsotropicParams, isotropic, random_density_matrix
from xycrit.tensor_core import (
    BipartiteShape,
    DimensionError,
    NotHermitianError,
    hermitian_spectrum,
    kron,
    partial_trace,
    partial_transpose,
    realign,
    singular_values,
    trace_norm,
    vectorize,
)


def rand_c(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


dims = st.integers(min_value=2, max_value=4)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_shape_validation():
    with pytest.raises(DimensionError):
        BipartiteShape(1, 3)
    with pytest.raises(TypeError):
        BipartiteShape(2.5, 3)
    assert BipartiteShape(4, 2).ordered() == BipartiteShape(2, 4)
    with pytest.raises(DimensionError):
        BipartiteShape(4, 2).require_ordered()


def test_kron_examples(rng):
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    np.testing.assert_array_equal(kron(np.diag([1, 2]), np.diag([1, 0])), np.diag([1, 0, 2, 0]))
    a, b = rand_c(rng, 2, 2), rand_c(rng, 2, 2)
    v, w = rand_c(rng, 2), rand_c(rng, 2)
    # (A (x) B)(v (x) w) against blockwise direct multiplication
    av, bw = a @ v, b @ w
    expected = np.array([av[i] * bw[k] for i in range(2) for k in range(2)])
    np.testing.assert_allclose(kron(a, b) @ np.kron(v, w), expected, atol=1e-12)


def test_vectorize(rng):
    e01 = np.zeros((2, 2))
    e01[0, 1] = 1
    np.testing.assert_array_equal(vectorize(e01), [0, 1, 0, 0])
    for d in (2, 3, 5):
        v = vectorize(np.eye(d))
        assert np.vdot(v, v) == pytest.approx(d)
    a, b = rand_c(rng, 3, 3), rand_c(rng, 3, 3)
    assert np.vdot(vectorize(a), vectorize(b)) == pytest.approx(np.trace(a.conj().T @ b), abs=1e-12)


def test_realign_on_products(rng):
    shape = BipartiteShape(2, 2)
    a = np.array([[0, 1], [0, 0]], dtype=complex)
    b = np.array([[0, 0], [1, 0]], dtype=complex)
    expected = np.outer(vectorize(a), vectorize(b.conj()).conj())
    np.testing.assert_array_equal(realign(np.kron(a, b), shape), expected)

    shape = BipartiteShape(2, 3)
    a, b = rand_c(rng, 2, 2), rand_c(rng, 3, 3)
    expected = np.outer(vectorize(a), vectorize(b.conj()).conj())
    np.testing.assert_allclose(realign(np.kron(a, b), shape), expected, atol=1e-12)


def test_realign_identity_is_rank_one():
    for d in (2, 3, 4):
        s = singular_values(realign(np.eye(d * d) / d**2, BipartiteShape(d, d)))
        np.testing.assert_allclose(s[0], 1 / d, atol=1e-14)
        assert np.count_nonzero(s) == 1


def test_realign_saturates_ccnr_at_ppt_point():
    rho = isotropic(IsotropicParams(BipartiteShape(3, 3), 0.25))
    assert trace_norm(realign(rho.matrix, rho.shape)) == pytest.approx(1.0, abs=1e-12)


def test_realign_dimension_mismatch():
    with pytest.raises(DimensionError):
        realign(np.eye(5), BipartiteShape(2, 3))


@settings(max_examples=50, deadline=None)
@given(d1=dims, d2=dims, seed=seeds)
def test_realign_is_a_permutation(d1, d2, seed):
    rng = np.random.default_rng(seed)
    shape = BipartiteShape(d1, d2)
    m = rand_c(rng, shape.dim, shape.dim)
    r = realign(m, shape)
    assert r.shape == (d1 * d1, d2 * d2)
    np.testing.assert_allclose(np.linalg.norm(r), np.linalg.norm(m), rtol=1e-13)
    np.testing.assert_array_equal(np.sort_complex(r.ravel()), np.sort_complex(m.ravel()))


def test_partial_transpose_products(rng):
    shape = BipartiteShape(2, 3)
    a, b = rand_c(rng, 2, 2), rand_c(rng, 3, 3)
    np.testing.assert_allclose(partial_transpose(np.kron(a, b), shape, "second"), np.kron(a, b.T), atol=1e-14)
    np.testing.assert_allclose(partial_transpose(np.kron(a, b), shape, "first"), np.kron(a.T, b), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(d1=dims, d2=dims, seed=seeds, factor=st.sampled_from(["first", "second"]))
def test_partial_transpose_involution_and_trace(d1, d2, seed, factor):
    rng = np.random.default_rng(seed)
    shape = BipartiteShape(d1, d2)
    m = rand_c(rng, shape.dim, shape.dim)
    pt = partial_transpose(m, shape, factor)
    np.testing.assert_array_equal(partial_transpose(pt, shape, factor), m)
    assert np.trace(pt) == pytest.approx(np.trace(m))


def test_partial_transpose_detects_bell_mixture():
    rho = isotropic(IsotropicParams(BipartiteShape(2, 2), 0.5))
    assert hermitian_spectrum(partial_transpose(rho.matrix, rho.shape))[0] < 0


def test_partial_trace_product_rule(rng):
    shape = BipartiteShape(2, 3)
    ra = random_density_matrix(2, rng)
    rb = rand_c(rng, 3, 3)
    np.testing.assert_allclose(partial_trace(np.kron(ra, rb), shape, "first"), ra * np.trace(rb), atol=1e-12)
    np.testing.assert_allclose(partial_trace(np.kron(ra, rb), shape, "second"), rb * np.trace(ra), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(d1=dims, d2=dims, seed=seeds)
def test_partial_trace_preserves_trace(d1, d2, seed):
    rng = np.random.default_rng(seed)
    shape = BipartiteShape(d1, d2)
    m = rand_c(rng, shape.dim, shape.dim)
    for keep in ("first", "second"):
        assert np.trace(partial_trace(m, shape, keep)) == pytest.approx(np.trace(m), abs=1e-10)


def test_trace_norm_examples(rng):
    assert trace_norm(np.eye(4)) == pytest.approx(4)
    assert trace_norm(np.diag([1, -2])) == pytest.approx(3)
    assert trace_norm(random_unitary(5, rng)) == pytest.approx(5, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 6), seed=seeds)
def test_trace_norm_dominates_trace(n, seed):
    m = rand_c(np.random.default_rng(seed), n, n)
    assert trace_norm(m) >= abs(np.trace(m)) - 1e-12


def test_singular_value_cutoff():
    s = singular_values(np.diag([1.0, 1e-14, 0.5]))
    np.testing.assert_array_equal(s, [1.0, 0.5, 0.0])


def test_hermitian_spectrum():
    np.testing.assert_allclose(hermitian_spectrum(np.eye(3)), [1, 1, 1])
    np.testing.assert_allclose(hermitian_spectrum(np.diag([3, -1])), [-1, 3])
    with pytest.raises(NotHermitianError):
        hermitian_spectrum(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(d=st.integers(2, 8), seed=seeds)
def test_psd_spectrum_nonnegative(d, seed):
    rho = random_density_matrix(d, np.random.default_rng(seed))
    rho = (rho + rho.conj().T) / 2
    assert hermitian_spectrum(rho)[0] >= -1e-10


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        trace_norm(np.array([[np.nan, 0], [0, 1]]))
