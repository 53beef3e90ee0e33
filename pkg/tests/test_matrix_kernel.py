import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from sepcert import samplers
from sepcert.errors import (
    DimensionMismatch,
    EmptyList,
    NonFiniteInput,
    NonHermitianInput,
    NotPositiveDefinite,
)
from sepcert.fixtures import I2, X, Y, Z, x_correlated_state
from sepcert.matrix_kernel import (
    anti_hermitian_part,
    as_hermitian,
    congruence_normalizer,
    frob_scale,
    herm_eig,
    hermitian_part,
    is_psd,
    kernel_basis,
    lin_independent,
    matrix_rank,
    range_complement,
    real_independent,
    real_lstsq,
    svd,
    vec,
)


def test_hermitian_and_anti_hermitian_parts_recombine(rng):
    m = samplers.ginibre(rng, 4)
    h, k = hermitian_part(m), anti_hermitian_part(m)
    assert np.allclose(h, h.conj().T)
    assert np.allclose(k, k.conj().T)
    assert np.allclose(h + 1j * k, m)


def test_frob_scale_floor_is_one():
    assert frob_scale(np.zeros((3, 3))) == 1.0
    assert frob_scale(3 * np.eye(4)) == pytest.approx(6.0)


def test_vec_is_row_major():
    m = np.arange(4).reshape(2, 2)
    assert vec(m).tolist() == [0, 1, 2, 3]


def test_as_hermitian_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        as_hermitian(np.array([[0, 1], [0, 0]]))


def test_as_hermitian_rejects_nan():
    with pytest.raises(NonFiniteInput):
        as_hermitian(np.array([[np.nan, 0], [0, 1]]))


def test_herm_eig_ascending_and_orthonormal(rng):
    h = samplers.random_hermitian(rng, 5)
    eig = herm_eig(h)
    assert np.all(np.diff(eig.eigenvalues) >= 0)
    v = eig.eigenvectors
    assert np.allclose(v.conj().T @ v, np.eye(5), atol=1e-12)
    assert np.allclose(v @ np.diag(eig.eigenvalues) @ v.conj().T, h, atol=1e-12)


def test_is_psd_on_projectors_and_pauli():
    assert is_psd((I2 + X) / 2).ok
    check = is_psd(Z)
    assert not check.ok
    assert check.min_eigenvalue == pytest.approx(-1.0)


def test_is_psd_tolerates_roundoff():
    assert is_psd(np.diag([1.0, -1e-13])).ok
    assert not is_psd(np.diag([1.0, -1e-3])).ok


def test_congruence_normalizer_gives_identity(rng):
    h = samplers.random_pd(rng, 4)
    p = congruence_normalizer(h)
    assert np.allclose(p.conj().T @ h @ p, np.eye(4), atol=1e-10)


def test_congruence_normalizer_rejects_singular():
    with pytest.raises(NotPositiveDefinite):
        congruence_normalizer(np.diag([1.0, 0.0]))


def test_kernel_basis_finds_null_vectors():
    kern = kernel_basis(np.diag([2.0, 0.0, 1.0]))
    assert len(kern) == 1
    assert abs(abs(kern[0][1]) - 1.0) < 1e-12


def test_svd_keeps_real_input_real(rng):
    m = rng.normal(size=(4, 3))
    u, s, v = svd(m)
    assert not np.iscomplexobj(u)
    assert np.allclose(u @ np.diag(s) @ v.T, m)


def test_matrix_rank_of_outer_products(rng):
    a, b = rng.normal(size=(5, 2)), rng.normal(size=(2, 6))
    assert matrix_rank(a @ b) == 2


def test_lin_independent_paulis():
    ok, rank = lin_independent([I2, X, Y, Z])
    assert ok and rank == 4
    ok, rank = lin_independent([I2, 2 * I2])
    assert not ok and rank == 1


def test_lin_independent_errors():
    with pytest.raises(EmptyList):
        lin_independent([])
    with pytest.raises(DimensionMismatch):
        lin_independent([np.eye(2), np.eye(3)])


def test_real_independence_differs_from_complex():
    # X and iX are complex-dependent but real-independent
    assert not lin_independent([X, 1j * X])[0]
    assert real_independent([X, 1j * X])[0]


def test_range_complement_is_orthogonal():
    e = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    q = range_complement([e], 3)
    assert q.shape == (3, 2)
    assert np.allclose(e.conj() @ q, 0, atol=1e-12)
    assert np.allclose(q.conj().T @ q, np.eye(2), atol=1e-12)


def test_real_lstsq_recovers_coefficients():
    x, resid = real_lstsq([I2, X], 0.3 * I2 - 2.0 * X)
    assert np.allclose(x, [0.3, -2.0])
    assert resid < 1e-12


@hyp_settings(deadline=None, max_examples=30)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 6))
def test_random_psd_passes_is_psd(seed, d):
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(1, d + 1))
    m = samplers.random_psd(rng, d, rank)
    assert is_psd(m).ok
    assert matrix_rank(m) == rank


def test_is_psd_on_x_correlated_state():
    check = is_psd(x_correlated_state())
    assert check.ok
    assert abs(check.min_eigenvalue) <= 1e-12


@hyp_settings(deadline=None, max_examples=50)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 6), extra=st.floats(0.0, 10.0))
def test_is_psd_after_shifting_past_lambda_min(seed, d, extra):
    h = samplers.random_hermitian(np.random.default_rng(seed), d)
    lam_min = float(np.linalg.eigvalsh(h)[0])
    assert is_psd(h + (extra - lam_min) * np.eye(d)).ok


def test_congruence_normalizer_of_diagonal():
    p = congruence_normalizer(np.diag([4.0, 1.0]))
    assert np.allclose(p, np.diag([0.5, 1.0]), atol=1e-12)


@hyp_settings(deadline=None, max_examples=100)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 8))
def test_congruence_normalizer_on_random_pd(seed, d):
    h = samplers.random_pd(np.random.default_rng(seed), d)
    p = congruence_normalizer(h)
    assert np.allclose(p.conj().T @ h @ p, np.eye(d), atol=1e-8)


def test_kernel_basis_near_degenerate_diagonal():
    eps = 1e-3
    kern = kernel_basis(np.diag([1 - eps, 1 + eps, 0.0]))
    assert len(kern) == 1
    assert np.allclose(np.abs(kern[0]), [0.0, 0.0, 1.0], atol=1e-12)


@hyp_settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6), data=st.data())
def test_kernel_basis_finds_planted_kernel(seed, n, data):
    k = data.draw(st.integers(0, n))
    rng = np.random.default_rng(seed)
    u = samplers.random_unitary(rng, n)
    lam = np.concatenate([rng.uniform(0.5, 2.0, n - k) * rng.choice([-1.0, 1.0], n - k), np.zeros(k)])
    h = hermitian_part((u * lam) @ u.conj().T)
    kern = kernel_basis(h)
    assert len(kern) == k
    assert len(kern) + matrix_rank(h) == n
    for x in kern:
        assert np.linalg.norm(h @ x) <= 1e-10


@hyp_settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), rows=st.integers(1, 6), cols=st.integers(1, 6))
def test_singular_values_are_unitarily_invariant(seed, rows, cols):
    rng = np.random.default_rng(seed)
    m = samplers.ginibre(rng, rows, cols)
    left, right = samplers.random_unitary(rng, rows), samplers.random_unitary(rng, cols)
    _, s, _ = svd(m)
    _, s_rot, _ = svd(left @ m @ right)
    assert np.allclose(s, s_rot, atol=1e-10)
