import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from sepcert import samplers
from sepcert.config import settings
from sepcert.errors import DependentFactors, DimensionLimit, DimensionMismatch, NotHermitianSum
from sepcert.fixtures import I2, X, Y, ghz_x_mpdo, ghz_x_state, ppt_rank3_state, x_correlated_state
from sepcert.matrix_kernel import is_hermitian, vec
from sepcert.models import MPDOCores, PairDecomposition
from sepcert.schmidt.decompose import operator_schmidt, osr, osr_across_cuts, realign, reconstruct, unrealign
from sepcert.schmidt.hermitize import hermitize_bipartite, hermitize_mpdo
from sepcert.schmidt.mpdo import (
    compress_hermitian_bonds,
    cores_hermitian,
    dense_from_mpdo,
    left_environments,
    mpdo_from_dense,
    product_mpdo,
)
from sepcert.utils.common import kron_all


def _residual(a, b):
    return float(np.linalg.norm(a - b)) / max(1.0, float(np.linalg.norm(a)))


# ── operator Schmidt ──────────────────────────────────────────────────────────
def test_realign_maps_products_to_outer_products(rng):
    a, b = samplers.ginibre(rng, 2), samplers.ginibre(rng, 3)
    r = realign(np.kron(a, b), 2, 3)
    assert np.allclose(r, np.outer(vec(a), vec(b)))
    assert np.allclose(unrealign(r, 2, 3), np.kron(a, b))


def test_x_correlated_state_has_rank_two():
    dec = operator_schmidt(x_correlated_state(), 2, 2)
    assert dec.p == 2
    assert _residual(x_correlated_state(), reconstruct(dec)) < 1e-12


def test_product_state_has_rank_one(rng):
    rho = np.kron(samplers.random_psd(rng, 2), samplers.random_psd(rng, 3))
    assert osr(rho, 2, 3) == 1


def test_random_rank_three_state():
    rng = np.random.default_rng(3)
    assert osr(samplers.random_osr_k_state(rng, 3, 3, 3), 3, 3) == 3
    assert osr(ppt_rank3_state(), 3, 2) == 3


def test_factors_are_hilbert_schmidt_orthogonal(rng):
    dec = operator_schmidt(samplers.random_sep_state(rng, 3, 3, 3), 3, 3)
    gram = np.array([[np.vdot(a, b) for b in dec.left] for a in dec.left])
    assert np.allclose(gram - np.diag(np.diag(gram)), 0, atol=1e-10)


def test_zero_operator_keeps_one_pair():
    dec = operator_schmidt(np.zeros((4, 4)), 2, 2)
    assert dec.p == 1 and not dec.independent


def test_wrong_dimensions():
    with pytest.raises(DimensionMismatch):
        operator_schmidt(np.eye(6), 2, 2)


def test_osr_across_cuts_of_ghz():
    assert osr_across_cuts(ghz_x_state(), [2, 2, 2]) == [2, 2]


@hyp_settings(deadline=None, max_examples=25)
@given(seed=st.integers(0, 2**32 - 1), d1=st.integers(2, 4), d2=st.integers(2, 4), k=st.integers(1, 4))
def test_osr_matches_construction(seed, d1, d2, k):
    rng = np.random.default_rng(seed)
    rho = samplers.random_sep_state(rng, d1, d2, k)
    dec = operator_schmidt(rho, d1, d2)
    assert dec.p == min(k, d1 * d1, d2 * d2)
    assert _residual(rho, reconstruct(dec)) < 1e-10


# ── MPDO conversions ──────────────────────────────────────────────────────────
def test_dense_mpdo_round_trip(rng):
    chain = samplers.random_separable_chain(rng, [2, 3, 2])
    rho = dense_from_mpdo(chain)
    back = mpdo_from_dense(rho, [2, 3, 2])
    assert back.bond_dims == [2, 2]
    assert _residual(rho, dense_from_mpdo(back)) < 1e-10


def test_dense_from_ghz_mpdo():
    assert np.allclose(dense_from_mpdo(ghz_x_mpdo()), ghz_x_state())


def test_product_mpdo_contracts_to_kron(rng):
    locals_ = [samplers.random_psd(rng, d) for d in (2, 3, 2)]
    assert np.allclose(dense_from_mpdo(product_mpdo(locals_)), kron_all(locals_))


def test_left_environments_shape():
    env = left_environments(ghz_x_mpdo().cores[:2])
    assert env.shape == (2, 4, 4)
    assert np.allclose(env[0], np.kron(I2, I2))
    assert np.allclose(env[1], np.kron(X, X))


def test_dense_limit(monkeypatch):
    monkeypatch.setattr(settings, "SEPCERT_DENSE_LIMIT", 4)
    with pytest.raises(DimensionLimit):
        dense_from_mpdo(ghz_x_mpdo())


def test_compress_hermitian_bonds_removes_padding(rng):
    chain = samplers.random_separable_chain(rng, [2, 2, 2])
    cores = [c.copy() for c in chain.cores]
    # duplicate bond 1 with a zero partner
    cores[0] = np.concatenate([cores[0], np.zeros_like(cores[0])], axis=1)
    cores[1] = np.concatenate([cores[1], cores[1]], axis=0)
    padded = MPDOCores(cores, hermitian=True)
    assert padded.bond_dims == [4, 2]
    out = compress_hermitian_bonds(padded)
    assert out.bond_dims == [2, 2]
    assert cores_hermitian(out)
    assert _residual(dense_from_mpdo(chain), dense_from_mpdo(out)) < 1e-10


# ── Hermitian re-expression ───────────────────────────────────────────────────
@pytest.mark.slow
def test_hermitize_bipartite_keeps_term_count():
    rng = np.random.default_rng(11)
    for _ in range(200):
        d1, d2 = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        k = int(rng.integers(1, 5))
        rho = samplers.random_sep_state(rng, d1, d2, k)
        dec = operator_schmidt(rho, d1, d2)
        herm = hermitize_bipartite(dec)
        assert herm.p == dec.p
        assert all(is_hermitian(m) for m in herm.left + herm.right)
        assert _residual(rho, reconstruct(herm)) < 1e-9


def test_hermitize_bipartite_rejects_non_hermitian(rng):
    a, b = samplers.ginibre(rng, 2), samplers.ginibre(rng, 2)
    dec = PairDecomposition(2, 2, [a, I2], [b, X])
    with pytest.raises(NotHermitianSum):
        hermitize_bipartite(dec)


def test_hermitize_bipartite_rejects_dependent_families():
    dec = PairDecomposition(2, 2, [I2, 2 * I2], [X, X])
    with pytest.raises(DependentFactors):
        hermitize_bipartite(dec)


def test_hermitize_mpdo_gauge_sweep_keeps_bonds(rng):
    for n in (3, 4, 5):
        chain = samplers.random_separable_chain(rng, [2] * n)
        scrambled = samplers.gauge_scramble(rng, chain, complex_gauge=True)
        assert not cores_hermitian(scrambled)
        out = hermitize_mpdo(scrambled)
        assert out.bond_dims == chain.bond_dims
        assert cores_hermitian(out)
        assert _residual(dense_from_mpdo(chain), dense_from_mpdo(out)) < 1e-9


def test_hermitize_mpdo_dependent_family_bound(rng):
    for _ in range(10):
        chain = samplers.gauge_scramble(rng, samplers.dependent_family_chain(rng), complex_gauge=True)
        out = hermitize_mpdo(chain)
        n, bond = chain.n, max(chain.bond_dims)
        assert max(out.bond_dims) <= 2 ** (n - 1) * bond
        assert cores_hermitian(out)
        assert _residual(dense_from_mpdo(chain), dense_from_mpdo(out)) < 1e-9


def test_hermitize_mpdo_from_dense_ghz():
    out = hermitize_mpdo(mpdo_from_dense(ghz_x_state(), [2, 2, 2]))
    assert out.bond_dims == [2, 2]
    assert np.allclose(dense_from_mpdo(out), ghz_x_state(), atol=1e-10)


def test_hermitize_bipartite_on_off_diagonal_factors():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    rho = np.kron(a, a.T) + np.kron(a.T, a)
    herm = hermitize_bipartite(PairDecomposition(2, 2, [a, a.T], [a.T, a]))
    assert herm.p == 2
    assert all(is_hermitian(m) for m in herm.left + herm.right)
    assert _residual(rho, reconstruct(herm)) < 1e-12
    # ½(X⊗X + Y⊗Y) is one valid output
    assert np.allclose(rho, (np.kron(X, X) + np.kron(Y, Y)) / 2)
