import numpy as np
import pytest

from sepcert import samplers
from sepcert.applications.ppt import ppt_check
from sepcert.config import settings
from sepcert.errors import (
    DegenerateInput,
    DependentFactors,
    DependentRays,
    FactorsOutsideSpan,
    HNotPSD,
    NotHermitianCores,
    NotPSDInput,
    RankTooHigh,
)
from sepcert.fixtures import (
    I2,
    MINUS,
    PLUS,
    X,
    Z,
    ghz_x_mpdo,
    ghz_x_state,
    joint_kernel_pencil,
    max_entangled_state,
    ppt_rank3_state,
    x_correlated_state,
)
from sepcert.models import MPDOCores, PairDecomposition, SepCertificate
from sepcert.schmidt.decompose import operator_schmidt, osr
from sepcert.schmidt.hermitize import hermitize_mpdo
from sepcert.schmidt.mpdo import dense_from_mpdo, mpdo_from_dense
from sepcert.separator.bipartite import (
    certificate_terms,
    separate_bipartite,
    separate_pencil,
    solve_H,
    step1_hermitian_pencil,
)
from sepcert.separator.multipartite import separate_mpdo
from sepcert.separator.verify import verify_certificate
from sepcert.separator.witness import cmin_witness

CERT_TOL = 1e-8
DIMS = [(d1, d2) for d1 in range(2, 7) for d2 in range(2, 8)]


def _assert_valid(cert: SepCertificate, rho: np.ndarray) -> None:
    report = verify_certificate(cert, rho)
    assert report.passed, report.failures
    assert cert.residual <= CERT_TOL
    assert cert.min_factor_eig >= -CERT_TOL


# ── bipartite ─────────────────────────────────────────────────────────────────
def test_x_correlated_state_certificate():
    rho = x_correlated_state()
    cert = separate_bipartite(rho, 2, 2)
    assert cert.residual <= 1e-10
    terms = certificate_terms(cert)
    assert len(terms) == 2
    # unit-trace left factors, the projectors onto |+⟩ and |−⟩, each paired with itself
    for sigma, tau in terms:
        assert np.isclose(np.trace(sigma).real, 1.0)
        match = PLUS if np.allclose(sigma, PLUS, atol=1e-10) else MINUS
        assert np.allclose(sigma, match, atol=1e-10)
        assert np.allclose(tau, match, atol=1e-10)
    lefts = sorted(int(np.allclose(s, PLUS, atol=1e-10)) for s, _ in terms)
    assert lefts == [0, 1]


def test_product_state_gives_one_term(rng):
    rho = np.kron(samplers.random_psd(rng, 2), samplers.random_psd(rng, 3))
    cert = separate_bipartite(rho, 2, 3)
    assert cert.n_terms == 1
    assert cert.cone_metadata[0].case == "product"
    _assert_valid(cert, rho)


def test_joint_kernel_walkthrough():
    A, B, C, D = joint_kernel_pencil()
    cert = separate_pencil(A, B, C, D)
    assert cert.cone_metadata[0].case == "case2-split"
    rho = np.kron(A, C) + np.kron(B, D)
    _assert_valid(cert, rho)
    for _, tau in certificate_terms(cert):
        assert np.allclose(tau / np.trace(tau), I2 / 2)


def test_solve_h_on_x_correlated_pencil():
    r = 1 / np.sqrt(2)
    H1, H2 = solve_H(I2, X, [r, -r], [r, r])
    assert np.allclose(r * H1 + r * H2, I2)
    assert np.allclose(-r * H1 + r * H2, X)
    assert np.allclose(H1, np.sqrt(2) * MINUS)
    assert np.allclose(H2, np.sqrt(2) * PLUS)


def test_solve_h_errors():
    with pytest.raises(DependentRays):
        solve_H(I2, X, [1.0, 0.0], [2.0, 0.0])
    with pytest.raises(HNotPSD):
        # rays that do not bound S(I, X)
        solve_H(I2, X, [1.0, 0.0], [0.0, 1.0])


def test_step1_pencil_is_hermitian_and_reconstructs(rng):
    rho = samplers.random_sep2_state(rng, 3, 2)
    A, B, C, D = step1_hermitian_pencil(operator_schmidt(rho, 3, 2))
    for m in (A, B, C, D):
        assert np.allclose(m, m.conj().T)
    assert np.isclose(np.linalg.norm(A), 1.0) and np.isclose(np.linalg.norm(B), 1.0)
    assert np.allclose(np.kron(A, C) + np.kron(B, D), rho, atol=1e-10)


def test_step1_requires_two_pairs():
    with pytest.raises(DependentFactors):
        step1_hermitian_pencil(PairDecomposition(2, 2, [I2], [I2]))


def test_rank_three_is_rejected_even_when_ppt():
    rho = ppt_rank3_state()
    assert ppt_check(rho, 3, 2)
    with pytest.raises(RankTooHigh) as err:
        separate_bipartite(rho, 3, 2)
    assert err.value.osr == 3
    assert "operator Schmidt rank 3 unsupported" in str(err.value)


def test_not_psd_and_zero_inputs():
    with pytest.raises(NotPSDInput):
        separate_bipartite(np.kron(I2, I2) - 2 * np.kron(X, X), 2, 2)
    with pytest.raises(DegenerateInput):
        separate_bipartite(np.zeros((4, 4)), 2, 2)
    with pytest.raises(NotPSDInput):
        separate_bipartite(-np.kron(PLUS, PLUS), 2, 2)


@pytest.mark.slow
def test_completeness_on_random_rank_two_states():
    rng = np.random.default_rng(2024)
    small = []
    for k in range(500):
        d1, d2 = DIMS[rng.integers(len(DIMS))]
        if k % 2:
            rho = samplers.random_sep2_state(rng, d1, d2)
        else:
            rho = samplers.random_pencil_state(rng, d1, d2)
        cert = separate_bipartite(rho, d1, d2)
        _assert_valid(cert, rho)
        assert all(np.linalg.eigvalsh(s)[0] >= -CERT_TOL for pair in certificate_terms(cert) for s in pair)
        if (d1, d2) in {(2, 2), (3, 2)}:
            small.append((rho, d1, d2))
    # certified states in PPT-exact dimensions are PPT
    assert small
    assert all(ppt_check(rho, d1, d2) for rho, d1, d2 in small)


@pytest.mark.slow
def test_entangled_two_qubit_states_have_rank_three_or_more():
    rng = np.random.default_rng(77)
    for _ in range(200):
        rho = samplers.random_entangled_two_qubit(rng)
        assert osr(rho, 2, 2) >= 3


def test_maximally_entangled_state_is_rejected():
    with pytest.raises(RankTooHigh):
        separate_bipartite(max_entangled_state(2), 2, 2)


# ── multipartite ──────────────────────────────────────────────────────────────
def test_ghz_x_bond_two_certificate():
    cert = separate_mpdo(ghz_x_mpdo())
    assert cert.decomposition.bond_dims == [2, 2]
    _assert_valid(cert, ghz_x_state())
    assert [m.site for m in cert.cone_metadata] == [2, 3]


def test_ghz_x_from_dense():
    mpdo = hermitize_mpdo(mpdo_from_dense(ghz_x_state(), [2, 2, 2]))
    cert = separate_mpdo(mpdo)
    _assert_valid(cert, ghz_x_state())


def _chain_dims(rng, n):
    while True:
        dims = [int(d) for d in rng.integers(2, 4, size=n)]
        if int(np.prod(dims)) <= settings.SEPCERT_DENSE_LIMIT:
            return dims


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_random_separable_chains(n):
    rng = np.random.default_rng(100 + n)
    for k in range(50):
        chain = samplers.random_separable_chain(rng, _chain_dims(rng, n))
        if k % 2:
            chain = samplers.gauge_scramble(rng, chain)
        cert = separate_mpdo(chain)
        _assert_valid(cert, dense_from_mpdo(chain))
        assert max(cert.decomposition.bond_dims) <= 2
        for core in cert.decomposition.cores[1:-1]:
            assert core.shape[0] * core.shape[1] <= 4


def test_chain_certificate_site_one_is_unit_trace(rng):
    cert = separate_mpdo(samplers.random_separable_chain(rng, [2, 3, 2]))
    first = cert.decomposition.cores[0]
    for b in range(first.shape[1]):
        assert np.isclose(np.trace(first[0, b]).real, 1.0)


def test_multipartite_rejects_non_hermitian_cores(rng):
    chain = samplers.gauge_scramble(rng, samplers.random_separable_chain(rng, [2, 2, 2]), complex_gauge=True)
    with pytest.raises(NotHermitianCores):
        separate_mpdo(chain)


def test_multipartite_rejects_not_psd(rng):
    chain = samplers.random_separable_chain(rng, [2, 2, 2])
    cores = [c.copy() for c in chain.cores]
    cores[0] = -cores[0]
    with pytest.raises(NotPSDInput):
        separate_mpdo(MPDOCores(cores, hermitian=True))


def test_multipartite_rejects_bond_three(rng):
    chain = samplers.random_separable_chain(rng, [3, 3, 3], bond=3)
    with pytest.raises(RankTooHigh) as err:
        separate_mpdo(chain)
    assert err.value.osr == 3


# ── verification ──────────────────────────────────────────────────────────────
def test_tampered_factor_is_named():
    cert = separate_bipartite(x_correlated_state(), 2, 2)
    cores = [c.copy() for c in cert.decomposition.cores]
    cores[0][0, 1] = np.diag([-1.0, 0.0])
    tampered = SepCertificate(MPDOCores(cores, hermitian=True), cert.residual, cert.min_factor_eig, cert.tolerances)
    report = verify_certificate(tampered, x_correlated_state())
    assert not report.passed
    assert not report.factors_ok
    assert any(f.startswith("factor 2 min eigenvalue -1") for f in report.failures)


def test_wrong_state_fails_on_residual():
    cert = separate_bipartite(x_correlated_state(), 2, 2)
    report = verify_certificate(cert, np.kron(PLUS, PLUS))
    assert not report.residual_ok
    assert report.factors_ok
    assert report.failures[0].startswith("residual")


# ── witness ───────────────────────────────────────────────────────────────────
def test_cmin_witness_on_x_correlated_pencil():
    cert = separate_pencil(I2, X, I2, X)
    w = cmin_witness((I2, X), cert)
    assert len(w.vectors) == 2
    for v in w.vectors:
        assert abs(v[1]) <= v[0] + 1e-10  # S(I, X) = {|y| ≤ x}
    q1, q2 = w.target
    assert np.allclose(q1, I2, atol=1e-10)
    assert np.allclose(q2, X, atol=1e-10)


def test_cmin_witness_rejects_foreign_pencil():
    cert = separate_pencil(I2, X, I2, X)
    with pytest.raises(FactorsOutsideSpan):
        cmin_witness((I2, Z), cert)


def test_noisy_factor_fails_on_residual():
    cert = separate_bipartite(x_correlated_state(), 2, 2)
    cores = [c.copy() for c in cert.decomposition.cores]
    cores[0][0, 0] = cores[0][0, 0] + 1e-3 * I2
    noisy = SepCertificate(MPDOCores(cores, hermitian=True), cert.residual, cert.min_factor_eig, cert.tolerances)
    report = verify_certificate(noisy, x_correlated_state())
    assert not report.passed
    assert not report.residual_ok and report.factors_ok


def test_cmin_witness_on_product_certificate():
    rho = np.kron(PLUS, I2)
    cert = separate_bipartite(rho, 2, 2)
    assert cert.n_terms == 1
    w = cmin_witness((I2, X), cert)
    assert len(w.vectors) == 1
    v = w.vectors[0]
    assert np.isclose(v[0], v[1]) and v[0] > 0
    q1, q2 = w.target
    # ρ = I⊗(I/2) + X⊗(I/2)
    assert np.allclose(q1, I2 / 2, atol=1e-10)
    assert np.allclose(q2, I2 / 2, atol=1e-10)
