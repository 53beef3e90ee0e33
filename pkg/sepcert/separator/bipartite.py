# sepcert/separator/bipartite.py
"""
Constructive separability for bipartite states of operator Schmidt rank ≤ 2.

  1. rewrite ρ = A⊗C + B⊗D with Hermitian A, B, C, D
  2. find the extreme rays u, v of the cone S(A, B)
  3. solve C = u₁H₁ + v₁H₂, D = u₂H₁ + v₂H₂; then
     ρ = (u₁A + u₂B)⊗H₁ + (v₁A + v₂B)⊗H₂ with all four factors PSD
"""
from __future__ import annotations

import logging
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from sepcert.config import Tolerances, resolve
from sepcert.cone2 import extreme_rays
from sepcert.errors import (
    CertificateFailure,
    ConeFailure,
    DegenerateInput,
    DependentFactors,
    DependentRays,
    HNotPSD,
    NotPSDInput,
    RankTooHigh,
)
from sepcert.matrix_kernel import (
    anti_hermitian_part,
    as_hermitian,
    frob_scale,
    hermitian_part,
    is_psd,
    lin_independent,
    real_independent,
    real_lstsq,
)
from sepcert.models import ConeKind, ConeMetadata, MPDOCores, PairDecomposition, SepCertificate
from sepcert.schmidt.decompose import check_state_dims, operator_schmidt, reconstruct
from sepcert.schmidt.hermitize import hermitize_bipartite
from sepcert.separator.verify import verify_certificate

log = logging.getLogger(__name__)

Pencil = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def _require_psd(rho: np.ndarray, t: Tolerances) -> None:
    check = is_psd(rho, tols=t)
    if not check.ok:
        raise NotPSDInput(f"state is not positive semidefinite (λ_min = {check.min_eigenvalue:.6g})", check.min_eigenvalue)


def step1_hermitian_pencil(dec: PairDecomposition, tols: Optional[Tolerances] = None) -> Pencil:
    """ρ = Σ_{α=1,2} P_α⊗Q_α  →  ρ = A⊗C + B⊗D, all Hermitian, A and B of unit norm."""
    t = resolve(tols)
    if dec.p != 2:
        raise DependentFactors(f"the Hermitian pencil needs exactly 2 pairs, got {dec.p}")
    rho = as_hermitian(reconstruct(dec), t, "Σ P_α⊗Q_α")
    _require_psd(rho, t)
    if not (lin_independent(dec.left, tols=t)[0] and lin_independent(dec.right, tols=t)[0]):
        raise DependentFactors("the P_α or the Q_α are linearly dependent")

    candidates = []
    for p in dec.left:
        candidates += [hermitian_part(p), anti_hermitian_part(p)]
    pair = next(
        ((i, j) for i, j in combinations(range(4), 2) if real_independent([candidates[i], candidates[j]], tols=t)[0]),
        None,
    )
    if pair is None:
        raise DependentFactors("Hermitian parts of the P_α span less than two real dimensions")
    A, B = candidates[pair[0]], candidates[pair[1]]

    coeffs = []
    for cand in candidates:
        x, resid = real_lstsq([A, B], cand)
        if resid > 1e3 * t.recon_tol * frob_scale(cand):
            raise DependentFactors(f"Hermitian parts of the P_α span more than two real dimensions (residual {resid:.3g})")
        coeffs.append(x)
    # P_α = (a⁰ + i·a¹)·(A, B), so ρ = A⊗Σ(a⁰_1 + i·a¹_1)Q_α + B⊗Σ(a⁰_2 + i·a¹_2)Q_α
    C = hermitian_part(sum((coeffs[2 * a][0] + 1j * coeffs[2 * a + 1][0]) * q for a, q in enumerate(dec.right)))
    D = hermitian_part(sum((coeffs[2 * a][1] + 1j * coeffs[2 * a + 1][1]) * q for a, q in enumerate(dec.right)))

    na, nb = float(np.linalg.norm(A)), float(np.linalg.norm(B))
    A, B, C, D = A / na, B / nb, C * na, D * nb
    if not real_independent([C, D], tols=t)[0]:
        raise DependentFactors("C and D are linearly dependent")
    log.debug("step 1: candidates %s chosen from [P1⁰, P1¹, P2⁰, P2¹]", pair)
    return A, B, C, D


def solve_H(C, D, u, v, tols: Optional[Tolerances] = None) -> Tuple[np.ndarray, np.ndarray]:
    """H₁, H₂ with C = u₁H₁ + v₁H₂ and D = u₂H₁ + v₂H₂."""
    t = resolve(tols)
    C = as_hermitian(C, t, "C")
    D = as_hermitian(D, t, "D")
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    det = u[0] * v[1] - u[1] * v[0]
    if abs(det) <= 1e-12 * max(1.0, float(np.linalg.norm(u) * np.linalg.norm(v))):
        raise DependentRays(f"rays {u.tolist()} and {v.tolist()} are linearly dependent")
    H1 = hermitian_part((v[1] * C - v[0] * D) / det)
    H2 = hermitian_part((u[0] * D - u[1] * C) / det)
    for k, H in enumerate((H1, H2), start=1):
        check = is_psd(H, tols=t)
        if not check.ok:
            raise HNotPSD(f"H{k} has λ_min {check.min_eigenvalue:.6g}; the rays do not bound the cone")
    return H1, H2


def single_ray_partner(C: np.ndarray, D: np.ndarray, w: np.ndarray, t: Tolerances) -> np.ndarray:
    """h with C = w₁h and D = w₂h (w unit length)."""
    h = hermitian_part(w[0] * C + w[1] * D)
    gap = float(np.linalg.norm(C - w[0] * h) + np.linalg.norm(D - w[1] * h))
    if gap > t.cert_tol * (frob_scale(C) + frob_scale(D)):
        raise ConeFailure(f"single-ray cone but (C, D) is not a multiple of the ray (gap {gap:.3g})")
    check = is_psd(h, tols=t)
    if not check.ok:
        raise ConeFailure(f"single-ray partner factor has λ_min {check.min_eigenvalue:.6g}")
    return h


def _assemble(
    sigmas: List[np.ndarray], taus: List[np.ndarray], rho: np.ndarray, t: Tolerances, metadata
) -> SepCertificate:
    """Unit-trace σ, scale pushed into τ; the result must pass independent verification."""
    d1, d2 = sigmas[0].shape[0], taus[0].shape[0]
    left, right = [], []
    for s, h in zip(sigmas, taus):
        tr = float(np.trace(s).real)
        if tr <= 0:
            raise ConeFailure(f"left factor has non-positive trace {tr:.3g}")
        left.append(hermitian_part(s / tr))
        right.append(hermitian_part(h * tr))
    mpdo = PairDecomposition(d1, d2, left, right).to_mpdo(hermitian=True)
    approx = reconstruct(PairDecomposition(d1, d2, left, right))
    residual = float(np.linalg.norm(rho - approx)) / frob_scale(rho)
    min_eig = min(float(np.linalg.eigvalsh(m)[0]) for m in left + right)
    cert = SepCertificate(mpdo, residual, min_eig, t, metadata)
    report = verify_certificate(cert, rho)
    if not report.passed:
        raise CertificateFailure("constructed certificate failed verification: " + "; ".join(report.failures))
    return cert


def separate_pencil(A, B, C, D, tols: Optional[Tolerances] = None, rho=None) -> SepCertificate:
    t = resolve(tols)
    A, B = as_hermitian(A, t, "A"), as_hermitian(B, t, "B")
    C, D = as_hermitian(C, t, "C"), as_hermitian(D, t, "D")
    if rho is None:
        rho = np.kron(A, C) + np.kron(B, D)
    cone = extreme_rays(A, B, C, D, tols=t)
    meta = [cone.metadata()]
    if cone.kind is ConeKind.SIMPLEX:
        u, v = cone.rays
        H1, H2 = solve_H(C, D, u, v, t)
        sigmas = [u[0] * A + u[1] * B, v[0] * A + v[1] * B]
        taus = [H1, H2]
        # a zero H drops its term
        keep = [k for k in range(2) if np.linalg.norm(taus[k]) > t.rank_tol * frob_scale(C + D)]
        sigmas, taus = [sigmas[k] for k in keep], [taus[k] for k in keep]
    elif cone.kind is ConeKind.SINGLE_RAY:
        (w,) = cone.rays
        sigmas, taus = [w[0] * A + w[1] * B], [single_ray_partner(C, D, w, t)]
    else:
        raise ConeFailure("the cone is {0}; nothing to certify")
    log.debug("separate_pencil: %s (%s), %d terms", cone.kind.value, cone.case, len(sigmas))
    return _assemble(sigmas, taus, rho, t, meta)


def _product_certificate(dec: PairDecomposition, rho: np.ndarray, t: Tolerances) -> SepCertificate:
    herm = hermitize_bipartite(dec, t)
    A, B = herm.left[0], herm.right[0]
    if not is_psd(A, tols=t).ok:
        A, B = -A, -B
    for name, m in (("first", A), ("second", B)):
        check = is_psd(m, tols=t)
        if not check.ok:
            raise NotPSDInput(f"product state has a {name} factor with λ_min {check.min_eigenvalue:.6g}", check.min_eigenvalue)
    meta = [ConeMetadata(kind=ConeKind.SINGLE_RAY.value, case="product")]
    return _assemble([A], [B], rho, t, meta)


def separate_bipartite(rho, d1: int, d2: int, tols: Optional[Tolerances] = None) -> SepCertificate:
    t = resolve(tols)
    rho = as_hermitian(check_state_dims(rho, d1, d2), t, "state")
    if np.linalg.norm(rho) == 0:
        raise DegenerateInput("the zero operator has no separable decomposition to certify")
    _require_psd(rho, t)
    dec = operator_schmidt(rho, d1, d2, tols=t)
    log.info("separate_bipartite: dims (%d, %d), operator Schmidt rank %d", d1, d2, dec.p)
    if dec.p >= 3:
        raise RankTooHigh(dec.p)
    if dec.p == 1:
        return _product_certificate(dec, rho, t)
    A, B, C, D = step1_hermitian_pencil(dec, t)
    return separate_pencil(A, B, C, D, t, rho=rho)


def certificate_terms(cert: SepCertificate) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(σ_α, τ_α) pairs of a bipartite certificate."""
    mpdo: MPDOCores = cert.decomposition
    if mpdo.n != 2:
        raise DegenerateInput(f"certificate_terms needs a bipartite certificate, got {mpdo.n} sites")
    return [(mpdo.cores[0][0, a], mpdo.cores[1][a, 0]) for a in range(mpdo.bond_dims[0])]
