# sepcert/separator/multipartite.py
"""
Separable bond-2 decompositions of Hermitian bond-2 MPDOs.

Sites are peeled from the right. At the level of site l the state is
ρ_j = B₀⊗C_j + B₁⊗D_j for every branch j, where B_k contracts sites
1..l−1 with the open bond k. The cone S(B₀, B₁) depends only on the
pencil, so one set of rays serves every branch: site l gets the PSD
matrices H_a^(j) and site l−1 is rotated onto the rays. The sites to
the left are therefore literally shared by all branches.
"""
from __future__ import annotations

import logging
from typing import List, Optional

import numpy as np

from sepcert.config import Tolerances, resolve
from sepcert.cone2 import compression_points, extreme_rays
from sepcert.errors import CertificateFailure, ConeFailure, NotHermitianCores, NotPSDInput, RankTooHigh
from sepcert.matrix_kernel import frob_scale, hermitian_part, is_psd
from sepcert.models import ConeKind, ConeMetadata, MPDOCores, SepCertificate
from sepcert.schmidt.decompose import osr_across_cuts
from sepcert.schmidt.mpdo import compress_hermitian_bonds, cores_hermitian, dense_from_mpdo, left_environments
from sepcert.separator.bipartite import single_ray_partner, solve_H
from sepcert.separator.verify import verify_certificate

log = logging.getLogger(__name__)


def _herm_core(core: np.ndarray) -> np.ndarray:
    return (core + np.swapaxes(core, -1, -2).conj()) / 2


def _peel_bond_one(cores: List[np.ndarray], l: int, t: Tolerances) -> ConeMetadata:
    """Left bond of site l is 1: fix the overall sign so both sides are PSD."""
    env = hermitian_part(left_environments(cores[:l])[0])
    if not is_psd(env, tols=t).ok:
        if not is_psd(-env, tols=t).ok:
            raise ConeFailure(f"left block of site {l + 1} is indefinite")
        cores[l - 1] = -cores[l - 1]
        cores[l] = -cores[l]
    for j in range(cores[l].shape[1]):
        check = is_psd(cores[l][0, j], tols=t)
        if not check.ok:
            raise ConeFailure(f"site {l + 1} branch {j} factor has λ_min {check.min_eigenvalue:.6g}")
    return ConeMetadata(kind=ConeKind.SINGLE_RAY.value, case="bond-1", rays=[[1.0, 0.0]], site=l + 1, branches=cores[l].shape[1])


def _peel_bond_two(cores: List[np.ndarray], l: int, t: Tolerances) -> tuple:
    env = left_environments(cores[:l])
    A, B = hermitian_part(env[0]), hermitian_part(env[1])
    core = cores[l]
    branches = core.shape[1]
    points = []
    for j in range(branches):
        points += compression_points(A, B, core[0, j], core[1, j], t)
    cone = extreme_rays(A, B, tols=t, points=points)
    d = core.shape[2]

    if cone.kind is ConeKind.SIMPLEX:
        u, v = cone.rays
        new = np.zeros((2, branches, d, d), dtype=np.complex128)
        for j in range(branches):
            new[0, j], new[1, j] = solve_H(core[0, j], core[1, j], u, v, t)
    elif cone.kind is ConeKind.SINGLE_RAY:
        (w,) = cone.rays
        new = np.zeros((1, branches, d, d), dtype=np.complex128)
        for j in range(branches):
            new[0, j] = single_ray_partner(hermitian_part(core[0, j]), hermitian_part(core[1, j]), w, t)
    else:
        raise ConeFailure(f"cone at site {l + 1} is {{0}}")

    lam = np.stack(cone.rays)  # rows are rays
    cores[l - 1] = np.einsum("ak,ikxy->iaxy", lam, cores[l - 1])
    log.debug("site %d: %s via %s shared by %d branch(es)", l + 1, cone.kind.value, cone.case, branches)
    return new, cone.metadata(site=l + 1, branches=branches)


def separate_mpdo(mpdo: MPDOCores, tols: Optional[Tolerances] = None) -> SepCertificate:
    t = resolve(tols)
    target = dense_from_mpdo(mpdo)
    if not cores_hermitian(mpdo, t):
        raise NotHermitianCores("every local matrix must be Hermitian; run hermitize_mpdo first")
    check = is_psd(target, tols=t)
    if not check.ok:
        raise NotPSDInput(f"contracted operator is not PSD (λ_min = {check.min_eigenvalue:.6g})", check.min_eigenvalue)

    work = compress_hermitian_bonds(MPDOCores([_herm_core(c) for c in mpdo.cores], hermitian=True), tols=t)
    if work.bond_dims and max(work.bond_dims) > 2:
        ranks = osr_across_cuts(target, work.dims, tols=t)
        worst = max(ranks)
        if worst > 2:
            raise RankTooHigh(worst)
        raise RankTooHigh(
            max(work.bond_dims),
            f"Hermitian bond dimension {max(work.bond_dims)} unsupported (operator Schmidt ranks {ranks})",
        )
    log.info("separate_mpdo: %d sites, dims %s, bond dims %s", work.n, work.dims, work.bond_dims)

    cores = [c.copy() for c in work.cores]
    out: List[Optional[np.ndarray]] = [None] * work.n
    metadata: List[ConeMetadata] = []
    for l in range(work.n - 1, 0, -1):
        if cores[l].shape[0] == 1:
            metadata.append(_peel_bond_one(cores, l, t))
            out[l] = cores[l]
        else:
            out[l], meta = _peel_bond_two(cores, l, t)
            metadata.append(meta)
    out[0] = cores[0]
    for b in range(out[0].shape[1]):
        check = is_psd(out[0][0, b], tols=t)
        if not check.ok:
            raise ConeFailure(f"site 1 factor {b} has λ_min {check.min_eigenvalue:.6g}")

    # unit-trace site-1 factors, scale pushed into site 2
    if work.n > 1:
        for b in range(out[0].shape[1]):
            tr = float(np.trace(out[0][0, b]).real)
            if tr > 0:
                out[0][0, b] = out[0][0, b] / tr
                out[1][b] = out[1][b] * tr
    out = [_herm_core(c) for c in out]

    cert_mpdo = MPDOCores(out, hermitian=True)
    approx = dense_from_mpdo(cert_mpdo)
    residual = float(np.linalg.norm(target - approx)) / frob_scale(target)
    min_eig = min(
        float(np.linalg.eigvalsh(c[a, b])[0]) for c in out for a in range(c.shape[0]) for b in range(c.shape[1])
    )
    cert = SepCertificate(cert_mpdo, residual, min_eig, t, list(reversed(metadata)))
    report = verify_certificate(cert, target)
    if not report.passed:
        raise CertificateFailure("constructed certificate failed verification: " + "; ".join(report.failures))
    log.info("separate_mpdo: certificate bond dims %s, residual %.3g", cert_mpdo.bond_dims, residual)
    return cert
