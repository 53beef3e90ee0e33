# sepcert/applications/nonneg.py
"""
Nonnegative matrices as diagonal states: ρ = Σ M_ij |i,j⟩⟨i,j|.

On such states osr(ρ) = rank(M) and a separable decomposition with
diagonal factors is a nonnegative factorization of M.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np

from sepcert.config import Tolerances, resolve
from sepcert.errors import OffDiagonalLeak, RankNotTwo
from sepcert.matrix_kernel import matrix_rank
from sepcert.models import MPDOCores, NonnegMatrix, SepCertificate
from sepcert.separator.bipartite import certificate_terms, separate_bipartite
from sepcert.separator.verify import verify_certificate

log = logging.getLogger(__name__)

Factorization = List[Tuple[np.ndarray, np.ndarray]]


def diag_state_from_nonneg(m: NonnegMatrix) -> Tuple[np.ndarray, Tuple[int, int]]:
    rho = np.diag(m.entries.reshape(-1)).astype(np.complex128)
    return rho, (m.rows, m.cols)


def _project_diagonal(cert: SepCertificate) -> Tuple[SepCertificate, float]:
    """Zero every off-diagonal entry of every factor; returns the projected certificate and the mass removed."""
    leak = 0.0
    cores = []
    for core in cert.decomposition.cores:
        new = np.zeros_like(core)
        for a in range(core.shape[0]):
            for b in range(core.shape[1]):
                m = core[a, b]
                d = np.diag(np.diag(m).real)
                leak = max(leak, float(np.linalg.norm(m - d)) / max(1.0, float(np.linalg.norm(m))))
                new[a, b] = d
        cores.append(new)
    projected = SepCertificate(
        MPDOCores(cores, hermitian=True), cert.residual, cert.min_factor_eig, cert.tolerances, cert.cone_metadata
    )
    return projected, leak


def nonneg_factorization_rank2(m: NonnegMatrix, tols: Optional[Tolerances] = None) -> Factorization:
    """M = a₁b₁ᵀ + a₂b₂ᵀ with entrywise nonnegative vectors, read off a diagonal separable certificate."""
    t = resolve(tols)
    rank = matrix_rank(m.entries, tols=t)
    if rank != 2:
        raise RankNotTwo(rank)
    rho, (rows, cols) = diag_state_from_nonneg(m)
    cert = separate_bipartite(rho, rows, cols, t)
    # (Δ⊗Δ)ρ = ρ for diagonal ρ, so the projection stays a certificate whatever the leak
    projected, leak = _project_diagonal(cert)
    report = verify_certificate(projected, rho)
    if not report.passed:
        raise OffDiagonalLeak(
            f"diagonal projection broke the certificate (off-diagonal mass {leak:.3g}): " + "; ".join(report.failures)
        )
    log.debug("nonneg_factorization_rank2: %dx%d, off-diagonal mass %.3g", rows, cols, leak)

    out: Factorization = []
    for sigma, tau in certificate_terms(projected):
        a, b = np.diag(sigma).real.copy(), np.diag(tau).real.copy()
        a[(a < 0) & (a >= -t.cert_tol * max(1.0, float(np.abs(a).max())))] = 0.0
        b[(b < 0) & (b >= -t.cert_tol * max(1.0, float(np.abs(b).max())))] = 0.0
        if (a < 0).any() or (b < 0).any():
            raise OffDiagonalLeak("diagonal factors have negative entries beyond tolerance")
        out.append((a, b))
    return out


def factorization_residual(m: NonnegMatrix, factors: Factorization) -> float:
    approx = sum(np.outer(a, b) for a, b in factors)
    return float(np.linalg.norm(m.entries - approx)) / max(1.0, float(np.linalg.norm(m.entries)))
