# sepcert/separator/witness.py
from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from sepcert.config import Tolerances, resolve
from sepcert.errors import ConeFailure, FactorsOutsideSpan
from sepcert.matrix_kernel import as_hermitian, frob_scale, is_psd, real_lstsq, vec
from sepcert.models import CminWitness, SepCertificate
from sepcert.schmidt.decompose import realign
from sepcert.separator.bipartite import certificate_terms

log = logging.getLogger(__name__)


def cmin_witness(pencil: Tuple[np.ndarray, np.ndarray], cert: SepCertificate, tols: Optional[Tolerances] = None) -> CminWitness:
    """
    Read a certificate ρ = Σ_j σ_j⊗τ_j with σ_j ∈ span{A, B} as
    (Q₁, Q₂) = Σ_j v_j ⊗ τ_j, where ρ = A⊗Q₁ + B⊗Q₂ and σ_j = v_j1·A + v_j2·B.
    """
    t = resolve(tols)
    A = as_hermitian(pencil[0], t, "A")
    B = as_hermitian(pencil[1], t, "B")
    terms = certificate_terms(cert)

    vectors, psd = [], []
    for j, (sigma, tau) in enumerate(terms, start=1):
        x, resid = real_lstsq([A, B], sigma)
        if resid > max(t.recon_tol, t.cert_tol) * frob_scale(sigma):
            raise FactorsOutsideSpan(f"factor σ_{j} is outside span{{A, B}} (residual {resid:.3g})")
        if not is_psd(x[0] * A + x[1] * B, tol=t.cert_tol, tols=t).ok:
            raise ConeFailure(f"coefficient vector v_{j} = {x.tolist()} is outside the cone S(A, B)")
        if not is_psd(tau, tol=t.cert_tol, tols=t).ok:
            raise ConeFailure(f"τ_{j} is not positive semidefinite")
        vectors.append(np.asarray(x, dtype=float))
        psd.append(as_hermitian(tau, t, f"τ_{j}"))

    # ρ = A⊗Q₁ + B⊗Q₂ read off the realigned certificate operator
    d1, d2 = A.shape[0], terms[0][1].shape[0]
    rho = sum(np.kron(sigma, tau) for sigma, tau in terms)
    basis = np.stack([vec(A), vec(B)], axis=1)
    coeffs, *_ = sla.lstsq(basis, realign(rho, d1, d2))
    Q1, Q2 = coeffs[0].reshape(d2, d2), coeffs[1].reshape(d2, d2)

    for i, Q in enumerate((Q1, Q2)):
        combo = sum(v[i] * tau for v, tau in zip(vectors, psd))
        gap = float(np.linalg.norm(combo - Q)) / frob_scale(Q)
        if gap > max(t.recon_tol, t.cert_tol):
            raise FactorsOutsideSpan(f"Σ_j v_j{i + 1}·τ_j misses Q_{i + 1} by {gap:.3g}")
    log.debug("cmin_witness: %d vectors", len(vectors))
    return CminWitness(vectors=vectors, psd_matrices=psd, target=(Q1, Q2))
