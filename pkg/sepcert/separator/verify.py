# sepcert/separator/verify.py
"""
Independent certificate check.

Rebuilds the operator term by term from the certificate's local matrices
and re-diagonalises every factor; nothing is shared with the construction
code path.
"""
from __future__ import annotations

import itertools
import logging
from typing import List, Optional

import numpy as np

from sepcert.config import Tolerances
from sepcert.errors import DimensionMismatch
from sepcert.models import SepCertificate, VerificationReport

log = logging.getLogger(__name__)


def _expand(cores: List[np.ndarray]) -> np.ndarray:
    bonds = [c.shape[1] for c in cores[:-1]]
    dim = int(np.prod([c.shape[2] for c in cores]))
    total = np.zeros((dim, dim), dtype=np.complex128)
    for pattern in itertools.product(*(range(b) for b in bonds)):
        left = (0,) + pattern
        right = pattern + (0,)
        term = np.ones((1, 1), dtype=np.complex128)
        for l, core in enumerate(cores):
            term = np.kron(term, core[left[l], right[l]])
        total += term
    return total


def verify_certificate(
    cert: SepCertificate, rho, tols: Optional[Tolerances] = None
) -> VerificationReport:
    cores = [np.asarray(c, dtype=np.complex128) for c in cert.decomposition.cores]
    rho = np.asarray(rho, dtype=np.complex128)
    dim = int(np.prod([c.shape[2] for c in cores]))
    if rho.shape != (dim, dim):
        raise DimensionMismatch(f"certificate acts on dimension {dim}, state has shape {rho.shape}")
    tol = (tols or cert.tolerances).cert_tol

    failures: List[str] = []
    approx = _expand(cores)
    residual = float(np.linalg.norm(rho - approx)) / max(1.0, float(np.linalg.norm(rho)))
    residual_ok = residual <= tol
    if not residual_ok:
        failures.append(f"residual {residual:.6g} exceeds cert_tol {tol:.3g}")

    min_eig = np.inf
    factor = 0
    for site, core in enumerate(cores):
        for a in range(core.shape[0]):
            for b in range(core.shape[1]):
                factor += 1
                m = core[a, b]
                herm_gap = float(np.linalg.norm(m - m.conj().T))
                lam = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
                min_eig = min(min_eig, lam)
                scale = max(1.0, float(np.linalg.norm(m)))
                if herm_gap > tol * scale:
                    failures.append(f"factor {factor} is not Hermitian (site {site + 1})")
                if lam < -tol * scale:
                    failures.append(f"factor {factor} min eigenvalue {lam:.6g} (site {site + 1})")
    factors_ok = not any(f.startswith("factor") for f in failures)

    report = VerificationReport(
        passed=residual_ok and factors_ok,
        residual=residual,
        min_factor_eig=float(min_eig),
        residual_ok=residual_ok,
        factors_ok=factors_ok,
        failures=failures,
    )
    log.debug("verify_certificate: passed=%s residual=%.3g min_eig=%.3g", report.passed, residual, min_eig)
    return report
