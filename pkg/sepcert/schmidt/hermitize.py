# sepcert/schmidt/hermitize.py
"""
Rewriting decompositions of Hermitian operators with Hermitian local factors.

Bipartite: the span of the A_α is closed under †, so it has a Hermitian
basis of the same size; changing basis keeps the term count.
Multipartite: a site-by-site gauge sweep when every site family is
independent, otherwise the Hermitian/anti-Hermitian parity construction.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from sepcert.config import Tolerances, resolve
from sepcert.errors import ConvergenceFailure, DependentFactors, NotHermitianSum
from sepcert.matrix_kernel import (
    frob_scale,
    hermitian_part,
    hermiticity_defect,
    lin_independent,
    numerical_rank,
    svd,
)
from sepcert.models import MPDOCores, PairDecomposition
from sepcert.schmidt.decompose import operator_schmidt, reconstruct
from sepcert.schmidt.mpdo import compress_hermitian_bonds, cores_hermitian, dense_from_mpdo

log = logging.getLogger(__name__)


def _dagger(x: np.ndarray) -> np.ndarray:
    """Conjugate transpose of the trailing two axes."""
    return np.swapaxes(x, -1, -2).conj()


def hermitian_basis(items: Sequence[np.ndarray], tol: float) -> Tuple[List[np.ndarray], np.ndarray]:
    """
    Hermitian basis of span_C(items), assuming that span is closed under
    (trailing-axes) †. Returns the basis G_γ and complex coefficients c with
    items[k] = Σ_γ c[γ, k] G_γ. Ordered by descending singular value.
    """
    shape = items[0].shape
    parts = []
    for x in items:
        parts.append((x + _dagger(x)) / 2)
        parts.append((x - _dagger(x)) / 2j)
    emb = np.stack([np.concatenate([p.reshape(-1).real, p.reshape(-1).imag]) for p in parts], axis=1)
    u, s, _ = svd(emb)
    r = numerical_rank(s, tol)
    if r != len(items):
        raise NotHermitianSum(f"Hermitian span has real dimension {r}, expected {len(items)}")
    half = int(np.prod(shape))
    basis = []
    for g in range(r):
        col = u[:, g]
        m = (col[:half] + 1j * col[half:]).reshape(shape)
        basis.append((m + _dagger(m)) / 2)
    gmat = np.stack([g.reshape(-1) for g in basis], axis=1)
    xmat = np.stack([x.reshape(-1) for x in items], axis=1)
    coeffs, *_ = sla.lstsq(gmat, xmat)
    resid = float(np.linalg.norm(gmat @ coeffs - xmat)) / max(1.0, float(np.linalg.norm(xmat)))
    if resid > max(tol, 1e-9):
        raise NotHermitianSum(f"factors are not in the Hermitian span (residual {resid:.3g})")
    return basis, coeffs


def hermitize_bipartite(dec: PairDecomposition, tols: Optional[Tolerances] = None) -> PairDecomposition:
    t = resolve(tols)
    rho = reconstruct(dec)
    defect = hermiticity_defect(rho)
    if defect > t.herm_tol:
        raise NotHermitianSum(f"Σ A_α⊗B_α is not Hermitian (defect {defect:.3g})")
    left_ok, left_rank = lin_independent(dec.left, tols=t)
    right_ok, right_rank = lin_independent(dec.right, tols=t)
    if not (left_ok and right_ok):
        raise DependentFactors(
            f"factor families must be independent (left rank {left_rank}, right rank {right_rank}, p = {dec.p})"
        )

    basis, coeffs = hermitian_basis(dec.left, t.rank_tol)
    right = []
    for g in range(dec.p):
        f = sum(coeffs[g, a] * dec.right[a] for a in range(dec.p))
        if hermiticity_defect(f) > max(t.herm_tol, t.recon_tol) * 10:
            raise NotHermitianSum(f"partner factor {g} is not Hermitian (defect {hermiticity_defect(f):.3g})")
        right.append(hermitian_part(f))
    out = PairDecomposition(dec.d1, dec.d2, basis, right, independent=True)
    resid = float(np.linalg.norm(reconstruct(out) - rho)) / frob_scale(rho)
    if resid > t.recon_tol:
        raise ConvergenceFailure(f"Hermitised decomposition does not reconstruct (residual {resid:.3g})")
    log.debug("hermitize_bipartite: %d pairs, residual %.3g", out.p, resid)
    return out


# ─────────────────────────────
# Multipartite
# ─────────────────────────────
def _gauge_sweep(mpdo: MPDOCores, t: Tolerances) -> MPDOCores:
    """Left-to-right real gauge that makes each core Hermitian without growing bonds."""
    cores = [c.copy() for c in mpdo.cores]
    n = len(cores)
    for l in range(n - 1):
        core = cores[l]
        xs = [core[:, k] for k in range(core.shape[1])]  # bond vectors, each (D_left, d, d)
        basis, coeffs = hermitian_basis(xs, t.rank_tol)
        cores[l] = np.stack(basis, axis=1)
        cores[l + 1] = np.einsum("gk,kbij->gbij", coeffs, cores[l + 1])
    last = cores[-1]
    for a in range(last.shape[0]):
        if hermiticity_defect(last[a, 0]) > max(t.herm_tol, t.recon_tol) * 10:
            raise NotHermitianSum(f"last site matrix {a} is not Hermitian after the gauge sweep")
    cores = [hermitian_part_cores(c) for c in cores]
    return MPDOCores(cores, hermitian=True)


def hermitian_part_cores(core: np.ndarray) -> np.ndarray:
    return (core + _dagger(core)) / 2


def _parity_cores(mpdo: MPDOCores, final_parity: int) -> List[np.ndarray]:
    """
    Expand every local A = A⁰ + i·A¹ and keep the terms whose total
    anti-Hermitian grade has the given parity. The bond index becomes
    (β, p) with p the running parity; i·i = −1 supplies the signs.
    """
    n = mpdo.n
    out = []
    for l, core in enumerate(mpdo.cores):
        dl, dr, d, _ = core.shape
        parts = [hermitian_part_cores(core), (core - _dagger(core)) / 2j]
        in_par = [0] if l == 0 else [0, 1]
        out_par = [final_parity] if l == n - 1 else [0, 1]
        new = np.zeros((dl * len(in_par), dr * len(out_par), d, d), dtype=np.complex128)
        for pi, p in enumerate(in_par):
            for qi, q in enumerate(out_par):
                k = p ^ q
                sign = -1.0 if (k == 1 and p == 1) else 1.0
                for a in range(dl):
                    for b in range(dr):
                        new[a * len(in_par) + pi, b * len(out_par) + qi] = sign * parts[k][a, b]
        out.append(new)
    return out


def _parity_fallback(mpdo: MPDOCores, t: Tolerances, target: np.ndarray) -> MPDOCores:
    odd = MPDOCores(_parity_cores(mpdo, 1))
    odd_norm = float(np.linalg.norm(dense_from_mpdo(odd))) / frob_scale(target)
    if odd_norm > t.recon_tol:
        raise NotHermitianSum(f"odd-grade terms do not cancel (norm {odd_norm:.3g})")
    even = MPDOCores(_parity_cores(mpdo, 0), hermitian=True)
    log.debug("hermitize_mpdo: parity construction bond dims %s, odd-grade norm %.3g", even.bond_dims, odd_norm)
    return compress_hermitian_bonds(even, tols=t)


def hermitize_mpdo(mpdo: MPDOCores, tols: Optional[Tolerances] = None) -> MPDOCores:
    t = resolve(tols)
    target = dense_from_mpdo(mpdo)
    defect = hermiticity_defect(target)
    if defect > t.herm_tol:
        raise NotHermitianSum(f"contracted operator is not Hermitian (defect {defect:.3g})")

    if cores_hermitian(mpdo, t):
        out = MPDOCores([hermitian_part_cores(c) for c in mpdo.cores], hermitian=True)
        return out

    if mpdo.n == 1:
        return MPDOCores([hermitian_part_cores(mpdo.cores[0])], hermitian=True)

    if mpdo.n == 2:
        dec = mpdo.pairs()
        left_ok, _ = lin_independent(dec.left, tols=t)
        right_ok, _ = lin_independent(dec.right, tols=t)
        if not (left_ok and right_ok):
            dec = operator_schmidt(target, dec.d1, dec.d2, tols=t)
        return hermitize_bipartite(dec, t).to_mpdo(hermitian=True)

    sitewise = all(lin_independent(mpdo.site_family(l), tols=t)[0] for l in range(mpdo.n))
    if sitewise:
        try:
            out = _gauge_sweep(mpdo, t)
            resid = float(np.linalg.norm(dense_from_mpdo(out) - target)) / frob_scale(target)
            if resid <= t.recon_tol:
                log.debug("hermitize_mpdo: gauge sweep kept bond dims %s", out.bond_dims)
                return out
            log.debug("hermitize_mpdo: gauge sweep residual %.3g, falling back", resid)
        except NotHermitianSum as e:
            log.debug("hermitize_mpdo: gauge sweep failed (%s), falling back", e)

    out = _parity_fallback(mpdo, t, target)
    resid = float(np.linalg.norm(dense_from_mpdo(out) - target)) / frob_scale(target)
    if resid > t.recon_tol:
        raise ConvergenceFailure(f"Hermitised MPDO does not reconstruct (residual {resid:.3g})")
    return out
