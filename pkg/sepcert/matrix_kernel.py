# sepcert/matrix_kernel.py
"""
Dense Hermitian / complex linear algebra used by every other module.

Every tolerance is relative: a check against ``tol`` compares with
``tol * max(1, ‖M‖_F)`` of the matrix being checked.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from sepcert.config import Tolerances, resolve
from sepcert.errors import (
    ConvergenceFailure,
    DimensionMismatch,
    EmptyList,
    NonFiniteInput,
    NonHermitianInput,
    NotPositiveDefinite,
)
from sepcert.models import EigSystem, PsdCheck

log = logging.getLogger(__name__)


# ─────────────────────────────
# Basic helpers
# ─────────────────────────────
def as_complex(m, what: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{what} has NaN/Inf entries")
    return arr


def frob_scale(m: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(m)))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    return (m + m.conj().T) / 2


def anti_hermitian_part(m: np.ndarray) -> np.ndarray:
    """(M − M†)/(2i); Hermitian, and M = hermitian_part(M) + i·anti_hermitian_part(M)."""
    m = np.asarray(m, dtype=np.complex128)
    return (m - m.conj().T) / 2j


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - m.conj().T)) / frob_scale(m)


def is_hermitian(m: np.ndarray, tols: Optional[Tolerances] = None) -> bool:
    return hermiticity_defect(m) <= resolve(tols).herm_tol


def as_hermitian(m, tols: Optional[Tolerances] = None, what: str = "matrix") -> np.ndarray:
    """Validate the Hermitian invariant and return the exact Hermitian part."""
    arr = as_complex(m, what)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{what} must be square, got shape {arr.shape}")
    tol = resolve(tols).herm_tol
    defect = hermiticity_defect(arr)
    if defect > tol:
        raise NonHermitianInput(f"{what} is not Hermitian: ‖M − M†‖/scale = {defect:.3g} > {tol:.3g}")
    return hermitian_part(arr)


def vec(m: np.ndarray) -> np.ndarray:
    """Row-major vectorisation; index of |i⟩⟨j| is i·d + j."""
    return np.asarray(m).reshape(-1)


# ─────────────────────────────
# Spectral routines
# ─────────────────────────────
def herm_eig(h, tols: Optional[Tolerances] = None) -> EigSystem:
    hm = as_hermitian(h, tols)
    try:
        w, v = sla.eigh(hm)
    except sla.LinAlgError as e:
        raise ConvergenceFailure(f"eigh did not converge: {e}") from e
    return EigSystem(eigenvalues=np.asarray(w, dtype=float), eigenvectors=v)


def is_psd(h, tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> PsdCheck:
    t = resolve(tols)
    tol = t.pd_tol if tol is None else tol
    hm = as_hermitian(h, t)
    lam_min = float(sla.eigvalsh(hm)[0]) if hm.size else 0.0
    return PsdCheck(lam_min >= -tol * frob_scale(hm), lam_min)


def congruence_normalizer(h, tols: Optional[Tolerances] = None) -> np.ndarray:
    """P = V diag(λ^{-1/2}) V† so that P† H P = I."""
    t = resolve(tols)
    eig = herm_eig(h, t)
    hm = hermitian_part(as_complex(h))
    lam_min = eig.eigenvalues[0]
    if lam_min <= t.pd_tol * frob_scale(hm):
        raise NotPositiveDefinite(f"λ_min = {lam_min:.3g} is not above pd_tol")
    v = eig.eigenvectors
    p = (v * (1.0 / np.sqrt(eig.eigenvalues))) @ v.conj().T
    err = float(np.linalg.norm(p.conj().T @ hm @ p - np.eye(hm.shape[0])))
    if err > t.recon_tol * hm.shape[0]:
        raise ConvergenceFailure(f"congruence normaliser residual {err:.3g}")
    return p


def kernel_basis(h, tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> List[np.ndarray]:
    t = resolve(tols)
    tol = t.rank_tol if tol is None else tol
    eig = herm_eig(h, t)
    cutoff = tol * frob_scale(h)
    return [eig.eigenvectors[:, k] for k in range(len(eig.eigenvalues)) if abs(eig.eigenvalues[k]) <= cutoff]


def svd(m) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD returning (U, s, V) with M = U diag(s) V†. Real input stays real."""
    arr = np.asarray(m)
    arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("matrix has NaN/Inf entries")
    try:
        u, s, vh = sla.svd(arr, full_matrices=False, lapack_driver="gesdd")
    except sla.LinAlgError:
        try:
            u, s, vh = sla.svd(arr, full_matrices=False, lapack_driver="gesvd")
        except sla.LinAlgError as e:
            raise ConvergenceFailure(f"svd did not converge: {e}") from e
    return u, s, vh.conj().T


def numerical_rank(s: np.ndarray, tol: float) -> int:
    if len(s) == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def matrix_rank(m, tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> int:
    tol = resolve(tols).rank_tol if tol is None else tol
    _, s, _ = svd(m)
    return numerical_rank(s, tol)


def lin_independent(
    mats: Sequence[np.ndarray], tol: Optional[float] = None, tols: Optional[Tolerances] = None
) -> Tuple[bool, int]:
    """Complex linear independence of a matrix family."""
    if len(mats) == 0:
        raise EmptyList("lin_independent needs at least one matrix")
    shapes = {np.shape(m) for m in mats}
    if len(shapes) != 1:
        raise DimensionMismatch(f"matrices have different shapes: {sorted(shapes)}")
    tol = resolve(tols).rank_tol if tol is None else tol
    stacked = np.stack([vec(as_complex(m)) for m in mats], axis=1)
    rank = matrix_rank(stacked, tol)
    return rank == len(mats), rank


# ─────────────────────────────
# Real coordinates of Hermitian spans
# ─────────────────────────────
def real_embed(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Columns [Re vec(M); Im vec(M)], one per matrix: R-linear coordinates."""
    cols = [np.concatenate([vec(m).real, vec(m).imag]) for m in mats]
    return np.stack(cols, axis=1)


def real_unembed(column: np.ndarray, dim: int) -> np.ndarray:
    half = dim * dim
    return (column[:half] + 1j * column[half:]).reshape(dim, dim)


def real_independent(
    mats: Sequence[np.ndarray], tol: Optional[float] = None, tols: Optional[Tolerances] = None
) -> Tuple[bool, int]:
    """Independence over the reals; for Hermitian families this matches complex independence."""
    if len(mats) == 0:
        raise EmptyList("real_independent needs at least one matrix")
    tol = resolve(tols).rank_tol if tol is None else tol
    rank = matrix_rank(real_embed(mats), tol)
    return rank == len(mats), rank


def range_complement(vectors: Sequence[np.ndarray], dim: int) -> np.ndarray:
    """Orthonormal basis (as columns) of the orthogonal complement of span(vectors)."""
    if len(vectors) == 0:
        return np.eye(dim, dtype=np.complex128)
    k = np.stack([np.asarray(v, dtype=np.complex128) for v in vectors], axis=1)
    if k.shape[0] != dim:
        raise DimensionMismatch(f"vectors have length {k.shape[0]}, expected {dim}")
    return sla.null_space(k.conj().T)


def real_lstsq(basis: Sequence[np.ndarray], target: np.ndarray) -> Tuple[np.ndarray, float]:
    """Real coefficients x minimising ‖Σ x_k basis_k − target‖_F; returns (x, residual norm)."""
    a = real_embed(basis)
    b = real_embed([target])[:, 0]
    x, *_ = sla.lstsq(a, b)
    resid = float(np.linalg.norm(a @ x - b))
    return x, resid
