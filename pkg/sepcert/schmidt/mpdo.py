# sepcert/schmidt/mpdo.py
"""
Matrix-product form of multipartite operators.

Cores are stored as (D_left, D_right, d, d); site l contributes
``cores[l][a, b]`` for left bond index a and right bond index b.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np

from sepcert.config import Tolerances, resolve, settings
from sepcert.errors import DimensionLimit, DimensionMismatch
from sepcert.matrix_kernel import as_complex, hermitian_part, numerical_rank, svd
from sepcert.models import MPDOCores

log = logging.getLogger(__name__)


def check_dense_limit(dims: Sequence[int]) -> int:
    total = int(np.prod([int(d) for d in dims]))
    limit = settings.SEPCERT_DENSE_LIMIT
    if total > limit:
        raise DimensionLimit(f"total dimension {total} exceeds the dense limit {limit}")
    return total


def dense_from_mpdo(mpdo: MPDOCores) -> np.ndarray:
    check_dense_limit(mpdo.dims)
    acc = mpdo.cores[0][0]  # (D_1, d_1, d_1)
    for core in mpdo.cores[1:]:
        nb, rows, cols = core.shape[1], acc.shape[1] * core.shape[2], acc.shape[2] * core.shape[3]
        acc = np.einsum("aij,abkl->bikjl", acc, core).reshape(nb, rows, cols)
    return acc[0]


def left_environments(cores: Sequence[np.ndarray]) -> np.ndarray:
    """
    Contraction of the given leading cores with the last right bond left open:
    shape (D, Πd, Πd).
    """
    check_dense_limit([c.shape[2] for c in cores])
    acc = cores[0][0]
    for core in cores[1:]:
        nb, rows, cols = core.shape[1], acc.shape[1] * core.shape[2], acc.shape[2] * core.shape[3]
        acc = np.einsum("aij,abkl->bikjl", acc, core).reshape(nb, rows, cols)
    return acc


def mpdo_from_dense(
    rho, dims: Sequence[int], tol: Optional[float] = None, tols: Optional[Tolerances] = None
) -> MPDOCores:
    """Sequential operator Schmidt splits, left to right; each D_l is the rank across cut l."""
    t = resolve(tols)
    tol = t.rank_tol if tol is None else tol
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatch(f"dims must be positive integers, got {dims}")
    total = check_dense_limit(dims)
    arr = as_complex(rho, "state")
    if arr.shape != (total, total):
        raise DimensionMismatch(f"state has shape {arr.shape}, dims {dims} need {total}x{total}")
    n = len(dims)
    if n == 1:
        return MPDOCores([arr.reshape(1, 1, total, total)])

    # (i_1..i_n, j_1..j_n) → (i_1 j_1, …, i_n j_n)
    tensor = arr.reshape(dims + dims)
    order = [ax for l in range(n) for ax in (l, n + l)]
    tensor = tensor.transpose(order)

    cores: List[np.ndarray] = []
    remainder = tensor.reshape(1, -1)
    d_left = 1
    for l in range(n - 1):
        d = dims[l]
        mat = remainder.reshape(d_left * d * d, -1)
        u, s, v = svd(mat)
        r = max(1, numerical_rank(s, tol))
        cores.append(u[:, :r].reshape(d_left, d, d, r).transpose(0, 3, 1, 2))
        remainder = (s[:r, None] * v[:, :r].conj().T)
        d_left = r
    d = dims[-1]
    cores.append(remainder.reshape(d_left, d, d, 1).transpose(0, 3, 1, 2))
    out = MPDOCores(cores)
    log.debug("mpdo_from_dense: dims %s → bond dims %s", dims, out.bond_dims)
    return out


def _compress_bond(left: np.ndarray, right: np.ndarray, tol: float, real: bool):
    """
    Σ_k X_k ⊗ Y_k over the shared bond k, rewritten with the minimal number of terms.
    With ``real`` the change of basis is real, so Hermitian locals stay Hermitian.
    """
    dl, dk = left.shape[0], left.shape[1]
    x = left.transpose(1, 0, 2, 3).reshape(dk, -1).T  # columns: bond vectors
    if real:
        x = np.concatenate([x.real, x.imag], axis=0)
    u, s, v = svd(x)
    r = max(1, numerical_rank(s, tol))
    if r == dk:
        return left, right, False
    vr = v[:, :r]  # x ≈ (x vr) vr†, real when `real`
    if real:
        vr = vr.real
    new_left = np.einsum("akij,kg->agij", left, vr)
    new_right = np.einsum("kg,kbij->gbij", vr.conj(), right)
    return new_left, new_right, True


def compress_bonds(
    mpdo: MPDOCores, tol: Optional[float] = None, tols: Optional[Tolerances] = None, hermitian: Optional[bool] = None
) -> MPDOCores:
    """
    Drop redundant bond indices until both sides of every bond are independent.
    Hermitian inputs are compressed with real changes of basis only.
    """
    t = resolve(tols)
    tol = t.rank_tol if tol is None else tol
    real = mpdo.hermitian if hermitian is None else hermitian
    cores = [c.copy() for c in mpdo.cores]
    n = len(cores)
    changed = True
    sweeps = 0
    while changed and sweeps < 4 * n + 4:
        changed = False
        sweeps += 1
        for l in range(n - 1):
            cores[l], cores[l + 1], c1 = _compress_bond(cores[l], cores[l + 1], tol, real)
            # mirror: compress the right-hand bond vectors into the left core
            right_t = cores[l + 1].transpose(1, 0, 2, 3)
            left_t = cores[l].transpose(1, 0, 2, 3)
            right_t, left_t, c2 = _compress_bond(right_t, left_t, tol, real)
            cores[l + 1], cores[l] = right_t.transpose(1, 0, 2, 3), left_t.transpose(1, 0, 2, 3)
            changed = changed or c1 or c2
    if real:
        cores = [np.stack([[hermitian_part(c[a, b]) for b in range(c.shape[1])] for a in range(c.shape[0])]) for c in cores]
    out = MPDOCores(cores, hermitian=mpdo.hermitian)
    if out.bond_dims != mpdo.bond_dims:
        log.debug("compress_bonds: %s → %s", mpdo.bond_dims, out.bond_dims)
    return out


def compress_hermitian_bonds(mpdo: MPDOCores, tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> MPDOCores:
    out = compress_bonds(mpdo, tol=tol, tols=tols, hermitian=True)
    out.hermitian = True
    return out


def product_mpdo(locals_: Sequence[np.ndarray]) -> MPDOCores:
    """Bond-1 MPDO of σ_1 ⊗ … ⊗ σ_n."""
    return MPDOCores([as_complex(m)[None, None] for m in locals_])


def cores_hermitian(mpdo: MPDOCores, tols: Optional[Tolerances] = None) -> bool:
    t = resolve(tols)
    for core in mpdo.cores:
        for a in range(core.shape[0]):
            for b in range(core.shape[1]):
                m = core[a, b]
                if np.linalg.norm(m - m.conj().T) > t.herm_tol * max(1.0, float(np.linalg.norm(m))):
                    return False
    return True
