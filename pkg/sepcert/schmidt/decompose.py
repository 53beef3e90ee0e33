# sepcert/schmidt/decompose.py
from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np

from sepcert.config import Tolerances, resolve
from sepcert.errors import DimensionMismatch
from sepcert.matrix_kernel import as_complex, numerical_rank, svd
from sepcert.models import PairDecomposition

log = logging.getLogger(__name__)


def check_state_dims(rho: np.ndarray, d1: int, d2: int) -> np.ndarray:
    arr = as_complex(rho, "state")
    if d1 < 1 or d2 < 1:
        raise DimensionMismatch(f"local dimensions must be positive, got ({d1}, {d2})")
    if arr.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"state has shape {arr.shape}, expected {d1 * d2}x{d1 * d2} for dims ({d1}, {d2})")
    return arr


def realign(rho, d1: int, d2: int) -> np.ndarray:
    """
    Reshuffle ⟨i,k|ρ|j,l⟩ into row (i·d1 + j), column (k·d2 + l).
    A⊗B maps to vec(A) vec(B)ᵀ, so the rank is the operator Schmidt rank.
    """
    arr = check_state_dims(rho, d1, d2)
    return arr.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)


def unrealign(r: np.ndarray, d1: int, d2: int) -> np.ndarray:
    r = np.asarray(r)
    if r.shape != (d1 * d1, d2 * d2):
        raise DimensionMismatch(f"realigned matrix has shape {r.shape}, expected ({d1 * d1}, {d2 * d2})")
    return r.reshape(d1, d1, d2, d2).transpose(0, 2, 1, 3).reshape(d1 * d2, d1 * d2)


def operator_schmidt(rho, d1: int, d2: int, tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> PairDecomposition:
    """
    rho = Σ_α A_α ⊗ B_α with p = numerical rank of the realigned matrix.
    √s_α goes to both sides; the A_α (and the B_α) are Hilbert–Schmidt orthogonal.
    """
    t = resolve(tols)
    tol = t.rank_tol if tol is None else tol
    u, s, v = svd(realign(rho, d1, d2))
    p = max(1, numerical_rank(s, tol))
    root = np.sqrt(s[:p])
    left = [(root[a] * u[:, a]).reshape(d1, d1) for a in range(p)]
    right = [(root[a] * v[:, a].conj()).reshape(d2, d2) for a in range(p)]
    log.debug("operator_schmidt: dims (%d, %d) → osr %d, singular values %s", d1, d2, p, np.round(s[: p + 1], 12))
    return PairDecomposition(d1, d2, left, right, independent=bool(s[0] > 0))


def osr(rho, d1: int, d2: int, tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> int:
    t = resolve(tols)
    tol = t.rank_tol if tol is None else tol
    _, s, _ = svd(realign(rho, d1, d2))
    return numerical_rank(s, tol)


def osr_across_cuts(rho, dims: Sequence[int], tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> List[int]:
    """Operator Schmidt rank of every cut (sites 1..l | l+1..n)."""
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    arr = as_complex(rho, "state")
    if arr.shape != (total, total):
        raise DimensionMismatch(f"state has shape {arr.shape}, dims {dims} need {total}x{total}")
    ranks = []
    for cut in range(1, len(dims)):
        left = int(np.prod(dims[:cut]))
        ranks.append(osr(arr, left, total // left, tol=tol, tols=tols))
    return ranks


def reconstruct(dec: PairDecomposition) -> np.ndarray:
    return sum(np.kron(a, b) for a, b in dec.pairs)
