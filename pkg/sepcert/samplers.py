# sepcert/samplers.py
"""
Seeded random instances. Every generator takes a ``numpy.random.Generator``
so tests and sweeps are reproducible.
"""
from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from sepcert.applications.ppt import ppt_check
from sepcert.models import MPDOCores, NonnegMatrix


def ginibre(rng: np.random.Generator, rows: int, cols: Optional[int] = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = ginibre(rng, d)
    return (g + g.conj().T) / 2


def random_psd(rng: np.random.Generator, d: int, rank: Optional[int] = None) -> np.ndarray:
    g = ginibre(rng, d, d if rank is None else rank)
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_pd(rng: np.random.Generator, d: int) -> np.ndarray:
    return random_psd(rng, d) + 0.1 * np.eye(d) / d


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_sep2_state(rng: np.random.Generator, d1: int, d2: int) -> np.ndarray:
    """Σ² PSD⊗PSD with random local ranks (operator Schmidt rank 2 almost surely)."""
    rho = np.zeros((d1 * d2, d1 * d2), dtype=np.complex128)
    for _ in range(2):
        r1, r2 = int(rng.integers(1, d1 + 1)), int(rng.integers(1, d2 + 1))
        rho += rng.uniform(0.2, 1.0) * np.kron(random_psd(rng, d1, r1), random_psd(rng, d2, r2))
    return rho


def random_pencil_state(rng: np.random.Generator, d1: int, d2: int, max_tries: int = 200) -> np.ndarray:
    """
    ρ = A⊗C + s·B⊗D with Hermitian B, D and s drawn until ρ is PSD.
    The accepted draws sit close to the PSD boundary.
    """
    for _ in range(max_tries):
        A, C = random_pd(rng, d1), random_pd(rng, d2)
        B, D = random_hermitian(rng, d1), random_hermitian(rng, d2)
        room = np.linalg.eigvalsh(A)[0] * np.linalg.eigvalsh(C)[0] / (np.linalg.norm(B, 2) * np.linalg.norm(D, 2))
        s = room * rng.uniform(0.5, 4.0)
        rho = np.kron(A, C) + s * np.kron(B, D)
        if np.linalg.eigvalsh(rho)[0] >= 1e-9 * np.linalg.norm(rho):
            return rho
    raise RuntimeError(f"no PSD pencil state after {max_tries} draws")


def random_sep_state(rng: np.random.Generator, d1: int, d2: int, terms: int) -> np.ndarray:
    return sum(np.kron(random_psd(rng, d1), random_psd(rng, d2)) for _ in range(terms))


def random_separable_chain(rng: np.random.Generator, dims: Sequence[int], bond: int = 2) -> MPDOCores:
    """Bond-``bond`` chain whose local matrices are all PSD."""
    n = len(dims)
    cores = []
    for l, d in enumerate(dims):
        dl = 1 if l == 0 else bond
        dr = 1 if l == n - 1 else bond
        core = np.zeros((dl, dr, d, d), dtype=np.complex128)
        for a in range(dl):
            for b in range(dr):
                core[a, b] = random_psd(rng, d, int(rng.integers(1, d + 1)))
        cores.append(core)
    return MPDOCores(cores, hermitian=True)


def gauge_scramble(rng: np.random.Generator, mpdo: MPDOCores, complex_gauge: bool = False) -> MPDOCores:
    """Insert G·G⁻¹ on every bond. A real gauge keeps the cores Hermitian, a complex one does not."""
    cores = [c.copy() for c in mpdo.cores]
    for l in range(len(cores) - 1):
        k = cores[l].shape[1]
        g = rng.normal(size=(k, k)) + (1j * rng.normal(size=(k, k)) if complex_gauge else 0) + 2 * np.eye(k)
        ginv = np.linalg.inv(g)
        cores[l] = np.einsum("akij,kg->agij", cores[l], g)
        cores[l + 1] = np.einsum("gk,kbij->gbij", ginv, cores[l + 1])
    return MPDOCores(cores, hermitian=not complex_gauge and mpdo.hermitian)


def dependent_family_chain(rng: np.random.Generator, d: int = 2) -> MPDOCores:
    """Three sites, bond 2, interior site [[P, Q], [Q, P]] so its family is dependent."""
    base = random_separable_chain(rng, [d, d, d])
    p, q = random_psd(rng, d), random_psd(rng, d)
    mid = np.stack([np.stack([p, q]), np.stack([q, p])])
    return MPDOCores([base.cores[0], mid, base.cores[2]], hermitian=True)


def random_rank_k_nonneg(rng: np.random.Generator, rows: int, cols: int, k: int) -> NonnegMatrix:
    w = rng.uniform(0, 1, size=(rows, k))
    h = rng.uniform(0, 1, size=(k, cols))
    return NonnegMatrix(w @ h)


def random_entangled_two_qubit(rng: np.random.Generator, max_tries: int = 1000) -> np.ndarray:
    """Mixed two-qubit state drawn until it fails the PPT test."""
    for _ in range(max_tries):
        g = ginibre(rng, 4, int(rng.integers(1, 3)))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        if not ppt_check(rho, 2, 2):
            return rho
    raise RuntimeError(f"no PPT-violating state after {max_tries} draws")


def random_osr_k_state(rng: np.random.Generator, d1: int, d2: int, k: int) -> np.ndarray:
    return random_sep_state(rng, d1, d2, k)


def seeds(n: int, base: int = 0) -> List[int]:
    return list(range(base, base + n))
