# sepcert/fixtures.py
"""Named instances used by the tests, the CLI examples and the sweep script."""
from __future__ import annotations

from typing import List, Tuple

import numpy as np

from sepcert.applications.channels import channel_from_kraus
from sepcert.models import ChannelRep, MPDOCores
from sepcert.utils.common import kron_all

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PLUS = np.array([[1, 1], [1, 1]], dtype=np.complex128) / 2
MINUS = np.array([[1, -1], [-1, 1]], dtype=np.complex128) / 2


def x_correlated_state() -> np.ndarray:
    """½(I⊗I + X⊗X) = ½(|+,+⟩⟨+,+| + |−,−⟩⟨−,−|)."""
    return (np.kron(I2, I2) + np.kron(X, X)) / 2


def x_correlated_pencil() -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    return I2.copy(), X.copy(), I2.copy(), X.copy()


def ghz_x_state() -> np.ndarray:
    """½(I⊗I⊗I + X⊗X⊗X)."""
    return (kron_all([I2, I2, I2]) + kron_all([X, X, X])) / 2


def ghz_x_mpdo() -> MPDOCores:
    site1 = np.stack([I2, X])[None]  # (1, 2, 2, 2)
    site2 = np.zeros((2, 2, 2, 2), dtype=np.complex128)
    site2[0, 0], site2[1, 1] = I2, X
    site3 = (np.stack([I2, X]) / 2)[:, None]  # (2, 1, 2, 2)
    return MPDOCores([site1, site2, site3], hermitian=True)


def ppt_rank3_pairs() -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Three pairs on C³⊗C² that give a PPT (hence separable) state of operator Schmidt rank 3."""
    p1 = np.eye(3)
    p2 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
    p3 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=float)
    q1 = np.eye(2)
    q2 = np.array([[0.5, 0], [0, 0]])
    q3 = np.array([[0, 0.75], [0.75, 0]])
    return [p.astype(np.complex128) for p in (p1, p2, p3)], [q.astype(np.complex128) for q in (q1, q2, q3)]


def ppt_rank3_state() -> np.ndarray:
    ps, qs = ppt_rank3_pairs()
    return sum(np.kron(p, q) for p, q in zip(ps, qs))


def joint_kernel_pencil() -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Every compression is singular and they are all parallel; e₃ is a joint kernel."""
    A = np.diag([1.0, 0.0, 0.0]).astype(np.complex128)
    B = np.diag([0.0, 1.0, 0.0]).astype(np.complex128)
    return A, B, I2.copy(), I2.copy()


def x_correlated_channel() -> ChannelRep:
    """E(X) = ½(tr(X)·I + tr(σx X)·σx), trace preserving, term rank 2."""
    return ChannelRep(d_in=2, d_out=2, terms=[(I2 / 2, I2), (X / 2, X)])


def depolarizing_channel(d: int = 2) -> ChannelRep:
    eye = np.eye(d, dtype=np.complex128)
    return ChannelRep(d_in=d, d_out=d, terms=[(eye / d, eye)])


def identity_channel(d: int = 2) -> ChannelRep:
    return channel_from_kraus([np.eye(d, dtype=np.complex128)])


def non_cp_map() -> ChannelRep:
    """Choi ∝ ½I⊗I + 2X⊗X has eigenvalue −3/2."""
    return ChannelRep(d_in=2, d_out=2, terms=[(I2 / 2, I2), (2 * X, X)])


def max_entangled_state(d: int = 2) -> np.ndarray:
    psi = np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)
    return np.outer(psi, psi.conj())
