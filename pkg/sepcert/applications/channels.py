# sepcert/applications/channels.py
"""
Channels in term form E(X) = Σ_α P_α tr(Q_αᵗ X).

The Choi matrix lives on C^{d_out} ⊗ C^{d_in}; a channel whose Choi matrix
has operator Schmidt rank ≤ 2 is entanglement breaking whenever it is
completely positive, trace preserving or not.
"""
from __future__ import annotations

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from sepcert.config import Tolerances, resolve
from sepcert.errors import ChoiNotPSD, DimensionMismatch
from sepcert.matrix_kernel import as_complex, frob_scale, is_psd
from sepcert.models import ChannelRep, EBVerdict, SepCertificate
from sepcert.schmidt.decompose import operator_schmidt
from sepcert.separator.bipartite import separate_bipartite
from sepcert.utils.common import partial_trace_first

log = logging.getLogger(__name__)


def choi_from_channel(ch: ChannelRep) -> np.ndarray:
    """(1/√(d_out·d_in)) Σ_α P_α ⊗ Q_α."""
    norm = 1.0 / math.sqrt(ch.d_out * ch.d_in)
    return norm * sum(np.kron(p, q) for p, q in ch.terms)


def channel_from_kraus(kraus: Sequence[np.ndarray]) -> ChannelRep:
    """E(X) = Σ_K K X K†, rewritten with P_{jk} = Σ_K K|j⟩⟨k|K† and Q_{jk} = |j⟩⟨k|."""
    ks = [as_complex(k, "Kraus operator") for k in kraus]
    if not ks:
        raise DimensionMismatch("need at least one Kraus operator")
    d_out, d_in = ks[0].shape
    if any(k.shape != (d_out, d_in) for k in ks):
        raise DimensionMismatch("Kraus operators must share one shape")
    terms = []
    for j in range(d_in):
        for k in range(d_in):
            unit = np.zeros((d_in, d_in), dtype=np.complex128)
            unit[j, k] = 1.0
            p = sum(K @ unit @ K.conj().T for K in ks)
            terms.append((p, unit))
    return ChannelRep(d_in=d_in, d_out=d_out, terms=terms)


def minimal_channel(ch: ChannelRep, tols: Optional[Tolerances] = None) -> ChannelRep:
    """Same map with the fewest terms (operator Schmidt decomposition of Σ P_α⊗Q_α)."""
    dec = operator_schmidt(sum(np.kron(p, q) for p, q in ch.terms), ch.d_out, ch.d_in, tols=tols)
    return ChannelRep(ch.d_in, ch.d_out, list(zip(dec.left, dec.right)), minimal=True)


def is_trace_preserving(ch: ChannelRep, tol: Optional[float] = None, tols: Optional[Tolerances] = None) -> bool:
    """Σ_α tr(P_α) Q_α = I."""
    tol = resolve(tols).recon_tol if tol is None else tol
    total = sum(np.trace(p) * q for p, q in ch.terms)
    return float(np.linalg.norm(total - np.eye(ch.d_in))) <= tol * frob_scale(total)


def choi_marginal(ch: ChannelRep) -> np.ndarray:
    """tr₁ of the Choi matrix; I/√(d_out·d_in) for trace-preserving channels."""
    return partial_trace_first(choi_from_channel(ch), ch.d_out, ch.d_in)


def eb_check_rank2(
    ch: ChannelRep, tols: Optional[Tolerances] = None
) -> Tuple[EBVerdict, Optional[SepCertificate]]:
    t = resolve(tols)
    choi = choi_from_channel(ch)
    check = is_psd(choi, tols=t)
    if not check.ok:
        raise ChoiNotPSD(
            f"Choi matrix has λ_min {check.min_eigenvalue:.6g}; the map is not completely positive", check.min_eigenvalue
        )
    rank = minimal_channel(ch, t).terms
    log.info("eb_check_rank2: d_in %d, d_out %d, term rank %d", ch.d_in, ch.d_out, len(rank))
    if len(rank) > 2:
        return EBVerdict.UNKNOWN, None
    cert = separate_bipartite(choi, ch.d_out, ch.d_in, t)
    return EBVerdict.EB, cert


def ep_bound(cert: SepCertificate) -> float:
    """log_{d₁}(number of terms): an upper bound on the entanglement of purification."""
    if len(cert.decomposition.dims) != 2:
        raise DimensionMismatch(f"ep_bound needs a bipartite certificate, got {len(cert.decomposition.dims)} sites")
    d1 = cert.decomposition.dims[0]
    terms = cert.n_terms
    if d1 <= 1 or terms <= 1:
        return 0.0
    return math.log(terms) / math.log(d1)
