# sepcert/applications/ppt.py
from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from sepcert.config import Tolerances, resolve
from sepcert.matrix_kernel import is_psd
from sepcert.schmidt.decompose import check_state_dims
from sepcert.utils.common import partial_transpose_second

log = logging.getLogger(__name__)

# PPT is necessary and sufficient for separability only in these dimensions
PPT_EXACT_DIMS = frozenset({(2, 2), (2, 3), (3, 2)})


def partial_transpose(rho, d1: int, d2: int) -> np.ndarray:
    """Transpose on the second tensor factor."""
    return partial_transpose_second(check_state_dims(rho, d1, d2), d1, d2)


def ppt_min_eigenvalue(rho, d1: int, d2: int, tols: Optional[Tolerances] = None) -> float:
    return is_psd(partial_transpose(rho, d1, d2), tols=resolve(tols)).min_eigenvalue


def ppt_check(rho, d1: int, d2: int, tols: Optional[Tolerances] = None) -> bool:
    t = resolve(tols)
    check = is_psd(partial_transpose(rho, d1, d2), tols=t)
    log.debug("ppt_check (%d, %d): λ_min(ρ^Γ) = %.3g", d1, d2, check.min_eigenvalue)
    return check.ok


def ppt_is_conclusive(d1: int, d2: int) -> bool:
    return (d1, d2) in PPT_EXACT_DIMS
