from __future__ import annotations

import itertools
import logging
from datetime import datetime, timezone
from functools import reduce
from typing import Iterable, List, Sequence

import numpy as np

# ─────────────────────────────
# Time & logging helpers
# ─────────────────────────────
LOG_FORMAT = "%(asctime)s %(levelname)s sepcert: %(message)s"


def now_utc_iso() -> str:
    return datetime.now(tz=timezone.utc).replace(microsecond=0).isoformat()


def configure_logging(level: str | int = "INFO") -> None:
    """Entry points only; library modules never touch handlers."""
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


# ─────────────────────────────
# Tensor helpers
# ─────────────────────────────
def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def partial_transpose_second(rho: np.ndarray, d1: int, d2: int) -> np.ndarray:
    t = np.asarray(rho).reshape(d1, d2, d1, d2)
    return t.transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)


def partial_trace_first(rho: np.ndarray, d1: int, d2: int) -> np.ndarray:
    return np.einsum("ikil->kl", np.asarray(rho).reshape(d1, d2, d1, d2))


def partial_trace_second(rho: np.ndarray, d1: int, d2: int) -> np.ndarray:
    return np.einsum("ikjk->ij", np.asarray(rho).reshape(d1, d2, d1, d2))


def bond_patterns(bond_dims: Sequence[int]) -> List[tuple]:
    """All bond index assignments (α_1, …, α_{n−1}) in row-major order."""
    return list(itertools.product(*(range(b) for b in bond_dims)))


def relative_residual(target: np.ndarray, approx: np.ndarray) -> float:
    return float(np.linalg.norm(target - approx)) / max(1.0, float(np.linalg.norm(target)))


def parse_dims(raw: str | None) -> List[int] | None:
    """'2,3' → [2, 3]; None passes through."""
    if raw is None:
        return None
    return [int(x) for x in raw.replace("x", ",").split(",") if x.strip()]
