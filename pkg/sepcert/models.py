# sepcert/models.py
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from sepcert.config import Tolerances
from sepcert.errors import DimensionMismatch, NonFiniteInput

# ──────────────────────────────────────────────────────────────────────────────
# Numerical carriers (dataclasses holding numpy arrays)
# ──────────────────────────────────────────────────────────────────────────────


def _square(m: np.ndarray, dim: Optional[int] = None, what: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{what} must be square, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch(f"{what} must be {dim}x{dim}, got {arr.shape[0]}x{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{what} has NaN/Inf entries")
    return arr


class PsdCheck(NamedTuple):
    ok: bool
    min_eigenvalue: float


@dataclass(frozen=True)
class EigSystem:
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # orthonormal columns


@dataclass
class PairDecomposition:
    """rho = Σ_α left[α] ⊗ right[α] on C^{d1} ⊗ C^{d2}."""

    d1: int
    d2: int
    left: List[np.ndarray]
    right: List[np.ndarray]
    independent: bool = False

    def __post_init__(self):
        if not self.left:
            raise DimensionMismatch("PairDecomposition needs at least one pair")
        if len(self.left) != len(self.right):
            raise DimensionMismatch(f"{len(self.left)} left factors but {len(self.right)} right factors")
        self.left = [_square(a, self.d1, "left factor") for a in self.left]
        self.right = [_square(b, self.d2, "right factor") for b in self.right]

    @property
    def p(self) -> int:
        return len(self.left)

    @property
    def pairs(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.left, self.right))

    def to_mpdo(self, hermitian: bool = False) -> "MPDOCores":
        p = self.p
        site1 = np.stack(self.left).reshape(1, p, self.d1, self.d1)
        site2 = np.stack(self.right).reshape(p, 1, self.d2, self.d2)
        return MPDOCores(cores=[site1, site2], hermitian=hermitian)


@dataclass
class MPDOCores:
    """
    Matrix product operator, one core per site.
    Core l has shape (D_{l-1}, D_l, d_l, d_l) with D_0 = D_n = 1, so
    cores[l][a, b] is the local matrix A^[l]_{a,b}.
    """

    cores: List[np.ndarray]
    hermitian: bool = False

    def __post_init__(self):
        if not self.cores:
            raise DimensionMismatch("MPDOCores needs at least one site")
        cleaned: List[np.ndarray] = []
        for l, core in enumerate(self.cores):
            arr = np.asarray(core, dtype=np.complex128)
            if arr.ndim != 4 or arr.shape[2] != arr.shape[3]:
                raise DimensionMismatch(f"core {l} must have shape (Dl, Dr, d, d), got {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise NonFiniteInput(f"core {l} has NaN/Inf entries")
            cleaned.append(arr)
        if cleaned[0].shape[0] != 1 or cleaned[-1].shape[1] != 1:
            raise DimensionMismatch("outer bond dimensions must be 1")
        for l in range(len(cleaned) - 1):
            if cleaned[l].shape[1] != cleaned[l + 1].shape[0]:
                raise DimensionMismatch(
                    f"bond {l + 1}: core {l} has right dim {cleaned[l].shape[1]}, "
                    f"core {l + 1} has left dim {cleaned[l + 1].shape[0]}"
                )
        self.cores = cleaned

    @property
    def n(self) -> int:
        return len(self.cores)

    @property
    def dims(self) -> List[int]:
        return [int(c.shape[2]) for c in self.cores]

    @property
    def bond_dims(self) -> List[int]:
        return [int(c.shape[1]) for c in self.cores[:-1]]

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def local(self, site: int, a: int, b: int) -> np.ndarray:
        return self.cores[site][a, b]

    def site_family(self, site: int) -> List[np.ndarray]:
        core = self.cores[site]
        return [core[a, b] for a in range(core.shape[0]) for b in range(core.shape[1])]

    def pairs(self) -> PairDecomposition:
        if self.n != 2:
            raise DimensionMismatch(f"pairs() needs a two-site MPDO, got n={self.n}")
        p = self.bond_dims[0]
        left = [self.cores[0][0, a] for a in range(p)]
        right = [self.cores[1][a, 0] for a in range(p)]
        return PairDecomposition(self.dims[0], self.dims[1], left, right)

    def copy(self) -> "MPDOCores":
        return MPDOCores([c.copy() for c in self.cores], hermitian=self.hermitian)


class ConeKind(str, Enum):
    SIMPLEX = "Simplex"
    SINGLE_RAY = "SingleRay"
    ZERO = "Zero"


@dataclass
class Cone2:
    kind: ConeKind
    rays: List[np.ndarray]
    case: str = ""
    index: Optional[int] = None
    epsilon: Optional[float] = None
    kernel_dim: int = 0

    def __post_init__(self):
        expected = {ConeKind.SIMPLEX: 2, ConeKind.SINGLE_RAY: 1, ConeKind.ZERO: 0}[self.kind]
        if len(self.rays) != expected:
            raise ValueError(f"{self.kind.value} cone needs {expected} rays, got {len(self.rays)}")

    def metadata(self, site: Optional[int] = None, branches: int = 1) -> "ConeMetadata":
        return ConeMetadata(
            kind=self.kind.value,
            case=self.case,
            index=self.index,
            rays=[[float(x) for x in r] for r in self.rays],
            epsilon=self.epsilon,
            kernel_dim=self.kernel_dim,
            site=site,
            branches=branches,
        )


@dataclass
class SepCertificate:
    decomposition: MPDOCores
    residual: float
    min_factor_eig: float
    tolerances: Tolerances
    cone_metadata: List["ConeMetadata"] = field(default_factory=list)

    @property
    def n_terms(self) -> int:
        return int(np.prod(self.decomposition.bond_dims)) if self.decomposition.n > 1 else 1

    @property
    def is_bipartite(self) -> bool:
        return self.decomposition.n == 2


@dataclass
class CminWitness:
    vectors: List[np.ndarray]
    psd_matrices: List[np.ndarray]
    target: Tuple[np.ndarray, np.ndarray]


@dataclass
class ChannelRep:
    """E(X) = Σ_α P_α tr(Q_αᵗ X), E: M_{d_in} → M_{d_out}."""

    d_in: int
    d_out: int
    terms: List[Tuple[np.ndarray, np.ndarray]]
    minimal: bool = False

    def __post_init__(self):
        if not self.terms:
            raise DimensionMismatch("ChannelRep needs at least one term")
        self.terms = [
            (_square(p, self.d_out, "channel P factor"), _square(q, self.d_in, "channel Q factor"))
            for p, q in self.terms
        ]

    def __add__(self, other: "ChannelRep") -> "ChannelRep":
        if (self.d_in, self.d_out) != (other.d_in, other.d_out):
            raise DimensionMismatch("cannot add channels with different dimensions")
        return ChannelRep(self.d_in, self.d_out, list(self.terms) + list(other.terms))

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = _square(x, self.d_in, "channel input")
        return sum(p * np.trace(q.T @ x) for p, q in self.terms)


@dataclass
class NonnegMatrix:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise DimensionMismatch(f"nonnegative matrix must be 2-D and nonempty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInput("nonnegative matrix has NaN/Inf entries")
        if np.any(arr < 0):
            raise ValueError(f"nonnegative matrix has negative entries (min {arr.min():.3g})")
        self.entries = arr

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])


# ──────────────────────────────────────────────────────────────────────────────
# Serialisable records and reports (pydantic)
# ──────────────────────────────────────────────────────────────────────────────


class ConeMetadata(BaseModel):
    kind: str
    case: str = ""
    index: Optional[int] = None
    rays: List[List[float]] = Field(default_factory=list)
    epsilon: Optional[float] = None
    kernel_dim: int = 0
    site: Optional[int] = None  # multipartite: the site split off at this induction level
    branches: int = 1  # number of branch states that shared these rays


class VerificationReport(BaseModel):
    passed: bool
    residual: float
    min_factor_eig: float
    residual_ok: bool
    factors_ok: bool
    failures: List[str] = Field(default_factory=list)


class RankChecks(BaseModel):
    product_iff_sep1: Optional[bool] = None
    osr_le_sep: Optional[bool] = None
    osr_le_sep_squared: Optional[bool] = None
    osr_le_hosr: Optional[bool] = None


class RankReport(BaseModel):
    dims: List[int]
    osr: List[int]  # one entry per cut
    hosr_upper: Optional[List[int]] = None
    sep_rank: Optional[int] = None  # None means "unknown"
    separable: Optional[bool] = None
    checks: RankChecks = Field(default_factory=RankChecks)
    notes: List[str] = Field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(v is not False for v in self.checks.model_dump().values())


class EBVerdict(str, Enum):
    EB = "EB"
    UNKNOWN = "Unknown"


class FactorReport(BaseModel):
    """Per-term summary used by CLI printing."""

    term: int
    trace: float
    min_eig: float


Payload = List[List[float]]
Metadata = Dict[str, str]
