# sepcert/errors.py
from __future__ import annotations


class SepCertError(Exception):
    """Root of every error raised by sepcert."""


# ─────────────────────────────
# Input / shape problems
# ─────────────────────────────
class DimensionMismatch(SepCertError, ValueError):
    pass


class DimensionLimit(SepCertError, ValueError):
    pass


class EmptyList(SepCertError, ValueError):
    pass


class SchemaError(SepCertError, ValueError):
    """Malformed or unrecognised state file."""


# ─────────────────────────────
# Matrix-kernel failures
# ─────────────────────────────
class NonHermitianInput(SepCertError, ValueError):
    pass


class NotPositiveDefinite(SepCertError, ValueError):
    pass


class ConvergenceFailure(SepCertError, RuntimeError):
    pass


# ─────────────────────────────
# Decomposition preconditions
# ─────────────────────────────
class NotHermitianSum(SepCertError, ValueError):
    pass


class DependentFactors(SepCertError, ValueError):
    pass


class NotHermitianCores(SepCertError, ValueError):
    pass


class NotPSDInput(SepCertError, ValueError):
    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class RankTooHigh(SepCertError, ValueError):
    def __init__(self, osr: int, message: str | None = None):
        super().__init__(message or f"operator Schmidt rank {osr} unsupported")
        self.osr = osr


class RankNotTwo(SepCertError, ValueError):
    def __init__(self, rank: int):
        super().__init__(f"nonnegative matrix has rank {rank}, need exactly 2")
        self.rank = rank


# ─────────────────────────────
# Cone / construction failures
# ─────────────────────────────
class CompressionNotPSD(SepCertError, ValueError):
    pass


class DependentPencil(SepCertError, ValueError):
    pass


class DegenerateInput(SepCertError, ValueError):
    pass


class DependentRays(SepCertError, ValueError):
    pass


class HNotPSD(SepCertError, RuntimeError):
    pass


class ConeFailure(SepCertError, RuntimeError):
    pass


class CertificateFailure(SepCertError, RuntimeError):
    pass


class FactorsOutsideSpan(SepCertError, ValueError):
    pass


class OffDiagonalLeak(SepCertError, RuntimeError):
    pass


class ChoiNotPSD(SepCertError, ValueError):
    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NonFiniteInput(SepCertError, ValueError):
    pass
