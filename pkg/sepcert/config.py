# sepcert/config.py
from pathlib import Path
from typing import Dict, Literal

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings

# Load local .env for development
load_dotenv(dotenv_path=Path(__file__).parent.parent / ".env")

SCHEMA_VERSION = "1.0"

ProfileName = Literal["default", "strict", "loose"]


class Tolerances(BaseModel):
    """Relative tolerances; each is scaled by max(1, ‖·‖_F) of the matrix it guards."""

    model_config = ConfigDict(frozen=True)

    herm_tol: float = Field(default=1e-10, ge=0.0)
    pd_tol: float = Field(default=1e-9, ge=0.0)
    rank_tol: float = Field(default=1e-9, ge=0.0)
    recon_tol: float = Field(default=1e-9, ge=0.0)
    cert_tol: float = Field(default=1e-8, ge=0.0)


PROFILES: Dict[str, Tolerances] = {
    "default": Tolerances(),
    "strict": Tolerances(herm_tol=1e-12, pd_tol=1e-11, rank_tol=1e-11, recon_tol=1e-11, cert_tol=1e-10),
    "loose": Tolerances(herm_tol=1e-8, pd_tol=1e-7, rank_tol=1e-7, recon_tol=1e-7, cert_tol=1e-6),
}


class Settings(BaseSettings):
    # ─── Tolerance profile ──────────────────────────────────────────────────────
    SEPCERT_TOL_PROFILE: ProfileName = "default"

    # Per-tolerance overrides; unset means "take it from the profile".
    SEPCERT_HERM_TOL: float | None = None
    SEPCERT_PD_TOL: float | None = None
    SEPCERT_RANK_TOL: float | None = None
    SEPCERT_RECON_TOL: float | None = None
    SEPCERT_CERT_TOL: float | None = None

    # ─── Numerics ───────────────────────────────────────────────────────────────
    SEPCERT_DENSE_LIMIT: int = Field(default=256, ge=1)
    SEPCERT_CASE2_EPS: float = Field(default=1e-6, gt=0.0)

    # ─── Logging ────────────────────────────────────────────────────────────────
    SEPCERT_LOG_LEVEL: str = "INFO"

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


# single settings instance for the whole package
settings = Settings()


def _env_overrides() -> Dict[str, float]:
    raw = {
        "herm_tol": settings.SEPCERT_HERM_TOL,
        "pd_tol": settings.SEPCERT_PD_TOL,
        "rank_tol": settings.SEPCERT_RANK_TOL,
        "recon_tol": settings.SEPCERT_RECON_TOL,
        "cert_tol": settings.SEPCERT_CERT_TOL,
    }
    return {k: v for k, v in raw.items() if v is not None}


def get_tolerances(profile: str | None = None, **overrides: float | None) -> Tolerances:
    """
    Active profile, then SEPCERT_*_TOL env overrides, then explicit keyword overrides.
    Keyword overrides equal to None are ignored so CLI flags can be passed straight through.
    """
    name = profile or settings.SEPCERT_TOL_PROFILE
    if name not in PROFILES:
        raise ValueError(f"Unknown tolerance profile {name!r} (use one of {sorted(PROFILES)})")
    merged = PROFILES[name].model_dump()
    merged.update(_env_overrides())
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return Tolerances(**merged)


def resolve(tols: Tolerances | None) -> Tolerances:
    return tols if tols is not None else get_tolerances()


