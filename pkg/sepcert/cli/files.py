# sepcert/cli/files.py
"""
JSON file format shared by every CLI command.

Complex entries are stored as [re, im] pairs so files stay diffable.
Payload layouts per kind:
  dense_state    row-major entries of the D×D matrix
  mpdo           per site, per (left, right) bond pair row-major, the d×d local matrix row-major
  certificate    same as mpdo, plus the ``certificate`` block
  channel        per term P_α (d_out²) then Q_α (d_in²); dims = [d_in, d_out]
  nonneg_matrix  entries row-major as [x, 0]
"""
from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from sepcert.config import SCHEMA_VERSION, Tolerances
from sepcert.errors import DimensionMismatch, SchemaError
from sepcert.models import ChannelRep, ConeMetadata, MPDOCores, NonnegMatrix, SepCertificate
from sepcert.schmidt.mpdo import check_dense_limit, dense_from_mpdo
from sepcert.utils.common import now_utc_iso

log = logging.getLogger(__name__)

SUPPORTED_VERSIONS = frozenset({SCHEMA_VERSION})

Kind = Literal["dense_state", "mpdo", "channel", "nonneg_matrix", "certificate"]

# metadata keys ignored when comparing files for determinism
VOLATILE_METADATA = frozenset({"created_at"})


class CertificateInfo(BaseModel):
    residual: float
    min_factor_eig: float
    tolerances: Tolerances
    cone_metadata: List[ConeMetadata] = Field(default_factory=list)


class StateFile(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Kind
    dims: List[int]
    payload: List[List[float]]
    metadata: Dict[str, str] = Field(default_factory=dict)
    bond_dims: Optional[List[int]] = None
    certificate: Optional[CertificateInfo] = None

    @field_validator("schema_version")
    @classmethod
    def _known_version(cls, v: str) -> str:
        if v not in SUPPORTED_VERSIONS:
            raise ValueError(f"unsupported schema_version {v!r} (known: {sorted(SUPPORTED_VERSIONS)})")
        return v

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, v: List[int]) -> List[int]:
        if not v or any(d < 1 for d in v):
            raise ValueError(f"dims must be a nonempty list of positive integers, got {v}")
        return v

    @field_validator("payload")
    @classmethod
    def _pairs(cls, v: List[List[float]]) -> List[List[float]]:
        for k, entry in enumerate(v):
            if len(entry) != 2:
                raise ValueError(f"payload entry {k} must be [re, im], got {entry}")
            if not all(math.isfinite(x) for x in entry):
                raise ValueError(f"payload entry {k} is not finite")
        return v

    @model_validator(mode="after")
    def _consistent(self) -> "StateFile":
        expected = self.expected_length()
        if expected is not None and len(self.payload) != expected:
            raise ValueError(f"{self.kind} payload has {len(self.payload)} entries, dims {self.dims} need {expected}")
        if self.kind == "certificate" and self.certificate is None:
            raise ValueError("certificate files need a certificate block")
        return self

    def expected_length(self) -> Optional[int]:
        """Payload length implied by dims (None for channels, whose term count is free)."""
        if self.kind == "dense_state":
            return int(np.prod(self.dims)) ** 2
        if self.kind == "nonneg_matrix":
            if len(self.dims) != 2:
                raise ValueError("nonneg_matrix dims must be [rows, cols]")
            return self.dims[0] * self.dims[1]
        if self.kind == "channel":
            if len(self.dims) != 2:
                raise ValueError("channel dims must be [d_in, d_out]")
            d_in, d_out = self.dims
            block = d_out * d_out + d_in * d_in
            if not self.payload or len(self.payload) % block:
                raise ValueError(f"channel payload length {len(self.payload)} is not a positive multiple of {block}")
            return None
        # mpdo / certificate
        if self.bond_dims is None or len(self.bond_dims) != len(self.dims) - 1:
            raise ValueError(f"{self.kind} needs bond_dims with {len(self.dims) - 1} entries")
        bonds = [1] + list(self.bond_dims) + [1]
        return sum(bonds[l] * bonds[l + 1] * d * d for l, d in enumerate(self.dims))


# ── payload codec ─────────────────────────────────────────────────────────────
def encode_payload(arrays: Sequence[np.ndarray]) -> List[List[float]]:
    flat = np.concatenate([np.asarray(a, dtype=np.complex128).reshape(-1) for a in arrays])
    return [[float(z.real), float(z.imag)] for z in flat]


def decode_payload(payload: List[List[float]]) -> np.ndarray:
    arr = np.asarray(payload, dtype=float).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


def _metadata(tols: Optional[Tolerances], extra: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    meta = {"created_at": now_utc_iso()}
    if tols is not None:
        meta["tolerances"] = tols.model_dump_json()
    meta.update(extra or {})
    return meta


# ── encoders ──────────────────────────────────────────────────────────────────
def dense_to_file(rho: np.ndarray, dims: Sequence[int], tols: Optional[Tolerances] = None, **extra: str) -> StateFile:
    dims = [int(d) for d in dims]
    dim = int(np.prod(dims))
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (dim, dim):
        raise DimensionMismatch(f"matrix shape {rho.shape} does not match dims {dims}")
    return StateFile(kind="dense_state", dims=dims, payload=encode_payload([rho]), metadata=_metadata(tols, extra))


def mpdo_to_file(mpdo: MPDOCores, tols: Optional[Tolerances] = None, **extra: str) -> StateFile:
    return StateFile(
        kind="mpdo",
        dims=mpdo.dims,
        bond_dims=mpdo.bond_dims,
        payload=encode_payload(mpdo.cores),
        metadata=_metadata(tols, {"hermitian": str(mpdo.hermitian).lower(), **extra}),
    )


def certificate_to_file(cert: SepCertificate, **extra: str) -> StateFile:
    mpdo = cert.decomposition
    info = CertificateInfo(
        residual=cert.residual,
        min_factor_eig=cert.min_factor_eig,
        tolerances=cert.tolerances,
        cone_metadata=cert.cone_metadata,
    )
    return StateFile(
        kind="certificate",
        dims=mpdo.dims,
        bond_dims=mpdo.bond_dims,
        payload=encode_payload(mpdo.cores),
        metadata=_metadata(cert.tolerances, extra),
        certificate=info,
    )


def channel_to_file(ch: ChannelRep, tols: Optional[Tolerances] = None, **extra: str) -> StateFile:
    arrays = [m for p, q in ch.terms for m in (p, q)]
    return StateFile(
        kind="channel", dims=[ch.d_in, ch.d_out], payload=encode_payload(arrays), metadata=_metadata(tols, extra)
    )


def nonneg_to_file(m: NonnegMatrix, **extra: str) -> StateFile:
    return StateFile(
        kind="nonneg_matrix", dims=[m.rows, m.cols], payload=encode_payload([m.entries]), metadata=_metadata(None, extra)
    )


# ── decoders ──────────────────────────────────────────────────────────────────
def _require_kind(sf: StateFile, *kinds: str) -> None:
    if sf.kind not in kinds:
        raise SchemaError(f"expected a {' or '.join(kinds)} file, got kind {sf.kind!r}")


def dense_from_file(sf: StateFile) -> np.ndarray:
    _require_kind(sf, "dense_state")
    dim = int(np.prod(sf.dims))
    return decode_payload(sf.payload).reshape(dim, dim)


def mpdo_from_file(sf: StateFile) -> MPDOCores:
    _require_kind(sf, "mpdo", "certificate")
    flat = decode_payload(sf.payload)
    bonds = [1] + list(sf.bond_dims or []) + [1]
    cores, pos = [], 0
    for l, d in enumerate(sf.dims):
        shape = (bonds[l], bonds[l + 1], d, d)
        size = int(np.prod(shape))
        cores.append(flat[pos : pos + size].reshape(shape))
        pos += size
    hermitian = sf.kind == "certificate" or sf.metadata.get("hermitian") == "true"
    return MPDOCores(cores, hermitian=hermitian)


def certificate_from_file(sf: StateFile) -> SepCertificate:
    _require_kind(sf, "certificate")
    info = sf.certificate
    return SepCertificate(
        decomposition=mpdo_from_file(sf),
        residual=info.residual,
        min_factor_eig=info.min_factor_eig,
        tolerances=info.tolerances,
        cone_metadata=list(info.cone_metadata),
    )


def channel_from_file(sf: StateFile) -> ChannelRep:
    _require_kind(sf, "channel")
    d_in, d_out = sf.dims
    flat = decode_payload(sf.payload)
    block = d_out * d_out + d_in * d_in
    terms = []
    for start in range(0, len(flat), block):
        p = flat[start : start + d_out * d_out].reshape(d_out, d_out)
        q = flat[start + d_out * d_out : start + block].reshape(d_in, d_in)
        terms.append((p, q))
    return ChannelRep(d_in=d_in, d_out=d_out, terms=terms)


def nonneg_from_file(sf: StateFile) -> NonnegMatrix:
    _require_kind(sf, "nonneg_matrix")
    flat = decode_payload(sf.payload)
    if np.any(flat.imag != 0):
        raise SchemaError("nonneg_matrix entries must be real ([x, 0])")
    try:
        return NonnegMatrix(flat.real.reshape(sf.dims[0], sf.dims[1]))
    except ValueError as e:
        raise SchemaError(str(e)) from e


def operator_from_file(sf: StateFile) -> np.ndarray:
    """Dense operator of a dense_state or mpdo file."""
    _require_kind(sf, "dense_state", "mpdo")
    if sf.kind == "dense_state":
        return dense_from_file(sf)
    check_dense_limit(sf.dims)
    return dense_from_mpdo(mpdo_from_file(sf))


# ── disk I/O ──────────────────────────────────────────────────────────────────
def parse_state_file(text: str) -> StateFile:
    try:
        return StateFile.model_validate_json(text)
    except ValidationError as e:
        raise SchemaError(f"malformed state file: {e.errors()[0]['msg']}") from e


def read_state_file(path: str | Path) -> StateFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e}") from e
    sf = parse_state_file(text)
    log.debug("read %s (%s, dims %s)", path, sf.kind, sf.dims)
    return sf


def write_state_file(sf: StateFile, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(sf.model_dump_json(indent=2) + "\n", encoding="utf-8")
    log.info("📝 wrote %s (%s, dims %s)", path, sf.kind, sf.dims)
    return path


def comparable(sf: StateFile) -> str:
    """Canonical JSON with volatile metadata removed."""
    data = sf.model_dump()
    data["metadata"] = {k: v for k, v in data["metadata"].items() if k not in VOLATILE_METADATA}
    return json.dumps(data, sort_keys=True)
