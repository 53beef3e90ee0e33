# sepcert/cli/commands.py
"""
Subcommand handlers. Each takes the parsed arguments and the tolerance
snapshot, prints its result to stdout and returns the exit code; errors
propagate to ``main`` which maps them to exit codes.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import List, Optional

import numpy as np

from sepcert import fixtures
from sepcert.applications.channels import (
    choi_from_channel,
    eb_check_rank2,
    ep_bound,
    is_trace_preserving,
)
from sepcert.applications.nonneg import diag_state_from_nonneg, factorization_residual, nonneg_factorization_rank2
from sepcert.applications.ranks import checks_table, rank_relations_report, report_table
from sepcert.config import Tolerances
from sepcert.errors import ChoiNotPSD, DimensionMismatch, SchemaError
from sepcert.matrix_kernel import as_hermitian, matrix_rank
from sepcert.models import EBVerdict, MPDOCores, NonnegMatrix, SepCertificate
from sepcert.schmidt.decompose import operator_schmidt
from sepcert.schmidt.hermitize import hermitize_mpdo
from sepcert.schmidt.mpdo import check_dense_limit, cores_hermitian, mpdo_from_dense
from sepcert.separator.bipartite import separate_bipartite
from sepcert.separator.multipartite import separate_mpdo
from sepcert.separator.verify import verify_certificate
from sepcert.cli.files import (
    StateFile,
    certificate_from_file,
    certificate_to_file,
    channel_from_file,
    channel_to_file,
    dense_from_file,
    dense_to_file,
    mpdo_from_file,
    mpdo_to_file,
    nonneg_from_file,
    nonneg_to_file,
    operator_from_file,
    read_state_file,
    write_state_file,
)
from sepcert.utils.common import parse_dims

log = logging.getLogger(__name__)


def _output(args: argparse.Namespace, suffix: str) -> Path:
    """--output if given, else <input stem>.<suffix>.json next to the input."""
    if getattr(args, "output", None):
        return Path(args.output)
    src = Path(args.input)
    return src.with_name(f"{src.stem}.{suffix}.json")


def _state_dims(sf: StateFile, raw: Optional[str]) -> List[int]:
    dims = parse_dims(raw)
    if dims is None:
        return list(sf.dims)
    if int(np.prod(dims)) != int(np.prod(sf.dims)):
        raise DimensionMismatch(f"--dims {dims} do not match the file's dimension {int(np.prod(sf.dims))}")
    return dims


def _bipartite_dims(dims: List[int]) -> List[int]:
    if len(dims) != 2:
        raise DimensionMismatch(f"expected two local dimensions, got {dims}")
    return dims


def _print_certificate(cert: SepCertificate) -> None:
    print(f"residual = {cert.residual:.3e}")
    print(f"min factor eigenvalue = {cert.min_factor_eig:.6g}")
    print(f"terms = {cert.n_terms}, bond dims = {cert.decomposition.bond_dims}")
    for meta in cert.cone_metadata:
        where = f"site {meta.site}: " if meta.site is not None else ""
        index = f", index {meta.index}" if meta.index is not None else ""
        print(f"cone {where}{meta.kind} via {meta.case}{index}")


# ── schmidt ───────────────────────────────────────────────────────────────────
def cmd_schmidt(args: argparse.Namespace, tols: Tolerances) -> int:
    sf = read_state_file(args.input)
    rho = dense_from_file(sf)
    d1, d2 = _bipartite_dims(_state_dims(sf, args.dims))
    dec = operator_schmidt(rho, d1, d2, tols=tols)
    log.info("schmidt: %s has operator Schmidt rank %d", args.input, dec.p)
    write_state_file(mpdo_to_file(dec.to_mpdo(), tols, osr=str(dec.p), source=str(args.input)), _output(args, "schmidt"))
    print(f"osr = {dec.p}")
    return 0


# ── separate ──────────────────────────────────────────────────────────────────
def _hermitian_mpdo(mpdo: MPDOCores, tols: Tolerances) -> MPDOCores:
    if cores_hermitian(mpdo, tols):
        return MPDOCores([c.copy() for c in mpdo.cores], hermitian=True)
    return hermitize_mpdo(mpdo, tols)


def cmd_separate(args: argparse.Namespace, tols: Tolerances) -> int:
    sf = read_state_file(args.input)
    if sf.kind == "mpdo":
        if args.dims:
            raise DimensionMismatch("--dims cannot be combined with an mpdo file; the cores fix the dimensions")
        cert = separate_mpdo(_hermitian_mpdo(mpdo_from_file(sf), tols), tols)
    else:
        rho = dense_from_file(sf)
        dims = _state_dims(sf, args.dims)
        if args.multipartite or len(dims) > 2:
            check_dense_limit(dims)
            rho = as_hermitian(rho, tols, "state")
            cert = separate_mpdo(hermitize_mpdo(mpdo_from_dense(rho, dims, tols=tols), tols), tols)
        else:
            d1, d2 = _bipartite_dims(dims)
            cert = separate_bipartite(rho, d1, d2, tols)
    log.info("separate: %s certified with %d terms", args.input, cert.n_terms)
    write_state_file(certificate_to_file(cert, source=str(args.input)), _output(args, "cert"))
    _print_certificate(cert)
    return 0


# ── certify ───────────────────────────────────────────────────────────────────
def cmd_certify(args: argparse.Namespace, tols: Tolerances) -> int:
    state = read_state_file(args.state)
    cert = certificate_from_file(read_state_file(args.cert))
    rho = operator_from_file(state)
    # the certificate's own tolerances apply unless --tol-cert was given
    report = verify_certificate(cert, rho, tols if args.tol_cert is not None else None)
    log.info("certify: residual %.3g, min factor eigenvalue %.3g", report.residual, report.min_factor_eig)
    if report.passed:
        print(f"PASS residual = {report.residual:.3e}, min factor eigenvalue = {report.min_factor_eig:.6g}")
        return 0
    print("FAIL " + "; ".join(report.failures))
    return 1


# ── channel-eb ────────────────────────────────────────────────────────────────
def cmd_channel_eb(args: argparse.Namespace, tols: Tolerances) -> int:
    sf = read_state_file(args.input)
    ch = channel_from_file(sf)
    try:
        verdict, cert = eb_check_rank2(ch, tols)
    except ChoiNotPSD as e:
        print("NotCP")
        print(f"Choi matrix min eigenvalue = {e.min_eigenvalue:.6g}")
        return 5

    print(verdict.value)
    print(f"trace preserving = {is_trace_preserving(ch, tols=tols)}")
    if verdict is EBVerdict.EB and cert is not None:
        choi_path = write_state_file(
            dense_to_file(choi_from_channel(ch), [ch.d_out, ch.d_in], tols, source=str(args.input)),
            _output(args, "choi"),
        )
        cert_path = write_state_file(
            certificate_to_file(cert, source=str(choi_path)),
            Path(choi_path).with_name(f"{Path(args.input).stem}.cert.json"),
        )
        log.info("channel-eb: Choi matrix → %s, certificate → %s", choi_path, cert_path)
        _print_certificate(cert)
        print(f"entanglement of purification bound = {ep_bound(cert):.6g}")
    return 0


# ── from-nonneg ───────────────────────────────────────────────────────────────
def _factorization_certificate(factors, residual: float, tols: Tolerances) -> SepCertificate:
    """Diagonal factors diag(a_k), diag(b_k) as a bipartite certificate."""
    k = len(factors)
    rows, cols = len(factors[0][0]), len(factors[0][1])
    site1 = np.zeros((1, k, rows, rows), dtype=np.complex128)
    site2 = np.zeros((k, 1, cols, cols), dtype=np.complex128)
    for t, (a, b) in enumerate(factors):
        site1[0, t] = np.diag(a)
        site2[t, 0] = np.diag(b)
    min_entry = float(min(min(a.min(), b.min()) for a, b in factors))
    return SepCertificate(MPDOCores([site1, site2], hermitian=True), residual, min_entry, tols)


def cmd_from_nonneg(args: argparse.Namespace, tols: Tolerances) -> int:
    sf = read_state_file(args.input)
    m = nonneg_from_file(sf)
    rho, (rows, cols) = diag_state_from_nonneg(m)
    write_state_file(dense_to_file(rho, [rows, cols], tols, source=str(args.input)), _output(args, "state"))

    rank = matrix_rank(m.entries, tols=tols)
    log.info("from-nonneg: %dx%d matrix of rank %d", rows, cols, rank)
    if rank >= 3:
        print(f"rank(M) = {rank}: nonnegative factorization needs rank 2, skipped")
        return 4
    if rank < 2:
        print(f"rank₊ = {rank}")
        return 0

    factors = nonneg_factorization_rank2(m, tols)
    residual = factorization_residual(m, factors)
    cert = _factorization_certificate(factors, residual, tols)
    src = Path(args.input)
    write_state_file(certificate_to_file(cert, source=str(src)), src.with_name(f"{src.stem}.factors.json"))
    print("rank₊ = 2")
    for k, (a, b) in enumerate(factors, start=1):
        print(f"a{k} = {np.array2string(a, precision=6)}  b{k} = {np.array2string(b, precision=6)}")
    print(f"reconstruction residual = {residual:.3e}")
    return 0


# ── ranks ─────────────────────────────────────────────────────────────────────
def cmd_ranks(args: argparse.Namespace, tols: Tolerances) -> int:
    sf = read_state_file(args.input)
    dims = _state_dims(sf, args.dims)
    report = rank_relations_report(operator_from_file(sf), dims, tols)
    print(report_table(report).to_string(index=False))
    print()
    print(checks_table(report).to_string(index=False))
    for note in report.notes:
        print(f"note: {note}")
    return 0 if report.all_pass else 1


# ── fixture ───────────────────────────────────────────────────────────────────
FIXTURES = {
    "x-correlated": lambda t: dense_to_file(fixtures.x_correlated_state(), [2, 2], t),
    "ghz-x": lambda t: dense_to_file(fixtures.ghz_x_state(), [2, 2, 2], t),
    "ghz-x-mpdo": lambda t: mpdo_to_file(fixtures.ghz_x_mpdo(), t),
    "ppt-rank3": lambda t: dense_to_file(fixtures.ppt_rank3_state(), [3, 2], t),
    "max-entangled": lambda t: dense_to_file(fixtures.max_entangled_state(2), [2, 2], t),
    "x-channel": lambda t: channel_to_file(fixtures.x_correlated_channel(), t),
    "identity-channel": lambda t: channel_to_file(fixtures.identity_channel(2), t),
    "depolarizing-channel": lambda t: channel_to_file(fixtures.depolarizing_channel(2), t),
    "non-cp-map": lambda t: channel_to_file(fixtures.non_cp_map(), t),
}


def cmd_fixture(args: argparse.Namespace, tols: Tolerances) -> int:
    sf = FIXTURES[args.name](tols)
    sf.metadata["fixture"] = args.name
    write_state_file(sf, args.output)
    print(f"{args.name} → {args.output}")
    return 0


def cmd_nonneg_file(args: argparse.Namespace, tols: Tolerances) -> int:
    """Wrap a matrix given on the command line ("2,1;1,2") as a nonneg_matrix file."""
    try:
        rows = [[float(x) for x in r.split(",")] for r in args.matrix.split(";") if r.strip()]
        m = NonnegMatrix(np.array(rows, dtype=float))
    except ValueError as e:
        raise SchemaError(f"bad matrix {args.matrix!r}: {e}") from e
    write_state_file(nonneg_to_file(m), args.output)
    print(f"{len(rows)}x{len(rows[0])} nonnegative matrix → {args.output}")
    return 0
