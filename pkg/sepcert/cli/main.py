# sepcert/cli/main.py
"""
Command-line entry point.

Exit codes: 0 ok, 1 verification or construction failure, 2 malformed input,
3 dimension problem, 4 rank beyond the rank-2 construction, 5 input not PSD.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional, Sequence, Tuple, Type

from sepcert.cli import commands
from sepcert.config import PROFILES, get_tolerances, settings
from sepcert.errors import (
    ChoiNotPSD,
    DimensionLimit,
    DimensionMismatch,
    NonFiniteInput,
    NonHermitianInput,
    NotHermitianCores,
    NotHermitianSum,
    NotPSDInput,
    RankNotTwo,
    RankTooHigh,
    SchemaError,
    SepCertError,
)
from sepcert.utils.common import configure_logging

log = logging.getLogger("sepcert.cli")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DIMS = 3
EXIT_RANK = 4
EXIT_NOT_PSD = 5

# first match wins
EXIT_CODES: List[Tuple[Tuple[Type[BaseException], ...], int]] = [
    ((SchemaError, NonFiniteInput), EXIT_PARSE),
    ((DimensionMismatch, DimensionLimit), EXIT_DIMS),
    ((RankTooHigh, RankNotTwo), EXIT_RANK),
    ((NotPSDInput, ChoiNotPSD, NonHermitianInput, NotHermitianSum, NotHermitianCores), EXIT_NOT_PSD),
    ((SepCertError,), EXIT_FAIL),
]


def exit_code_for(exc: BaseException) -> int:
    for types, code in EXIT_CODES:
        if isinstance(exc, types):
            return code
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepcert",
        description="Separability certificates for operators of operator Schmidt rank ≤ 2.",
    )
    parser.add_argument("--profile", choices=sorted(PROFILES), default=None, help="tolerance profile")
    parser.add_argument("--tol-cert", type=float, default=None, help="certificate residual tolerance")
    parser.add_argument("--tol-rank", type=float, default=None, help="numerical rank tolerance")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default from SEPCERT_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schmidt", help="operator Schmidt decomposition of a dense state")
    p.add_argument("input")
    p.add_argument("--dims", help="local dimensions, e.g. 2,2")
    p.add_argument("-o", "--output")
    p.set_defaults(func=commands.cmd_schmidt)

    p = sub.add_parser("separate", help="build a separable certificate")
    p.add_argument("input")
    p.add_argument("--dims")
    p.add_argument("--multipartite", action="store_true", help="treat the state as a chain over --dims")
    p.add_argument("-o", "--output")
    p.set_defaults(func=commands.cmd_separate)

    p = sub.add_parser("certify", help="check a certificate against a state")
    p.add_argument("state")
    p.add_argument("cert")
    p.set_defaults(func=commands.cmd_certify)

    p = sub.add_parser("channel-eb", help="entanglement-breaking test for channels with term rank ≤ 2")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="where to write the Choi matrix")
    p.set_defaults(func=commands.cmd_channel_eb)

    p = sub.add_parser("from-nonneg", help="diagonal state and rank-2 nonnegative factorization")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="where to write the diagonal state")
    p.set_defaults(func=commands.cmd_from_nonneg)

    p = sub.add_parser("ranks", help="rank relations report")
    p.add_argument("input")
    p.add_argument("--dims")
    p.set_defaults(func=commands.cmd_ranks)

    p = sub.add_parser("fixture", help="write a named example file")
    p.add_argument("name", choices=sorted(commands.FIXTURES))
    p.add_argument("output")
    p.set_defaults(func=commands.cmd_fixture)

    p = sub.add_parser("nonneg", help="write a nonneg_matrix file from rows like '2,1;1,2'")
    p.add_argument("matrix")
    p.add_argument("output")
    p.set_defaults(func=commands.cmd_nonneg_file)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or settings.SEPCERT_LOG_LEVEL)

    try:
        tols = get_tolerances(args.profile, cert_tol=args.tol_cert, rank_tol=args.tol_rank)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE

    log.debug("sepcert %s with %s", args.command, tols)
    try:
        return args.func(args, tols)
    except SepCertError as e:
        code = exit_code_for(e)
        log.error("❌ %s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
