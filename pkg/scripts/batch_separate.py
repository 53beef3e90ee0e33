"""
Certify many state files in parallel.

    python -m scripts.batch_separate states/*.json --out certs/ --summary summary.csv

Writes one certificate per input next to --out and a summary CSV with one
row per file (status, exit code, residual, min factor eigenvalue, terms).
"""
import argparse
import concurrent.futures
import logging
import time
from pathlib import Path

import pandas as pd
from tqdm import tqdm

from sepcert.cli.files import certificate_to_file, dense_from_file, mpdo_from_file, read_state_file, write_state_file
from sepcert.cli.main import EXIT_FAIL, exit_code_for
from sepcert.config import get_tolerances, settings
from sepcert.errors import SepCertError
from sepcert.schmidt.hermitize import hermitize_mpdo
from sepcert.schmidt.mpdo import mpdo_from_dense
from sepcert.separator.bipartite import separate_bipartite
from sepcert.separator.multipartite import separate_mpdo
from sepcert.utils.common import configure_logging

log = logging.getLogger("batch_separate")

MAX_WORKERS = 4


def certify_one(path: str, out_dir: str, cert_tol: float | None) -> dict:
    """Worker: never raises, returns one summary row."""
    t0 = time.perf_counter()
    tols = get_tolerances(cert_tol=cert_tol)
    row = {"input": path, "status": "ok", "exit_code": 0, "terms": None, "residual": None, "min_factor_eig": None}
    try:
        sf = read_state_file(path)
        if sf.kind == "mpdo":
            cert = separate_mpdo(hermitize_mpdo(mpdo_from_file(sf), tols), tols)
        elif len(sf.dims) == 2:
            cert = separate_bipartite(dense_from_file(sf), sf.dims[0], sf.dims[1], tols)
        else:
            cert = separate_mpdo(hermitize_mpdo(mpdo_from_dense(dense_from_file(sf), sf.dims, tols=tols), tols), tols)
        target = Path(out_dir) / f"{Path(path).stem}.cert.json"
        write_state_file(certificate_to_file(cert, source=path), target)
        row.update(terms=cert.n_terms, residual=cert.residual, min_factor_eig=cert.min_factor_eig, output=str(target))
    except SepCertError as e:
        row.update(status=type(e).__name__, exit_code=exit_code_for(e), error=str(e))
    except Exception as e:  # unwritable --out, LAPACK failures
        log.exception("certify_one: unexpected failure on %s", path)
        row.update(status=type(e).__name__, exit_code=EXIT_FAIL, error=str(e))
    row["elapsed_s"] = round(time.perf_counter() - t0, 3)
    return row


def main():
    parser = argparse.ArgumentParser(description="Separable certificates for a batch of state files")
    parser.add_argument("inputs", nargs="+")
    parser.add_argument("--out", default="certs")
    parser.add_argument("--summary", default="summary.csv")
    parser.add_argument("--workers", type=int, default=MAX_WORKERS)
    parser.add_argument("--tol-cert", type=float, default=None)
    args = parser.parse_args()
    configure_logging(settings.SEPCERT_LOG_LEVEL)

    log.info("🚀 Certifying %d file(s) with %d worker(s)", len(args.inputs), args.workers)
    t_start = time.perf_counter()
    rows = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=args.workers) as executor:
        futures = [executor.submit(certify_one, p, args.out, args.tol_cert) for p in args.inputs]
        for fut in tqdm(concurrent.futures.as_completed(futures), total=len(futures), desc="Certifying", unit="file"):
            row = fut.result()
            rows.append(row)
            if row["status"] == "ok":
                tqdm.write(f"✅ {row['input']}: {row['terms']} terms, residual {row['residual']:.2e}")
            else:
                tqdm.write(f"❌ {row['input']}: {row['status']} (exit {row['exit_code']})")

    summary = pd.DataFrame(rows).sort_values("input")
    summary.to_csv(args.summary, index=False)
    ok = int((summary["status"] == "ok").sum())
    log.info(
        "🎉 Batch complete. OK=%s, failed=%s, summary=%s, elapsed=%.1fs",
        ok, len(summary) - ok, args.summary, time.perf_counter() - t_start,
    )


if __name__ == "__main__":
    main()
