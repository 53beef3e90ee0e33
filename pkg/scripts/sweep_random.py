"""
Rerun the randomized certification sweeps at a chosen scale.

    python -m scripts.sweep_random --instances 500 --seed 0

Prints one pass/fail row per family.
"""
import argparse
import logging
import time

import numpy as np
import pandas as pd
from tqdm import tqdm

from sepcert import samplers
from sepcert.applications.nonneg import factorization_residual, nonneg_factorization_rank2
from sepcert.config import get_tolerances, settings
from sepcert.errors import RankTooHigh, SepCertError
from sepcert.schmidt.decompose import operator_schmidt
from sepcert.schmidt.hermitize import hermitize_bipartite
from sepcert.separator.bipartite import separate_bipartite
from sepcert.separator.multipartite import separate_mpdo
from sepcert.separator.verify import verify_certificate
from sepcert.schmidt.mpdo import dense_from_mpdo
from sepcert.utils.common import configure_logging

log = logging.getLogger("sweep_random")

BIPARTITE_DIMS = [(2, 2), (2, 3), (3, 3), (4, 4)]


def _bipartite(rng, tols):
    d1, d2 = BIPARTITE_DIMS[rng.integers(len(BIPARTITE_DIMS))]
    rho = samplers.random_sep2_state(rng, d1, d2)
    return verify_certificate(separate_bipartite(rho, d1, d2, tols), rho).passed


def _pencil(rng, tols):
    d1, d2 = BIPARTITE_DIMS[rng.integers(len(BIPARTITE_DIMS))]
    rho = samplers.random_pencil_state(rng, d1, d2)
    return verify_certificate(separate_bipartite(rho, d1, d2, tols), rho).passed


def _hermitize(rng, tols):
    d1, d2 = BIPARTITE_DIMS[rng.integers(len(BIPARTITE_DIMS))]
    rho = samplers.random_sep2_state(rng, d1, d2)
    herm = hermitize_bipartite(operator_schmidt(rho, d1, d2, tols=tols), tols)
    approx = sum(np.kron(a, b) for a, b in herm.pairs)
    return float(np.linalg.norm(rho - approx)) <= tols.recon_tol * max(1.0, float(np.linalg.norm(rho)))


def _chain(rng, tols):
    n = int(rng.integers(3, 7))
    dims = [2] * n
    mpdo = samplers.gauge_scramble(rng, samplers.random_separable_chain(rng, dims))
    cert = separate_mpdo(mpdo, tols)
    return verify_certificate(cert, dense_from_mpdo(mpdo)).passed and max(cert.decomposition.bond_dims) <= 2


def _rank3(rng, tols):
    rho = samplers.random_osr_k_state(rng, 3, 3, 3)
    try:
        separate_bipartite(rho, 3, 3, tols)
    except RankTooHigh as e:
        return e.osr == 3
    return False


def _nonneg(rng, tols):
    rows, cols = int(rng.integers(2, 6)), int(rng.integers(2, 6))
    m = samplers.random_rank_k_nonneg(rng, rows, cols, 2)
    return factorization_residual(m, nonneg_factorization_rank2(m, tols)) <= 1e-8


FAMILIES = {
    "bipartite Σ² PSD⊗PSD": _bipartite,
    "Hermitian pencil": _pencil,
    "Hermitian re-expression": _hermitize,
    "gauge-scrambled chain": _chain,
    "osr 3 rejected": _rank3,
    "rank-2 nonnegative": _nonneg,
}


def main():
    parser = argparse.ArgumentParser(description="Randomized certification sweeps")
    parser.add_argument("--instances", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--profile", default=None)
    args = parser.parse_args()
    configure_logging(settings.SEPCERT_LOG_LEVEL)
    tols = get_tolerances(args.profile)

    rows = []
    for name, run in FAMILIES.items():
        rng = np.random.default_rng(args.seed)
        passed = failed = errors = 0
        t0 = time.perf_counter()
        for _ in tqdm(range(args.instances), desc=name, unit="inst"):
            try:
                if run(rng, tols):
                    passed += 1
                else:
                    failed += 1
            except SepCertError as e:
                errors += 1
                log.warning("%s: %s", name, e)
        rows.append(
            {
                "family": name,
                "passed": passed,
                "failed": failed,
                "errors": errors,
                "result": "PASS" if passed == args.instances else "FAIL",
                "elapsed_s": round(time.perf_counter() - t0, 2),
            }
        )

    print(pd.DataFrame(rows).to_string(index=False))


if __name__ == "__main__":
    main()
