# sepcert/applications/ranks.py
from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from sepcert.config import Tolerances, resolve
from sepcert.errors import SepCertError
from sepcert.matrix_kernel import as_complex, hermiticity_defect, is_psd
from sepcert.models import RankChecks, RankReport
from sepcert.schmidt.decompose import osr_across_cuts
from sepcert.schmidt.hermitize import hermitize_mpdo
from sepcert.schmidt.mpdo import check_dense_limit, mpdo_from_dense
from sepcert.separator.bipartite import separate_bipartite
from sepcert.separator.multipartite import separate_mpdo

log = logging.getLogger(__name__)


def rank_relations_report(rho, dims: Sequence[int], tols: Optional[Tolerances] = None) -> RankReport:
    """
    Operator Schmidt ranks per cut, a Hermitian rank upper bound, the
    separable rank when a certificate can be built, and the rank
    inequalities that are computable from those numbers.
    """
    t = resolve(tols)
    dims = [int(d) for d in dims]
    check_dense_limit(dims)
    rho = as_complex(rho, "state")
    notes: List[str] = []

    osr = osr_across_cuts(rho, dims, tols=t)
    hermitian = hermiticity_defect(rho) <= t.herm_tol

    hosr: Optional[List[int]] = None
    mpdo = None
    if hermitian:
        try:
            mpdo = hermitize_mpdo(mpdo_from_dense(rho, dims, tols=t), t)
            hosr = mpdo.bond_dims
        except SepCertError as e:
            notes.append(f"Hermitian decomposition failed: {e}")
    else:
        notes.append("operator is not Hermitian; Hermitian and separable ranks skipped")

    sep_rank: Optional[int] = None
    separable: Optional[bool] = None
    if hermitian and max(osr, default=1) <= 2:
        if not is_psd(rho, tols=t).ok:
            separable = False
            notes.append("operator is not positive semidefinite")
        else:
            try:
                if len(dims) == 2:
                    cert = separate_bipartite(rho, dims[0], dims[1], t)
                else:
                    cert = separate_mpdo(mpdo, t)
                sep_rank = max(cert.decomposition.bond_dims, default=1)
                separable = True
            except SepCertError as e:
                notes.append(f"no certificate: {e}")
    elif max(osr, default=1) > 2:
        notes.append(f"operator Schmidt rank {max(osr)} is beyond the rank-2 construction; separable rank unknown")

    top = max(osr, default=1)
    checks = RankChecks()
    if sep_rank is not None:
        checks.product_iff_sep1 = (top == 1) == (sep_rank == 1)
        checks.osr_le_sep = top <= sep_rank
        checks.osr_le_sep_squared = top <= sep_rank ** 2
        notes.append(f"purification rank ≤ separable rank = {sep_rank}")
    if hosr is not None:
        checks.osr_le_hosr = all(o <= h for o, h in zip(osr, hosr))

    report = RankReport(
        dims=dims, osr=osr, hosr_upper=hosr, sep_rank=sep_rank, separable=separable, checks=checks, notes=notes
    )
    log.debug("rank_relations_report: %s", report.model_dump())
    return report


def report_table(report: RankReport) -> pd.DataFrame:
    """One row per cut."""
    rows = []
    for cut, o in enumerate(report.osr, start=1):
        rows.append(
            {
                "cut": f"{cut}|{cut + 1}",
                "osr": o,
                "hosr_upper": report.hosr_upper[cut - 1] if report.hosr_upper else np.nan,
                "sep_rank": report.sep_rank if report.sep_rank is not None else "unknown",
            }
        )
    return pd.DataFrame(rows)


def checks_table(report: RankReport) -> pd.DataFrame:
    labels = {True: "pass", False: "FAIL", None: "n/a"}
    return pd.DataFrame(
        [{"check": name, "result": labels[value]} for name, value in report.checks.model_dump().items()]
    )
