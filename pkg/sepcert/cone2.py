# sepcert/cone2.py
"""
The planar cone S(A, B) = {(x, y) : xA + yB ⪰ 0} of a Hermitian pencil.

The cone is found from interior points supplied by compressions of
ρ = A⊗C + B⊗D: for every basis vector |i⟩ of the second factor,
(I⊗⟨i|) ρ (I⊗|i⟩) = C_ii A + D_ii B is positive semidefinite.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from sepcert.config import Tolerances, resolve, settings
from sepcert.errors import (
    CompressionNotPSD,
    ConeFailure,
    ConvergenceFailure,
    DegenerateInput,
    DependentPencil,
)
from sepcert.matrix_kernel import (
    as_hermitian,
    congruence_normalizer,
    frob_scale,
    hermitian_part,
    is_psd,
    kernel_basis,
    lin_independent,
    range_complement,
)
from sepcert.models import Cone2, ConeKind

log = logging.getLogger(__name__)

Point = Tuple[float, float]

RAY_SNAP = 1e-14
SINGLE_RAY_REL = 1e-9


def compression_points(A, B, C, D, tols: Optional[Tolerances] = None) -> List[Point]:
    t = resolve(tols)
    A = as_hermitian(A, t, "A")
    B = as_hermitian(B, t, "B")
    C = as_hermitian(C, t, "C")
    D = as_hermitian(D, t, "D")
    if C.shape != D.shape:
        raise DegenerateInput(f"C and D differ in shape: {C.shape} vs {D.shape}")
    points = []
    for i in range(C.shape[0]):
        c1, c2 = float(C[i, i].real), float(D[i, i].real)
        check = is_psd(c1 * A + c2 * B, tols=t)
        if not check.ok:
            raise CompressionNotPSD(
                f"compression {i} = {c1:.6g}·A + {c2:.6g}·B has λ_min {check.min_eigenvalue:.3g}; "
                "the state is not positive semidefinite"
            )
        points.append((c1, c2))
    return points


def normalize_rays(rays: Sequence[np.ndarray]) -> List[np.ndarray]:
    """
    Unit length, tiny coordinates snapped to zero, lexicographic order.
    Orientation is never changed: the sign of a ray decides whether it lies in the cone.
    """
    out = []
    for r in rays:
        r = np.asarray(r, dtype=float)
        r = r / np.linalg.norm(r)
        r[np.abs(r) < RAY_SNAP] = 0.0
        out.append(r)
    return sorted(out, key=lambda r: (r[0], r[1]))


def _pencil_eigs(A: np.ndarray, B: np.ndarray, c: Point, t: Tolerances) -> Tuple[float, float]:
    """λ_min, λ_max of c1·B̃ − c2·Ã after congruence to c1·A + c2·B = I."""
    c1, c2 = c
    M = c1 * A + c2 * B
    P = congruence_normalizer(M, t)
    Ph = P.conj().T
    err = float(np.linalg.norm(Ph @ M @ P - np.eye(M.shape[0])))
    if err > max(1e-10, t.recon_tol) * M.shape[0]:
        raise ConvergenceFailure(f"P†(c1·A + c2·B)P deviates from I by {err:.3g}")
    At, Bt = Ph @ A @ P, Ph @ B @ P
    lam = sla.eigvalsh(hermitian_part(c1 * Bt - c2 * At))
    return float(lam[0]), float(lam[-1])


def _case1(A: np.ndarray, B: np.ndarray, c: Point, t: Tolerances) -> Tuple[ConeKind, List[np.ndarray]]:
    c1, c2 = c
    lam_min, lam_max = _pencil_eigs(A, B, c, t)
    log.debug("case 1 at (%.6g, %.6g): λ_min %.6g, λ_max %.6g", c1, c2, lam_min, lam_max)
    if abs(lam_max - lam_min) <= SINGLE_RAY_REL * max(1.0, abs(lam_max) + abs(lam_min)):
        return ConeKind.SINGLE_RAY, [np.array([c1, c2])]
    u = -np.array([lam_min * c1 + c2, lam_min * c2 - c1])
    v = np.array([lam_max * c1 + c2, lam_max * c2 - c1])
    return ConeKind.SIMPLEX, [u, v]


def _first_pd(A: np.ndarray, B: np.ndarray, points: Sequence[Point], t: Tolerances) -> Optional[int]:
    for i, (c1, c2) in enumerate(points):
        if c1 == 0.0 and c2 == 0.0:
            continue
        M = c1 * A + c2 * B
        lam_min = float(sla.eigvalsh(hermitian_part(M))[0])
        if lam_min > t.pd_tol * frob_scale(M):
            return i
    return None


def _independent_pair(points: Sequence[Point], tol: float) -> Optional[Tuple[int, int]]:
    nonzero = [(i, np.asarray(p)) for i, p in enumerate(points) if np.linalg.norm(p) > 0]
    for a in range(len(nonzero)):
        for b in range(a + 1, len(nonzero)):
            (i, p), (j, q) = nonzero[a], nonzero[b]
            if abs(p[0] * q[1] - p[1] * q[0]) > tol * np.linalg.norm(p) * np.linalg.norm(q):
                return i, j
    return None


def _perturbed_kernel(A: np.ndarray, B: np.ndarray, c: Point, t: Tolerances):
    """
    Nudge c sideways by ε; on the side that stays PSD the kernel of the
    perturbed compression is the joint kernel of A and B.
    Returns (perturbed point, ε, kernel vectors) or None.
    """
    norm = float(np.hypot(*c))
    base = settings.SEPCERT_CASE2_EPS * norm
    side = np.array([-c[1], c[0]]) / norm
    for eps in (base, base / 100):
        for sign in (1.0, -1.0):
            cp = np.asarray(c) + sign * eps * side
            M = cp[0] * A + cp[1] * B
            if not is_psd(M, tol=t.pd_tol * 1e-3, tols=t).ok:
                continue
            kern = kernel_basis(M, tols=t)
            scale = frob_scale(A) + frob_scale(B)
            joint = [x for x in kern if np.linalg.norm(A @ x) + np.linalg.norm(B @ x) <= 1e3 * t.rank_tol * scale]
            if len(joint) != len(kern):
                # the eigen-threshold picked up non-joint directions; use the joint null space directly
                ns = sla.null_space(np.vstack([A, B]), rcond=t.rank_tol)
                joint = [ns[:, k] for k in range(ns.shape[1])]
            return (float(cp[0]), float(cp[1])), float(eps), joint
    return None


def extreme_rays(
    A,
    B,
    C=None,
    D=None,
    tols: Optional[Tolerances] = None,
    points: Optional[Sequence[Point]] = None,
) -> Cone2:
    """
    Extreme rays of S(A, B). Compression points come from (C, D), or are
    passed directly when several states share the pencil. Points are scanned
    in order; the first positive definite compression is used.
    """
    t = resolve(tols)
    A = as_hermitian(A, t, "A")
    B = as_hermitian(B, t, "B")
    if np.linalg.norm(A) == 0 and np.linalg.norm(B) == 0:
        raise DegenerateInput("A = B = 0: the cone is {0}")
    independent, _ = lin_independent([A, B], tols=t)
    if not independent:
        raise DependentPencil("A and B are linearly dependent")
    if points is None:
        if C is None or D is None:
            raise DegenerateInput("extreme_rays needs (C, D) or explicit compression points")
        points = compression_points(A, B, C, D, t)
    points = [(float(p[0]), float(p[1])) for p in points]
    if all(p == (0.0, 0.0) for p in points):
        return Cone2(ConeKind.ZERO, [], case="zero")

    # Case 1: a positive definite compression
    idx = _first_pd(A, B, points, t)
    if idx is not None:
        kind, rays = _case1(A, B, points[idx], t)
        cone = _finish(kind, rays, A, B, t, case="case1" if kind is ConeKind.SIMPLEX else "single-ray", index=idx)
        return cone

    # Case 2: every compression is singular
    first = next(i for i, p in enumerate(points) if p != (0.0, 0.0))
    found = _perturbed_kernel(A, B, points[first], t)
    if found is None:
        log.debug("case 2: no PSD perturbation around point %d; single ray", first)
        return _finish(ConeKind.SINGLE_RAY, [np.asarray(points[first])], A, B, t, case="single-ray", index=first)
    cp, eps, kernel = found
    dim = A.shape[0]
    Q = range_complement(kernel, dim)
    Ar, Br = hermitian_part(Q.conj().T @ A @ Q), hermitian_part(Q.conj().T @ B @ Q)
    log.debug("case 2: ε %.3g, joint kernel dim %d split off", eps, len(kernel))
    meta = dict(epsilon=eps, kernel_dim=len(kernel))

    idx = _first_pd(Ar, Br, points, t)
    if idx is not None:
        kind, rays = _case1(Ar, Br, points[idx], t)
        return _finish(kind, rays, A, B, t, case="case2-split", index=idx, **meta)

    pair = _independent_pair(points, t.rank_tol)
    if pair is not None:
        i, j = pair
        return _finish(
            ConeKind.SIMPLEX, [np.asarray(points[i]), np.asarray(points[j])], A, B, t, case="case2-rays", index=i, **meta
        )

    Mr = cp[0] * Ar + cp[1] * Br
    if float(sla.eigvalsh(Mr)[0]) > t.pd_tol * frob_scale(Mr) * 1e-3:
        kind, rays = _case1(Ar, Br, cp, t)
        return _finish(kind, rays, A, B, t, case="case2-perturbed", index=first, **meta)

    return _finish(ConeKind.SINGLE_RAY, [np.asarray(points[first])], A, B, t, case="single-ray", index=first, **meta)


def _finish(kind: ConeKind, rays, A, B, t: Tolerances, case: str, index: Optional[int], epsilon=None, kernel_dim=0) -> Cone2:
    rays = normalize_rays(rays)
    if kind is ConeKind.SIMPLEX:
        u, v = rays
        if abs(u[0] * v[1] - u[1] * v[0]) <= SINGLE_RAY_REL:
            kind, rays = ConeKind.SINGLE_RAY, [u]
    for r in rays:
        check = is_psd(r[0] * A + r[1] * B, tol=t.cert_tol, tols=t)
        if not check.ok:
            raise ConeFailure(f"ray ({r[0]:.6g}, {r[1]:.6g}) leaves the cone: λ_min {check.min_eigenvalue:.3g}")
    cone = Cone2(kind, rays, case=case, index=index, epsilon=epsilon, kernel_dim=kernel_dim)
    log.debug("cone: %s via %s, rays %s", kind.value, case, [np.round(r, 12).tolist() for r in rays])
    return cone


def classify_cone(cone: Cone2) -> ConeKind:
    if not cone.rays:
        return ConeKind.ZERO
    if len(cone.rays) == 1:
        return ConeKind.SINGLE_RAY
    u, v = cone.rays
    if abs(u[0] * v[1] - u[1] * v[0]) <= SINGLE_RAY_REL * np.linalg.norm(u) * np.linalg.norm(v):
        return ConeKind.SINGLE_RAY
    return ConeKind.SIMPLEX
