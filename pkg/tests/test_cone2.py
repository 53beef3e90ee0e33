import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from sepcert import samplers
from sepcert.cone2 import classify_cone, compression_points, extreme_rays, normalize_rays
from sepcert.errors import CompressionNotPSD, DegenerateInput, DependentPencil, NonHermitianInput
from sepcert.fixtures import I2, X, Z, joint_kernel_pencil, x_correlated_pencil
from sepcert.matrix_kernel import is_psd
from sepcert.models import Cone2, ConeKind

R = 1 / np.sqrt(2)


def test_x_correlated_pencil_rays():
    A, B, C, D = x_correlated_pencil()
    cone = extreme_rays(A, B, C, D)
    assert cone.kind is ConeKind.SIMPLEX
    assert cone.case == "case1"
    u, v = cone.rays
    assert np.allclose(u, [R, -R], atol=1e-12)
    assert np.allclose(v, [R, R], atol=1e-12)


def test_joint_kernel_fixture_splits_kernel():
    A, B, C, D = joint_kernel_pencil()
    cone = extreme_rays(A, B, C, D)
    assert cone.kind is ConeKind.SIMPLEX
    assert cone.case == "case2-split"
    assert cone.kernel_dim == 1
    assert cone.epsilon is not None and cone.epsilon > 0
    u, v = cone.rays
    assert np.allclose(u, [0.0, 1.0], atol=1e-12)
    assert np.allclose(v, [1.0, 0.0], atol=1e-12)


def test_compression_points_are_diagonal_pairs():
    A, B, C, D = x_correlated_pencil()
    assert compression_points(A, B, C, D) == [(1.0, 0.0), (1.0, 0.0)]


def test_compression_not_psd():
    # ρ = I⊗diag(1, 0) + Z⊗diag(0, 1) has compression Z
    with pytest.raises(CompressionNotPSD):
        compression_points(I2, Z, np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))


def test_zero_cone_when_all_points_vanish():
    cone = extreme_rays(I2, X, points=[(0.0, 0.0)])
    assert cone.kind is ConeKind.ZERO
    assert cone.rays == []


def test_single_ray_cone():
    # xA + yB = [[x, y], [y, 0]] is PSD only on y = 0
    A = np.diag([1.0, 0.0])
    cone = extreme_rays(A, X, points=[(1.0, 0.0)])
    assert cone.kind is ConeKind.SINGLE_RAY
    assert np.allclose(cone.rays[0], [1.0, 0.0])


def test_degenerate_and_dependent_pencils():
    with pytest.raises(DegenerateInput):
        extreme_rays(np.zeros((2, 2)), np.zeros((2, 2)), points=[(1.0, 0.0)])
    with pytest.raises(DependentPencil):
        extreme_rays(I2, 2 * I2, points=[(1.0, 0.0)])
    with pytest.raises(NonHermitianInput):
        extreme_rays(np.array([[0, 1], [0, 0]]), I2, points=[(1.0, 0.0)])


def test_normalize_rays_orders_and_snaps():
    rays = normalize_rays([np.array([2.0, 1e-16]), np.array([0.0, -3.0])])
    assert rays[0].tolist() == [0.0, -1.0]
    assert rays[1].tolist() == [1.0, 0.0]


def test_classify_cone():
    assert classify_cone(Cone2(ConeKind.ZERO, [])) is ConeKind.ZERO
    assert classify_cone(Cone2(ConeKind.SINGLE_RAY, [np.array([1.0, 0.0])])) is ConeKind.SINGLE_RAY
    simplex = Cone2(ConeKind.SIMPLEX, [np.array([R, -R]), np.array([R, R])])
    assert classify_cone(simplex) is ConeKind.SIMPLEX


def test_cone_ray_count_is_validated():
    with pytest.raises(ValueError):
        Cone2(ConeKind.SIMPLEX, [np.array([1.0, 0.0])])


def test_metadata_records_case():
    A, B, C, D = x_correlated_pencil()
    meta = extreme_rays(A, B, C, D).metadata(site=2, branches=3)
    assert meta.kind == "Simplex" and meta.case == "case1" and meta.index == 0
    assert meta.site == 2 and meta.branches == 3
    assert len(meta.rays) == 2


@hyp_settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 5))
def test_rays_are_boundary_points_of_the_cone(seed, d):
    rng = np.random.default_rng(seed)
    A, B = samplers.random_pd(rng, d), samplers.random_hermitian(rng, d)
    cone = extreme_rays(A, B, points=[(1.0, 0.0)])
    assert cone.kind is ConeKind.SIMPLEX
    for r in cone.rays:
        assert abs(np.linalg.norm(r) - 1.0) < 1e-12
        m = r[0] * A + r[1] * B
        lam = np.linalg.eigvalsh(m)
        # on the cone, and singular there
        assert is_psd(m, tol=1e-8).ok
        assert abs(lam[0]) <= 1e-8 * max(1.0, np.linalg.norm(m))


def test_normalize_rays_keeps_orientation():
    rays = normalize_rays([np.array([-2.0, 1.0])])
    assert rays[0][0] < 0 and rays[0][1] > 0


@hyp_settings(deadline=None, max_examples=40)
@given(
    seed=st.integers(0, 2**32 - 1),
    d=st.integers(2, 4),
    s=st.floats(0.1, 10.0),
    t=st.floats(0.1, 10.0),
)
def test_rays_rescale_with_the_pencil(seed, d, s, t):
    rng = np.random.default_rng(seed)
    A, B = samplers.random_pd(rng, d), samplers.random_hermitian(rng, d)
    base = extreme_rays(A, B, points=[(1.0, 0.0)])
    scaled = extreme_rays(s * A, t * B, points=[(1.0, 0.0)])
    # (x, y) ∈ S(sA, tB) iff (sx, ty) ∈ S(A, B)
    expected = normalize_rays([np.array([r[0] / s, r[1] / t]) for r in base.rays])
    assert scaled.kind is base.kind
    for r in scaled.rays:
        assert min(np.linalg.norm(r - e) for e in expected) <= 1e-7
