from fractions import Fraction as F

import numpy as np
import pytest

from rankfair.core import Profile, enumerate_rankings, swap_distance
from rankfair.embed import (
    classical_mds,
    distance_matrix,
    fit_point_for_ranking,
    jacobi_eigen,
    ranking_from_point,
    render_curve_svg,
    render_map_svg,
)
from rankfair.bounds import AlphaCurve
from rankfair.errors import DataError, GuardError
from rankfair.sampling import PointConfig, make_rng


def test_distance_matrix():
    rs = [(0, 1, 2), (1, 0, 2), (2, 1, 0)]
    D = distance_matrix(rs)
    assert D.shape == (3, 3)
    assert np.allclose(D, D.T)
    assert D[0, 1] == 1 and D[0, 2] == 3 and D[1, 2] == 2
    with pytest.raises(DataError):
        distance_matrix([(0, 1)])


def test_jacobi_identity_and_diagonal():
    vals, vecs = jacobi_eigen(np.eye(4))
    assert np.allclose(vals, 1.0)
    M = np.diag([5.0, -2.0, 3.0])
    vals, vecs = jacobi_eigen(M)
    assert np.allclose(vals, [5.0, 3.0, -2.0])
    assert np.allclose(vecs @ vecs.T, np.eye(3), atol=1e-9)


def test_jacobi_reconstruction_random():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(3, 12))
        X = rng.normal(size=(n, n))
        M = (X + X.T) / 2
        vals, vecs = jacobi_eigen(M)
        assert np.all(np.diff(vals) <= 1e-9)
        recon = vecs @ np.diag(vals) @ vecs.T
        assert np.allclose(recon, M, atol=1e-8)
        ref = np.sort(np.linalg.eigvalsh(M))[::-1]
        assert np.allclose(vals, ref, atol=1e-8)


def test_jacobi_rejects_nonsquare_and_big():
    with pytest.raises(DataError):
        jacobi_eigen(np.ones((2, 3)))
    with pytest.raises(GuardError):
        jacobi_eigen(np.eye(513))


def test_mds_equilateral_triangle():
    D = np.array([[0.0, 1, 1], [1, 0, 1], [1, 1, 0]])
    emb = classical_mds(D)
    got = np.array([
        [np.linalg.norm(emb.coords[i] - emb.coords[j]) for j in range(3)]
        for i in range(3)
    ])
    assert np.allclose(got, D, atol=1e-9)
    assert emb.stress < 1e-18
    assert emb.clamped_mass < 1e-9


def test_mds_collinear_points_rank_one():
    pts = np.array([[0.0], [1.0], [3.0], [7.0]])
    D = np.abs(pts - pts.T)
    emb = classical_mds(D)
    # second coordinate carries nothing for points on a line
    assert np.allclose(emb.coords[:, 1], 0.0, atol=1e-9)
    assert emb.stress < 1e-16


def test_mds_procrustes_recovery():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(9, 2))
    D = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
    emb = classical_mds(D)
    got = np.linalg.norm(
        emb.coords[:, None, :] - emb.coords[None, :, :], axis=2)
    assert np.allclose(got, D, atol=1e-8)


def test_mds_sign_determinism():
    D = distance_matrix(list(enumerate_rankings(3)))
    a = classical_mds(D)
    b = classical_mds(D)
    assert np.array_equal(a.coords, b.coords)
    nz = np.flatnonzero(np.abs(a.coords[:, 0]) > 1e-12)
    assert a.coords[nz[0], 0] > 0


def test_ranking_from_point():
    alt = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    assert ranking_from_point(np.array([-0.5, 0.0]), alt) == (0, 1, 2)
    assert ranking_from_point(np.array([2.5, 0.0]), alt) == (2, 1, 0)


def test_fit_point_exact_when_target_realizable():
    rng = np.random.default_rng(5)
    alt = rng.normal(size=(4, 2))
    voters = rng.normal(size=(6, 2))
    cfg = PointConfig(voters, alt)
    probe = rng.normal(size=2)
    target = ranking_from_point(probe, alt)
    point, achieved, defect = fit_point_for_ranking(cfg, target)
    assert defect == 0
    assert achieved == target
    assert ranking_from_point(point, alt) == target


def test_fit_point_grid_oracle():
    # the bisector-cell search must never lose to a plain dense grid
    rng = np.random.default_rng(17)
    for t in range(5):
        alt = rng.normal(size=(3, 2))
        cfg = PointConfig(rng.normal(size=(3, 2)), alt)
        target = tuple(int(x) for x in rng.permutation(3))
        _, _, defect = fit_point_for_ranking(cfg, target)
        lo, hi = alt.min() - 1, alt.max() + 1
        grid_best = min(
            swap_distance(ranking_from_point(np.array([x, y]), alt), target)
            for x in np.linspace(lo, hi, 40)
            for y in np.linspace(lo, hi, 40)
        )
        assert defect <= grid_best


def test_fit_point_guard():
    cfg = PointConfig(np.zeros((1, 2)), np.random.default_rng(0).normal(size=(13, 2)))
    with pytest.raises(GuardError):
        fit_point_for_ranking(cfg, tuple(range(13)))


def test_render_map_svg():
    coords = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]])
    svg = render_map_svg(coords, [0.5, 0.3, 0.2],
                         marks={"kemeny": [0], "sqk": [2]})
    assert svg.startswith("<svg")
    assert svg.count("<circle") == 3
    assert "<path" in svg and "<rect" in svg
    assert svg.rstrip().endswith("</svg>")


def test_render_curve_svg():
    curve = AlphaCurve(points=((0.5, 0.9), (0.8, 0.1)), m=4, kind="test")
    svg = render_curve_svg({"worst": list(curve.points)})
    assert svg.startswith("<svg")
    assert "<polyline" in svg and "worst" in svg
