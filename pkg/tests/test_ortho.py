import math

import numpy as np
import pytest

from orthocover import surfaces
from orthocover.ortho import (REGION_MODES, OrthoParams, PolygonRegion, approx_circular_avg,
                              approx_elliptical, approx_polygonal, approx_radius_curvature,
                              curve_ortho_bounds, pair_gen, radius_from_curvature, region,
                              surface_ortho_region)
from orthocover.terrain import OutOfBoundsError

R3 = 3 * math.tan(math.radians(10))


def test_params_validation():
    p = OrthoParams.from_degrees(3, 10)
    assert p.R == pytest.approx(R3) and p.dy == p.dx
    for bad in (dict(d=0, eps=0.1), dict(d=1, eps=0), dict(d=1, eps=2.0), dict(d=1, eps=0.1, dx=-1),
                dict(d=1, eps=0.1, m=0.5)):
        with pytest.raises(ValueError):
            OrthoParams(**bad)


def test_curve_bounds_line():
    p = OrthoParams.from_degrees(3, 10, dx=0.001)
    lo, hi = curve_ortho_bounds(lambda x: 0 * x, 0.3, p)
    assert lo == pytest.approx(0.3 - R3, abs=0.001)
    assert hi == pytest.approx(0.3 + R3, abs=0.001)


def test_curve_bounds_circle_apex():
    Rc = 2.0
    p = OrthoParams.from_degrees(Rc, 10, dx=0.001)
    lo, hi = curve_ortho_bounds(lambda x: np.sqrt(Rc * Rc - x * x), 0.0, p, domain=(-1.9, 1.9))
    half = Rc * math.sin(p.eps)
    assert hi == pytest.approx(half, abs=p.dx + 1e-9)
    assert lo == pytest.approx(-half, abs=p.dx + 1e-9)


def test_curve_bounds_parabola_phi_binds():
    p = OrthoParams.from_degrees(100, 10, dx=1e-4)
    lo, hi = curve_ortho_bounds(lambda x: x**2, 0.0, p)
    target = math.tan(p.eps) / 2
    assert hi == pytest.approx(target, abs=2e-4) and lo == pytest.approx(-target, abs=2e-4)
    # linearized slope is exact for a parabola
    assert curve_ortho_bounds(lambda x: x**2, 0.0, p, linearized=True)[1] == pytest.approx(hi, abs=2e-4)


def test_curve_bounds_domain():
    p = OrthoParams.from_degrees(3, 10, dx=0.01)
    with pytest.raises(OutOfBoundsError):
        curve_ortho_bounds(np.sin, 5.0, p, domain=(-1, 1))
    lo, hi = curve_ortho_bounds(lambda x: 0 * x, 0.95, p, domain=(-1, 1))
    assert hi <= 1.0


def test_pair_gen():
    assert pair_gen(1) == [(1, 0), (0, 1), (-1, 0), (0, -1)]
    two = pair_gen(2)
    assert len(two) == 8 and (1, 1) in two and (-1, 1) in two
    for n in range(1, 12):
        ring = pair_gen(n)
        assert len(ring) == 4 * n == len(set(ring))
        assert all(abs(a) + abs(b) == n for a, b in ring)
    with pytest.raises(ValueError):
        pair_gen(0)


def test_plane_region_is_disk():
    p = OrthoParams.from_degrees(3, 10, dx=R3 / 50)
    reg = surface_ortho_region(surfaces.plane(), (0.0, 0.0), p)
    n = reg.half_extent
    i, j = np.mgrid[-n:n + 1, -n:n + 1]
    disk = np.hypot(i * p.dx, j * p.dy) <= p.R
    sym = np.count_nonzero(disk ^ reg.mask)
    assert sym <= 0.05 * np.count_nonzero(disk)
    assert reg.contains_offset(0, 0)


def test_sphere_regions_similar_size():
    p = OrthoParams.from_degrees(1, 10, dx=0.005)
    s = surfaces.sphere(a=2.0, half_width=1.0)
    counts = [surface_ortho_region(s, pt, p).cell_count
              for pt in [(0, 0), (0.3, 0.2), (-0.4, 0.1), (0.2, -0.5), (-0.3, -0.3)]]
    assert (max(counts) - min(counts)) / np.mean(counts) <= 0.10


def test_cos_sq_regions_differ():
    p = OrthoParams.from_degrees(3, 10, dx=0.02)
    m = surfaces.cos_sq_sum()
    a = surface_ortho_region(m, (0.0, 0.0), p)
    b = surface_ortho_region(m, (-1.0, -1.0), p)
    assert a.contains_offset(0, 0) and b.contains_offset(0, 0)
    assert a.cell_count != b.cell_count or not np.array_equal(a.mask, b.mask)


def test_region_out_of_bounds():
    p = OrthoParams.from_degrees(3, 10)
    with pytest.raises(OutOfBoundsError):
        surface_ortho_region(surfaces.cos_sum(), (6.0, 0.0), p)


def test_region_within_theta_cap(cos_sum, params_3_10):
    p = OrthoParams.from_degrees(3, 10, dx=0.02)
    reg = surface_ortho_region(cos_sum, (1.0, 0.5), p)
    d = np.hypot(*(reg.points - np.asarray(reg.center)).T)
    assert d.max() <= p.R + max(p.dx, p.dy)


def test_linearized_flag_close_on_quadratic():
    p = OrthoParams.from_degrees(3, 10, dx=0.02)
    m = surfaces.paraboloid(0.5)
    a = surface_ortho_region(m, (0.5, 0.5), p)
    b = surface_ortho_region(m, (0.5, 0.5), p, linearized=True)
    assert np.array_equal(a.mask, b.mask)


def test_polygonal_plane():
    p = OrthoParams.from_degrees(3, 10, dx=R3 / 200)
    poly = approx_polygonal(surfaces.plane(), (0.0, 0.0), p, N=8)
    np.testing.assert_allclose(poly.distances, p.R, atol=p.dx)
    sq = approx_polygonal(surfaces.plane(), (0.0, 0.0), p, N=4)
    np.testing.assert_allclose(sq.vertices, [[p.R, 0], [0, p.R], [-p.R, 0], [0, -p.R]], atol=p.dx)
    with pytest.raises(ValueError):
        approx_polygonal(surfaces.plane(), (0, 0), p, N=2)


def test_polygonal_cos_sum_within_R(cos_sum, params_3_10):
    poly = approx_polygonal(cos_sum, (0.0, 0.0), params_3_10, N=8)
    assert np.all(poly.distances <= params_3_10.R + 1e-12)


def test_polygon_vertices_in_exact_mask(cos_sum):
    p = OrthoParams.from_degrees(3, 10, dx=0.01)
    poly = approx_polygonal(cos_sum, (0.4, -0.2), p, N=16)
    reg = surface_ortho_region(cos_sum, (0.4, -0.2), p)
    pts = reg.points
    for v in poly.vertices:
        assert np.min(np.hypot(*(pts - v).T)) <= math.hypot(p.dx, p.dy)


def test_elliptical():
    p = OrthoParams.from_degrees(3, 10, dx=R3 / 200)
    e = approx_elliptical(approx_polygonal(surfaces.plane(), (0.0, 0.0), p, N=16))
    assert e.major == pytest.approx(2 * p.R, abs=2 * p.dx) and e.minor == pytest.approx(2 * p.R, abs=2 * p.dx)
    diamond = PolygonRegion((0.0, 0.0), np.array([[1.0, 0], [0, 2.0], [-1.0, 0], [0, -2.0]]))
    e = approx_elliptical(diamond)
    assert (e.major, e.minor) == (4.0, 2.0)
    assert e.angle == pytest.approx(math.pi / 2)
    assert e.center == (0.0, 0.0)
    with pytest.raises(ValueError):
        approx_elliptical(PolygonRegion((0, 0), np.zeros((5, 2))))


def test_ellipse_center_is_longest_diagonal_midpoint():
    V = np.array([[3.0, 0], [0, 1.0], [-1.0, 0], [0, -1.0]])
    e = approx_elliptical(PolygonRegion((0.0, 0.0), V))
    assert e.center == (1.0, 0.0) and e.major == 4.0 and e.minor == 2.0


def test_circular_avg():
    V = np.array([[1.0, 0], [0, 1.0], [-3.0, 0], [0, -3.0]])
    c = approx_circular_avg(PolygonRegion((0.0, 0.0), V))
    assert c.radius == 2.0 and c.center == (0.0, 0.0)
    p = OrthoParams.from_degrees(3, 10, dx=R3 / 200)
    c = approx_circular_avg(approx_polygonal(surfaces.plane(), (0.0, 0.0), p))
    assert c.radius == pytest.approx(p.R, abs=p.dx)


def test_radius_model():
    R, m = R3, 5
    assert radius_from_curvature(0.0, R, 1.0, m) == R
    assert radius_from_curvature(1.0, R, 1.0, m) == R / 5
    assert radius_from_curvature(-0.5, R, 1.0, m) == pytest.approx(0.6 * R)
    assert radius_from_curvature(0.5, R, 1.0, m) == pytest.approx(0.31741, abs=1e-4)
    assert radius_from_curvature(3.0, R, 0.0, m) == R
    K = np.linspace(0, 1, 50)
    r = radius_from_curvature(K, R, 1.0, m)
    assert np.all(np.diff(r) <= 0)
    assert r[0] / r[-1] == pytest.approx(m, rel=1e-15)
    p = OrthoParams.from_degrees(3, 10)
    assert approx_radius_curvature(surfaces.cos_sum(), (0.0, 0.0), p, 1.0) == pytest.approx(p.R / 5)


@pytest.mark.parametrize("mode", REGION_MODES)
def test_region_dispatch_deterministic(mode, cos_sum):
    p = OrthoParams.from_degrees(3, 10, dx=0.02)
    a = region(cos_sum, (0.3, 0.3), p, mode).to_dict()
    b = region(cos_sum, (0.3, 0.3), p, mode).to_dict()
    assert a == b and a["kind"] in ("mask", "polygon", "ellipse", "circle")


def test_region_bad_mode(cos_sum, params_3_10):
    with pytest.raises(ValueError):
        region(cos_sum, (0, 0), params_3_10, "hexagonal")
