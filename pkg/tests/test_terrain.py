import numpy as np
import pytest

from orthocover import surfaces
from orthocover.terrain import (AnalyticSurface, Bounds, HeightField, OutOfBoundsError, SurfaceModel,
                                mean_smooth, numerical_gradient, surface_query, unit_normal)


def test_bounds_basics():
    b = Bounds.square(-2, 2)
    assert b.area == 16.0 and b.center == (0.0, 0.0)
    assert Bounds.from_list(b.to_list()) == b
    with pytest.raises(ValueError):
        Bounds(1, 0, 0, 1)
    X, Y, hx, hy = b.cell_centers(4)
    assert hx == hy == 1.0
    assert X[0, 0] == -1.5 and Y[-1, 0] == 1.5


def test_heightfield_validation():
    with pytest.raises(ValueError):
        HeightField(np.zeros((1, 5)))
    with pytest.raises(ValueError):
        HeightField(np.array([[0.0, np.nan], [0, 0]]))
    with pytest.raises(ValueError):
        HeightField(np.zeros((2, 2)), spacing=(0.0, 1.0))
    hf = HeightField(np.zeros((3, 4)), spacing=(0.5, 2.0), origin=(1.0, -1.0))
    assert (hf.rows, hf.cols) == (3, 4)
    assert hf.bounds.to_list() == [1.0, 2.5, -1.0, 3.0]
    with pytest.raises(ValueError):
        hf.elevations[0, 0] = 1.0


def test_mean_smooth_examples():
    const = HeightField(np.full((6, 7), 3.5))
    np.testing.assert_array_equal(mean_smooth(const, 5).elevations, const.elevations)
    ramp = HeightField(np.add.outer(np.arange(5.0), np.arange(6.0)))
    np.testing.assert_array_equal(mean_smooth(ramp, 1).elevations, ramp.elevations)
    spike = HeightField(np.array([[0, 0, 0], [0, 9, 0], [0, 0, 0]], dtype=float))
    assert mean_smooth(spike, 3).elevations[1, 1] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        mean_smooth(spike, 4)
    with pytest.raises(ValueError):
        mean_smooth(spike, 0)


def test_mean_smooth_interior_mean_and_non_idempotence():
    rng = np.random.default_rng(3)
    data = rng.uniform(0, 10, (40, 40))
    out = mean_smooth(HeightField(data), 5).elevations
    # a fully interior window is the plain average
    assert out[20, 20] == pytest.approx(data[18:23, 18:23].mean(), abs=1e-9)
    ramp = HeightField(np.add.outer(np.arange(10.0) ** 2, np.zeros(10)))
    once = mean_smooth(ramp, 3)
    assert not np.allclose(mean_smooth(once, 3).elevations, once.elevations)


def test_numerical_gradient_examples():
    ramp = HeightField(np.tile(np.arange(5.0), (4, 1)))
    gx, gy = numerical_gradient(ramp)
    np.testing.assert_array_equal(gx, 1.0)
    np.testing.assert_array_equal(gy, 0.0)
    gx, _ = numerical_gradient(HeightField(np.array([[0.0, 1.0, 4.0], [0.0, 1.0, 4.0]])))
    np.testing.assert_allclose(gx[0], [1.0, 2.0, 3.0])
    gx, gy = numerical_gradient(HeightField(np.full((3, 3), 7.0)))
    assert not gx.any() and not gy.any()


@pytest.mark.parametrize("a,b,sx,sy", [(2.0, -3.0, 1.0, 1.0), (0.5, 4.0, 0.25, 2.0)])
def test_numerical_gradient_linear_exact(a, b, sx, sy):
    i, j = np.mgrid[0:6, 0:7].astype(float)
    hf = HeightField(a * i + b * j, spacing=(sx, sy))
    gx, gy = numerical_gradient(hf)
    np.testing.assert_allclose(gx, b / sx, rtol=0, atol=1e-12)
    np.testing.assert_allclose(gy, a / sy, rtol=0, atol=1e-12)


def test_surface_query_cos_sum():
    s = surface_query(surfaces.cos_sum(), (0.0, 0.0))
    assert s.z == 2.0 and s.p == 0.0 and s.q == 0.0
    np.testing.assert_allclose(s.hessian, [[-1, 0], [0, -1]])


def test_surface_query_plane_and_parabola():
    s = surface_query(surfaces.plane(), (1.3, -2.2))
    assert (s.z, s.p, s.q) == (0.0, 0.0, 0.0)
    assert not s.hessian.any()
    model = SurfaceModel(AnalyticSurface(lambda x, y: x**2 + 0 * y, Bounds.square(-2, 2)))
    s = surface_query(model, (1.0, 0.0))
    assert s.p == pytest.approx(2.0, abs=1e-8)
    assert s.hessian[0, 0] == pytest.approx(2.0, abs=1e-6)


def test_out_of_bounds_rejected():
    model = surfaces.cos_sum()
    with pytest.raises(OutOfBoundsError):
        surface_query(model, (5.5, 0.0))
    with pytest.raises(OutOfBoundsError):
        unit_normal(model, (0.0, -6.0))


@pytest.mark.parametrize("a,b,expected", [
    (0.0, 0.0, [0, 0, 1]),
    (1.0, 0.0, np.array([-1, 0, 1]) / np.sqrt(2)),
    (1.0, 1.0, np.array([-1, -1, 1]) / np.sqrt(3)),
])
def test_unit_normal_examples(a, b, expected):
    n = unit_normal(surfaces.plane(a=a, b=b), (0.3, 0.4))
    np.testing.assert_allclose(n, expected, atol=1e-15)
    assert abs(np.linalg.norm(n) - 1) <= 1e-12


def test_heightfield_gradients_match_closed_form():
    h = 0.05
    xs = np.arange(-3, 3 + h / 2, h)
    X, Y = np.meshgrid(xs, xs)
    hf = HeightField(np.cos(X) + np.cos(Y), spacing=(h, h), origin=(xs[0], xs[0]))
    model = SurfaceModel(hf)
    rng = np.random.default_rng(0)
    px, py = rng.uniform(-2.8, 2.8, (2, 200))
    p, q = model.gradient(px, py)
    np.testing.assert_allclose(p, -np.sin(px), atol=5e-3)
    np.testing.assert_allclose(q, -np.sin(py), atol=5e-3)
    z = model.elevation(px, py)
    np.testing.assert_allclose(z, np.cos(px) + np.cos(py), atol=5e-3)


def test_heightfield_on_grid_nodes_exact():
    data = np.arange(12.0).reshape(3, 4) ** 1.5
    model = SurfaceModel(HeightField(data, spacing=(0.5, 2.0), origin=(1.0, 3.0)))
    assert model.elevation(1.5, 5.0) == pytest.approx(data[1, 1])
    assert model.elevation(2.5, 7.0) == pytest.approx(data[2, 3])


def test_fd_fallback_matches_closed_form():
    closed = surfaces.cos_sum()
    fd = surfaces.from_expression("cos(x)+cos(y)")
    pts = np.array([[0.3, -1.2], [2.5, 4.0], [-3.3, 0.7]])
    for x, y in pts:
        a, b = closed.query((x, y)), fd.query((x, y))
        assert b.p == pytest.approx(a.p, abs=1e-8)
        np.testing.assert_allclose(b.hessian, a.hessian, atol=1e-6)


def test_analytic_surface_must_be_finite():
    with pytest.raises(ValueError), np.errstate(divide="ignore"):
        AnalyticSurface(lambda x, y: 1 / x, Bounds.square(-1, 1))


def test_pseudosphere_constant_negative_curvature():
    from orthocover.diffgeo import gaussian_curvature

    model = surfaces.pseudosphere(a=1.0)
    X, Y = model.bounds.grid(9)
    np.testing.assert_allclose(gaussian_curvature(model, X, Y), -1.0, rtol=1e-9)
