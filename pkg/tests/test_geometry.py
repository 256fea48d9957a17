import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from domainflow.errors import DegenerateCurve
from domainflow.geometry import (Circle, Collar, Ellipse, FourierCurve, collar_coordinates,
                                 collar_project, curve_frame, reach)

# perimeter of the (1, 0.5) ellipse, 4 a E(m = 3/4)
ELLIPSE_1_HALF_PERIMETER = 4.844224110273838


def test_circle_frame_is_outward():
    c = Circle((1.0, -2.0), 3.0, 0.0, 32)
    assert np.allclose(c.normals, (c.points - [1.0, -2.0]) / 3.0, atol=1e-15)
    assert np.allclose(c.curvature, 1 / 3.0, atol=1e-14)


def test_ellipse_vertex_curvatures(ellipse):
    _, _, n0, k0 = curve_frame(ellipse, 0.0)
    _, _, n1, k1 = curve_frame(ellipse, np.pi / 2)
    assert k0 == pytest.approx(2.0, abs=1e-13)
    assert k1 == pytest.approx(0.25, abs=1e-13)
    assert np.allclose(n0, [1, 0], atol=1e-15) and np.allclose(n1, [0, 1], atol=1e-15)


def test_ellipse_reach_and_length():
    assert reach(Ellipse(a=2.0, b=1.0, n=128)) == pytest.approx(0.5, abs=1e-12)
    assert Ellipse(a=1.0, b=0.5, n=128).length == pytest.approx(ELLIPSE_1_HALF_PERIMETER, abs=1e-12)


def test_fourier_interpolant_matches_ellipse(ellipse):
    f = FourierCurve.from_samples(ellipse.points)
    s = np.linspace(0, 2 * np.pi, 37)
    assert np.max(np.abs(f.point(s) - ellipse.point(s))) < 1e-12
    assert reach(f) == pytest.approx(0.5, abs=1e-8)


def test_clockwise_curve_rejected():
    pts = Circle(n=32).points[::-1]
    with pytest.raises(DegenerateCurve):
        FourierCurve.from_samples(pts).validate()


def test_default_collar_width(ellipse):
    collar = Collar.default(ellipse)
    assert collar.delta == pytest.approx(0.5 / 8)
    assert collar.width == pytest.approx(4 * collar.delta)


@given(s=st.floats(0, 2 * np.pi), frac=st.floats(-0.95, 0.95))
def test_collar_coordinates_invert_offset_map(s, frac):
    e = Ellipse(a=1.4, b=1.0, n=64)
    collar = Collar.default(e)
    lam = frac * collar.width
    y = e.point(s) + lam * e.normal(s)
    s2, lam2, inside = collar_coordinates(collar, y)
    assert inside[0]
    assert abs(np.angle(np.exp(1j * (s2[0] - s)))) < 1e-9
    assert lam2[0] == pytest.approx(lam, abs=1e-10)


@given(s=st.floats(0, 2 * np.pi))
def test_projection_of_curve_point_is_itself(s):
    e = Ellipse(a=1.2, b=0.9, n=64)
    s2, lam = collar_project(Collar.default(e), e.point(s)[0])
    assert abs(lam) < 1e-12


@given(r=st.floats(0.1, 5.0), a=st.floats(-np.pi, np.pi))
def test_reach_scales_and_is_rigid_invariant(r, a):
    e = Ellipse(a=1.5, b=1.0, n=64)
    assert reach(e.scaled(r).rotated(a)) == pytest.approx(r * reach(e), rel=1e-9)


def test_gauss_bonnet_on_fourier_curve(rng):
    c = Circle(n=128)
    bump = 0.05 * np.cos(3 * c.s) + 0.03 * np.sin(5 * c.s)
    f = FourierCurve.from_samples(c.points + bump[:, None] * c.normals)
    total = np.sum(f.curvature * f.speed) * 2 * np.pi / f.n
    assert total == pytest.approx(2 * np.pi, abs=1e-10)
