import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from domainflow.charts import Chart, DomainRep
from domainflow.corpus import perturbed_disk, random_domain
from domainflow.field import (area, boundary_geometry, centroid, heleshaw_field, perimeter, solve_dirichlet,
                              solve_dirichlet_full)
from domainflow.geometry import Circle, Ellipse
from domainflow.groups import GroupElement, act


@pytest.fixture(scope="module")
def ellipse_bd():
    return boundary_geometry(DomainRep.reference(Chart.over(Ellipse((0.1, -0.2), 1.0, 0.5, 0.3, 128))))


def test_area_and_perimeter():
    dom = DomainRep.reference(Chart.over(Ellipse(a=1.0, b=0.5, n=128)))
    assert area(dom) == pytest.approx(np.pi / 2, abs=1e-13)
    assert perimeter(dom) == pytest.approx(4.844224110273838, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_disk_harmonics(unit_disk, k):
    bd = boundary_geometry(unit_disk)
    t = unit_disk.curve.s
    assert np.max(np.abs(solve_dirichlet(bd, np.cos(k * t)) - k * np.cos(k * t))) < 1e-9


def test_polynomial_harmonics_on_ellipse(ellipse_bd):
    x, y = ellipse_bd.points.T
    nx, ny = ellipse_bd.normals.T
    assert np.max(np.abs(solve_dirichlet(ellipse_bd, x) - nx)) < 1e-10
    got = solve_dirichlet(ellipse_bd, x**2 - y**2)
    assert np.max(np.abs(got - (2 * x * nx - 2 * y * ny))) < 1e-9


def test_log_potential_on_ellipse(ellipse_bd):
    z0 = np.array([1.6, 0.9])
    r = ellipse_bd.points - z0
    g = 0.5 * np.log(np.sum(r**2, axis=1))
    exact = np.sum(r * ellipse_bd.normals, axis=1) / np.sum(r**2, axis=1)
    sol = solve_dirichlet_full(ellipse_bd, g)
    assert np.max(np.abs(sol.normal_derivative - exact)) < 1e-8
    assert sol.residual < 1e-12 and sol.condition < 1e6


def test_small_disk_with_unit_capacity():
    # diameter-1 disks make the plain single layer singular; the augmented system is not
    disk = DomainRep.reference(Chart.over(Circle(n=64)))
    tiny = act(GroupElement.dilation(0.5), disk)
    bd = boundary_geometry(tiny)
    t = tiny.curve.s
    assert np.max(np.abs(solve_dirichlet(bd, np.cos(2 * t)) - 4 * np.cos(2 * t))) < 1e-9


@given(r=st.floats(0.2, 5.0), cx=st.floats(-3, 3), cy=st.floats(-3, 3))
def test_disks_are_equilibria(r, cx, cy):
    dom = DomainRep.reference(Chart.over(Circle((cx, cy), r, 0.0, 64)))
    assert heleshaw_field(dom).sup() <= 1e-8 / r**2


@pytest.mark.parametrize("k", [2, 3, 4])
def test_linear_mode_rate(k):
    eps = 1e-3
    d = perturbed_disk(k, eps, 256)
    amp = 2 * np.mean(heleshaw_field(d).values * np.cos(k * d.curve.s)) / eps
    assert amp == pytest.approx(-k * (k * k - 1), rel=1e-2)


def test_velocity_has_zero_mean(rng):
    dom = random_domain(rng, 128)
    bd = boundary_geometry(dom)
    assert abs(np.sum(heleshaw_field(dom, bd).values * bd.weights)) < 1e-10


def test_dilation_scaling(rng):
    dom = random_domain(rng, 128)
    v = heleshaw_field(dom).values
    for lam in (0.5, 2.0):
        assert np.max(np.abs(heleshaw_field(act(GroupElement.dilation(lam), dom)).values - v / lam**2)) < 1e-8


def test_centroid_of_shifted_ellipse():
    dom = DomainRep.reference(Chart.over(Ellipse((0.3, -0.7), 1.0, 0.5, 0.4, 128)))
    assert np.allclose(centroid(dom), [0.3, -0.7], atol=1e-14)
