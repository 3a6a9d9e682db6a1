import math

import numpy as np
import pytest
from scipy.integrate import quad

from kgmlab.errors import ParameterDomainError
from kgmlab.grid import (RadialField, RadialGrid, h1_inner, integrate,
                         laplacian, norm_d12, norm_h1, norm_lp, sphere_area)
from kgmlab.instanton import sobolev_constant, talenti
from kgmlab.verify import smooth_random_field


def test_grid_layout():
    g = RadialGrid(3, 10.0, 101)
    assert g.h == pytest.approx(0.1)
    assert g.r[0] == 0.0 and g.r[-1] == 10.0
    assert np.all(np.diff(g.r) > 0)
    assert g.surface_measure == pytest.approx(4.0 * math.pi)
    assert sphere_area(4) == pytest.approx(2.0 * math.pi ** 2)


def test_grid_validation():
    with pytest.raises(ParameterDomainError):
        RadialGrid(2, 10.0, 101)
    with pytest.raises(ParameterDomainError):
        RadialGrid(3, -1.0, 101)
    with pytest.raises(ParameterDomainError):
        RadialGrid(3, 10.0, 8)


def test_field_validation():
    g = RadialGrid(3, 10.0, 101)
    with pytest.raises(ParameterDomainError):
        RadialField(g, np.ones(100))
    vals = np.ones(101)
    vals[3] = np.nan
    with pytest.raises(ParameterDomainError):
        RadialField(g, vals)


def test_laplacian_constant_zero_interior():
    g = RadialGrid(4, 5.0, 64)
    lap = laplacian(g.from_function(lambda r: np.ones_like(r)))
    # all rows except the Dirichlet-closed boundary row vanish
    assert np.max(np.abs(lap.values[:-1])) < 1e-12


def test_laplacian_r_squared_exact():
    # lap(r^2) = 2N; the central stencils are exact on quadratics
    g = RadialGrid(3, 1.0, 64)
    lap = laplacian(g.from_function(lambda r: r ** 2))
    assert np.max(np.abs(lap.values[:-1] - 6.0)) < 1e-10


def test_laplacian_gaussian_against_analytic():
    # lap exp(-r^2) = (4r^2 - 2N) exp(-r^2); second-order accuracy at h=1/256
    n_dim = 4
    g = RadialGrid(n_dim, 4.0, 1025)
    assert g.h == pytest.approx(1.0 / 256.0)
    lap = laplacian(g.from_function(lambda r: np.exp(-r ** 2)))
    r = g.r
    exact = (4.0 * r ** 2 - 2.0 * n_dim) * np.exp(-r ** 2)
    j = int(round(1.0 / g.h))
    assert abs(lap.values[j] - exact[j]) < 1e-4


def test_laplacian_second_order_refinement():
    # halving h cuts the Gaussian laplacian error by about 4
    errs = []
    for n in (513, 1025):
        g = RadialGrid(4, 4.0, n)
        lap = laplacian(g.from_function(lambda r: np.exp(-r ** 2)))
        exact = (4.0 * g.r ** 2 - 8.0) * np.exp(-g.r ** 2)
        errs.append(np.max(np.abs(lap.values[:-1] - exact[:-1])))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.25)


def test_laplacian_linearity():
    g = RadialGrid(5, 8.0, 257)
    rng = np.random.default_rng(7)
    u = smooth_random_field(g, rng)
    v = smooth_random_field(g, rng)
    a, b = 1.7, -0.6
    lhs = laplacian(RadialField(g, a * u.values + b * v.values)).values
    rhs = a * laplacian(u).values + b * laplacian(v).values
    scale = np.max(np.abs(rhs)) + 1.0
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * scale


def test_integrate_ball_volume():
    g = RadialGrid(3, 1.0, 257)
    vol = integrate(g.from_function(lambda r: np.ones_like(r)))
    assert vol == pytest.approx(4.0 * math.pi / 3.0, abs=1e-10)


def test_integrate_linear_weight():
    # f(r) = r over the unit ball in R^3: 4 pi / 4 = pi
    g = RadialGrid(3, 1.0, 257)
    val = integrate(g.from_function(lambda r: r))
    assert val == pytest.approx(math.pi, abs=1e-8)


def test_integrate_against_adaptive_quadrature():
    # rational decay profile on a large domain vs an adaptive oracle
    n_dim = 4
    g = RadialGrid(n_dim, 50.0, 4097)
    val = integrate(g.from_function(lambda r: 1.0 / (1.0 + r ** 2) ** 3))
    oracle, err = quad(lambda r: r ** 3 / (1.0 + r ** 2) ** 3, 0.0, 50.0,
                       epsabs=1e-12, epsrel=1e-12, limit=200)
    assert err < 1e-12
    oracle *= sphere_area(n_dim)
    assert val == pytest.approx(oracle, rel=1e-8)


def test_integrate_odd_interval_count():
    # trapezoid closure on the final interval still integrates smooth fields
    g = RadialGrid(3, 1.0, 102)  # 101 intervals
    vol = integrate(g.from_function(lambda r: np.ones_like(r)))
    assert vol == pytest.approx(4.0 * math.pi / 3.0, rel=1e-6)


def test_norms_zero_field():
    g = RadialGrid(3, 5.0, 65)
    z = g.zero_field()
    assert norm_lp(z, 2) == 0.0
    assert norm_d12(z) == 0.0
    assert norm_h1(z) == 0.0


def test_norm_h1_pythagorean():
    g = RadialGrid(4, 12.0, 513)
    u = smooth_random_field(g, np.random.default_rng(3))
    lhs = norm_lp(u, 2) ** 2 + norm_d12(u) ** 2
    assert lhs == pytest.approx(norm_h1(u) ** 2, rel=1e-12)


def test_norm_lp_rejects_bad_exponent():
    g = RadialGrid(3, 5.0, 65)
    with pytest.raises(ParameterDomainError):
        norm_lp(g.zero_field(), 0.5)


def test_h1_inner_matches_norm():
    g = RadialGrid(3, 10.0, 257)
    u = smooth_random_field(g, np.random.default_rng(11))
    assert h1_inner(u, u) == pytest.approx(norm_h1(u) ** 2, rel=1e-12)


def test_discrete_integration_by_parts():
    # |int lap(u) v + int grad u . grad v| = O(h^2) for fields vanishing at r_max
    defects = []
    for n in (513, 1025):
        g = RadialGrid(4, 10.0, n)
        rng = np.random.default_rng(5)
        u = smooth_random_field(g, rng)
        v = smooth_random_field(g, rng)
        lhs = integrate(RadialField(g, laplacian(u).values * v.values))
        du = np.gradient(u.values, g.h, edge_order=2)
        dv = np.gradient(v.values, g.h, edge_order=2)
        defects.append(abs(lhs + g.integrate_values(du * dv)))
    assert defects[0] < 100.0 * (10.0 / 512) ** 2
    assert defects[0] / defects[1] > 2.0  # shrinks at second order


def test_integrate_linearity():
    g = RadialGrid(3, 6.0, 129)
    rng = np.random.default_rng(2)
    u = smooth_random_field(g, rng)
    v = smooth_random_field(g, rng)
    lhs = integrate(RadialField(g, 2.5 * u.values - 0.5 * v.values))
    rhs = 2.5 * integrate(u) - 0.5 * integrate(v)
    assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(rhs)))


def test_sobolev_quotient_matches_instanton_constant():
    # gridded Talenti profile at eps=1 on a large domain reproduces the
    # adaptive-quadrature Sobolev constant within 1e-4 relative
    n_dim = 5
    g = RadialGrid(n_dim, 1000.0, 131073)
    u = g.field(talenti(1.0, n_dim)(g.r))
    two_star = 2.0 * n_dim / (n_dim - 2)
    quotient = norm_d12(u) ** 2 / norm_lp(u, two_star) ** 2
    assert quotient == pytest.approx(sobolev_constant(n_dim), rel=1e-4)
