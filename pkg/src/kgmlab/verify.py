"""Seeded invariant battery behind the `verify` CLI mode.

Each suite exercises one contract of the numerical core (potential sign
bounds, oracle equivalence of the banded solve, gradient consistency,
closed-form integral identities, quadrature sanity, ray-maximizer bounds)
on randomized inputs drawn from a fixed seed, and reports pass counts.
The full acceptance matrix lives in the test suite; this battery is the
quick, CLI-facing subset.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import RadialGrid, RadialField, integrate, laplacian, norm_lp
from .params import KGMParams
from .potential import solve_potential, spd_system, _solve_potential_raw
from .energy import energy, energy_gradient, pairing
from .instanton import InstantonParams, max_energy_on_ray, moment


def smooth_random_field(grid: RadialGrid, rng: np.random.Generator,
                        bumps: int = 3) -> RadialField:
    """Sum of random wide Gaussian pairs, tapered to vanish before r_max.

    Bumps are mirrored through the origin so the field is an even function
    of r: radial smoothness requires u'(0) = 0, otherwise the profile has a
    cone singularity at the origin and the radial Laplacian blows up there.
    """
    r = grid.r
    vals = np.zeros_like(r)
    for _ in range(bumps):
        amp = rng.uniform(-1.0, 1.0)
        center = rng.uniform(0.0, 0.4 * grid.r_max)
        width = rng.uniform(0.8, 2.5)
        vals += amp * (np.exp(-((r - center) / width) ** 2)
                       + np.exp(-((r + center) / width) ** 2))
    vals *= _smooth_taper((r - 0.6 * grid.r_max) / (0.3 * grid.r_max))
    vals[-1] = 0.0
    return RadialField(grid, vals)


def _smooth_taper(s: np.ndarray) -> np.ndarray:
    """C-infinity partition function: 1 for s <= 0, 0 for s >= 1.  A merely
    C^1 taper would leave curvature jumps that pollute stencil tests."""
    s = np.clip(s, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f_up = np.where(s > 0.0, np.exp(-1.0 / np.maximum(s, 1e-300)), 0.0)
        f_dn = np.where(s < 1.0, np.exp(-1.0 / np.maximum(1.0 - s, 1e-300)), 0.0)
    return f_dn / (f_up + f_dn)


def dense_potential_solve(grid: RadialGrid, u_values: np.ndarray,
                          omega: float) -> np.ndarray:
    """Full-matrix assembly of the same symmetrized system; oracle for the
    banded path."""
    m = grid.nodes - 1
    ab, wsym = spd_system(grid, u_values * u_values)
    a = np.zeros((m, m))
    a[np.arange(m), np.arange(m)] = ab[1]
    a[np.arange(m - 1), np.arange(1, m)] = ab[0, 1:]
    a[np.arange(1, m), np.arange(m - 1)] = ab[0, 1:]
    rhs = wsym * (-omega * u_values[:m] ** 2)
    x = np.linalg.solve(a, rhs)
    return np.concatenate([x, [0.0]])


def _suite(name, checks):
    passed = sum(1 for ok, _ in checks if ok)
    failures = [detail for ok, detail in checks if not ok]
    return {
        "name": name,
        "passed": passed,
        "total": len(checks),
        "failures": failures[:8],
    }


def suite_potential_sign_band(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    checks = []
    for n_dim in (3, 4, 5, 6):
        grid = RadialGrid(n_dim, 12.0, 193)
        for _ in range(8):
            omega = rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])
            two_star = 2.0 * n_dim / (n_dim - 2)
            params = KGMParams(dimension=n_dim, m0=2.0 * abs(omega) + 0.5,
                               omega=omega, mu=1.0, q=0.5 * (2.0 + two_star))
            u = smooth_random_field(grid, rng)
            sol = solve_potential(u, params)
            ok = sol.bound_violation <= 1e-8 * abs(omega)
            checks.append((ok, f"N={n_dim} omega={omega:g}: violation {sol.bound_violation:.2e}"))
            # sign equivariance
            flipped = _solve_potential_raw(grid, u.values, -omega)
            delta = float(np.max(np.abs(sol.phi.values + flipped)))
            scale = max(float(np.max(np.abs(sol.phi.values))), 1e-30)
            checks.append((delta <= 1e-12 * max(1.0, scale),
                           f"N={n_dim}: equivariance defect {delta:.2e}"))
            # evenness in u
            mirrored = _solve_potential_raw(grid, -u.values, omega)
            delta2 = float(np.max(np.abs(sol.phi.values - mirrored)))
            checks.append((delta2 == 0.0, f"N={n_dim}: evenness defect {delta2:.2e}"))
    return _suite("potential_sign_band", checks)


def suite_banded_vs_dense(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    checks = []
    for n_dim in (3, 4, 5, 6):
        grid = RadialGrid(n_dim, 12.0, 129)
        omega = 1.0
        u = smooth_random_field(grid, rng)
        banded = _solve_potential_raw(grid, u.values, omega)
        dense = dense_potential_solve(grid, u.values, omega)
        scale = max(float(np.max(np.abs(dense))), 1e-30)
        rel = float(np.max(np.abs(banded - dense))) / scale
        checks.append((rel <= 1e-10, f"N={n_dim}: banded/dense rel diff {rel:.2e}"))
    return _suite("banded_vs_dense", checks)


def suite_closed_form_integrals(_seed: int) -> dict:
    checks = []
    for eps in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
        for big_r in (1.0, 2.0):
            t = big_r / math.sqrt(eps)
            got = moment(3, 2.0, t)
            want = 0.5 * (math.log1p(big_r ** 2 / eps) + eps / (eps + big_r ** 2) - 1.0)
            checks.append((abs(got - want) <= 1e-8 * abs(want),
                           f"log moment eps={eps:g} R={big_r:g}: {got!r} vs {want!r}"))
            got = moment(3, 4.0, t)
            want = 1.0 / 12.0 - eps ** 2 * (eps + 3.0 * big_r ** 2) \
                / (12.0 * (eps + big_r ** 2) ** 3)
            checks.append((abs(got - want) <= 1e-8 * abs(want),
                           f"quartic moment eps={eps:g} R={big_r:g}"))
            got = moment(2, 1.0, t)
            want = t - math.atan(t)
            checks.append((abs(got - want) <= 1e-8 * abs(want),
                           f"arctan moment eps={eps:g} R={big_r:g}"))
    return _suite("closed_form_integrals", checks)


def suite_gradient_pairing(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    checks = []
    for n_dim in (3, 4):
        grid = RadialGrid(n_dim, 12.0, 4097)
        params = KGMParams(dimension=n_dim, m0=2.0, omega=1.0, mu=1.0, q=3.0)
        for _ in range(4):
            u = smooth_random_field(grid, rng)
            v = smooth_random_field(grid, rng)
            lhs = pairing(energy_gradient(u, params), v)
            t = 1e-5 * max(1.0, norm_lp(u, 2)) / max(norm_lp(v, 2), 1e-10)
            fd = (energy(u + v * t, params).total
                  - energy(u - v * t, params).total) / (2.0 * t)
            rel = abs(fd - lhs) / max(abs(fd), 1e-12)
            checks.append((rel < 1e-5, f"N={n_dim}: pairing rel err {rel:.2e}"))
    return _suite("gradient_pairing", checks)


def suite_grid_quadrature(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    checks = []
    grid = RadialGrid(3, 1.0, 257)
    vol = integrate(RadialField(grid, np.ones(grid.nodes)))
    checks.append((abs(vol - 4.0 * math.pi / 3.0) < 1e-10,
                   f"ball volume defect {abs(vol - 4 * math.pi / 3):.2e}"))
    grid4 = RadialGrid(4, 10.0, 1025)
    u = smooth_random_field(grid4, rng)
    v = smooth_random_field(grid4, rng)
    a, b = rng.uniform(-2, 2, size=2)
    lin = laplacian(u * a + v * b).values - (a * laplacian(u).values + b * laplacian(v).values)
    checks.append((float(np.max(np.abs(lin))) < 1e-9 * max(1.0, float(np.max(np.abs(laplacian(u).values)))),
                   "laplacian linearity"))
    ibp = integrate(RadialField(grid4, laplacian(u).values * v.values))
    du = np.gradient(u.values, grid4.h, edge_order=2)
    dv = np.gradient(v.values, grid4.h, edge_order=2)
    ibp_rhs = -grid4.integrate_values(du * dv)
    checks.append((abs(ibp - ibp_rhs) < 50.0 * grid4.h ** 2,
                   f"integration by parts defect {abs(ibp - ibp_rhs):.2e}"))
    grid_r2 = RadialGrid(3, 1.0, 201)
    lap = laplacian(grid_r2.from_function(lambda r: r ** 2)).values
    checks.append((float(np.max(np.abs(lap[:-1] - 6.0))) < 1e-8, "r^2 laplacian exactness"))
    return _suite("grid_quadrature", checks)


def suite_ray_bound(_seed: int) -> dict:
    checks = []
    cases = [
        KGMParams(dimension=3, m0=1.0, omega=0.5, mu=1.0, q=5.0),
        KGMParams(dimension=4, m0=2.0, omega=1.0, mu=1.0, q=3.0),
        KGMParams(dimension=5, m0=2.0, omega=0.5, mu=1.0, q=2.5),
        KGMParams(dimension=6, m0=2.0, omega=0.5, mu=1.0, q=2.5),
    ]
    for params in cases:
        p = InstantonParams(epsilon=0.05, R=1.0, dimension=params.dimension)
        ray = max_energy_on_ray(p, params)
        ok = ray.t_star <= ray.ray_bound + 1e-6 * (1.0 + ray.ray_bound)
        checks.append((ok, f"N={params.dimension}: t*={ray.t_star:g} bound={ray.ray_bound:g}"))
    return _suite("ray_bound", checks)


SUITES = (
    suite_potential_sign_band,
    suite_banded_vs_dense,
    suite_closed_form_integrals,
    suite_gradient_pairing,
    suite_grid_quadrature,
    suite_ray_bound,
)


def run_verification(seed: int = 0) -> dict:
    results = []
    for k, suite_fn in enumerate(SUITES):
        results.append(suite_fn(seed + 1000 * k))
    total = sum(s["total"] for s in results)
    passed = sum(s["passed"] for s in results)
    return {
        "seed": seed,
        "suites": results,
        "passed": passed,
        "total": total,
        "all_passed": passed == total,
    }
