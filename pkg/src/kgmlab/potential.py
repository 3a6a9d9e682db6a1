"""Electrostatic potential of a given matter profile.

For fixed u the potential solves

    -lap(phi) + u^2 phi = -omega u^2,   phi'(0) = 0,  phi(r_max) = 0,

a linear elliptic problem.  The discrete operator is assembled in flux
(divergence) form so that scaling row i by the cell weight makes the matrix
symmetric positive definite and an M-matrix.  That buys two things at once:
the banded Cholesky solve is unconditionally well posed, and the discrete
maximum principle pins phi inside the band [-omega, 0] (omega > 0; mirrored
for omega < 0) to round-off, matching the continuum sign bounds.

Diagnostics carried on the solution:
  residual_norm        weighted L2 residual of the solved discrete system
  bound_violation      worst distance outside the sign band on {u != 0}
  energy_identity_gap  |int |grad phi|^2 + omega int u^2 phi + int u^2 phi^2|,
                       an O(h^2) consistency measure of the solve + quadrature
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded, solveh_banded

from .errors import ParameterDomainError
from .grid import RadialField, RadialGrid, norm_d12
from .params import KGMParams

BAND_REL_TOL = 1e-8  # bound_violation contract: <= BAND_REL_TOL * |omega|
SUPPORT_REL_TOL = 1e-14  # nodes with |u| below this fraction of max|u| count as u = 0


@dataclass
class PotentialSolution:
    phi: RadialField
    residual_norm: float
    bound_violation: float
    energy_identity_gap: float

    def diagnostics(self) -> dict:
        return {
            "residual_norm": self.residual_norm,
            "bound_violation": self.bound_violation,
            "energy_identity_gap": self.energy_identity_gap,
        }


def _sym_weights(grid: RadialGrid) -> np.ndarray:
    """Row scalings that symmetrize the flux-form operator on nodes 0..n-2.

    Reaction and source terms carry trapezoid-family weights h * r^(N-1):
    for fields decaying before r_max the weighted integrand has vanishing
    boundary derivatives, so this family integrates with even-order error
    only.  The origin row still needs its (h/2)^N / N cell mass to stay well
    posed; that excess is rebalanced out of the first interior node, which
    cancels the odd-order point defect the origin cell would otherwise
    inject (the correction is O(h^2)-small relative to h * r_1^(N-1), so
    positivity and the M-matrix structure survive).
    """
    h, dim = grid.h, grid.dimension
    w = np.empty(grid.nodes - 1)
    origin_mass = (0.5 * h) ** dim / dim
    w[0] = origin_mass
    w[1:] = h * grid.r[1:-1] ** (dim - 1)
    w[1] -= origin_mass
    return w


def spd_system(grid: RadialGrid, potential: np.ndarray):
    """Symmetrized banded form of (-lap + potential) with value 0 at r_max.

    Returns (ab, wsym): `ab` is the upper banded storage accepted by
    scipy.linalg.solveh_banded for the unknowns at nodes 0..n-2, and `wsym`
    the row weights such that the system for a right-hand side rhs reads
    A_sym x = wsym * rhs.
    """
    m = grid.nodes - 1
    wsym = _sym_weights(grid)
    flux = grid.flux_coeff / grid.h  # flux[i] couples nodes i and i+1
    diag = np.empty(m)
    diag[0] = flux[0] + wsym[0] * potential[0]
    diag[1:] = flux[:m - 1] + flux[1:m] + wsym[1:] * potential[1:m]
    ab = np.zeros((2, m))
    ab[0, 1:] = -flux[:m - 1]
    ab[1, :] = diag
    return ab, wsym


def solve_spd_radial(grid: RadialGrid, potential: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (-lap + potential) x = rhs with x'(0) = 0, x(r_max) = 0.

    `potential` must be nonnegative so the operator stays definite.  Returns
    full-length nodal values (last node 0).
    """
    if not np.all(np.isfinite(potential)) or not np.all(np.isfinite(rhs)):
        raise ParameterDomainError("non-finite coefficients in elliptic solve")
    m = grid.nodes - 1
    ab, wsym = spd_system(grid, potential)
    x = solveh_banded(ab, wsym * rhs[:m])
    return np.concatenate([x, [0.0]])


def flux_laplacian_rows(grid: RadialGrid):
    """Tridiagonal coefficients (lo, di, up) of the flux-form -lap on nodes
    0..n-2, in per-node (unsymmetrized) scaling.

    Row i of -lap applied to full nodal values v reads
        lo[i]*v[i-1] + di[i]*v[i] + up[i]*v[i+1]
    with lo[0] unused and up[m-1] multiplying the boundary node n-1.
    """
    m = grid.nodes - 1
    wsym = _sym_weights(grid)
    flux = grid.flux_coeff / grid.h
    lo = np.zeros(m)
    di = np.empty(m)
    up = np.empty(m)
    di[0] = flux[0] / wsym[0]
    up[0] = -flux[0] / wsym[0]
    lo[1:] = -flux[:m - 1] / wsym[1:]
    di[1:] = (flux[:m - 1] + flux[1:m]) / wsym[1:]
    up[1:] = -flux[1:m] / wsym[1:]
    return lo, di, up


def _solve_potential_raw(grid: RadialGrid, u_values: np.ndarray, omega: float,
                         boundary: str = "dirichlet") -> np.ndarray:
    """Potential values for matter profile u; accepts omega = 0 (gives 0)."""
    usq = u_values * u_values
    rhs = -omega * usq
    if boundary == "dirichlet":
        return solve_spd_radial(grid, usq, rhs)
    if boundary != "robin":
        raise ParameterDomainError(f"unknown boundary closure {boundary!r}")
    # Robin closure phi' + (N-2)/r * phi = 0 at r_max: the boundary node
    # becomes an unknown and the central ghost value is eliminated.  Used
    # for truncation studies; the closed row breaks exact symmetry.
    n, h, dim = grid.nodes, grid.h, grid.dimension
    lo, di, up = flux_laplacian_rows(grid)
    ab = np.zeros((3, n))
    ab[0, 1:] = up                        # A[i, i+1], rows 0..n-2
    ab[1, :n - 1] = di + usq[:n - 1]
    ab[2, :n - 2] = lo[1:]                # A[i, i-1], rows 1..n-2
    flux_in = (grid.r_max - 0.5 * h) ** (dim - 1) / h
    flux_out = (grid.r_max + 0.5 * h) ** (dim - 1) / h
    w_last = h * grid.r_max ** (dim - 1)
    robin = 2.0 * h * (dim - 2) / grid.r_max  # ghost: v_n = v_{n-2} - robin*v_{n-1}
    ab[1, n - 1] = (flux_in + flux_out * (1.0 + robin)) / w_last + usq[n - 1]
    ab[2, n - 2] = -(flux_in + flux_out) / w_last
    return solve_banded((1, 1), ab, rhs)


def energy_identity_gap(u: RadialField, sol: "PotentialSolution",
                        params: KGMParams) -> float:
    """Defect of the integrated-by-parts identity tying the potential energy
    to its sources; O(h^2) for solutions of the discrete equation."""
    phi = sol.phi
    usq_phi = u.values * u.values * phi.values
    g = u.grid
    return abs(norm_d12(phi) ** 2
               + params.omega * g.integrate_values(usq_phi)
               + g.integrate_values(usq_phi * phi.values))


def solve_potential(u: RadialField, params: KGMParams,
                    boundary: str = "dirichlet") -> PotentialSolution:
    """Solve for the potential of profile u and attach diagnostics."""
    grid = u.grid
    if grid.dimension != params.dimension:
        raise ParameterDomainError(
            f"grid dimension {grid.dimension} != params dimension {params.dimension}")
    omega = params.omega
    phi_values = _solve_potential_raw(grid, u.values, omega, boundary=boundary)
    phi = RadialField(grid, phi_values)

    # residual of the solved discrete system, in the weighted L2 norm
    usq = u.values * u.values
    m = grid.nodes - 1
    lo, di, up = flux_laplacian_rows(grid)
    v = phi_values
    res = np.zeros(grid.nodes)
    res[0] = (di[0] + usq[0]) * v[0] + up[0] * v[1] + omega * usq[0]
    res[1:m] = lo[1:] * v[:m - 1] + (di[1:] + usq[1:m]) * v[1:m] + up[1:] * v[2:m + 1] \
        + omega * usq[1:m]
    residual_norm = float(np.sqrt(max(grid.integrate_values(res * res), 0.0)))

    # sign band on the support of u
    umax = np.max(np.abs(u.values))
    band_lo, band_hi = min(0.0, -omega), max(0.0, -omega)
    if umax > 0:
        mask = np.abs(u.values) > SUPPORT_REL_TOL * umax
    else:
        mask = np.zeros(grid.nodes, dtype=bool)
    if mask.any():
        pv = phi_values[mask]
        violation = float(np.max(np.maximum(band_lo - pv, pv - band_hi), initial=0.0))
    else:
        violation = 0.0

    sol = PotentialSolution(phi=phi, residual_norm=residual_norm,
                            bound_violation=violation, energy_identity_gap=0.0)
    sol.energy_identity_gap = energy_identity_gap(u, sol, params)
    return sol
