"""Reduced energy of the matter field and its gradient.

Eliminating the electrostatic potential phi = phi[u] turns the coupled
system into the single-field energy

    E(u) = 1/2 int(|grad u|^2 + (m0^2 - omega^2) u^2
                   + |grad phi|^2 + phi^2 u^2)
           - mu/q int |u|^q - 1/2* int |u|^{2*}

whose critical points are exactly the radial solitary waves.  Because phi[u]
solves its own equation, the derivative of E needs no derivative of phi:

    grad E(u) = -lap u + [m0^2 - (omega + phi)^2] u
                - mu |u|^{q-2} u - |u|^{2*-2} u

represented here in the flat weighted-L2 metric.  The weak pairing
<E'(u), v> equals integrate(grad * v) for test fields vanishing at r_max,
up to O(h^2) stencil-consistency terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError
from .grid import RadialField, integrate, laplacian, norm_d12, norm_lp
from .params import KGMParams
from .potential import PotentialSolution, _solve_potential_raw, solve_potential


@dataclass
class EnergyBreakdown:
    kinetic: float        # 1/2 int |grad u|^2
    mass_term: float      # 1/2 (m0^2 - omega^2) int u^2
    maxwell: float        # 1/2 int |grad phi|^2 + 1/2 int phi^2 u^2
    power_term: float     # mu/q int |u|^q
    critical_term: float  # 1/2* int |u|^{2*}
    total: float

    def as_dict(self) -> dict:
        return {
            "kinetic": self.kinetic,
            "mass_term": self.mass_term,
            "maxwell": self.maxwell,
            "power_term": self.power_term,
            "critical_term": self.critical_term,
            "total": self.total,
        }


def _breakdown_raw(u: RadialField, phi_values: np.ndarray, m0: float, omega: float,
                   mu: float, q: float, two_star: float,
                   critical_enabled: bool = True) -> EnergyBreakdown:
    g = u.grid
    uv = u.values
    kinetic = 0.5 * norm_d12(u) ** 2
    mass = 0.5 * (m0 * m0 - omega * omega) * g.integrate_values(uv * uv)
    phi_field = RadialField(g, phi_values)
    maxwell = 0.5 * norm_d12(phi_field) ** 2 \
        + 0.5 * g.integrate_values(phi_values * phi_values * uv * uv)
    power = (mu / q) * g.integrate_values(np.abs(uv) ** q) if mu != 0.0 else 0.0
    critical = g.integrate_values(np.abs(uv) ** two_star) / two_star \
        if critical_enabled else 0.0
    total = kinetic + mass + maxwell - power - critical
    return EnergyBreakdown(kinetic=kinetic, mass_term=mass, maxwell=maxwell,
                           power_term=power, critical_term=critical, total=total)


def energy(u: RadialField, params: KGMParams,
           potential: PotentialSolution | None = None) -> EnergyBreakdown:
    """Full energy breakdown at u; solves for the potential unless supplied."""
    if u.grid.dimension != params.dimension:
        raise ParameterDomainError(
            f"grid dimension {u.grid.dimension} != params dimension {params.dimension}")
    if potential is None:
        phi_values = _solve_potential_raw(u.grid, u.values, params.omega)
    else:
        phi_values = potential.phi.values
    return _breakdown_raw(u, phi_values, params.m0, params.omega, params.mu,
                          params.q, params.two_star)


def _gradient_values_raw(u: RadialField, phi_values: np.ndarray, m0: float,
                         omega: float, mu: float, q: float, two_star: float,
                         critical_enabled: bool = True) -> np.ndarray:
    uv = u.values
    lap = laplacian(u).values
    shifted = omega + phi_values
    out = -lap + (m0 * m0 - shifted * shifted) * uv
    if mu != 0.0:
        # |u|^{q-2} u written as |u|^{q-1} sign(u): continuous at 0 for q > 2
        out -= mu * np.abs(uv) ** (q - 1.0) * np.sign(uv)
    if critical_enabled:
        out -= np.abs(uv) ** (two_star - 2.0) * uv
    # the energy lives on fields pinned to zero at r_max; the boundary node
    # carries no variation, so the gradient has no component there
    out[-1] = 0.0
    return out


def energy_gradient(u: RadialField, params: KGMParams,
                    potential: PotentialSolution | None = None) -> RadialField:
    """Weighted-L2 representation of the energy derivative at u."""
    if u.grid.dimension != params.dimension:
        raise ParameterDomainError(
            f"grid dimension {u.grid.dimension} != params dimension {params.dimension}")
    if potential is None:
        phi_values = _solve_potential_raw(u.grid, u.values, params.omega)
    else:
        phi_values = potential.phi.values
    vals = _gradient_values_raw(u, phi_values, params.m0, params.omega,
                                params.mu, params.q, params.two_star)
    return RadialField(u.grid, vals)


def pairing(gradient: RadialField, v: RadialField) -> float:
    """Weak pairing <E'(u), v> = integrate(gradient * v)."""
    return gradient.grid.integrate_values(gradient.values * v.values)


def energy_along_ray(u: RadialField, t_list, params: KGMParams) -> list[float]:
    """Energies t -> E(t*u); each t triggers a fresh potential solve since
    the reduction map is not homogeneous in u."""
    out = []
    for t in t_list:
        t = float(t)
        if t < 0:
            raise ParameterDomainError(f"ray parameter must be >= 0, got {t}")
        out.append(energy(u * t, params).total)
    return out


def residual_norm(u: RadialField, params: KGMParams,
                  potential: PotentialSolution | None = None) -> float:
    """Weighted L2 norm of the energy gradient; the solver's convergence
    measure."""
    return norm_lp(energy_gradient(u, params, potential=potential), 2)
