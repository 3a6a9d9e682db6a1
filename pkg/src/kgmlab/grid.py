"""Uniform radial mesh with discrete operators and weighted quadrature.

Radially symmetric functions on R^N truncated to the ball of radius r_max
are stored nodally on r_i = i*h.  Volume integrals reduce to

    integral_{R^N} f dx  =  area(S^{N-1}) * integral_0^rmax f(r) r^(N-1) dr

and are evaluated with composite Simpson weights (trapezoid closure on a
final odd interval).  The Laplacian of a radial function is

    lap u = u'' + (N-1)/r * u'

discretized with second-order central differences; at r = 0 a ghost node
enforcing u'(0) = 0 gives the regular limit lap u(0) = N * u''(0), and at
r_max the stencil closes with a homogeneous Dirichlet ghost value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError


def sphere_area(dimension: int) -> float:
    """Area of the unit (N-1)-sphere bounding the unit ball of R^N."""
    return 2.0 * math.pi ** (dimension / 2.0) / math.gamma(dimension / 2.0)


def _simpson_weights(nodes: int, h: float) -> np.ndarray:
    """Composite Simpson weights; trapezoid on the last interval if the
    interval count is odd."""
    w = np.zeros(nodes)
    intervals = nodes - 1
    last_simpson = intervals if intervals % 2 == 0 else intervals - 1
    if last_simpson >= 2:
        w[0:last_simpson + 1:2] += 2.0 * h / 3.0
        w[1:last_simpson:2] += 4.0 * h / 3.0
        w[0] -= h / 3.0
        w[last_simpson] -= h / 3.0
    if last_simpson != intervals:
        w[-2] += 0.5 * h
        w[-1] += 0.5 * h
    return w


class RadialGrid:
    """Uniform mesh on [0, r_max]; immutable after construction."""

    def __init__(self, dimension: int, r_max: float, nodes: int):
        if int(dimension) != dimension or dimension < 3:
            raise ParameterDomainError(f"dimension must be an integer >= 3, got {dimension}")
        if not (r_max > 0):
            raise ParameterDomainError(f"r_max must be > 0, got {r_max}")
        if int(nodes) != nodes or nodes < 16:
            raise ParameterDomainError(f"node count must be an integer >= 16, got {nodes}")
        self.dimension = int(dimension)
        self.r_max = float(r_max)
        self.nodes = int(nodes)
        self.h = self.r_max / (self.nodes - 1)
        self.r = np.linspace(0.0, self.r_max, self.nodes)
        self.surface_measure = sphere_area(self.dimension)
        # quadrature weights for integral f dx = sum_i W_i f(r_i)
        self.weights = self.surface_measure * _simpson_weights(self.nodes, self.h) \
            * self.r ** (self.dimension - 1)
        # midpoint r^(N-1), used by the flux-form elliptic assembly
        r_half = self.r[:-1] + 0.5 * self.h
        self.flux_coeff = r_half ** (self.dimension - 1)
        # volume of the origin cell [0, h/2]
        self.origin_cell = (0.5 * self.h) ** self.dimension / self.dimension

    def field(self, values) -> "RadialField":
        return RadialField(self, np.asarray(values, dtype=float))

    def zero_field(self) -> "RadialField":
        return RadialField(self, np.zeros(self.nodes))

    def from_function(self, fn) -> "RadialField":
        return self.field(fn(self.r))

    def integrate_values(self, values: np.ndarray) -> float:
        return float(self.weights @ values)

    def __repr__(self):
        return (f"RadialGrid(dimension={self.dimension}, r_max={self.r_max}, "
                f"nodes={self.nodes})")


@dataclass
class RadialField:
    """Nodal values of a radial scalar field; finite everywhere."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nodes,):
            raise ParameterDomainError(
                f"field has {self.values.shape} values for a grid of {self.grid.nodes} nodes")
        if not np.all(np.isfinite(self.values)):
            raise ParameterDomainError("field contains non-finite values")

    def copy(self) -> "RadialField":
        return RadialField(self.grid, self.values.copy())

    def __add__(self, other: "RadialField") -> "RadialField":
        return RadialField(self.grid, self.values + other.values)

    def __sub__(self, other: "RadialField") -> "RadialField":
        return RadialField(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "RadialField":
        return RadialField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__


def gradient_values(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """du/dr with central stencils inside, one-sided second order at the ends."""
    return np.gradient(values, grid.h, edge_order=2)


def laplacian(u: RadialField) -> RadialField:
    g = u.grid
    v = u.values
    n, h, dim = g.nodes, g.h, g.dimension
    out = np.empty(n)
    # r = 0: ghost node u[-1] = u[1] and the regular limit N * u''(0)
    out[0] = 2.0 * dim * (v[1] - v[0]) / h ** 2
    interior = slice(1, n - 1)
    r_int = g.r[interior]
    out[interior] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h ** 2 \
        + (dim - 1) / r_int * (v[2:] - v[:-2]) / (2.0 * h)
    # r = r_max: Dirichlet ghost value 0
    out[-1] = (-2.0 * v[-1] + v[-2]) / h ** 2 \
        + (dim - 1) / g.r_max * (0.0 - v[-2]) / (2.0 * h)
    return RadialField(g, out)


def integrate(f: RadialField) -> float:
    return f.grid.integrate_values(f.values)


def norm_lp(u: RadialField, p: float) -> float:
    if p < 1:
        raise ParameterDomainError(f"norm exponent p must be >= 1, got {p}")
    return float(u.grid.integrate_values(np.abs(u.values) ** p) ** (1.0 / p))


def norm_d12(u: RadialField) -> float:
    du = gradient_values(u.grid, u.values)
    return math.sqrt(max(u.grid.integrate_values(du * du), 0.0))


def norm_h1(u: RadialField) -> float:
    return math.sqrt(norm_d12(u) ** 2 + norm_lp(u, 2) ** 2)


def h1_inner(u: RadialField, v: RadialField) -> float:
    g = u.grid
    du = gradient_values(g, u.values)
    dv = gradient_values(g, v.values)
    return g.integrate_values(du * dv) + g.integrate_values(u.values * v.values)
