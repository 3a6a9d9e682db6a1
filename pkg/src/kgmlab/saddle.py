"""Mountain-pass search for nontrivial critical points of the reduced energy.

The energy has the classic geometry: positive on a small sphere around 0,
negative far out along any ray.  The min-max level over paths joining 0 to a
negative-energy endpoint is realized numerically in two stages:

1. a discretized path of knots is deformed by moving the currently highest
   knot down the preconditioned gradient (solving (-lap + 1) p = grad E keeps
   the descent direction mesh-independent), re-spacing knots by arclength;
   the path's level estimate never increases;
2. the highest knot of the settled path seeds a damped Newton iteration on
   the coupled (u, phi) system, assembled as one banded block matrix, which
   supplies certifiable residuals.

The trivial solution u = 0 is always a critical point; converging to it is
reported as a failure, never as a result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .errors import AdmissibilityError, ConvergenceError, ParameterDomainError
from .grid import (RadialField, RadialGrid, h1_inner, integrate, laplacian,
                   norm_h1, norm_lp)
from .params import KGMParams, MuRequirement, classify
from .potential import (_solve_potential_raw, _sym_weights, flux_laplacian_rows,
                        solve_potential, solve_spd_radial)
from .energy import EnergyBreakdown, energy, energy_gradient, residual_norm
from .instanton import sobolev_threshold

TRIVIAL_GUARD_REL = 1e-6  # |u|_inf below this fraction of the endpoint scale is "zero"


@dataclass
class SolveOptions:
    r_max: float = 20.0
    nodes: int = 2049
    tol: float = 1e-9
    knot_count: int = 11
    max_path_steps: int = 60
    path_handoff_residual: float = 5e-2
    newton_max_iter: int = 80
    mu_continuation_factor: float = 0.8
    mu_continuation_steps: int = 20
    override_admissibility: bool = False
    seed_width: float = 1.0


@dataclass
class PathState:
    """Discretized path from 0 to a negative-energy endpoint, with cached
    energies per knot.  The two endpoints stay fixed under deformation."""

    knots: list
    jvals: list
    converged: bool = False
    stalled: bool = False

    @property
    def endpoints(self):
        return self.knots[0], self.knots[-1]

    @property
    def level_estimate(self) -> float:
        return max(self.jvals)

    @property
    def level_index(self) -> int:
        top = self.level_estimate
        tol = 1e-12 * max(1.0, abs(top))
        for i, j in enumerate(self.jvals):
            if j >= top - tol:
                return i
        return int(np.argmax(self.jvals))


@dataclass
class SaddleResult:
    profile: RadialField
    phi: RadialField
    energy: float
    breakdown: EnergyBreakdown
    residual: float
    iterations: int
    path_level_history: list
    below_threshold: bool
    threshold: float
    converged: bool
    message: str = ""
    mu_trace: list = field(default_factory=list)
    newton_residual_history: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "energy": self.energy,
            "breakdown": self.breakdown.as_dict(),
            "residual": self.residual,
            "iterations": self.iterations,
            "path_level_history": self.path_level_history,
            "below_threshold": self.below_threshold,
            "threshold": self.threshold,
            "converged": self.converged,
            "message": self.message,
            "mu_trace": self.mu_trace,
            "newton_residual_history": self.newton_residual_history,
        }


# ---------------------------------------------------------------------------
# endpoint and path deformation
# ---------------------------------------------------------------------------

def find_endpoint(seed: RadialField, params: KGMParams,
                  max_doublings: int = 60) -> RadialField:
    """Scale the seed until the energy goes negative (t-doubling; terminates
    because the critical term dominates for large t)."""
    if float(np.max(np.abs(seed.values))) == 0.0:
        raise ParameterDomainError("endpoint search needs a nonzero seed shape")
    t = 1.0
    for _ in range(max_doublings):
        candidate = seed * t
        if energy(candidate, params).total < 0.0:
            return candidate
        t *= 2.0
    raise ConvergenceError("energy never went negative along the seed ray")


def make_initial_path(u1: RadialField, params: KGMParams, knot_count: int) -> PathState:
    """Straight segment from 0 to u1 with the requested number of knots."""
    if knot_count < 3:
        raise ParameterDomainError(f"need at least 3 knots, got {knot_count}")
    ts = np.linspace(0.0, 1.0, knot_count)
    knots = [u1 * t for t in ts]
    jvals = [energy(k, params).total for k in knots]
    return PathState(knots=knots, jvals=jvals)


def _respace_by_arclength(knots: list) -> list:
    """Re-interpolate knots at equal H^1 arclength along the polyline."""
    k = len(knots)
    seglen = np.array([norm_h1(knots[i + 1] - knots[i]) for i in range(k - 1)])
    total = float(seglen.sum())
    if total == 0.0:
        return [kn.copy() for kn in knots]
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    targets = np.linspace(0.0, total, k)
    out = [knots[0].copy()]
    for t in targets[1:-1]:
        j = int(np.searchsorted(cum, t, side="right")) - 1
        j = min(max(j, 0), k - 2)
        theta = (t - cum[j]) / seglen[j] if seglen[j] > 0 else 0.0
        out.append(knots[j] * (1.0 - theta) + knots[j + 1] * theta)
    out.append(knots[-1].copy())
    return out


def mountain_pass_step(state: PathState, params: KGMParams,
                       step0: float = 1.0, min_step: float = 1e-12,
                       knot_residual_tol: float = 1e-10) -> PathState:
    """One deformation step: move the highest knot down the preconditioned
    gradient, projected perpendicular to the path, then re-space by
    arclength.  The perpendicular projection is what keeps the deformation
    honest: without it the peak knot slides along the path toward an
    endpoint and the sampled level collapses through the ridge.  The level
    estimate never increases; re-spacing is skipped if it would raise it."""
    if state.converged or state.stalled:
        return state
    k = state.level_index
    if k == 0 or k == len(state.knots) - 1:
        raise ConvergenceError("path level sits on an endpoint; geometry is degenerate")
    top = state.knots[k]
    grid = top.grid
    grad = energy_gradient(top, params)
    res = norm_lp(grad, 2)
    if res < knot_residual_tol:
        return replace(state, converged=True)

    precond = solve_spd_radial(grid, np.ones(grid.nodes), grad.values)
    direction = RadialField(grid, precond)
    tangent = state.knots[k + 1] - state.knots[k - 1]
    tau_sq = h1_inner(tangent, tangent)
    if tau_sq > 0.0:
        coef = h1_inner(direction, tangent) / tau_sq
        perp = direction - tangent * coef
        if integrate(RadialField(grid, grad.values * perp.values)) > 0.0:
            direction = perp
    slope = integrate(RadialField(grid, grad.values * direction.values))
    level_before = state.level_estimate

    s = step0
    moved = None
    j_moved = None
    while s >= min_step:
        candidate = top - direction * s
        j_cand = energy(candidate, params).total
        if j_cand <= state.jvals[k] - 1e-4 * s * slope:
            moved, j_moved = candidate, j_cand
            break
        s *= 0.5
    if moved is None:
        return replace(state, stalled=True)

    knots = list(state.knots)
    jvals = list(state.jvals)
    knots[k] = moved
    jvals[k] = j_moved

    respaced = _respace_by_arclength(knots)
    jre = [jvals[0]] + [energy(kn, params).total for kn in respaced[1:-1]] + [jvals[-1]]
    if max(jre) <= level_before:
        return PathState(knots=respaced, jvals=jre)
    return PathState(knots=knots, jvals=jvals)


def _ray_maximize(u: RadialField, params: KGMParams, t_lo: float = 0.0,
                  t_hi: float = 4.0, tol: float = 1e-8) -> tuple[float, float]:
    """Maximize t -> E(t u) by scan plus golden section; returns (t*, E)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    for _ in range(8):
        ts = np.linspace(t_lo, t_hi, 25)[1:]
        vals = [energy(u * t, params).total for t in ts]
        k = int(np.argmax(vals))
        if k < len(ts) - 1:
            break
        t_hi *= 2.0
    a = ts[k - 1] if k > 0 else t_lo
    b = ts[k + 1]
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = energy(u * c, params).total
    fd = energy(u * d, params).total
    while (b - a) > tol * max(1.0, b):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = energy(u * c, params).total
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = energy(u * d, params).total
    t = 0.5 * (a + b)
    return t, energy(u * t, params).total


def _descent_refine(u: RadialField, params: KGMParams, target_residual: float,
                    max_iter: int = 30, trace: list | None = None) -> RadialField:
    """Descend on the ray-maximized energy m(u) = max_t E(t u).

    The min-max level equals the minimum of m over directions, so
    preconditioned descent with ray rescaling walks a near-ridge profile
    into the Newton basin of the saddle while m decreases monotonically.
    """
    grid = u.grid
    t, m_val = _ray_maximize(u, params)
    u = u * t
    step = 1.0
    for _ in range(max_iter):
        grad = energy_gradient(u, params)
        res = norm_lp(grad, 2)
        if trace is not None:
            trace.append(m_val)
        if res < target_residual:
            break
        p_vals = solve_spd_radial(grid, np.ones(grid.nodes), grad.values)
        slope = grid.integrate_values(grad.values * p_vals)
        direction = RadialField(grid, p_vals)
        accepted = False
        s = min(4.0 * step, 1.0)
        for _halving in range(20):
            cand = u - direction * s
            if float(np.max(np.abs(cand.values))) > 0.0:
                t_c, m_c = _ray_maximize(cand, params)
                if m_c <= m_val - 1e-4 * s * slope:
                    u = cand * t_c
                    m_val = m_c
                    step = s
                    accepted = True
                    break
            s *= 0.5
        if not accepted:
            break
    return u


# ---------------------------------------------------------------------------
# damped Newton on the coupled block system
# ---------------------------------------------------------------------------

def _noncons_lap_rows(grid: RadialGrid):
    """Tridiagonal rows of -lap (central-difference form) on nodes 0..n-2."""
    m = grid.nodes - 1
    h, dim = grid.h, grid.dimension
    lo = np.zeros(m)
    di = np.empty(m)
    up = np.empty(m)
    di[0] = 2.0 * dim / h ** 2
    up[0] = -2.0 * dim / h ** 2
    r = grid.r[1:m]
    lo[1:] = -(1.0 / h ** 2 - (dim - 1) / (2.0 * h * r))
    di[1:] = 2.0 / h ** 2
    up[1:] = -(1.0 / h ** 2 + (dim - 1) / (2.0 * h * r))
    return lo, di, up


class _BlockSystem:
    """Residual and Jacobian of the coupled (u, phi) equations, interleaved
    as z = [u_0, phi_0, u_1, phi_1, ...] over nodes 0..n-2."""

    def __init__(self, grid: RadialGrid, params: KGMParams):
        self.grid = grid
        self.params = params
        self.m = grid.nodes - 1
        self.lap_u = _noncons_lap_rows(grid)
        self.lap_phi = flux_laplacian_rows(grid)
        # merit weights: the flux-form cell measure, strictly positive at
        # every solved node.  The r^(N-1)-weighted Simpson weights vanish at
        # the origin, and a merit blind to the origin row lets Newton park
        # with an unenforced origin equation (a free core mode).
        self.wnode = grid.surface_measure * _sym_weights(grid)

    def _full(self, z: np.ndarray):
        u = np.concatenate([z[0::2], [0.0]])
        phi = np.concatenate([z[1::2], [0.0]])
        return u, phi

    def residual(self, z: np.ndarray) -> np.ndarray:
        p = self.params
        m = self.m
        u, phi = self._full(z)
        lo_u, di_u, up_u = self.lap_u
        lo_p, di_p, up_p = self.lap_phi
        lap_u = np.empty(m)
        lap_p = np.empty(m)
        lap_u[0] = di_u[0] * u[0] + up_u[0] * u[1]
        lap_p[0] = di_p[0] * phi[0] + up_p[0] * phi[1]
        lap_u[1:] = lo_u[1:] * u[:m - 1] + di_u[1:] * u[1:m] + up_u[1:] * u[2:m + 1]
        lap_p[1:] = lo_p[1:] * phi[:m - 1] + di_p[1:] * phi[1:m] + up_p[1:] * phi[2:m + 1]
        ui, pi = u[:m], phi[:m]
        shifted = p.omega + pi
        f1 = lap_u + (p.m0 ** 2 - shifted ** 2) * ui \
            - p.mu * np.abs(ui) ** (p.q - 1.0) * np.sign(ui) \
            - np.abs(ui) ** (p.two_star - 2.0) * ui
        f2 = lap_p + ui * ui * pi + p.omega * ui * ui
        out = np.empty(2 * m)
        out[0::2] = f1
        out[1::2] = f2
        return out

    def merit(self, f: np.ndarray) -> float:
        f1, f2 = f[0::2], f[1::2]
        return float(np.sqrt(max((self.wnode * (f1 * f1 + f2 * f2)).sum(), 0.0)))

    def jacobian_banded(self, z: np.ndarray) -> np.ndarray:
        p = self.params
        m = self.m
        u, phi = self._full(z)
        ui, pi = u[:m], phi[:m]
        lo_u, di_u, up_u = self.lap_u
        lo_p, di_p, up_p = self.lap_phi
        absu = np.abs(ui)
        vdiag = p.m0 ** 2 - (p.omega + pi) ** 2 \
            - p.mu * (p.q - 1.0) * absu ** (p.q - 2.0) \
            - (p.two_star - 1.0) * absu ** (p.two_star - 2.0)
        coupling = 2.0 * (p.omega + pi) * ui
        size = 2 * m
        ab = np.zeros((5, size))
        idx = np.arange(m)
        ab[2, 2 * idx] = di_u + vdiag
        ab[2, 2 * idx + 1] = di_p + ui * ui
        ab[1, 2 * idx + 1] = -coupling           # dF1_i / dphi_i
        ab[3, 2 * idx] = coupling                # dF2_i / du_i
        ab[0, 2 * idx[:-1] + 2] = up_u[:-1]      # dF1_i / du_{i+1}
        ab[4, 2 * idx[1:] - 2] = lo_u[1:]        # dF1_i / du_{i-1}
        ab[0, 2 * idx[:-1] + 3] = up_p[:-1]      # dF2_i / dphi_{i+1}
        ab[4, 2 * idx[1:] - 1] = lo_p[1:]        # dF2_i / dphi_{i-1}
        return ab

    def dense_jacobian(self, z: np.ndarray) -> np.ndarray:
        ab = self.jacobian_banded(z)
        size = ab.shape[1]
        a = np.zeros((size, size))
        for off in range(-2, 3):
            row = 2 + off
            for j in range(size):
                i = j + off
                if 0 <= i < size:
                    a[i, j] = ab[row, j]
        return a


def newton_refine(u0: RadialField, params: KGMParams, tol: float = 1e-9,
                  max_iter: int = 80, stall_tol: float | None = None) -> SaddleResult:
    """Damped Newton on the coupled system from the starting profile u0.

    The starting potential is the exact reduction of u0, so the potential
    residual starts at round-off and Newton corrects both fields jointly.
    Converging to the zero profile is reported as a failure.  A line search
    that can no longer improve a residual already below `stall_tol`
    (default 5 * tol) counts as converged: on fine meshes the merit floor
    set by round-off can sit slightly above a tight tolerance.
    """
    if stall_tol is None:
        stall_tol = 5.0 * tol
    grid = u0.grid
    if grid.dimension != params.dimension:
        raise ParameterDomainError("grid and params dimensions differ")
    scale = float(np.max(np.abs(u0.values)))
    if scale == 0.0:
        raise ParameterDomainError("Newton refinement rejects the zero profile")

    system = _BlockSystem(grid, params)
    m = system.m
    z = np.empty(2 * m)
    z[0::2] = u0.values[:m]

    history = []
    iterations = 0
    for iterations in range(1, max_iter + 1):
        # re-solve the potential exactly at the current matter profile: the
        # potential rows of the residual drop to round-off and the merit
        # coincides with the reported reduced-gradient norm, so convergence
        # is judged on exactly the quantity the result carries
        z[1::2] = _solve_potential_raw(grid, np.concatenate([z[0::2], [0.0]]),
                                       params.omega)[:m]
        f = system.residual(z)
        nf = system.merit(f)
        history.append(nf)
        if nf <= tol:
            break
        ab = system.jacobian_banded(z)
        try:
            delta = solve_banded((2, 2), ab, -f)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
            raise _singular_report(system, z, exc)
        if not np.all(np.isfinite(delta)):
            raise _singular_report(system, z, None)
        lam = 1.0
        accepted = False
        while lam >= 2.0 ** -30:
            z_try = z + lam * delta
            nf_try = system.merit(system.residual(z_try))
            if nf_try <= (1.0 - 1e-4 * lam) * nf:
                z = z_try
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            if nf <= stall_tol:
                break  # round-off floor reached below the acceptable band
            raise ConvergenceError(
                f"Newton stalled at residual {nf:.3e} after max damping",
                trace=history)
    else:
        if history[-1] > stall_tol:
            raise ConvergenceError(
                f"Newton did not reach tol={tol:g} in {max_iter} iterations "
                f"(residual {history[-1]:.3e})", trace=history)

    u_vals = np.concatenate([z[0::2], [0.0]])
    u = RadialField(grid, u_vals)
    if float(np.max(np.abs(u_vals))) < TRIVIAL_GUARD_REL * scale:
        raise ConvergenceError(
            "Newton collapsed to the trivial solution", trace=history)

    potential = solve_potential(u, params)
    breakdown = energy(u, params, potential=potential)
    res = residual_norm(u, params, potential=potential)
    thr = sobolev_threshold(params.dimension)
    return SaddleResult(profile=u, phi=potential.phi, energy=breakdown.total,
                        breakdown=breakdown, residual=res, iterations=iterations,
                        path_level_history=[], below_threshold=breakdown.total < thr,
                        threshold=thr, converged=True,
                        newton_residual_history=history)


def _singular_report(system: _BlockSystem, z: np.ndarray, exc) -> ConvergenceError:
    size = 2 * system.m
    if size <= 2048:
        eigs = np.linalg.eigvals(system.dense_jacobian(z))
        nearest = eigs[np.argmin(np.abs(eigs))]
        msg = f"singular Jacobian (nearest eigenvalue {nearest:.3e})"
    else:
        msg = f"singular Jacobian (system size {size}, eigenreport skipped)"
    return ConvergenceError(msg if exc is None else f"{msg}: {exc}")


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------

def _gaussian_seed(grid: RadialGrid, width: float) -> RadialField:
    vals = np.exp(-(grid.r / width) ** 2)
    vals[-1] = 0.0
    return RadialField(grid, vals)


def _concentration_scan(params: KGMParams, grid: RadialGrid):
    """Minimize the ray-maximized energy over the cutoff concentration family.

    Critically growing problems often place the saddle at a strongly
    concentrated profile; scanning the concentration scale (coarse geometric
    sweep plus golden refinement in log eps) supplies an initial guess the
    straight-path deformation cannot reach on its own.  Scales whose core the
    mesh cannot resolve are excluded.
    """
    from .instanton import InstantonParams, cutoff_profile

    cut_r = min(2.0, grid.r_max / 4.0)
    eps_floor = (8.0 * grid.h) ** 2
    eps_hi = min(1.0, cut_r ** 2)
    if eps_floor >= 0.25 * eps_hi:
        return None

    def m_of(eps: float):
        p = InstantonParams(epsilon=eps, R=cut_r, dimension=params.dimension)
        w = cutoff_profile(p, grid)
        t, m = _ray_maximize(w, params)
        return m, w * t

    eps_grid = np.geomspace(eps_hi, eps_floor, 12)
    cache = {}
    for e in eps_grid:
        cache[float(e)] = m_of(float(e))[0]
    best_eps = min(cache, key=cache.get)
    order = sorted(cache)
    k = order.index(best_eps)
    lo = math.log(order[max(k - 1, 0)])
    hi = math.log(order[min(k + 1, len(order) - 1)])
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc = m_of(math.exp(c))[0]
    fd = m_of(math.exp(d))[0]
    while (hi - lo) > 0.05:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = m_of(math.exp(c))[0]
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = m_of(math.exp(d))[0]
    eps_star = math.exp(0.5 * (lo + hi))
    m_star, profile = m_of(eps_star)
    at_floor = eps_star <= 2.0 * eps_floor
    return m_star, profile, eps_star, at_floor


STAGE_R_MAX = 24.0  # initialization stages run on a domain no larger than this


def _stage_grid(grid: RadialGrid) -> RadialGrid:
    """Same resolution, truncated domain, for the initialization stages.

    Path deformation, concentration scan and descent only need the core
    physics (the matter field decays exponentially); the wide domain matters
    for the slowly decaying induced-potential tail, which only the final
    Newton certification has to see."""
    if grid.r_max <= STAGE_R_MAX:
        return grid
    intervals = int(round(STAGE_R_MAX / grid.h))
    return RadialGrid(grid.dimension, intervals * grid.h, intervals + 1)


def _transplant(u: RadialField, grid: RadialGrid) -> RadialField:
    if u.grid is grid:
        return u
    vals = np.interp(grid.r, u.grid.r, u.values, right=0.0)
    vals[-1] = 0.0
    return RadialField(grid, vals)


def _solve_at_mu(params: KGMParams, grid: RadialGrid, opts: SolveOptions,
                 start: RadialField | None = None):
    """Full search at fixed parameters.

    The path deformation localizes the ridge and bounds the min-max level
    from above; a concentration-family scan supplies a second candidate for
    critically dominated regimes; ray-rescaled descent walks the better
    candidate into the Newton basin; damped Newton certifies the residual.
    With a starting profile (continuation) Newton runs directly.
    """
    if start is not None:
        result = newton_refine(start, params, tol=opts.tol,
                               max_iter=opts.newton_max_iter)
        result.path_level_history = []
        return result

    stage = _stage_grid(grid)
    level_history: list = []
    seed = _gaussian_seed(stage, opts.seed_width)
    u1 = find_endpoint(seed, params)
    state = make_initial_path(u1, params, opts.knot_count)
    level_history.append(state.level_estimate)
    steps = 0
    while steps < opts.max_path_steps and not (state.converged or state.stalled):
        state = mountain_pass_step(state, params)
        steps += 1
        level_history.append(state.level_estimate)

    top = state.knots[state.level_index]
    t_top, m_top = _ray_maximize(top, params)
    candidates = [(m_top, top * t_top, "path deformation")]
    scan = _concentration_scan(params, stage)
    if scan is not None:
        m_star, profile, eps_star, at_floor = scan
        label = f"concentration scan (eps={eps_star:.3e}" + \
            (", at mesh resolution floor)" if at_floor else ")")
        candidates.append((m_star, profile, label))
    candidates.sort(key=lambda item: item[0])

    last_error = None
    for _m_cand, candidate, label in candidates:
        target = opts.path_handoff_residual
        for _attempt in range(3):
            candidate = _descent_refine(candidate, params, target_residual=target,
                                        trace=level_history)
            try:
                result = newton_refine(_transplant(candidate, grid), params,
                                       tol=opts.tol, max_iter=opts.newton_max_iter)
                result.path_level_history = level_history
                result.message = f"initialized by {label}"
                return result
            except ConvergenceError as exc:
                last_error = exc
                target *= 0.1
    raise ConvergenceError(
        f"no convergence after {steps} path steps and descent refinement: "
        f"{last_error}", trace=level_history)


def solve(params: KGMParams, options: SolveOptions | None = None) -> SaddleResult:
    """End-to-end search: admissibility gate, mountain-pass path, Newton
    refinement, threshold check, mu-continuation where the regime demands a
    large mu."""
    opts = options or SolveOptions()
    verdict = classify(params)
    warning = ""
    if not verdict.hypothesis_met:
        if not opts.override_admissibility:
            raise AdmissibilityError(verdict.explanation)
        warning = "admissibility override active: " + verdict.explanation

    grid = RadialGrid(params.dimension, opts.r_max, opts.nodes)

    if verdict.mu_requirement is MuRequirement.SUFFICIENTLY_LARGE:
        result = _solve_with_continuation(params, grid, opts)
    else:
        result = _solve_at_mu(params, grid, opts)

    if result.energy <= 0.0:
        raise ConvergenceError(
            f"converged profile has nonpositive energy {result.energy:.3e}; "
            "rejected as trivial/spurious")
    if warning:
        result.message = (result.message + " " + warning).strip()
    return result


def _solve_with_continuation(params: KGMParams, grid: RadialGrid,
                             opts: SolveOptions) -> SaddleResult:
    """Solve at a large mu where the subcritical term dominates, then walk mu
    down geometrically to the requested value, reusing the previous profile."""
    steps = opts.mu_continuation_steps
    factor = opts.mu_continuation_factor
    ladder = [params.mu * factor ** (k - steps) for k in range(steps + 1)]
    trace = []
    profile = None
    result = None
    for mu_k in ladder:
        p_k = replace_mu(params, mu_k)
        try:
            result = _solve_at_mu(p_k, grid, opts, start=profile)
            profile = result.profile
            trace.append({"mu": mu_k, "energy": result.energy,
                          "residual": result.residual, "converged": True})
        except ConvergenceError as exc:
            trace.append({"mu": mu_k, "converged": False, "error": str(exc)})
            raise ConvergenceError(
                f"mu-continuation failed at mu={mu_k:g} after "
                f"{len(trace) - 1} successful rungs (smallest mu reached "
                f"{trace[-2]['mu']:g})" if len(trace) > 1 else
                f"mu-continuation failed at its largest mu={mu_k:g}",
                trace=trace) from exc
    result.mu_trace = trace
    return result


def replace_mu(params: KGMParams, mu: float) -> KGMParams:
    return KGMParams(dimension=params.dimension, m0=params.m0,
                     omega=params.omega, mu=mu, q=params.q)


def continue_on_grid(u: RadialField, params: KGMParams, grid: RadialGrid,
                     tol: float = 1e-9, max_iter: int = 60) -> SaddleResult:
    """Transplant a profile onto another mesh (linear interpolation, zero
    beyond the old domain) and re-converge with Newton.  Used for truncation
    and refinement studies."""
    vals = np.interp(grid.r, u.grid.r, u.values, right=0.0)
    vals[-1] = 0.0
    return newton_refine(RadialField(grid, vals), params, tol=tol, max_iter=max_iter)
