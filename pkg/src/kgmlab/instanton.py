"""Concentration profiles and the compactness-threshold laboratory.

The extremal family of the Sobolev inequality on R^N,

    u_eps(r) = [N(N-2) eps]^{(N-2)/4} / (eps + r^2)^{(N-2)/2},

concentrates at the origin as eps -> 0.  Multiplying by a cutoff supported
in the ball of radius 2R and normalizing in L^{2*} gives trial profiles
v_eps whose gradient energy X_eps approaches the best Sobolev constant S
from above at rate eps^{delta}, delta = (N-2)/2.  Maximizing the reduced
energy along the ray t -> t*v_eps and comparing against S^{N/2}/N tests,
dimension by dimension, whether the min-max level drops below the
compactness threshold.

All eps-asymptotic quantities are evaluated by adaptive 1-D quadrature of
the closed-form radial integrands (after the core substitution r = sqrt(eps)*s),
never on the PDE mesh: a uniform mesh cannot resolve the eps -> 0 core, and
these estimates are statements about the exact profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import GridResolutionError, ParameterDomainError
from .grid import RadialField, RadialGrid, norm_d12, norm_lp, sphere_area
from .params import KGMParams
from .energy import energy

# overflow guard for the mu = exp(1/eps) rule: exp(30) ~ 1.1e13 is safe,
# exp(1/eps) for eps below ~1/700 is not
EXP_RULE_EPS_MIN = 1.0 / 30.0

SUP_MAX_NODES_DEFAULT = 2 ** 18 + 1

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-13, limit=400)


@dataclass(frozen=True)
class InstantonParams:
    """Concentration scale eps, cutoff radius R (support in B_{2R}), and N."""

    epsilon: float
    R: float
    dimension: int

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise ParameterDomainError(f"epsilon must be > 0, got {self.epsilon}")
        if not (self.R > 0):
            raise ParameterDomainError(f"cutoff radius must be > 0, got {self.R}")
        if int(self.dimension) != self.dimension or self.dimension < 3:
            raise ParameterDomainError(
                f"dimension must be an integer >= 3, got {self.dimension}")
        object.__setattr__(self, "dimension", int(self.dimension))

    @property
    def delta(self) -> float:
        return (self.dimension - 2) / 2.0

    @property
    def two_star(self) -> float:
        return 2.0 * self.dimension / (self.dimension - 2)


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def talenti(eps: float, dimension: int):
    """Closed-form extremal profile as a callable of r (scalar or array)."""
    n = dimension
    c = (n * (n - 2) * eps) ** ((n - 2) / 4.0)
    p = (n - 2) / 2.0

    def profile(r):
        return c / (eps + np.asarray(r, dtype=float) ** 2) ** p

    return profile


def talenti_derivative(eps: float, dimension: int):
    n = dimension
    c = (n * (n - 2) * eps) ** ((n - 2) / 4.0)

    def dprofile(r):
        r = np.asarray(r, dtype=float)
        return -(n - 2) * c * r / (eps + r ** 2) ** (n / 2.0)

    return dprofile


def cutoff_value(r, R: float):
    """Cubic smoothstep cutoff: 1 on [0, R], 0 from 2R on, C^1 in between."""
    r = np.asarray(r, dtype=float)
    s = np.clip((r - R) / R, 0.0, 1.0)
    return 1.0 - s * s * (3.0 - 2.0 * s)


def cutoff_derivative(r, R: float):
    r = np.asarray(r, dtype=float)
    s = (r - R) / R
    inside = (s > 0.0) & (s < 1.0)
    out = np.zeros_like(r)
    out[inside] = -6.0 * s[inside] * (1.0 - s[inside]) / R
    return out


# ---------------------------------------------------------------------------
# adaptive quadrature of the closed-form integrands
# ---------------------------------------------------------------------------

def moment(power: float, alpha: float, upper: float) -> float:
    """integral_0^upper s^power (1+s^2)^(-alpha) ds by adaptive quadrature."""
    if upper <= 0:
        return 0.0

    def f(s):
        if s == 0.0:
            return 0.0 if power > 0 else 1.0
        # log form keeps huge s and large alpha inside double range
        return math.exp(power * math.log(s) - alpha * math.log1p(s * s))

    pts = sorted({min(1.0, upper), min(10.0, upper), math.sqrt(upper)})
    val, _ = quad(f, 0.0, upper, points=pts, **_QUAD_OPTS)
    return val


def core_lp_integral(p: InstantonParams, k: float) -> float:
    """integral over the inner ball B_R of u_eps^k dx (cutoff = 1 there)."""
    n, eps, R = p.dimension, p.epsilon, p.R
    pref = (n * (n - 2)) ** (k * (n - 2) / 4.0)
    scale = eps ** (n / 2.0 - k * (n - 2) / 4.0)
    return sphere_area(n) * pref * scale * moment(n - 1, k * (n - 2) / 2.0,
                                                  R / math.sqrt(eps))


def annulus_lp_integral(p: InstantonParams, k: float) -> float:
    """integral over the annulus B_2R \\ B_R of (cutoff * u_eps)^k dx."""
    n, R = p.dimension, p.R
    u = talenti(p.epsilon, n)

    def f(r):
        return float(cutoff_value(r, R)) ** k * float(u(r)) ** k * r ** (n - 1)

    val, _ = quad(f, R, 2.0 * R, **_QUAD_OPTS)
    return sphere_area(n) * val


def cutoff_lp_integral(p: InstantonParams, k: float) -> float:
    """integral over B_2R of w_eps^k dx, w_eps = cutoff * u_eps."""
    return core_lp_integral(p, k) + annulus_lp_integral(p, k)


def gradient_integral(p: InstantonParams) -> float:
    """integral over B_2R of |grad w_eps|^2 dx."""
    n, eps, R = p.dimension, p.epsilon, p.R
    core = (n - 2) ** 2 * (n * (n - 2)) ** ((n - 2) / 2.0) \
        * moment(n + 1, float(n), R / math.sqrt(eps))
    u = talenti(eps, n)
    du = talenti_derivative(eps, n)

    def f(r):
        w = float(cutoff_derivative(r, R)) * float(u(r)) \
            + float(cutoff_value(r, R)) * float(du(r))
        return w * w * r ** (n - 1)

    ann, _ = quad(f, R, 2.0 * R, **_QUAD_OPTS)
    return sphere_area(n) * (core + ann)


# ---------------------------------------------------------------------------
# gridded profiles
# ---------------------------------------------------------------------------

def cutoff_profile(p: InstantonParams, grid: RadialGrid) -> RadialField:
    """w_eps sampled on the mesh; requires the mesh to cover [0, 2R]."""
    if grid.dimension != p.dimension:
        raise ParameterDomainError("grid dimension does not match instanton dimension")
    if grid.r_max < 2.0 * p.R:
        raise ParameterDomainError(
            f"grid must cover [0, 2R] = [0, {2 * p.R:g}], has r_max={grid.r_max:g}")
    u = talenti(p.epsilon, p.dimension)
    return RadialField(grid, cutoff_value(grid.r, p.R) * u(grid.r))


def normalized_profile(p: InstantonParams, grid: RadialGrid) -> RadialField:
    """v_eps = w_eps normalized to unit L^{2*}(B_2R) norm (adaptive quadrature)."""
    w = cutoff_profile(p, grid)
    norm = cutoff_lp_integral(p, p.two_star) ** (1.0 / p.two_star)
    return RadialField(grid, w.values / norm)


# ---------------------------------------------------------------------------
# best Sobolev constant
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def sobolev_constant(dimension: int) -> float:
    """Best constant S = inf |grad u|_2^2 / |u|_{2*}^2 over D^{1,2}(R^N),
    as the Rayleigh quotient of the exact extremal profile.

    The half-line integrals use the compactifying substitution r = tan(theta);
    the quotient is scale invariant, so eps = 1 loses nothing.
    """
    n = int(dimension)
    if n < 3:
        raise ParameterDomainError(f"dimension must be >= 3, got {n}")
    du = talenti_derivative(1.0, n)
    u = talenti(1.0, n)
    two_star = 2.0 * n / (n - 2)

    def num(theta):
        r = math.tan(theta)
        if r == 0.0:
            return 0.0
        sec2 = 1.0 + r * r
        return float(du(r)) ** 2 * r ** (n - 1) * sec2

    def den(theta):
        r = math.tan(theta)
        if r == 0.0:
            return 0.0
        sec2 = 1.0 + r * r
        return float(u(r)) ** two_star * r ** (n - 1) * sec2

    half_pi = 0.5 * math.pi
    grad2, _ = quad(num, 0.0, half_pi, **_QUAD_OPTS)
    crit, _ = quad(den, 0.0, half_pi, **_QUAD_OPTS)
    area = sphere_area(n)
    return area * grad2 / (area * crit) ** (2.0 / two_star)


def sobolev_threshold(dimension: int) -> float:
    """Compactness threshold S^{N/2} / N."""
    s = sobolev_constant(dimension)
    return s ** (dimension / 2.0) / dimension


def gradient_energy(p: InstantonParams) -> float:
    """X_eps = |grad v_eps|_2^2, the Rayleigh quotient of the cutoff profile."""
    den = cutoff_lp_integral(p, p.two_star) ** (2.0 / p.two_star)
    return gradient_integral(p) / den


@dataclass
class GradientEnergySweep:
    eps_list: list
    x_values: list
    s_estimate: float
    fitted_rate: float
    usable: list          # points with X - S above the quadrature noise floor
    note: str = ""


def gradient_energy_sweep(eps_list, dimension: int, R: float = 1.0) -> GradientEnergySweep:
    """Sweep X_eps and fit the decay rate of X_eps - S against eps.

    Points where X - S sits below the quadrature noise floor are excluded
    from the fit and flagged; if fewer than three usable points remain the
    sweep reports "below noise" instead of a rate.
    """
    eps_list = [float(e) for e in eps_list]
    s = sobolev_constant(dimension)
    xs = [gradient_energy(InstantonParams(epsilon=e, R=R, dimension=dimension))
          for e in eps_list]
    noise = 1e-10 * s
    usable = [x - s > noise for x in xs]
    pts = [(math.log(e), math.log(x - s)) for e, x, ok in zip(eps_list, xs, usable) if ok]
    if len(pts) < 3:
        return GradientEnergySweep(eps_list, xs, s, math.nan, usable,
                                   note="below noise: too few usable points for a rate fit")
    lx, ly = zip(*pts)
    slope = float(np.polyfit(lx, ly, 1)[0])
    note = "" if all(usable) else "some points below the quadrature noise floor were dropped"
    return GradientEnergySweep(eps_list, xs, s, slope, usable, note)


# ---------------------------------------------------------------------------
# ray maximization (min-max level probe)
# ---------------------------------------------------------------------------

@dataclass
class RayMaximum:
    t_star: float      # maximizer of t -> E(t v_eps)
    value: float       # the maximum energy
    ray_bound: float   # a-priori bound on the maximizer from the quadratic/critical balance
    grid_nodes: int


def _instanton_grid(p: InstantonParams, max_nodes: int,
                    core_resolution: float = 24.0) -> RadialGrid:
    # domain 4R: the profile lives in B_2R, the extra room lets the induced
    # potential decay before the Dirichlet wall.  The default puts ~24 nodes
    # across the concentration core sqrt(eps); spacing coarser than
    # sqrt(eps)/8 is refused outright, but at that floor the discrete
    # gradient energy carries a percent-level bias that scales with S, which
    # can swamp weak subcritical gains in high dimensions.
    h_req = min(math.sqrt(p.epsilon) / core_resolution, p.R / 64.0)
    r_max = 4.0 * p.R
    nodes = int(math.ceil(r_max / h_req)) + 1
    if nodes > max_nodes:
        raise GridResolutionError(
            f"resolving eps={p.epsilon:g} needs spacing <= {h_req:g} "
            f"({nodes} nodes on [0, {r_max:g}]), above the cap of {max_nodes}")
    return RadialGrid(p.dimension, r_max, max(nodes, 64))


def _golden_max(f, a: float, b: float, tol: float):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def max_energy_on_ray(p: InstantonParams, params: KGMParams,
                      grid: RadialGrid | None = None,
                      max_nodes: int = SUP_MAX_NODES_DEFAULT,
                      core_resolution: float = 24.0) -> RayMaximum:
    """Maximize t -> E(t v_eps) by bracketing plus golden section.

    The profile is renormalized in the mesh quadrature so that the discrete
    critical integral is exactly one; with that normalization the energy
    derivative along the ray is negative for every t above

        ray_bound = (|grad v|^2 + m0^2 |v|_2^2)^(1/(2*-2))

    so the returned maximizer obeys t_star <= ray_bound up to line-search
    tolerance.  Under-resolved meshes are refused (spacing must be at most
    sqrt(eps)/8 to resolve the concentration core).
    """
    if params.dimension != p.dimension:
        raise ParameterDomainError("params dimension does not match instanton dimension")
    if grid is None:
        grid = _instanton_grid(p, max_nodes, core_resolution=core_resolution)
    else:
        if grid.h > math.sqrt(p.epsilon) / 8.0:
            raise GridResolutionError(
                f"mesh spacing {grid.h:g} cannot resolve eps={p.epsilon:g}: "
                f"need h <= sqrt(eps)/8 = {math.sqrt(p.epsilon) / 8.0:g}")
        if grid.r_max < 2.0 * p.R:
            raise ParameterDomainError("grid does not cover the cutoff support")

    w = cutoff_profile(p, grid)
    v = RadialField(grid, w.values / norm_lp(w, p.two_star))
    ray_bound = (norm_d12(v) ** 2 + params.m0 ** 2 * norm_lp(v, 2) ** 2) \
        ** (1.0 / (p.two_star - 2.0))

    def g(t: float) -> float:
        return energy(v * t, params).total

    t_hi = 1.05 * ray_bound
    for _ in range(4):
        ts = np.linspace(0.0, t_hi, 49)[1:]
        vals = np.array([g(t) for t in ts])
        k = int(np.argmax(vals))
        if k < len(ts) - 1:
            break
        t_hi *= 2.0  # max not yet bracketed; should not happen per the ray bound
    lo = ts[k - 1] if k > 0 else 0.0
    hi = ts[k + 1] if k < len(ts) - 1 else ts[-1]
    t_star, val = _golden_max(g, lo, hi, tol=1e-8 * t_hi)
    return RayMaximum(t_star=float(t_star), value=float(val),
                      ray_bound=float(ray_bound), grid_nodes=grid.nodes)


@dataclass
class ThresholdSweep:
    eps_list: list
    sup_values: list
    t_values: list
    ray_bounds: list
    s_estimate: float
    threshold: float
    min_sup: float
    margin: float          # threshold - min_sup, positive when the level dips below
    dips_below: bool


def threshold_dip(params: KGMParams, R: float, eps_list,
                  max_nodes: int = SUP_MAX_NODES_DEFAULT) -> ThresholdSweep:
    """Sweep eps and test whether min_eps sup_t E(t v_eps) < S^{N/2}/N."""
    sups, tstars, bounds = [], [], []
    for e in eps_list:
        p = InstantonParams(epsilon=float(e), R=R, dimension=params.dimension)
        ray = max_energy_on_ray(p, params, max_nodes=max_nodes)
        sups.append(ray.value)
        tstars.append(ray.t_star)
        bounds.append(ray.ray_bound)
    s = sobolev_constant(params.dimension)
    thr = sobolev_threshold(params.dimension)
    min_sup = min(sups)
    return ThresholdSweep(eps_list=[float(e) for e in eps_list], sup_values=sups,
                          t_values=tstars, ray_bounds=bounds, s_estimate=s,
                          threshold=thr, min_sup=min_sup, margin=thr - min_sup,
                          dips_below=min_sup < thr)


# ---------------------------------------------------------------------------
# scaled inner-ball balance and its divergence sweep
# ---------------------------------------------------------------------------

def mu_rule_kind(dimension: int, q: float) -> str | None:
    """Which growing-mu rule the (N, q) regime calls for, if any."""
    if dimension == 3 and 2.0 < q <= 4.0:
        return "inverse_sqrt"
    if dimension == 5 and q >= 8.0 / 3.0:
        return "exp_inverse"
    return None


def _effective_mu(eps: float, mu: float, rule: str | None) -> float:
    if rule is None:
        return mu
    if rule == "inverse_sqrt":
        return eps ** -0.5
    if rule == "exp_inverse":
        if eps < EXP_RULE_EPS_MIN - 1e-15:
            raise ParameterDomainError(
                f"exp(1/eps) rule capped at eps >= 1/30; got eps={eps:g}")
        return math.exp(1.0 / eps)
    raise ParameterDomainError(f"unknown mu rule {rule!r}")


def inner_ball_balance(p: InstantonParams, params: KGMParams,
                       use_mu_rule: bool = False) -> float:
    """The eps^{-delta}-scaled balance over the inner ball:

        [ int_{B_R} (w^2 - mu w^q) dx + (int_{B_R} w^{4N/(N+2)} dx)^{(N+2)/N} ]
        / eps^delta

    with the growing-mu rule substituted for mu when requested.  Values are
    assembled from adaptive quadrature of the closed-form integrands; the
    exp(1/eps) rule works in log scale and is capped at eps >= 1/30 so
    nothing leaves double range.
    """
    n = p.dimension
    if params.dimension != n:
        raise ParameterDomainError("params dimension does not match instanton dimension")
    rule = mu_rule_kind(n, params.q) if use_mu_rule else None
    q = params.q
    p_norm = 4.0 * n / (n + 2.0)

    term_sq = core_lp_integral(p, 2.0)
    core_q = core_lp_integral(p, q)
    term_norm = core_lp_integral(p, p_norm) ** ((n + 2.0) / n)
    if rule == "exp_inverse":
        _effective_mu(p.epsilon, params.mu, rule)  # range guard
        term_mu = math.exp(1.0 / p.epsilon + math.log(core_q))
    else:
        term_mu = _effective_mu(p.epsilon, params.mu, rule) * core_q
    return (term_sq - term_mu + term_norm) / p.epsilon ** p.delta


def annulus_balance(p: InstantonParams, params: KGMParams,
                    use_mu_rule: bool = False) -> float:
    """Same scaled balance restricted to the annulus B_2R \\ B_R, evaluated
    on the normalized profile v_eps."""
    n = p.dimension
    rule = mu_rule_kind(n, params.q) if use_mu_rule else None
    q = params.q
    p_norm = 4.0 * n / (n + 2.0)
    norm2s = cutoff_lp_integral(p, p.two_star) ** (1.0 / p.two_star)

    a_sq = annulus_lp_integral(p, 2.0) / norm2s ** 2
    a_q = annulus_lp_integral(p, q) / norm2s ** q
    a_norm = annulus_lp_integral(p, p_norm) ** ((n + 2.0) / n) / norm2s ** 4
    mu_eff = _effective_mu(p.epsilon, params.mu, rule)
    return (a_sq - mu_eff * a_q + a_norm) / p.epsilon ** p.delta


def decade_ok(prev: float, cur: float) -> bool:
    """One decade of the divergence proxy: the value must be negative and,
    when the previous value was already negative, at least five times more so."""
    if not (cur < 0.0):
        return False
    if prev >= 0.0:
        return True
    return cur <= 5.0 * prev


def _case_label(dimension: int, q: float) -> tuple[str, bool]:
    """Dimension-by-dimension case label and whether a mu-rule is required."""
    n = dimension
    if n >= 6:
        return "N6plus_fixed_mu", False
    if n == 5:
        if q >= 8.0 / 3.0:
            return "N5_large_mu_rule", True
        return "N5_fixed_mu", False
    if n == 4:
        return "N4_fixed_mu", False
    if q > 4.0:
        return "N3_fixed_mu", False
    return "N3_large_mu_rule", True


@dataclass
class DivergenceVerdict:
    case: str
    mu_rule: str | None
    eps_used: list
    eps_dropped: list
    balance_values: list
    annulus_values: list       # at the sweep cutoff radius
    annulus_values_2R: list    # re-run with the cutoff radius doubled
    monotone_from: int | None  # first index after which values strictly decrease
    final_decades_ok: list     # decade_ok flags for the last two steps
    rate_ok: bool
    annulus_bound: float
    annulus_bounded: bool
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "mu_rule": self.mu_rule,
            "eps_used": self.eps_used,
            "eps_dropped": self.eps_dropped,
            "balance_values": self.balance_values,
            "annulus_values": self.annulus_values,
            "annulus_values_2R": self.annulus_values_2R,
            "monotone_from": self.monotone_from,
            "final_decades_ok": self.final_decades_ok,
            "rate_ok": self.rate_ok,
            "annulus_bound": self.annulus_bound,
            "annulus_bounded": self.annulus_bounded,
            "passed": self.passed,
            "detail": self.detail,
        }


def divergence_sweep(params: KGMParams, eps_list, R: float = 1.0) -> DivergenceVerdict:
    """Sweep the scaled inner-ball balance toward eps -> 0 and judge the
    divergence proxy for the (N, q) case the parameters fall in.

    "Unbounded below" is operationalized as: values eventually strictly
    decreasing, and dropping by a factor of at least five per decade over the
    final two decades of the sweep.  The annulus balance is checked against a
    fixed bound, re-run with the cutoff radius doubled.
    """
    case, needs_rule = _case_label(params.dimension, params.q)
    rule = mu_rule_kind(params.dimension, params.q) if needs_rule else None

    eps_sorted = sorted({float(e) for e in eps_list}, reverse=True)
    if rule == "exp_inverse":
        eps_used = [e for e in eps_sorted if e >= EXP_RULE_EPS_MIN - 1e-15]
        eps_dropped = [e for e in eps_sorted if e < EXP_RULE_EPS_MIN - 1e-15]
    else:
        eps_used, eps_dropped = eps_sorted, []
    if len(eps_used) < 3:
        raise ParameterDomainError(
            "divergence sweep needs at least three usable eps values "
            f"(case {case}: {len(eps_used)} usable after range guard)")

    vals, ann, ann2 = [], [], []
    for e in eps_used:
        p1 = InstantonParams(epsilon=e, R=R, dimension=params.dimension)
        p2 = InstantonParams(epsilon=e, R=2.0 * R, dimension=params.dimension)
        vals.append(inner_ball_balance(p1, params, use_mu_rule=needs_rule))
        ann.append(annulus_balance(p1, params, use_mu_rule=needs_rule))
        ann2.append(annulus_balance(p2, params, use_mu_rule=needs_rule))

    monotone_from = None
    for k in range(len(vals) - 1):
        if all(vals[i + 1] < vals[i] for i in range(k, len(vals) - 1)):
            monotone_from = k
            break

    final_oks = [decade_ok(vals[i], vals[i + 1]) for i in range(len(vals) - 1)][-2:]
    rate_ok = bool(final_oks) and all(final_oks)

    bound = 10.0 * (1.0 + abs(ann2[0]))
    bounded = all(abs(a) <= bound for a in ann2)

    passed = (monotone_from is not None) and rate_ok and bounded
    problems = []
    if monotone_from is None:
        problems.append("values never become strictly decreasing")
    if not rate_ok:
        bad = [i for i, ok in enumerate(final_oks) if not ok]
        problems.append(f"final-decade factor-5 drop fails at step(s) {bad}")
    if not bounded:
        worst = max(range(len(ann2)), key=lambda i: abs(ann2[i]))
        problems.append(
            f"annulus balance leaves the bound {bound:g} at eps={eps_used[worst]:g}")
    detail = "; ".join(problems) if problems else "divergence proxy satisfied"

    return DivergenceVerdict(case=case, mu_rule=rule, eps_used=eps_used,
                             eps_dropped=eps_dropped, balance_values=vals,
                             annulus_values=ann, annulus_values_2R=ann2,
                             monotone_from=monotone_from, final_decades_ok=final_oks,
                             rate_ok=rate_ok, annulus_bound=bound,
                             annulus_bounded=bounded, passed=passed, detail=detail)


# ---------------------------------------------------------------------------
# combined report for the CLI
# ---------------------------------------------------------------------------

@dataclass
class InstantonReport:
    epsilon_list: list
    x_eps: list
    s_estimate: float
    sup_j: list
    threshold: float
    i_eps: list
    annulus_term: list
    fitted_rate: float
    verdict: DivergenceVerdict
    t_eps: list = field(default_factory=list)
    ray_bounds: list = field(default_factory=list)

    def rows(self):
        for k, e in enumerate(self.epsilon_list):
            yield (e, self.x_eps[k], self.sup_j[k], self.i_eps[k], self.annulus_term[k])

    def as_dict(self) -> dict:
        return {
            "epsilon_list": self.epsilon_list,
            "X_eps": self.x_eps,
            "S_estimate": self.s_estimate,
            "supJ": self.sup_j,
            "t_eps": self.t_eps,
            "ray_bounds": self.ray_bounds,
            "threshold": self.threshold,
            "I_eps": self.i_eps,
            "annulus": self.annulus_term,
            "fitted_rate": self.fitted_rate,
            "verdict": self.verdict.as_dict(),
        }


def build_report(params: KGMParams, R: float, eps_list, use_mu_rule: bool,
                 max_nodes: int = SUP_MAX_NODES_DEFAULT) -> InstantonReport:
    """Full eps sweep: gradient energies, ray maxima, scaled balances, verdict."""
    eps_list = sorted({float(e) for e in eps_list}, reverse=True)
    sweep = gradient_energy_sweep(eps_list, params.dimension, R=R)
    xs = sweep.x_values
    sups, ts, bounds, i_vals, ann_vals = [], [], [], [], []
    for e in eps_list:
        p = InstantonParams(epsilon=e, R=R, dimension=params.dimension)
        try:
            ray = max_energy_on_ray(p, params, max_nodes=max_nodes)
            sups.append(ray.value)
            ts.append(ray.t_star)
            bounds.append(ray.ray_bound)
        except GridResolutionError:
            sups.append(math.nan)
            ts.append(math.nan)
            bounds.append(math.nan)
        try:
            i_vals.append(inner_ball_balance(p, params, use_mu_rule=use_mu_rule))
            ann_vals.append(annulus_balance(p, params, use_mu_rule=use_mu_rule))
        except ParameterDomainError:
            i_vals.append(math.nan)
            ann_vals.append(math.nan)
    verdict = divergence_sweep(params, eps_list, R=R)
    return InstantonReport(epsilon_list=eps_list, x_eps=xs,
                           s_estimate=sweep.s_estimate, sup_j=sups,
                           threshold=sobolev_threshold(params.dimension),
                           i_eps=i_vals, annulus_term=ann_vals,
                           fitted_rate=sweep.fitted_rate, verdict=verdict,
                           t_eps=ts, ray_bounds=bounds)
