"""Problem parameters and the existence-hypothesis gate.

The solver works on the coupled matter/electrostatic system in R^N whose
matter field carries a subcritical power mu*|u|^(q-2)*u and the critical
power |u|^(2*-2)*u, 2* = 2N/(N-2).  Existence of a nontrivial radial wave
is only guaranteed on certain parameter regimes; ``classify`` encodes that
gate so runs can refuse (or knowingly override) inadmissible inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ParameterDomainError


class CoerciveRegime(enum.Enum):
    HIGH_Q = "high_q"   # 4 <= q < 2*
    LOW_Q = "low_q"     # 2 < q < 4


class DimensionCase(enum.Enum):
    N3 = "N3"
    N4 = "N4"
    N5 = "N5"
    N6PLUS = "N6plus"


class MuRequirement(enum.Enum):
    ANY_POSITIVE = "any_positive"
    SUFFICIENTLY_LARGE = "sufficiently_large"


@dataclass(frozen=True)
class KGMParams:
    """Physical parameters (dimension N, mass m0, frequency omega, mu, q).

    Validated at construction: N >= 3, m0 > 0, mu > 0, omega != 0 and
    2 < q < 2N/(N-2).  The critical exponent is derived, never stored.
    """

    dimension: int
    m0: float
    omega: float
    mu: float
    q: float

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 3:
            raise ParameterDomainError(
                f"dimension must be an integer >= 3, got {self.dimension}")
        object.__setattr__(self, "dimension", int(self.dimension))
        if not (self.m0 > 0):
            raise ParameterDomainError(f"mass m0 must be > 0, got {self.m0}")
        if self.omega == 0:
            raise ParameterDomainError("frequency omega must be nonzero")
        if not (self.mu > 0):
            raise ParameterDomainError(f"mu must be > 0, got {self.mu}")
        two_star = 2.0 * self.dimension / (self.dimension - 2)
        if not (2.0 < self.q < two_star):
            raise ParameterDomainError(
                f"q must lie in the open interval (2, 2*) = (2, {two_star:g}) "
                f"for N={self.dimension}, got q={self.q}")

    @property
    def two_star(self) -> float:
        """Critical Sobolev exponent 2N/(N-2)."""
        return 2.0 * self.dimension / (self.dimension - 2)

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "m0": self.m0,
            "omega": self.omega,
            "mu": self.mu,
            "q": self.q,
            "two_star": self.two_star,
        }


@dataclass(frozen=True)
class AdmissibilityVerdict:
    coercive_regime: CoerciveRegime
    hypothesis_met: bool
    dimension_case: DimensionCase
    mu_requirement: MuRequirement
    explanation: str

    def as_dict(self) -> dict:
        return {
            "coercive_regime": self.coercive_regime.value,
            "hypothesis_met": self.hypothesis_met,
            "dimension_case": self.dimension_case.value,
            "mu_requirement": self.mu_requirement.value,
            "explanation": self.explanation,
        }


def _dimension_case(n: int) -> DimensionCase:
    if n == 3:
        return DimensionCase.N3
    if n == 4:
        return DimensionCase.N4
    if n == 5:
        return DimensionCase.N5
    return DimensionCase.N6PLUS


def _mu_requirement(n: int, q: float) -> MuRequirement:
    # Large mu is needed exactly for (N=5, q >= 8/3) and (N=3, q <= 4);
    # the unquantified "sufficiently large" is resolved at solve time by
    # mu-continuation, never by an invented bound.
    if n == 5 and q >= 8.0 / 3.0:
        return MuRequirement.SUFFICIENTLY_LARGE
    if n == 3 and q <= 4.0:
        return MuRequirement.SUFFICIENTLY_LARGE
    return MuRequirement.ANY_POSITIVE


def classify(params: KGMParams) -> AdmissibilityVerdict:
    """Check the parameters against the existence hypotheses.

    The gate is strict: equality in either inequality is rejected.  q = 4
    belongs to the high-q branch.  mu_requirement depends only on (N, q).
    """
    n, q = params.dimension, params.q
    m0, omega = abs(params.m0), abs(params.omega)

    if q >= 4.0:
        regime = CoerciveRegime.HIGH_Q
        met = m0 > omega
        inequality = f"|m0| > |omega|: {m0:g} > {omega:g}"
    else:
        regime = CoerciveRegime.LOW_Q
        lhs = m0 * math.sqrt(q - 2.0)
        rhs = omega * math.sqrt(2.0)
        met = lhs > rhs
        inequality = f"|m0|*sqrt(q-2) > |omega|*sqrt(2): {lhs:g} > {rhs:g}"

    case = _dimension_case(n)
    mu_req = _mu_requirement(n, q)

    parts = [
        f"N={n} ({case.value}), q={q:g}, 2*={params.two_star:g}.",
        f"{regime.value} regime; hypothesis {inequality} "
        f"{'holds' if met else 'FAILS (strict inequality required)'}.",
    ]
    if mu_req is MuRequirement.SUFFICIENTLY_LARGE:
        parts.append("mu must be sufficiently large in this (N, q) range; "
                     "the solver offers mu-continuation to probe a workable mu.")
    else:
        parts.append("any mu > 0 is admissible in this (N, q) range.")
    if params.omega < 0:
        parts.append("omega < 0 accepted; the potential solve is sign-equivariant, "
                     "no normalization is applied.")

    return AdmissibilityVerdict(
        coercive_regime=regime,
        hypothesis_met=met,
        dimension_case=case,
        mu_requirement=mu_req,
        explanation=" ".join(parts),
    )
