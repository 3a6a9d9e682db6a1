import math

import pytest

from kgmlab.params import (CoerciveRegime, DimensionCase, KGMParams,
                           MuRequirement, classify)
from kgmlab.errors import ParameterDomainError


def test_two_star_derived():
    p = KGMParams(dimension=3, m0=1.0, omega=0.5, mu=1.0, q=3.0)
    assert p.two_star == 6.0
    assert KGMParams(dimension=6, m0=1.0, omega=0.5, mu=1.0, q=2.5).two_star == 3.0


@pytest.mark.parametrize("kwargs", [
    dict(dimension=2, m0=1.0, omega=0.5, mu=1.0, q=3.0),
    dict(dimension=3, m0=0.0, omega=0.5, mu=1.0, q=3.0),
    dict(dimension=3, m0=-1.0, omega=0.5, mu=1.0, q=3.0),
    dict(dimension=3, m0=1.0, omega=0.0, mu=1.0, q=3.0),
    dict(dimension=3, m0=1.0, omega=0.5, mu=0.0, q=3.0),
    dict(dimension=3, m0=1.0, omega=0.5, mu=1.0, q=2.0),
    dict(dimension=3, m0=1.0, omega=0.5, mu=1.0, q=6.0),
    dict(dimension=3, m0=1.0, omega=0.5, mu=1.0, q=7.0),
    dict(dimension=5, m0=1.0, omega=0.5, mu=1.0, q=3.4),  # 2* = 10/3
])
def test_rejects_out_of_domain(kwargs):
    with pytest.raises(ParameterDomainError):
        KGMParams(**kwargs)


def test_classify_high_q_example():
    # N=3, q=5 sits in the high-q branch; 1 > 0.5 makes the hypothesis hold
    v = classify(KGMParams(dimension=3, m0=1.0, omega=0.5, mu=1.0, q=5.0))
    assert v.coercive_regime is CoerciveRegime.HIGH_Q
    assert v.hypothesis_met
    assert v.dimension_case is DimensionCase.N3
    assert v.mu_requirement is MuRequirement.ANY_POSITIVE


def test_classify_low_q_boundary_fails():
    # equality m0*sqrt(q-2) = omega*sqrt(2) is rejected (strict inequality)
    v = classify(KGMParams(dimension=4, m0=1.0, omega=1.0, mu=1.0, q=3.0))
    assert v.coercive_regime is CoerciveRegime.LOW_Q
    assert not v.hypothesis_met


def test_classify_n5_large_mu():
    v = classify(KGMParams(dimension=5, m0=2.0, omega=0.1, mu=1.0, q=3.0))
    assert v.coercive_regime is CoerciveRegime.LOW_Q
    assert v.hypothesis_met  # 2*sqrt(1) > 0.1*sqrt(2)
    assert v.dimension_case is DimensionCase.N5
    assert v.mu_requirement is MuRequirement.SUFFICIENTLY_LARGE  # q >= 8/3


def test_classify_pure_function():
    p = KGMParams(dimension=4, m0=2.0, omega=1.0, mu=1.0, q=3.0)
    assert classify(p) == classify(p)


def test_q4_belongs_to_high_q():
    v = classify(KGMParams(dimension=3, m0=2.0, omega=1.0, mu=1.0, q=4.0))
    assert v.coercive_regime is CoerciveRegime.HIGH_Q
    # and for N=3 with q <= 4 large mu is required
    assert v.mu_requirement is MuRequirement.SUFFICIENTLY_LARGE


@pytest.mark.parametrize("n,q,expected", [
    (3, 3.0, MuRequirement.SUFFICIENTLY_LARGE),
    (3, 4.0, MuRequirement.SUFFICIENTLY_LARGE),
    (3, 4.5, MuRequirement.ANY_POSITIVE),
    (4, 3.0, MuRequirement.ANY_POSITIVE),
    (5, 2.5, MuRequirement.ANY_POSITIVE),      # q < 8/3
    (5, 8.0 / 3.0, MuRequirement.SUFFICIENTLY_LARGE),
    (5, 3.2, MuRequirement.SUFFICIENTLY_LARGE),
    (6, 2.5, MuRequirement.ANY_POSITIVE),
    (8, 2.3, MuRequirement.ANY_POSITIVE),
])
def test_mu_requirement_map(n, q, expected):
    v = classify(KGMParams(dimension=n, m0=2.0, omega=0.5, mu=1.0, q=q))
    assert v.mu_requirement is expected


def test_mu_requirement_independent_of_masses():
    for m0, omega, mu in [(1.0, 0.3, 1.0), (5.0, 2.0, 7.0), (0.2, -0.1, 0.01)]:
        v = classify(KGMParams(dimension=5, m0=m0, omega=omega, mu=mu, q=3.0))
        assert v.mu_requirement is MuRequirement.SUFFICIENTLY_LARGE


@pytest.mark.parametrize("q,regime", [
    (2.5, CoerciveRegime.LOW_Q), (3.99, CoerciveRegime.LOW_Q),
    (4.0, CoerciveRegime.HIGH_Q), (5.5, CoerciveRegime.HIGH_Q),
])
def test_regime_split(q, regime):
    v = classify(KGMParams(dimension=3, m0=3.0, omega=0.5, mu=1.0, q=q))
    assert v.coercive_regime is regime


def test_negative_omega_accepted_and_noted():
    v = classify(KGMParams(dimension=4, m0=2.0, omega=-1.0, mu=1.0, q=3.0))
    assert v.hypothesis_met  # |m0| sqrt(1) > |-1| sqrt(2)
    assert "omega < 0" in v.explanation
