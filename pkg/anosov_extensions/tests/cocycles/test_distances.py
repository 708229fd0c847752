import math

import pytest

from anosov_extensions.cocycles import (
    Cocycle,
    Constant,
    SampleSpec,
    TrigPoly,
    holder_distance,
    periodic_data,
    sup_distance,
    truncation_certificate,
    truncation_perturbation,
)
from anosov_extensions.separation import Verdict, decide

SAMPLE = SampleSpec(points_per_dim=12, random_points=50, seed=1)


def test_identical_cocycles(constructed_cocycle):
    sup = sup_distance(constructed_cocycle, constructed_cocycle, SAMPLE)
    assert sup.lower == 0.0
    assert sup.upper == 0.0
    holder = holder_distance(constructed_cocycle, constructed_cocycle, 1.0, SAMPLE)
    assert holder.lower == 0.0
    assert holder.upper == 0.0


def test_constant_against_zero():
    f = Cocycle(2, (Constant(1.0),))
    sup = sup_distance(f, Cocycle.zero(2), SAMPLE)
    assert sup.lower == 0.25
    assert sup.upper == 0.25
    assert sup.is_consistent


def test_holder_distance_single_coordinate():
    f = Cocycle(2, (TrigPoly(((1, 0),), (0.1,), (0.0,)),))
    lipschitz = f.lipschitz_constants()[0]
    for alpha in (0.5, 1.0):
        bounds = holder_distance(f, Cocycle.zero(2), alpha, SAMPLE)
        assert bounds.upper == pytest.approx(0.5 * lipschitz**alpha)
        assert 0.0 < bounds.lower <= bounds.upper


def test_holder_distance_rejects_exponent():
    f = Cocycle.zero(2)
    for alpha in (0.0, 1.5):
        with pytest.raises(ValueError, match=r"Hölder exponent"):
            holder_distance(f, f, alpha, SAMPLE)


def test_sample_spec_validation():
    with pytest.raises(ValueError, match=r"at least one point"):
        SampleSpec(points_per_dim=0, random_points=0)
    with pytest.raises(ValueError, match=r"offsets"):
        SampleSpec(offsets=(0.6,))
    x, y = SampleSpec(points_per_dim=4).pairs(2)
    assert x.shape == y.shape
    assert x.size(0) == 16 * 3 * 3


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_truncation_instability(cat_map, constructed_cocycle, n):
    truncated = truncation_perturbation(constructed_cocycle, n)
    tail = math.ldexp(1.0, -n)

    sup = sup_distance(constructed_cocycle, truncated, SAMPLE)
    assert sup.upper <= tail
    assert sup.is_consistent

    holder = holder_distance(constructed_cocycle, truncated, 1.0, SAMPLE)
    assert holder.upper <= tail
    assert holder.is_consistent

    weights = periodic_data(truncated, cat_map, 5).weights(n + 1)
    certificate = decide(weights)
    assert certificate.verdict == Verdict.SEPARABLE
    assert certificate.as_functional() == truncation_certificate(n)
    assert certificate.verify(weights)
