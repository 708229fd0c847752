from fractions import Fraction

import pytest

from anosov_extensions.closing import (
    DEFAULT_C_MAX,
    approximate_weight,
    closing_trials,
    sample_near_returns,
    write_closing_trials_csv,
)
from anosov_extensions.cocycles import Cocycle
from anosov_extensions.sequences import SeqVector
from anosov_extensions.torus import TorusPoint
from anosov_extensions.util.serde import read_csv

from ..util import make_tempdir


def test_sample_near_returns(cat_map):
    returns = sample_near_returns(cat_map, n_range=(1, 10), eps_range=(1e-4, 1e-2), count=30)
    assert len(returns) == 30
    assert {near.n for near in returns} <= set(range(1, 11))
    for near in returns:
        assert 0.5e-4 <= near.eps <= 2e-2
    assert returns == sample_near_returns(
        cat_map, n_range=(1, 10), eps_range=(1e-4, 1e-2), count=30
    )


@pytest.mark.parametrize(
    "kwargs,message",
    [
        ({"n_range": (0, 3)}, r"return time range"),
        ({"n_range": (4, 3)}, r"return time range"),
        ({"eps_range": (0.0, 0.1)}, r"0 < lo <= hi < 1/2"),
        ({"eps_range": (0.1, 0.5)}, r"0 < lo <= hi < 1/2"),
    ],
)
def test_sample_near_returns_validation(cat_map, kwargs, message):
    with pytest.raises(ValueError, match=message):
        sample_near_returns(cat_map, **kwargs)


def test_closing_trials(cat_map, constructed_cocycle):
    returns = sample_near_returns(cat_map, count=100, seed=7)
    summary = closing_trials(cat_map, returns, f=constructed_cocycle)
    assert len(summary.trials) == 100
    assert summary.c_max == DEFAULT_C_MAX
    assert summary.violations == 0
    assert summary.weight_violations == 0
    assert summary.constants.c <= 10
    assert summary.constants.c == max(trial.max_ratio for trial in summary.trials)
    for trial in summary.trials:
        orbit_period = trial.near.n
        assert trial.p.denominator == abs(cat_map.periodic_determinant(orbit_period))
        assert trial.weight_gap <= trial.weight_bound

    data = summary.to_dict()
    assert data["trials"] == 100
    assert data["violations"] == 0
    assert data["lambda"] == cat_map.contraction_rate()


def test_closing_trials_3d(hyperbolic_3d):
    returns = sample_near_returns(hyperbolic_3d, n_range=(1, 12), count=30, seed=3)
    summary = closing_trials(hyperbolic_3d, returns)
    assert summary.weight_violations == 0
    assert all(trial.weight_gap is None for trial in summary.trials)
    assert summary.constants.lam == hyperbolic_3d.contraction_rate()


def test_closing_trials_csv(cat_map):
    summary = closing_trials(cat_map, sample_near_returns(cat_map, count=5))
    with make_tempdir() as d:
        path = d / "closing_trials.csv"
        write_closing_trials_csv(path, summary)
        rows = read_csv(path)
    assert len(rows) == 5
    assert list(rows[0]) == ["n", "eps", "max_ratio", "fitted_c", "p"]
    for row, trial in zip(rows, summary.trials):
        assert int(row["n"]) == trial.near.n
        assert float(row["fitted_c"]) == summary.constants.c
        assert tuple(Fraction(c) for c in row["p"].split()) == trial.p.to_fractions()


def test_closing_trials_empty(cat_map):
    summary = closing_trials(cat_map, [])
    assert summary.constants is None
    assert summary.violations == 0
    assert summary.rows() == []


def test_approximate_weight(cat_map, constructed_cocycle):
    x = TorusPoint((0.2, 0.4))
    result = approximate_weight(constructed_cocycle, cat_map, x, SeqVector.zeros(), 1e-6, 6)
    assert result is not None
    assert result.near.n in (2, 4, 6)
    assert result.p.to_fractions() == (Fraction(1, 5), Fraction(2, 5))
    assert result.discrepancy < 1e-9
    assert result.target_distance == pytest.approx(result.weight.norm(5))


def test_approximate_weight_prefers_nearest_target(cat_map, constructed_cocycle):
    x = TorusPoint((0.2, 0.4))
    two = approximate_weight(constructed_cocycle, cat_map, x, SeqVector.zeros(), 1e-6, 2)
    # Twice the period-2 weight is the weight over four steps.
    target = two.weight * 2
    result = approximate_weight(constructed_cocycle, cat_map, x, target, 1e-6, 6)
    assert result.target_distance < 1e-9


def test_approximate_weight_without_near_returns(cat_map):
    x = TorusPoint((0.1234, 0.5678))
    assert approximate_weight(Cocycle.zero(2), cat_map, x, SeqVector.zeros(), 1e-9, 3) is None
