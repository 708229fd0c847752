import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import torch

from ..cocycles.cocycle import Cocycle
from ..sequences.vector import SeqVector
from ..torus._integer import adjugate, subtract_identity
from ..torus.automorphism import ToralAutomorphism
from ..torus.points import RationalTorusPoint, TorusPoint
from ..util.pytorch import DTYPE
from ..util.serde import PathT, fraction_to_str, write_csv
from .lemma import (
    DEFAULT_C_MAX,
    ClosingConstants,
    NearReturn,
    close_orbit,
    exact_lift,
    exact_orbit,
    find_near_returns,
    float_points,
    near_return_at,
    verify_shadowing,
    weight_closeness,
)

# Range of the random integer vectors that select periodic points.
_LATTICE_RANGE = 1 << 16


def sample_near_returns(
    automorphism: ToralAutomorphism,
    *,
    n_range: Tuple[int, int] = (1, 25),
    eps_range: Tuple[float, float] = (1e-4, 1e-2),
    count: int = 100,
    seed: int = 0,
) -> List[NearReturn]:
    """
    Build near-returns with prescribed return time and distance.

    Each trial draws ``n`` uniformly from ``n_range``, ``ε`` log-uniformly
    from ``eps_range``, a periodic point ``p = B^{-1} m`` of ``A^n`` for a
    random integer vector ``m`` and a random displacement ``r`` with
    ``|r| = ε``, where ``B = A^n - I``. The point ``x = p + B^{-1} r`` then
    satisfies ``A^n x - x ≡ r``. The recorded distance is measured exactly
    on the floating-point ``x``.

    :param automorphism:
        The base map.
    :param n_range:
        Inclusive range of return times.
    :param eps_range:
        Range of return distances, within ``(0, 1/2)``.
    :param count:
        Number of near-returns.
    :param seed:
        Random seed.
    :returns:
        The near-returns.
    """
    n_lo, n_hi = n_range
    eps_lo, eps_hi = eps_range
    if not 1 <= n_lo <= n_hi:
        raise ValueError(f"Invalid return time range: {n_range}")
    if not 0 < eps_lo <= eps_hi < 0.5:
        raise ValueError(f"Return distances must satisfy 0 < lo <= hi < 1/2, got: {eps_range}")

    generator = torch.Generator().manual_seed(seed)
    dim = automorphism.dim
    returns = []
    for _ in range(count):
        n = int(torch.randint(n_lo, n_hi + 1, (1,), generator=generator))
        u = float(torch.rand((1,), dtype=DTYPE, generator=generator))
        eps = math.exp(math.log(eps_lo) + u * (math.log(eps_hi) - math.log(eps_lo)))
        direction = torch.randn((dim,), dtype=DTYPE, generator=generator)
        direction = direction / direction.norm()
        m = torch.randint(0, _LATTICE_RANGE, (dim,), generator=generator).tolist()

        det = automorphism.periodic_determinant(n)
        adj = adjugate(subtract_identity(automorphism.power(n)))
        target = [Fraction(c) + Fraction(eps * float(r)) for c, r in zip(m, direction)]
        lift = [
            sum((a * t for a, t in zip(row, target)), Fraction(0)) / det for row in adj
        ]
        x = TorusPoint.from_coords([float(c % 1) for c in lift])
        returns.append(near_return_at(automorphism, x, n))
    return returns


@dataclass(frozen=True)
class ClosingTrial:
    """
    Outcome of closing one near-return.

    :param near:
        The near-return.
    :param p:
        The shadowing periodic point.
    :param max_ratio:
        Largest shadowing ratio, the empirical ``c`` of this trial.
    :param weight_gap:
        Summed cocycle distances along the orbit segment, when a cocycle was
        given.
    :param weight_bound:
        The bound ``L c ε 2 / (1 - λ)`` on ``weight_gap``.
    """

    near: NearReturn
    p: RationalTorusPoint
    max_ratio: float
    weight_gap: Optional[float] = None
    weight_bound: Optional[float] = None

    @property
    def weight_violation(self) -> bool:
        if self.weight_gap is None or self.weight_bound is None:
            return False
        return self.weight_gap > self.weight_bound


@dataclass(frozen=True)
class ClosingSummary:
    """
    Summary of closing trials.

    :param trials:
        The trials.
    :param constants:
        Fitted constants: ``c`` is the largest ratio over all trials.
    :param c_max:
        Threshold for shadowing violations.
    """

    trials: Tuple[ClosingTrial, ...]
    constants: Optional[ClosingConstants]
    c_max: float

    @property
    def violations(self) -> int:
        return sum(trial.max_ratio > self.c_max for trial in self.trials)

    @property
    def weight_violations(self) -> int:
        return sum(trial.weight_violation for trial in self.trials)

    def rows(self) -> List[List[Any]]:
        """
        CSV rows: ``n, eps, max_ratio, fitted_c, p``.
        """
        fitted = self.constants.c if self.constants is not None else 0.0
        return [
            [
                trial.near.n,
                repr(trial.near.eps),
                repr(trial.max_ratio),
                repr(fitted),
                " ".join(fraction_to_str(c) for c in trial.p.to_fractions()),
            ]
            for trial in self.trials
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trials": len(self.trials),
            "fitted_c": None if self.constants is None else self.constants.c,
            "lambda": None if self.constants is None else self.constants.lam,
            "c_max": self.c_max,
            "violations": self.violations,
            "weight_violations": self.weight_violations,
        }


def closing_trials(
    automorphism: ToralAutomorphism,
    near_returns: Sequence[NearReturn],
    *,
    f: Optional[Cocycle] = None,
    lam: Optional[float] = None,
    c_max: float = DEFAULT_C_MAX,
) -> ClosingSummary:
    """
    Close every near-return, verify the shadowing estimate and, when a
    cocycle is given, check the weight-closeness bound with the constants
    fitted on that trial.

    :param automorphism:
        The base map.
    :param near_returns:
        Near-returns, e.g. from :func:`sample_near_returns`.
    :param f:
        Optional cocycle for the weight-closeness check.
    :param lam:
        Contraction rate, defaults to the theoretical rate of the map.
    :param c_max:
        Threshold for shadowing violations.
    :returns:
        The summary.
    """
    if lam is None:
        lam = automorphism.contraction_rate()
    lipschitz = f.lipschitz_constant() if f is not None else 0.0
    trials = []
    for near in near_returns:
        p = close_orbit(automorphism, near)
        shadowing = verify_shadowing(automorphism, near, p, lam=lam, c_max=c_max)
        gap = bound = None
        if f is not None:
            gap = weight_closeness(f, automorphism, near.x, p, near.n)
            bound = (
                0.0
                if shadowing.constants is None
                else shadowing.constants.weight_bound(lipschitz, near.eps)
            )
        trials.append(
            ClosingTrial(
                near=near,
                p=p,
                max_ratio=shadowing.max_ratio,
                weight_gap=gap,
                weight_bound=bound,
            )
        )
    c = max((trial.max_ratio for trial in trials), default=0.0)
    return ClosingSummary(
        trials=tuple(trials),
        constants=ClosingConstants(c=c, lam=lam) if c > 0 else None,
        c_max=c_max,
    )


def write_closing_trials_csv(path: PathT, summary: ClosingSummary):
    write_csv(path, ["n", "eps", "max_ratio", "fitted_c", "p"], summary.rows())


@dataclass(frozen=True)
class ApproximateWeight:
    """
    A periodic weight approximating the Birkhoff sum of a near-return.

    :param near:
        The near-return of the starting point.
    :param p:
        Shadowing periodic point.
    :param weight:
        Sum of the cocycle over ``n`` steps of the orbit of ``p``.
    :param birkhoff:
        Birkhoff sum over ``n`` steps of the orbit of ``x``.
    :param discrepancy:
        Euclidean distance between ``weight`` and ``birkhoff``.
    :param target_distance:
        Euclidean distance between ``weight`` and the target.
    """

    near: NearReturn
    p: RationalTorusPoint
    weight: SeqVector
    birkhoff: SeqVector
    discrepancy: float
    target_distance: float


def approximate_weight(
    f: Cocycle,
    automorphism: ToralAutomorphism,
    x: TorusPoint,
    target: SeqVector,
    eps: float,
    k: int,
) -> Optional[ApproximateWeight]:
    """
    Approximate a target by periodic weights: every near-return of ``x``
    within ``k`` steps is closed, and the periodic weight nearest to the
    target is returned with its discrepancy to the Birkhoff sum of ``x``.

    :param f:
        The cocycle.
    :param automorphism:
        The base map.
    :param x:
        Starting point.
    :param target:
        Target vector.
    :param eps:
        Near-return threshold.
    :param k:
        Largest return time.
    :returns:
        The best approximation, ``None`` when ``x`` has no near-return.
    """
    level = max(f.num_coordinates, target.support)
    best: Optional[ApproximateWeight] = None
    for near in find_near_returns(automorphism, x, eps, k):
        p = close_orbit(automorphism, near)
        x_orbit = exact_orbit(automorphism, exact_lift(x), near.n - 1)
        p_orbit = exact_orbit(automorphism, p.to_fractions(), near.n - 1)
        birkhoff = SeqVector.from_tensor(f.evaluate_batch(float_points(x_orbit, f.dim)).sum(0))
        weight = SeqVector.from_tensor(f.evaluate_batch(float_points(p_orbit, f.dim)).sum(0))
        candidate = ApproximateWeight(
            near=near,
            p=p,
            weight=weight,
            birkhoff=birkhoff,
            discrepancy=(weight - birkhoff).norm(level),
            target_distance=(weight - target).norm(level),
        )
        if best is None or candidate.target_distance < best.target_distance:
            best = candidate
    return best
