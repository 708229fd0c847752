import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import List, Optional, Sequence, Tuple

from .rational import rationalize

logger = logging.getLogger(__name__)


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    """
    Result of an exact linear program.

    :param status:
        Outcome of the solve.
    :param value:
        Optimal objective value, ``None`` unless optimal.
    :param x:
        Optimal solution, ``None`` unless optimal.
    :param pivots:
        Number of simplex pivots over both phases.
    """

    status: LPStatus
    value: Optional[Fraction]
    x: Optional[Tuple[Fraction, ...]]
    pivots: int


class _Tableau:
    """
    Dictionary-form simplex tableau over the rationals. Row ``i`` reads
    ``x_{b_vars[i]} = rhs[i] - Σ_j a[i][j] x_{nb_vars[j]}`` and the
    objective is ``z = z0 + Σ_j c[j] x_{nb_vars[j]}``, which is maximized.
    """

    def __init__(
        self,
        a: List[List[Fraction]],
        rhs: List[Fraction],
        nb_vars: List[int],
        b_vars: List[int],
    ):
        self.a = a
        self.rhs = rhs
        self.nb_vars = nb_vars
        self.b_vars = b_vars
        self.c: List[Fraction] = [Fraction(0)] * len(nb_vars)
        self.z0 = Fraction(0)
        self.pivots = 0

    def pivot(self, r: int, s: int):
        piv = self.a[r][s]
        row = [v / piv for v in self.a[r]]
        row[s] = 1 / piv
        rhs_r = self.rhs[r] / piv
        self.a[r] = row
        self.rhs[r] = rhs_r

        for i in range(len(self.a)):
            if i == r:
                continue
            factor = self.a[i][s]
            if factor == 0:
                continue
            self.rhs[i] -= factor * rhs_r
            self.a[i] = [v - factor * w for v, w in zip(self.a[i], row)]
            self.a[i][s] = -factor * row[s]

        factor = self.c[s]
        if factor != 0:
            self.z0 += factor * rhs_r
            self.c = [v - factor * w for v, w in zip(self.c, row)]
            self.c[s] = -factor * row[s]

        self.nb_vars[s], self.b_vars[r] = self.b_vars[r], self.nb_vars[s]
        self.pivots += 1

    def bland_step(self) -> Optional[LPStatus]:
        """
        Perform one pivot with Bland's rule. Returns a status when the
        tableau is optimal or unbounded.
        """
        candidates = [(self.nb_vars[j], j) for j, c in enumerate(self.c) if c > 0]
        if not candidates:
            return LPStatus.OPTIMAL
        _, s = min(candidates)
        ratios = [
            (self.rhs[i] / row[s], self.b_vars[i], i)
            for i, row in enumerate(self.a)
            if row[s] > 0
        ]
        if not ratios:
            return LPStatus.UNBOUNDED
        _, _, r = min(ratios)
        self.pivot(r, s)
        return None

    def solve(self) -> LPStatus:
        while True:
            status = self.bland_step()
            if status is not None:
                return status

    def drop_columns(self, variables: Sequence[int]):
        keep = [j for j, v in enumerate(self.nb_vars) if v not in variables]
        self.nb_vars = [self.nb_vars[j] for j in keep]
        self.a = [[row[j] for j in keep] for row in self.a]
        self.c = [self.c[j] for j in keep]

    def drop_row(self, i: int):
        del self.a[i]
        del self.rhs[i]
        del self.b_vars[i]

    def set_objective(self, costs: Sequence[Fraction]):
        """
        Express the objective ``Σ_v costs[v] x_v`` in terms of the current
        nonbasic variables. Variables beyond ``costs`` have cost zero.
        """

        def cost(v: int) -> Fraction:
            return costs[v] if v < len(costs) else Fraction(0)

        self.z0 = sum((cost(v) * r for v, r in zip(self.b_vars, self.rhs)), Fraction(0))
        self.c = [
            cost(nv) - sum((cost(bv) * row[j] for bv, row in zip(self.b_vars, self.a)), Fraction(0))
            for j, nv in enumerate(self.nb_vars)
        ]

    def value_of(self, v: int) -> Fraction:
        try:
            return self.rhs[self.b_vars.index(v)]
        except ValueError:
            return Fraction(0)


def maximize(
    c: Sequence[Real],
    a_ub: Sequence[Sequence[Real]] = (),
    b_ub: Sequence[Real] = (),
    a_eq: Sequence[Sequence[Real]] = (),
    b_eq: Sequence[Real] = (),
) -> LPResult:
    """
    Maximize ``c·x`` subject to ``a_ub x <= b_ub``, ``a_eq x = b_eq`` and
    ``x >= 0`` in exact rational arithmetic.

    Uses the two-phase simplex method with Bland's rule, which cannot cycle.
    Artificial variables that stay basic at level zero after the first phase
    are pivoted out or, for redundant equality rows, dropped.

    :param c:
        Objective coefficients, one per variable.
    :param a_ub:
        Inequality constraint rows.
    :param b_ub:
        Inequality right-hand sides.
    :param a_eq:
        Equality constraint rows.
    :param b_eq:
        Equality right-hand sides.
    :returns:
        The solve result.
    """
    n = len(c)
    if len(a_ub) != len(b_ub) or len(a_eq) != len(b_eq):
        raise ValueError("Every constraint row needs exactly one right-hand side")
    for row in list(a_ub) + list(a_eq):
        if len(row) != n:
            raise ValueError(
                f"Constraint rows must have {n} coefficients, got a row with {len(row)}"
            )

    costs = [rationalize(v) for v in c]
    m_ub = len(a_ub)
    next_var = n + m_ub
    artificial: List[int] = []
    nonbasic_slacks: List[int] = []
    rows: List[Tuple[List[Fraction], Fraction, int, int]] = []

    # Each row is (coefficients on the original variables, rhs, basic
    # variable, coefficient on its own slack when that slack is nonbasic).
    for i, (coefficients, bound) in enumerate(zip(a_ub, b_ub)):
        coefficients = [rationalize(v) for v in coefficients]
        bound = rationalize(bound)
        slack = n + i
        if bound >= 0:
            rows.append((coefficients, bound, slack, 0))
        else:
            rows.append(([-v for v in coefficients], -bound, next_var, -1))
            nonbasic_slacks.append(slack)
            artificial.append(next_var)
            next_var += 1
    for coefficients, bound in zip(a_eq, b_eq):
        coefficients = [rationalize(v) for v in coefficients]
        bound = rationalize(bound)
        sign = 1 if bound >= 0 else -1
        rows.append(([sign * v for v in coefficients], sign * bound, next_var, 0))
        artificial.append(next_var)
        next_var += 1

    nb_vars = list(range(n)) + nonbasic_slacks
    a: List[List[Fraction]] = []
    for i, (coefficients, _, _, slack_coefficient) in enumerate(rows):
        row = coefficients + [Fraction(0)] * len(nonbasic_slacks)
        if slack_coefficient != 0:
            row[n + nonbasic_slacks.index(n + i)] = Fraction(slack_coefficient)
        a.append(row)
    tableau = _Tableau(
        a, [r[1] for r in rows], nb_vars, [r[2] for r in rows]
    )

    if artificial:
        artificial_rows = [i for i, v in enumerate(tableau.b_vars) if v in artificial]
        tableau.z0 = -sum((tableau.rhs[i] for i in artificial_rows), Fraction(0))
        tableau.c = [
            sum((tableau.a[i][j] for i in artificial_rows), Fraction(0))
            for j in range(len(nb_vars))
        ]
        status = tableau.solve()
        assert status == LPStatus.OPTIMAL, "Phase one of the simplex cannot be unbounded"
        if tableau.z0 < 0:
            logger.debug("Infeasible after %d pivots", tableau.pivots)
            return LPResult(LPStatus.INFEASIBLE, None, None, tableau.pivots)
        _drive_out_artificials(tableau, artificial)
        tableau.drop_columns(artificial)

    tableau.set_objective(costs)
    status = tableau.solve()
    logger.debug("Simplex finished with status %s after %d pivots", status.value, tableau.pivots)
    if status == LPStatus.UNBOUNDED:
        return LPResult(status, None, None, tableau.pivots)
    x = tuple(tableau.value_of(v) for v in range(n))
    return LPResult(status, tableau.z0, x, tableau.pivots)


def _drive_out_artificials(tableau: _Tableau, artificial: Sequence[int]):
    i = 0
    while i < len(tableau.b_vars):
        if tableau.b_vars[i] not in artificial:
            i += 1
            continue
        assert tableau.rhs[i] == 0, "Artificial variable is basic at a nonzero level"
        column = next(
            (
                j
                for j, v in enumerate(tableau.nb_vars)
                if v not in artificial and tableau.a[i][j] != 0
            ),
            None,
        )
        if column is None:
            # Redundant equality row.
            tableau.drop_row(i)
        else:
            tableau.pivot(i, column)
            i += 1
