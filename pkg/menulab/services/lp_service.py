"""The revenue-maximization LP over a finite type space.

Variables are the allocation probabilities x[t, i] in [0, 1] and the free
payments p[t] of every type t. Constraints are IC for every ordered pair of
types and IR for every type; the objective is the expected payment.
"""
import logging
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from menulab import conf
from menulab.errors import InputError, LPError
from menulab.model.distribution_model import JointDistribution
from menulab.model.randomized_model import DirectMechanism, LPSolution
from menulab.services.randomized_service import verify_ic_ir

logger = logging.getLogger(__name__)

# a constraint is treated as tight when its slack is below this
TIGHT = 1e-7
# a reconstructed vertex must reproduce the HiGHS objective this closely
AGREEMENT = 1e-9
HIGHS_OPTIONS = {'primal_feasibility_tolerance': 1e-10, 'dual_feasibility_tolerance': 1e-10}


class RevenueProgram:
    """Sparse rows ``sum(coef * z[col]) <= rhs`` plus 0 <= x <= 1 bounds."""

    def __init__(self, dist: JointDistribution):
        self.dist = dist
        self.types = dist.valuations
        self.weights = dist.probabilities
        self.n = dist.n
        size = len(self.types)
        self.allocation_vars = size * self.n
        self.variables = self.allocation_vars + size
        self.rows: list[dict[int, Fraction]] = []
        self.labels: list[tuple] = []
        for t, v in enumerate(self.types):
            for s in range(size):
                if s == t:
                    continue
                row = {self.x(s, i): v[i] for i in range(self.n)}
                for i in range(self.n):
                    row[self.x(t, i)] = row.get(self.x(t, i), 0) - v[i]
                row[self.p(s)] = Fraction(-1)
                row[self.p(t)] = Fraction(1)
                self.rows.append({k: c for k, c in row.items() if c})
                self.labels.append(('IC', t, s))
        for t, v in enumerate(self.types):
            row = {self.x(t, i): -v[i] for i in range(self.n) if v[i]}
            row[self.p(t)] = Fraction(1)
            self.rows.append(row)
            self.labels.append(('IR', t, None))

    def x(self, t: int, i: int) -> int:
        return t * self.n + i

    def p(self, t: int) -> int:
        return self.allocation_vars + t

    def objective(self) -> list[Fraction]:
        return [Fraction(0)] * self.allocation_vars + list(self.weights)

    def feasible(self, z: list[Fraction]) -> bool:
        if any(not 0 <= z[j] <= 1 for j in range(self.allocation_vars)):
            return False
        return all(sum(c * z[k] for k, c in row.items()) <= 0 for row in self.rows)

    def mechanism(self, z) -> DirectMechanism:
        size = len(self.types)
        return DirectMechanism(
            n=self.n, types=self.types,
            allocations=[tuple(z[self.x(t, i)] for i in range(self.n)) for t in range(size)],
            payments=[z[self.p(t)] for t in range(size)])


class RationalSimplex:
    """Dense tableau for ``max c.z, A z <= b, z >= 0`` with b >= 0, pivoting by Bland's rule."""

    def __init__(self, a: list[list[Fraction]], b: list[Fraction], c: list[Fraction]):
        self.m, self.n = len(a), len(c)
        self.a = np.array(a, dtype=object).reshape(self.m, self.n)
        self.b = np.array(b, dtype=object)
        self.c = np.array(c, dtype=object)
        self.nonbasic = list(range(self.n))
        self.basic = list(range(self.n, self.n + self.m))
        if any(x < 0 for x in b):
            raise LPError("the slack basis is infeasible")

    def pivot(self, i: int, j: int) -> None:
        piv = self.a[i, j]
        delta = self.c[j] / piv
        self.c = self.c - delta * self.a[i]
        self.c[j] = -delta
        row = self.a[i] / piv
        row[j] = 1 / piv
        self.b[i] = self.b[i] / piv
        column = self.a[:, j].copy()
        column[i] = 0
        self.a = self.a - np.outer(column, row)
        self.a[:, j] = -column / piv
        self.a[i] = row
        self.b = self.b - column * self.b[i]
        self.nonbasic[j], self.basic[i] = self.basic[i], self.nonbasic[j]

    def solve(self) -> list[Fraction]:
        pivots = 0
        while True:
            entering = [(self.nonbasic[j], j) for j in range(self.n) if self.c[j] > 0]
            if not entering:
                break
            _, j = min(entering)
            leaving = [(self.b[i] / self.a[i, j], self.basic[i], i) for i in range(self.m) if self.a[i, j] > 0]
            if not leaving:
                raise LPError("the revenue LP is unbounded")
            _, _, i = min(leaving)
            self.pivot(i, j)
            pivots += 1
        logger.debug("exact simplex finished after %d pivots", pivots)
        z = [Fraction(0)] * self.n
        for i, var in enumerate(self.basic):
            if var < self.n:
                z[var] = self.b[i]
        return z


class LPService:

    def build(self, dist: JointDistribution) -> RevenueProgram:
        if not dist.atoms:
            raise InputError("no types to optimize over")
        return RevenueProgram(dist)

    def solve_exact(self, program: RevenueProgram) -> LPSolution:
        """Payments split as p = p+ - p-; allocation upper bounds become rows."""
        cols = program.variables + len(program.types)
        a, b = [], []
        for row in program.rows:
            dense = [Fraction(0)] * cols
            for k, coef in row.items():
                dense[k] = coef
                if k >= program.allocation_vars:
                    dense[k + len(program.types)] = -coef
            a.append(dense)
            b.append(Fraction(0))
        for j in range(program.allocation_vars):
            dense = [Fraction(0)] * cols
            dense[j] = Fraction(1)
            a.append(dense)
            b.append(Fraction(1))
        objective = program.objective() + [-w for w in program.weights]
        split = RationalSimplex(a, b, objective).solve()
        z = split[:program.variables]
        for t in range(len(program.types)):
            z[program.p(t)] -= split[program.variables + t]
        revenue = sum(c * x for c, x in zip(program.objective(), z))
        return LPSolution(mechanism=program.mechanism(z), revenue=revenue, exact=True, method='exact',
                          primal_residual=0.0, dual_residual=0.0)

    def solve_highs(self, program: RevenueProgram) -> LPSolution:
        entries, rows, cols = [], [], []
        for r, row in enumerate(program.rows):
            for k, coef in row.items():
                rows.append(r)
                cols.append(k)
                entries.append(float(coef))
        matrix = coo_matrix((entries, (rows, cols)), shape=(len(program.rows), program.variables)).tocsr()
        cost = -np.array([float(c) for c in program.objective()])
        bounds = [(0.0, 1.0)] * program.allocation_vars + [(None, None)] * len(program.types)
        result = linprog(cost, A_ub=matrix, b_ub=np.zeros(len(program.rows)), bounds=bounds,
                         method='highs', options=HIGHS_OPTIONS)
        if result.status != 0:
            raise LPError(f"HiGHS failed on the revenue LP: {result.message}")
        z = result.x
        slack = matrix @ z
        primal = max(0.0, float(slack.max()), float(-z[:program.allocation_vars].min()),
                     float(z[:program.allocation_vars].max()) - 1.0)
        stationarity = cost - matrix.T @ result.ineqlin.marginals - result.lower.marginals - result.upper.marginals
        dual = max(float(np.abs(stationarity).max()), float(max(0.0, result.ineqlin.marginals.max())))
        logger.info("HiGHS: revenue %.12f, primal residual %.2e, dual residual %.2e", -result.fun, primal, dual)

        exact = self.reconstruct(program, z, slack, -result.fun)
        if exact is not None:
            revenue = sum(c * x for c, x in zip(program.objective(), exact))
            logger.info("reconstructed an exact vertex with revenue %s", revenue)
            return LPSolution(mechanism=program.mechanism(exact), revenue=revenue, exact=True,
                              method='highs', primal_residual=primal, dual_residual=dual)
        logger.info("rational reconstruction failed; keeping the floating point solution")
        return LPSolution(mechanism=program.mechanism([float(x) for x in z]), revenue=float(-result.fun),
                          exact=False, method='highs', primal_residual=primal, dual_residual=dual)

    def reconstruct(self, program: RevenueProgram, z: np.ndarray, slack: np.ndarray,
                    target: float) -> Optional[list[Fraction]]:
        """Exact vertex from the constraints tight at ``z``, feasible and worth ``target``."""
        objective = program.objective()

        def accept(candidate: Optional[list[Fraction]]) -> bool:
            if candidate is None or not program.feasible(candidate):
                return False
            value = float(sum(c * x for c, x in zip(objective, candidate)))
            return abs(value - target) <= AGREEMENT

        candidate = self._from_tight(program, z, slack)
        if accept(candidate):
            return candidate
        rounded = [Fraction(float(x)).limit_denominator(10 ** 6) for x in z]
        if accept(rounded):
            return rounded
        logger.debug("no exact vertex within %.0e of the HiGHS objective %.12f", AGREEMENT, target)
        return None

    def _from_tight(self, program: RevenueProgram, z: np.ndarray, slack: np.ndarray) -> Optional[list[Fraction]]:
        width = program.variables
        equations = []
        for r in np.nonzero(np.abs(slack) <= TIGHT)[0]:
            equations.append((program.rows[r], Fraction(0)))
        for j in range(program.allocation_vars):
            if abs(z[j]) <= TIGHT:
                equations.append(({j: Fraction(1)}, Fraction(0)))
            elif abs(z[j] - 1) <= TIGHT:
                equations.append(({j: Fraction(1)}, Fraction(1)))
        if not equations:
            return None
        dense = []
        for row, rhs in equations:
            line = [QQ(0)] * (width + 1)
            for k, coef in row.items():
                line[k] = QQ(coef.numerator, coef.denominator)
            line[width] = QQ(rhs.numerator, rhs.denominator)
            dense.append(line)
        reduced, pivots = DomainMatrix(dense, (len(dense), width + 1), QQ).rref()
        if width in pivots:
            return None
        table = reduced.to_list()
        solution = [Fraction(float(x)).limit_denominator(10 ** 6) for x in z]
        for r, col in enumerate(pivots):
            value = Fraction(int(table[r][width].numerator), int(table[r][width].denominator))
            for k in range(width):
                if k != col and k not in pivots and table[r][k]:
                    entry = table[r][k]
                    value -= Fraction(int(entry.numerator), int(entry.denominator)) * solution[k]
            solution[col] = value
        return solution


def lp_optimal(dist: JointDistribution, method: Optional[str] = None) -> LPSolution:
    method = method or conf.LP_METHOD
    service = LPService()
    program = service.build(dist)
    if method == 'auto':
        method = 'exact' if len(program.types) <= conf.EXACT_LP_MAX_TYPES else 'highs'
    if method == 'exact':
        solution = service.solve_exact(program)
    elif method == 'highs':
        solution = service.solve_highs(program)
    else:
        raise InputError(f"unknown LP method {method!r}")
    if solution.exact and not verify_ic_ir(solution.mechanism, dist).ok:
        raise LPError("the LP solution violates IC or IR")
    return solution
