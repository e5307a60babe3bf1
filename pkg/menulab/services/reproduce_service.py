"""Reproduction targets: each recomputes published numbers and compares them with the expected table."""
import logging
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from menulab.errors import ConstructionError, ReproductionFailure
from menulab.model.menu_model import Menu
from menulab.model.randomized_model import CombinationRule
from menulab.model.search_model import GridMode, SearchConstraint
from menulab.services.buyer_service import check_monotone, expected_revenue, monotonicity_grid, revenue_at
from menulab.services.construction_service import (submodularize2, symmetric_average_identity, symmetrize2,
                                                   three_halves)
from menulab.services.continuous_service import er_cap_sweep, numeric_gap_er, solve_w, w_residual
from menulab.services.distribution_service import product
from menulab.services.instance_service import (random_asymmetric_submodular_menu, random_exchangeable, random_joint,
                                               random_marginal, random_submodular_menu, random_supermodular_menu)
from menulab.services.lp_service import lp_optimal
from menulab.services.menu_service import xos_menu
from menulab.services.randomized_service import (best_false_name_deviation, false_name_utility, menu_to_direct,
                                                 randomized_revenue, rchoice, verify_ic_ir)
from menulab.services.search_service import candidate_grid, search_optimal
from menulab.utils.data import load_distribution, load_menu, load_randomized_menu
from menulab.utils.rational import describe

logger = logging.getLogger(__name__)


class ReproductionTarget(str, Enum):
    EXAMPLE_4 = 'example-4'
    EXAMPLE_5 = 'example-5'
    EXAMPLE_6 = 'example-6'
    EXAMPLE_7 = 'example-7'
    THEOREM_3_1 = 'theorem-3-1-property'
    THEOREM_4_1 = 'theorem-4-1-property'
    LEMMA_5 = 'lemma-5-property'
    ER_GAP = 'er-gap'
    W_CONSTANT = 'w-constant'
    XOS_NONMONOTONE = 'xos-nonmonotone'
    ALL = 'all'


# name -> (expected value, provenance)
EXPECTED: dict[str, tuple[Union[Fraction, float, int], str]] = {
    'example4.unrestricted': (Fraction(6293, 1000), 'published'),
    'example4.symmetric': (Fraction(6291, 1000), 'published'),
    'example4.submodular': (Fraction(6292, 1000), 'published'),
    'example4.symmetric-and-submodular': (Fraction(6288, 1000), 'published'),
    'example5.rev(4,4,100)': (Fraction(592, 100), 'derived'),
    'example5.rev(4,4,8)': (Fraction(408, 100), 'derived'),
    'example5.rev(192,192,192)': (Fraction(384, 100), 'derived'),
    'example5.three-halves-margin': (Fraction(8, 100), 'derived'),
    'example5.smdrev': (Fraction(408, 100), 'derived'),
    'example5.drev-lower-bound': (Fraction(592, 100), 'derived'),
    'example5.ratio-lower-bound': (Fraction(142, 100), 'derived'),
    'example6.rev(1,10,100)': (Fraction(61, 25), 'derived'),
    'example6.symdrev-upper-bound': (Fraction(21, 10), 'published'),
    'example7.utility': (Fraction(1152, 1187), 'published'),
    'example7.printed-deviation': (1.46, 'published'),
    'example7.lp-tolerance': (1e-9, 'derived'),
    'w.low': (1.2784, 'published'),
    'w.high': (1.2785, 'published'),
    'w.residual': (1e-12, 'derived'),
    'er.srev': (2.0, 'derived'),
    'er.brev-relative-error': (0.01, 'derived'),
    'xos.menu': ((5, 7, 5, 7, 5, 12, 12), 'derived'),
    'xos.revenue-low': (Fraction(7), 'derived'),
    'xos.revenue-high': (Fraction(5), 'derived'),
    'supermodular.violation-low': (Fraction(5), 'derived'),
    'supermodular.violation-high': (Fraction(1), 'derived'),
}

PROPERTY_SEED = 20160701
PROPERTY_INSTANCES = 1000
MONOTONE_INSTANCES = 500
EXCHANGEABLE_INSTANCES = 200


class Check(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: ReproductionTarget
    name: str
    passed: bool
    observed: str
    expected: str
    provenance: str

    def line(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        return f"{status} {self.target.value}: {self.name}: {self.observed} (expected {self.expected}) [{self.provenance}]"


def _show(value) -> str:
    if isinstance(value, Fraction):
        return describe(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


class ReproduceService:
    """Runs reproduction targets and collects their checks."""

    def __init__(self, seed: int = PROPERTY_SEED, instances: Optional[int] = None, workers: Optional[int] = None):
        self.seed = seed
        self.instances = instances
        self.workers = workers
        self.checks: list[Check] = []
        self._target = ReproductionTarget.ALL

    def _count(self, default: int) -> int:
        return self.instances if self.instances is not None else default

    def check(self, name: str, passed: bool, observed, expected_key: Optional[str] = None,
              expected: Optional[str] = None) -> bool:
        provenance = 'derived'
        if expected_key is not None:
            value, provenance = EXPECTED[expected_key]
            expected = expected or _show(value)
        self.checks.append(Check(target=self._target, name=name, passed=bool(passed), observed=_show(observed),
                                 expected=expected or '', provenance=provenance))
        logger.info("%s %s: %s", 'PASS' if passed else 'FAIL', name, observed)
        return passed

    def run(self, target) -> list[Check]:
        target = ReproductionTarget(target)
        targets = [t for t in ReproductionTarget if t != ReproductionTarget.ALL] if target == ReproductionTarget.ALL \
            else [target]
        for current in targets:
            self._target = current
            RUNNERS[current](self)
        return self.checks

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    # --- targets --------------------------------------------------------------

    def example_4(self) -> None:
        dist = load_distribution('example4')
        grid = candidate_grid(dist, GridMode.INTEGER)
        published = expected_revenue(load_menu('example4'), dist)
        for constraint in (SearchConstraint.UNRESTRICTED, SearchConstraint.SYMMETRIC,
                           SearchConstraint.SUBMODULAR, SearchConstraint.SYMMETRIC_SUBMODULAR):
            key = f'example4.{constraint.value}'
            result = search_optimal(dist, constraint, grid, workers=self.workers)
            passed = result.revenue == EXPECTED[key][0]
            if constraint == SearchConstraint.UNRESTRICTED:
                passed = passed and published == result.revenue
            self.check(f"{constraint.value} optimum {result.best}", passed, result.revenue, key)

    def example_5(self) -> None:
        dist = load_distribution('example5-eps-1/100')
        for menu, key in ((Menu.of(4, 4, 100), 'example5.rev(4,4,100)'), (Menu.of(4, 4, 8), 'example5.rev(4,4,8)'),
                          (Menu.of(192, 192, 192), 'example5.rev(192,192,192)')):
            revenue = expected_revenue(menu, dist)
            self.check(f"revenue of {menu}", revenue == EXPECTED[key][0], revenue, key)
        certificate = three_halves(Menu.of(4, 4, 100), dist)
        margin = certificate.inequality[1] - certificate.inequality[0]
        self.check("rev(4,4,8) + rev(192,192,192)/2 - rev(4,4,100)",
                   margin == EXPECTED['example5.three-halves-margin'][0], margin, 'example5.three-halves-margin')

        grid = candidate_grid(dist, GridMode.SUPPORT_SUMS)
        drev = search_optimal(dist, SearchConstraint.UNRESTRICTED, grid, workers=self.workers).revenue
        smdrev = search_optimal(dist, SearchConstraint.SUBMODULAR, grid, workers=self.workers).revenue
        self.check("searched drev", drev >= EXPECTED['example5.drev-lower-bound'][0], drev,
                   'example5.drev-lower-bound', expected='>= 592/100')
        self.check("searched smdrev", smdrev == EXPECTED['example5.smdrev'][0], smdrev, 'example5.smdrev')
        self.check("drev / smdrev", drev > EXPECTED['example5.ratio-lower-bound'][0] * smdrev, drev / smdrev,
                   'example5.ratio-lower-bound', expected='> 1.42')

    def example_6(self) -> None:
        dist = load_distribution('example6-eps-1/10')
        revenue = expected_revenue(load_menu('example6'), dist)
        self.check("revenue of (1,10,100)", revenue == EXPECTED['example6.rev(1,10,100)'][0], revenue,
                   'example6.rev(1,10,100)')
        grid = candidate_grid(dist, GridMode.SUPPORT_SUMS)
        symmetric = search_optimal(dist, SearchConstraint.SYMMETRIC, grid, workers=self.workers)
        self.check(f"symmetric optimum {symmetric.best}",
                   symmetric.revenue <= EXPECTED['example6.symdrev-upper-bound'][0], symmetric.revenue,
                   'example6.symdrev-upper-bound', expected='<= 21/10')

    def example_7(self) -> None:
        menu = load_randomized_menu('example7')
        dist = load_distribution('example7')
        v = (46, 80)
        chosen = rchoice(menu, v)
        utility = false_name_utility(menu, v, [chosen], CombinationRule.INDEPENDENT)
        self.check(f"utility of the entry chosen at {v}", utility == EXPECTED['example7.utility'][0], utility,
                   'example7.utility')

        pair = false_name_utility(menu, v, [1, 2], CombinationRule.INDEPENDENT)
        self.check("two-entry independent lottery beats the single choice", pair > utility, pair,
                   'example7.utility', expected='> 1152/1187')
        printed = float((46 + 80) * (1 - (1 - Fraction(32, 1187)) ** 2) - 2 * Fraction(34240, 13057))
        self.check("published two-entry expression", abs(printed - 1.46) <= 0.01, printed,
                   'example7.printed-deviation', expected='1.46 +- 0.01')
        deviation = best_false_name_deviation(menu, v, CombinationRule.INDEPENDENT, k=2)
        self.check(f"best deviation with two picks {deviation.picks}", not deviation.false_name_proof,
                   deviation.improvement, expected='> 0')

        report = verify_ic_ir(menu_to_direct(menu, dist), dist)
        self.check(f"IC and IR over {len(dist.atoms)} types", report.ok, f"{len(report.violations)} violations",
                   expected='0 violations')
        target = randomized_revenue(menu, dist)
        solution = lp_optimal(dist)
        gap = abs(float(solution.revenue) - float(target))
        passed = solution.revenue == target if solution.method == 'exact' else gap <= EXPECTED['example7.lp-tolerance'][0]
        self.check(f"LP optimum ({solution.method}) equals the menu's revenue {describe(target)}", passed,
                   solution.revenue, 'example7.lp-tolerance', expected=f"{describe(target)} within 1e-9")

    def theorem_3_1(self) -> None:
        rng = np.random.default_rng(self.seed)
        failures, worst = 0, None
        for _ in range(self._count(PROPERTY_INSTANCES)):
            first, second = random_marginal(rng), random_marginal(rng)
            menu = random_supermodular_menu(rng)
            try:
                certificate = submodularize2(menu, first, second)
            except ConstructionError:
                failures += 1
                continue
            worst = certificate.margin if worst is None else min(worst, certificate.margin)
        self.check("submodularized menus never earn less", failures == 0 and (worst is None or worst >= 0),
                   f"{failures} failures, smallest margin {_show(worst)}", expected='0 failures, margin >= 0')

        failures = 0
        for _ in range(self._count(MONOTONE_INSTANCES)):
            menu = random_submodular_menu(rng)
            dist = product([random_marginal(rng), random_marginal(rng)])
            failures += not check_monotone(menu, monotonicity_grid(menu, dist)).monotone
        self.check("submodular menus are revenue monotone", failures == 0, f"{failures} non-monotone menus",
                   expected='0 non-monotone menus')

        menu = Menu.of(5, 1, 10)
        low, high = (5, 0), (5, Fraction(9, 2))
        report = check_monotone(menu, [low, high])
        observed = (revenue_at(menu, low), revenue_at(menu, high))
        expected = (EXPECTED['supermodular.violation-low'][0], EXPECTED['supermodular.violation-high'][0])
        self.check("(5,1,10) drops revenue from (5,0) to (5,9/2)", not report.monotone and observed == expected,
                   f"{_show(observed[0])} -> {_show(observed[1])}", expected='5 -> 1')

    def theorem_4_1(self) -> None:
        rng = np.random.default_rng(self.seed + 1)
        failures, identity_failures, worst = 0, 0, None
        for _ in range(self._count(PROPERTY_INSTANCES)):
            marginal = random_marginal(rng)
            menu = random_asymmetric_submodular_menu(rng)
            try:
                certificate = symmetrize2(menu, marginal)
            except ConstructionError:
                failures += 1
                continue
            worst = certificate.margin if worst is None else min(worst, certificate.margin)
            identity_failures += certificate.identity_holds is False
        self.check("symmetrized menus never earn less", failures == 0 and (worst is None or worst >= 0),
                   f"{failures} failures, smallest margin {_show(worst)}", expected='0 failures, margin >= 0')
        self.check("cheap-and-dear average identity (IID)", identity_failures == 0,
                   f"{identity_failures} failures", expected='0 failures')

        identity_failures = 0
        for _ in range(self._count(EXCHANGEABLE_INSTANCES)):
            dist = random_exchangeable(rng)
            menu = random_asymmetric_submodular_menu(rng)
            if menu.c <= 2 * min(menu.a, menu.b):
                identity_failures += not symmetric_average_identity(menu, dist)
        self.check("cheap-and-dear average identity (correlated exchangeable)", identity_failures == 0,
                   f"{identity_failures} failures", expected='0 failures')

    def lemma_5(self) -> None:
        rng = np.random.default_rng(self.seed + 2)
        failures = 0
        for _ in range(self._count(PROPERTY_INSTANCES)):
            try:
                three_halves(random_supermodular_menu(rng), random_joint(rng))
            except ConstructionError:
                failures += 1
        self.check("rev(m) <= rev(additive) + rev(bundle-only)/2 on correlated joints", failures == 0,
                   f"{failures} failures", expected='0 failures')
        certificate = three_halves(Menu.of(4, 4, 100), load_distribution('example5-eps-1/100'))
        margin = certificate.inequality[1] - certificate.inequality[0]
        self.check("margin on (4,4,100) at eps=1/100", margin == EXPECTED['example5.three-halves-margin'][0],
                   margin, 'example5.three-halves-margin')

    def er_gap(self) -> None:
        report = numeric_gap_er(1.0, 1.0)
        self.check("srev of ER(1) x ER(1)", report.srev == EXPECTED['er.srev'][0], report.srev, 'er.srev')
        error = abs(report.brev - 2 * report.w) / (2 * report.w)
        self.check("brev against 2w", error <= EXPECTED['er.brev-relative-error'][0], report.brev,
                   'er.brev-relative-error', expected=f"{2 * report.w:.6f} within 1%")
        self.check("drev against brev on the search discretization", report.within_tolerance, report.drev,
                   expected=f"{report.brev_coarse:.6f} within {report.tolerance:.1e}")
        sweep = er_cap_sweep(1.0, 1.0, [1e2, 1e3, 1e4])
        ratios = [ratio for _, _, ratio in sweep]
        monotone = all(lo < hi for lo, hi in zip(ratios, ratios[1:])) and ratios[-1] <= report.w
        self.check("brev/srev over caps 1e2, 1e3, 1e4", monotone, ', '.join(f"{r:.6f}" for r in ratios),
                   expected=f"increasing, at most w = {report.w:.6f}")

    def w_constant(self) -> None:
        w = solve_w()
        low, high = EXPECTED['w.low'][0], EXPECTED['w.high'][0]
        self.check("root of (w-1)e^w = 1", low < w < high, w, expected=f"in ({low}, {high})")
        residual = w_residual(w)
        self.check("residual", residual < EXPECTED['w.residual'][0], residual, 'w.residual', expected='< 1e-12')

    def xos_nonmonotone(self) -> None:
        menu = xos_menu(3, [(5, 0, 0), (0, 7, 5)])
        self.check("XOS prices", menu.prices == tuple(Fraction(p) for p in EXPECTED['xos.menu'][0]), menu,
                   'xos.menu', expected='(5,7,5,7,5,12,12)')
        low, high = (6, 3, 0), (6, 3, 50)
        observed = (revenue_at(menu, low), revenue_at(menu, high))
        report = check_monotone(menu, [low, high])
        self.check("revenue drops from (6,3,0) to (6,3,50)",
                   not report.monotone and observed == (EXPECTED['xos.revenue-low'][0],
                                                        EXPECTED['xos.revenue-high'][0]),
                   f"{_show(observed[0])} -> {_show(observed[1])}", expected='7 -> 5')


RUNNERS: dict[ReproductionTarget, Callable[[ReproduceService], None]] = {
    ReproductionTarget.EXAMPLE_4: ReproduceService.example_4,
    ReproductionTarget.EXAMPLE_5: ReproduceService.example_5,
    ReproductionTarget.EXAMPLE_6: ReproduceService.example_6,
    ReproductionTarget.EXAMPLE_7: ReproduceService.example_7,
    ReproductionTarget.THEOREM_3_1: ReproduceService.theorem_3_1,
    ReproductionTarget.THEOREM_4_1: ReproduceService.theorem_4_1,
    ReproductionTarget.LEMMA_5: ReproduceService.lemma_5,
    ReproductionTarget.ER_GAP: ReproduceService.er_gap,
    ReproductionTarget.W_CONSTANT: ReproduceService.w_constant,
    ReproductionTarget.XOS_NONMONOTONE: ReproduceService.xos_nonmonotone,
}


def reproduce(target, **options) -> list[Check]:
    """Run ``target``; raises ReproductionFailure listing the failed checks."""
    service = ReproduceService(**options)
    checks = service.run(target)
    if not service.ok:
        failed = [check.name for check in checks if not check.passed]
        raise ReproductionFailure(f"{len(failed)} check(s) failed: " + '; '.join(failed))
    return checks
