import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from menulab.errors import InputError, SearchError
from menulab.model.distribution_model import JointDistribution
from menulab.model.menu_model import Menu
from menulab.model.search_model import CandidateGrid, GridMode, SearchConstraint
from menulab.services.buyer_service import expected_revenue
from menulab.services.continuous_service import solve_w
from menulab.services.distribution_service import product
from menulab.services.menu_service import satisfies
from menulab.services.search_service import (candidate_grid, closed_under_repair, gap_report, search_bruteforce,
                                             search_optimal, serialize_results)
from tests.strategies import joints, marginals

GENERAL = (SearchConstraint.UNRESTRICTED, SearchConstraint.SYMMETRIC, SearchConstraint.SUBMODULAR,
           SearchConstraint.SYMMETRIC_SUBMODULAR)


def test_integer_grid_for_example4(example4):
    grid = candidate_grid(example4, GridMode.INTEGER)
    assert grid.options(0b001) == tuple(range(7))
    assert grid.options(0b011) == tuple(range(13))
    assert grid.options(0b111) == tuple(range(19))
    assert grid.size == 7 ** 3 * 13 ** 3 * 19


def test_support_sums_grid():
    grid = candidate_grid(JointDistribution.point(3, 4), GridMode.SUPPORT_SUMS)
    assert grid.prices == ((0, 3), (0, 4), (0, 3, 4, 7))


def test_integer_grid_needs_integer_support():
    with pytest.raises(SearchError, match="non-integer"):
        candidate_grid(JointDistribution.point('1/2', 1), GridMode.INTEGER)


def test_explicit_grid_is_checked():
    dist = JointDistribution.point(1, 1)
    with pytest.raises(SearchError):
        candidate_grid(dist, GridMode.EXPLICIT)
    one_item = CandidateGrid(n=1, mode=GridMode.EXPLICIT, prices=((0, 1),))
    with pytest.raises(SearchError, match="1 items"):
        candidate_grid(dist, GridMode.EXPLICIT, one_item)


def test_max_price_caps_the_integer_grid():
    grid = candidate_grid(JointDistribution.point(3, 4), GridMode.INTEGER, max_price=2)
    assert grid.prices == ((0, 1, 2),) * 3


def test_candidate_grid_rejects_unsorted_prices():
    with pytest.raises(ValueError):
        CandidateGrid(n=1, mode=GridMode.EXPLICIT, prices=((2, 1),))


@pytest.mark.parametrize('constraint', GENERAL)
def test_point_mass_extracts_full_surplus(constraint):
    dist = JointDistribution.point(3, 4)
    result = search_optimal(dist, constraint, candidate_grid(dist, GridMode.SUPPORT_SUMS))
    assert result.revenue == 7
    assert satisfies(result.best, constraint)


def test_symmetric_search_pools_single_item_prices():
    dist = JointDistribution.point(3, 4)
    grid = candidate_grid(dist, GridMode.SUPPORT_SUMS)
    assert grid.options(1) != grid.options(2)
    result = search_optimal(dist, SearchConstraint.SYMMETRIC, grid)
    assert result.best == Menu.of(4, 4, 7)
    assert search_bruteforce(dist, SearchConstraint.SYMMETRIC, grid).revenue == 7


def test_additive_search_derives_bundle_prices_off_an_explicit_grid():
    dist = JointDistribution.point(3, 4)
    grid = CandidateGrid(n=2, mode=GridMode.EXPLICIT, prices=((1,), (1,), (5,)))
    result = search_optimal(dist, SearchConstraint.ADDITIVE, grid)
    assert result.best == Menu.of(1, 1, 2)
    assert result.revenue == 2


def test_additive_and_bundle_only_searches():
    dist = JointDistribution(n=2, atoms=[((1, 1), '3/4'), ((3, 3), '1/4')])
    grid = candidate_grid(dist, GridMode.SUPPORT_SUMS)
    additive = search_optimal(dist, SearchConstraint.ADDITIVE, grid)
    bundle = search_optimal(dist, SearchConstraint.BUNDLE_ONLY, grid)
    assert additive.best == Menu.of(1, 1, 2)
    assert additive.revenue == 2
    assert bundle.best == Menu.of(2, 2, 2)
    assert bundle.revenue == 2


@given(dist=joints(max_atoms=3, max_value=6))
@settings(max_examples=50, deadline=None)
def test_engine_matches_exhaustive_oracle(dist):
    grid = candidate_grid(dist, GridMode.SUPPORT_SUMS)
    for constraint in SearchConstraint:
        fast = search_optimal(dist, constraint, grid)
        slow = search_bruteforce(dist, constraint, grid)
        assert fast.revenue == slow.revenue
        assert expected_revenue(fast.best, dist) == fast.revenue
        assert satisfies(fast.best, constraint)


@given(dist=joints(n=3, max_atoms=3, max_value=3))
@settings(max_examples=20, deadline=None)
def test_pruning_keeps_the_optimum(dist):
    grid = candidate_grid(dist, GridMode.INTEGER)
    for constraint in GENERAL:
        pruned = search_optimal(dist, constraint, grid, prune=True)
        full = search_optimal(dist, constraint, grid, prune=False)
        assert pruned.revenue == full.revenue


@given(dist=joints(max_atoms=4, max_value=8))
@settings(max_examples=50, deadline=None)
def test_constraints_only_lose_revenue(dist):
    grid = candidate_grid(dist, GridMode.SUPPORT_SUMS)
    revenue = {c: search_optimal(dist, c, grid).revenue for c in SearchConstraint}
    assert revenue[SearchConstraint.UNRESTRICTED] >= max(revenue.values())
    assert revenue[SearchConstraint.SUBMODULAR] >= revenue[SearchConstraint.SYMMETRIC_SUBMODULAR]
    assert revenue[SearchConstraint.SYMMETRIC] >= revenue[SearchConstraint.SYMMETRIC_SUBMODULAR]
    assert revenue[SearchConstraint.SUBMODULAR] >= revenue[SearchConstraint.ADDITIVE]


@given(dist=joints(max_atoms=4, max_value=8))
@settings(max_examples=20, deadline=None)
def test_worker_count_does_not_change_the_result(dist):
    grid = candidate_grid(dist, GridMode.INTEGER)
    single = search_optimal(dist, SearchConstraint.UNRESTRICTED, grid, workers=1)
    split = search_optimal(dist, SearchConstraint.UNRESTRICTED, grid, workers=3)
    assert (single.best, single.revenue) == (split.best, split.revenue)


@given(first=marginals(max_value=10), second=marginals(max_value=10))
@settings(max_examples=30, deadline=None)
def test_product_gaps(first, second):
    dist = product([first, second])
    report = gap_report(dist, candidate_grid(dist, GridMode.INTEGER))
    assert report.drev.revenue == report.smdrev.revenue
    if report.srev.revenue:
        assert float(report.ratios['drev/srev']) <= solve_w() + 1e-12


def test_repair_closure():
    assert closed_under_repair({1: (0, 1, 2), 2: (0, 1, 2), 3: (0, 1, 2, 3, 4)})
    assert not closed_under_repair({1: (0, 2), 2: (0, 2), 3: (0, 1, 2, 3)})


def test_example5_gap(example5):
    grid = candidate_grid(example5, GridMode.SUPPORT_SUMS)
    drev = search_optimal(example5, SearchConstraint.UNRESTRICTED, grid)
    smdrev = search_optimal(example5, SearchConstraint.SUBMODULAR, grid)
    assert drev.revenue == 6
    assert drev.best == Menu.of(4, 4, 104)
    assert smdrev.revenue == Fraction(408, 100)
    assert drev.revenue / smdrev.revenue > Fraction(142, 100)


def test_example6_symmetric_menus_earn_less(example6):
    grid = candidate_grid(example6, GridMode.SUPPORT_SUMS)
    symmetric = search_optimal(example6, SearchConstraint.SYMMETRIC, grid)
    assert symmetric.revenue <= Fraction(21, 10)
    assert search_optimal(example6, SearchConstraint.UNRESTRICTED, grid).revenue >= Fraction(61, 25)


@pytest.mark.slow
@pytest.mark.parametrize('constraint, expected', [
    (SearchConstraint.UNRESTRICTED, Fraction(6293, 1000)),
    (SearchConstraint.SYMMETRIC, Fraction(6291, 1000)),
    (SearchConstraint.SUBMODULAR, Fraction(6292, 1000)),
    (SearchConstraint.SYMMETRIC_SUBMODULAR, Fraction(6288, 1000)),
])
def test_example4_optima(example4, constraint, expected):
    result = search_optimal(example4, constraint, candidate_grid(example4, GridMode.INTEGER), workers=4)
    assert result.revenue == expected
    assert satisfies(result.best, constraint)


def _result():
    dist = JointDistribution.point(3, 4)
    return search_optimal(dist, SearchConstraint.UNRESTRICTED, candidate_grid(dist, GridMode.SUPPORT_SUMS))


def test_serialize_csv():
    text = serialize_results([_result()], 'csv')
    header, row = text.splitlines()
    assert header == 'constraint,menu,revenue,decimal,examined'
    assert row.startswith('unrestricted,"(')
    assert ',7,7,' in row


def test_serialize_json_with_timing():
    rows = json.loads(serialize_results([_result()], 'json', timing=True))
    assert rows[0]['revenue'] == '7'
    assert 'seconds' in rows[0]


def test_serialize_text_and_unknown_format():
    assert 'earns 7 (7)' in serialize_results([_result()], 'text')
    with pytest.raises(InputError):
        serialize_results([_result()], 'xml')
