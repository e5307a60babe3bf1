from fractions import Fraction

import pytest
from hypothesis import given

from menulab.errors import InputError
from menulab.model.continuous_model import NumericParams
from menulab.model.distribution_model import SingleItemDistribution
from menulab.services import continuous_service
from menulab.services.continuous_service import (bundle_price_sweep, er_cap_sweep, er_discretize, er_tail,
                                                 is_dominated_by_er, numeric_gap_er, single_price_revenue, solve_w,
                                                 w_residual)
from tests.strategies import marginals


def test_w_constant():
    w = solve_w()
    assert 1.2784 < w < 1.2785
    assert w_residual(w) < 1e-12


def test_er_tail():
    assert er_tail(1, 0.5) == 1.0
    assert er_tail(1, 4) == 0.25
    assert er_tail(2, 8) == 0.25
    with pytest.raises(InputError):
        er_tail(0, 1)


def test_discretization_is_dominated_by_its_continuous_tail():
    params = NumericParams(cap=100.0, grid_points=100)
    dist = er_discretize(1.0, params)
    assert sum(dist.probabilities) == 1
    assert dist.values[0] == 1
    for x in dist.values:
        assert dist.tail(x) <= Fraction(1) / x
    price, revenue = single_price_revenue(dist)
    assert revenue == 1
    assert is_dominated_by_er(dist)


def test_discretization_needs_a_cap_above_r():
    with pytest.raises(InputError, match="cap"):
        er_discretize(5.0, NumericParams(cap=4.0))


def test_single_price_revenue():
    price, revenue = single_price_revenue(SingleItemDistribution.uniform([1, 2, 3]))
    assert (price, revenue) == (2, Fraction(4, 3))


@given(dist=marginals())
def test_every_distribution_is_dominated_by_its_own_equal_revenue_tail(dist):
    assert is_dominated_by_er(dist)


def test_bundle_price_sweep_matches_exact_revenue():
    f = SingleItemDistribution.uniform([1, 3])
    price, revenue = bundle_price_sweep(f, f)
    # p = 4: Pr[v1 + v2 >= 4] = 3/4
    assert (price, revenue) == (4.0, 3.0)


def test_er_gap():
    report = numeric_gap_er(1.0, 1.0)
    assert report.srev == 2.0
    assert abs(report.brev - 2 * report.w) / (2 * report.w) <= 0.01
    assert report.within_tolerance
    assert report.drev >= report.brev_coarse
    assert report.rev_lp is None


def test_er_gap_with_lp():
    # same coarse discretization for the menu search and the LP
    report = numeric_gap_er(1.0, 1.0, NumericParams(grid_points=200, search_points=3, lp_points=3))
    assert report.rev_lp is not None
    assert report.rev_lp >= report.drev - 1e-9


def test_cap_sweep_increases_toward_w():
    w = solve_w()
    ratios = [ratio for _, _, ratio in er_cap_sweep(1.0, 1.0, [1e2, 1e3, 1e4])]
    assert ratios[0] < ratios[1] < ratios[2] <= w


def test_conditioned_atoms_keep_single_price_revenue():
    params = NumericParams(grid_points=200)
    ratio = (params.cap / 1.0) ** (1.0 / (params.grid_points - 1))
    small = continuous_service._conditioned_atoms(1.0, ratio, 1e2, params.resolution)
    large = continuous_service._conditioned_atoms(1.0, ratio, 1e3, params.resolution)
    assert max(small.values) < 100
    assert large.values[:len(small.values)] == small.values
    assert single_price_revenue(small) == (1, 1)
    assert all(small.tail(x) < large.tail(x) for x in small.values[1:])


def test_er_gap_flags_a_wrong_drev(monkeypatch):
    search = continuous_service.search_optimal

    def inflated(*args, **kwargs):
        result = search(*args, **kwargs)
        return result.model_copy(update={'revenue': result.revenue + Fraction(1, 100)})

    monkeypatch.setattr(continuous_service, 'search_optimal', inflated)
    report = numeric_gap_er(1.0, 1.0, NumericParams(grid_points=200))
    assert report.drev_gap > report.tolerance
    assert not report.within_tolerance


def test_numeric_params_are_validated():
    with pytest.raises(ValueError):
        NumericParams(grid_points=10)
