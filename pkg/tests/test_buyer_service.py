from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from menulab.errors import InputError
from menulab.model.distribution_model import JointDistribution
from menulab.model.menu_model import Menu, bundle_of
from menulab.services.buyer_service import (buyer_choice, check_monotone, expected_revenue, monotonicity_grid,
                                            region_mass, region_partition_2, revenue_at, sale_probabilities)
from menulab.services.distribution_service import mixture, product
from menulab.services.menu_service import normalize
from tests.strategies import joints, marginals, menus, normalized_menus, submodular_menus, valuations


def test_cheap_item_beats_dear_bundle():
    outcome = buyer_choice(Menu.of(1, 10, 100), (1, 1))
    assert outcome.items == (1,)
    assert outcome.payment == 1
    assert outcome.utility == 0


def test_bundle_bought_at_high_values():
    outcome = buyer_choice(Menu.of(4, 100, 104), (100, 100))
    assert outcome.bundle == bundle_of([1, 2])
    assert outcome.payment == 104


def test_ties_go_to_the_higher_payment():
    # every bundle leaves utility 0
    outcome = buyer_choice(Menu.of(5, 5, 10), (5, 5))
    assert outcome.bundle == bundle_of([1, 2])
    assert buyer_choice(Menu.of(5, 1, 10), (5, 0)).payment == 5


def test_ties_on_payment_go_to_the_larger_bundle():
    outcome = buyer_choice(Menu.of(0, 0, 0), (0, 0))
    assert outcome.bundle == bundle_of([1, 2])


def test_equal_bundles_go_to_the_first_item_set():
    assert buyer_choice(Menu.of(3, 3, 10), (3, 3)).bundle == bundle_of([1])


def test_nothing_bought_when_everything_is_too_dear():
    outcome = buyer_choice(Menu.of(5, 5, 5), (1, 1))
    assert outcome.bundle == 0
    assert outcome.payment == 0


def test_dimension_mismatch():
    with pytest.raises(InputError):
        buyer_choice(Menu.of(1, 1, 1), (1, 2, 3))


def test_example4_revenue(example4, example4_menu):
    assert expected_revenue(example4_menu, example4) == Fraction(6293, 1000)


def test_example6_revenue(example6):
    assert expected_revenue(Menu.of(1, 10, 100), example6) == Fraction(61, 25)


def test_sale_probabilities_example6(example6):
    sold = sale_probabilities(Menu.of(1, 10, 100), example6)
    assert sum(sold.values()) == 1
    assert sold[bundle_of([1, 2])] == Fraction(1, 100)
    assert region_mass(Menu.of(1, 10, 100), example6, bundle_of([1])) == Fraction(89, 100) + Fraction(1, 20)


@given(m=menus(), v=valuations())
def test_choice_is_utility_maximizing(m, v):
    outcome = buyer_choice(m, v)
    assert outcome.utility >= 0
    for bundle, price in m.as_map().items():
        value = sum(v[i - 1] for i in (1, 2) if bundle >> (i - 1) & 1)
        assert outcome.utility >= value - price


@given(m=menus(), v=valuations())
def test_normalizing_keeps_payments(m, v):
    assert revenue_at(normalize(m), v) == revenue_at(m, v)


@given(m=menus(), first=joints(), second=joints(), weight=st.fractions(0, 1, max_denominator=5))
def test_revenue_is_linear_in_the_distribution(m, first, second, weight):
    mixed = mixture(first, second, weight)
    assert expected_revenue(m, mixed) == weight * expected_revenue(m, first) + (1 - weight) * expected_revenue(
        m, second)


@given(m=menus(), dist=joints(), scale=st.integers(1, 5))
def test_revenue_scales_with_prices_and_values(m, dist, scale):
    scaled_menu = Menu(n=2, prices=tuple(scale * p for p in m.prices))
    scaled_dist = JointDistribution(n=2, atoms=[(tuple(scale * x for x in v), p) for v, p in dist.atoms])
    assert expected_revenue(scaled_menu, scaled_dist) == scale * expected_revenue(m, dist)


def test_partition_kinds():
    assert region_partition_2(Menu.of(15, 45, 80)).kind == 'supermodular'
    assert region_partition_2(Menu.of(27, 70, 85)).kind == 'submodular'
    assert region_partition_2(Menu.of(2, 3, 5)).kind == 'additive'


def test_partition_rejects_unnormalized_menu():
    with pytest.raises(InputError, match="not normalized"):
        region_partition_2(Menu.of(5, 1, 3))


def test_supermodular_partition_markers():
    partition = region_partition_2(Menu.of(15, 45, 80))
    assert partition.markers == {'a': 15, 'b': 45, 'c-a': 65, 'c-b': 35}
    assert partition.locate((20, 0)).bundle == bundle_of([1])
    assert partition.locate((50, 70)).bundle == bundle_of([1, 2])
    assert partition.locate((10, 10)).bundle == 0


@given(m=normalized_menus(), data=st.data())
@settings(max_examples=200)
def test_partition_agrees_with_buyer_choice(m, data):
    partition = region_partition_2(m)
    corners = sorted({x for x in partition.markers.values() if x >= 0} | {Fraction(0)})
    coordinate = st.one_of(st.sampled_from(corners), st.fractions(0, partition.box, max_denominator=4))
    for _ in range(10):
        v = (data.draw(coordinate), data.draw(coordinate))
        located = [region.bundle for region in partition.regions if region.contains(v)]
        assert located == [buyer_choice(m, v).bundle]


def test_supermodular_menu_can_lose_revenue():
    report = check_monotone(Menu.of(5, 1, 10), [(5, 0), (5, Fraction(9, 2))])
    assert not report.monotone
    violation = report.violations[0]
    assert (violation.revenue_low, violation.revenue_high) == (5, 1)


def test_monotone_check_counts_comparable_pairs():
    report = check_monotone(Menu.of(1, 1, 2), [(0, 0), (1, 1), (2, 0)])
    assert report.pairs_checked == 2
    assert report.monotone


@given(m=submodular_menus(max_price=12), first=marginals(max_value=12), second=marginals(max_value=12))
@settings(max_examples=50, deadline=None)
def test_submodular_menus_are_revenue_monotone(m, first, second):
    dist = product([first, second])
    assert check_monotone(m, monotonicity_grid(m, dist)).monotone


def test_grid_covers_the_region_corners():
    grid = set(monotonicity_grid(Menu.of(15, 45, 80)))
    assert (35, 45) in grid
    assert (15, 65) in grid
