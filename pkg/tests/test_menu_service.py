from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from menulab.errors import InputError
from menulab.model.menu_model import Menu, bundle_of, bundle_order
from menulab.model.search_model import SearchConstraint
from menulab.services.menu_service import (additive_menu, budget_additive_menu, bundle_only_menu, is_additive,
                                           is_bundle_only, is_monotone, is_subadditive, is_submodular, is_symmetric,
                                           modularity, normalize, satisfies, xos_menu)
from tests.strategies import menus, submodular_menus


def test_bundle_order_is_size_then_items():
    assert bundle_order(3) == (bundle_of([1]), bundle_of([2]), bundle_of([3]), bundle_of([1, 2]),
                               bundle_of([1, 3]), bundle_of([2, 3]), bundle_of([1, 2, 3]))


def test_menu_needs_one_price_per_bundle():
    with pytest.raises(ValidationError):
        Menu(n=2, prices=(1, 2))
    with pytest.raises(ValueError):
        Menu.of(1, 2, 3, 4)


def test_negative_price_rejected():
    with pytest.raises(ValidationError, match="negative price -1"):
        Menu.of(-1, 2, 3)


def test_prices_are_exact():
    m = Menu.of('1/3', '0.5', 1)
    assert m.prices == (Fraction(1, 3), Fraction(1, 2), Fraction(1))
    assert m.price(0) == 0
    assert str(m) == '(1/3,1/2,1)'


@pytest.mark.parametrize('prices, expected', [
    ((1, 10, 100), 'supermodular'),
    ((27, 70, 85), 'submodular'),
    ((2, 3, 5), 'additive'),
])
def test_modularity(prices, expected):
    assert modularity(Menu.of(*prices)) == expected


def test_modularity_is_two_item_only(example4_menu):
    with pytest.raises(InputError):
        modularity(example4_menu)


def test_predicates_on_small_menus():
    assert is_submodular(Menu.of(27, 70, 85))
    assert not is_submodular(Menu.of(15, 45, 80))
    assert is_symmetric(Menu.of(4, 4, 8))
    assert not is_symmetric(Menu.of(4, 5, 8))
    assert is_additive(Menu.of(4, 5, 9))
    assert is_bundle_only(Menu.of(7, 7, 7))
    assert is_monotone(Menu.of(1, 2, 2))
    assert not is_monotone(Menu.of(1, 5, 3))


def test_example4_menu_is_not_submodular(example4_menu):
    # p(12) + p(13) = 14 < p(123) + p(1) = 15
    assert not is_submodular(example4_menu)
    assert is_submodular(Menu.of(5, 6, 6, 7, 7, 8, 9))
    assert not is_symmetric(example4_menu)
    assert is_monotone(example4_menu)


@pytest.mark.parametrize('prices, expected', [
    ((5, 1, 3), (3, 1, 3)),
    ((1, 2, 0), (0, 0, 0)),
    ((2, 3, 4), (2, 3, 4)),
])
def test_normalize(prices, expected):
    assert normalize(Menu.of(*prices)) == Menu.of(*expected)


@given(m=menus(n=3))
def test_normalize_is_idempotent_and_monotone(m):
    once = normalize(m)
    assert normalize(once) == once
    assert is_monotone(once)


@given(m=menus(n=3))
def test_submodular_menus_are_subadditive(m):
    if is_submodular(m):
        assert is_subadditive(m)


@given(m=menus(n=2))
def test_two_item_submodular_is_subadditive(m):
    assert is_submodular(m) == is_subadditive(m)


@given(m=submodular_menus())
def test_satisfies_matches_predicates(m):
    assert satisfies(m, SearchConstraint.SUBMODULAR)
    assert satisfies(m, SearchConstraint.UNRESTRICTED)
    assert satisfies(m, SearchConstraint.SYMMETRIC) == is_symmetric(m)


def test_builders():
    assert additive_menu([1, 2, 4]).prices == tuple(map(Fraction, (1, 2, 4, 3, 5, 6, 7)))
    assert bundle_only_menu(2, 5) == Menu.of(5, 5, 5)
    assert budget_additive_menu([3, 4], 5) == Menu.of(3, 4, 5)


def test_xos_menu():
    m = xos_menu(3, [(5, 0, 0), (0, 7, 5)])
    assert m.prices == tuple(map(Fraction, (5, 7, 5, 7, 5, 12, 12)))
    assert is_subadditive(m)


def test_xos_menu_rejects_bad_clauses():
    with pytest.raises(InputError):
        xos_menu(2, [])
    with pytest.raises(InputError, match="expected 2"):
        xos_menu(2, [(1, 2, 3)])


@given(prices=st.lists(st.integers(0, 20), min_size=3, max_size=3), budget=st.integers(0, 40))
def test_budget_additive_menus_are_submodular(prices, budget):
    assert is_submodular(budget_additive_menu(prices, budget))
