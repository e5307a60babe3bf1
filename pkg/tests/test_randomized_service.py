from fractions import Fraction

import pytest
from hypothesis import given, settings

from menulab.errors import EnumerationLimitError, InputError
from menulab.model.distribution_model import JointDistribution
from menulab.model.randomized_model import CombinationRule, DirectMechanism, MenuEntry, RandomizedMenu
from menulab.services.buyer_service import expected_revenue
from menulab.services.randomized_service import (best_false_name_deviation, budget_linear_menu,
                                                 budget_linear_payment, combine, entry_utility,
                                                 false_name_utility, from_deterministic, mechanism_revenue,
                                                 menu_to_direct, permute_mechanism, randomized_revenue, rchoice,
                                                 rchoice_index, symmetrize_mechanism, verify_ic_ir, xos_payment)
from tests.strategies import joints, menus, submodular_menus, valuations

INDEPENDENT = CombinationRule.INDEPENDENT
CAPPED = CombinationRule.CAPPED_ADDITIVE


def test_example7_choice(example7_menu):
    v = (46, 80)
    assert rchoice_index(example7_menu, v) == 6
    assert entry_utility(rchoice(example7_menu, v), v) == Fraction(1152, 1187)


def test_example7_top_type_buys_both_items(example7_menu):
    entry = rchoice(example7_menu, (100, 100))
    assert entry.allocation == (1, 1)
    assert entry.payment == 126


def test_two_names_beat_the_single_choice(example7_menu):
    v = (46, 80)
    pair = false_name_utility(example7_menu, v, [1, 2], INDEPENDENT)
    assert pair == Fraction(299679424, 170485249)
    assert pair > Fraction(1152, 1187)
    deviation = best_false_name_deviation(example7_menu, v, INDEPENDENT, k=2)
    assert not deviation.false_name_proof
    assert deviation.improvement > 0
    assert len(deviation.picks) == 2


def test_published_deviation_expression():
    printed = float(126 * (1 - (1 - Fraction(32, 1187)) ** 2) - 2 * Fraction(34240, 13057))
    assert printed == pytest.approx(1.46, abs=0.01)


def test_combination_rules():
    half = (Fraction(1, 2), Fraction(1, 2))
    assert combine(half, half, INDEPENDENT) == (Fraction(3, 4), Fraction(3, 4))
    assert combine(half, half, CAPPED) == (1, 1)
    assert CombinationRule.parse('capped') == CAPPED
    with pytest.raises(ValueError):
        CombinationRule.parse('adaptive')


def test_null_picks_are_worth_nothing(example7_menu):
    assert false_name_utility(example7_menu, (46, 80), [0, 0], INDEPENDENT) == 0


def test_single_pick_is_the_entry_utility(example7_menu):
    v = (46, 80)
    entry = example7_menu.entries[4]
    assert false_name_utility(example7_menu, v, [entry], CAPPED) == entry_utility(entry, v)


def test_deviation_limits(example7_menu):
    with pytest.raises(EnumerationLimitError):
        best_false_name_deviation(example7_menu, (46, 80), INDEPENDENT, k=4)
    with pytest.raises(InputError):
        best_false_name_deviation(example7_menu, (46, 80), INDEPENDENT, k=0)
    with pytest.raises(InputError):
        false_name_utility(example7_menu, (46, 80), [], INDEPENDENT)


@given(m=submodular_menus(), v=valuations())
@settings(max_examples=200)
def test_subadditive_deterministic_menus_are_false_name_proof(m, v):
    lotteries = from_deterministic(m)
    for rule in CombinationRule:
        assert best_false_name_deviation(lotteries, v, rule, k=2).false_name_proof


@given(m=menus(), dist=joints())
def test_deterministic_menus_keep_their_revenue(m, dist):
    assert randomized_revenue(from_deterministic(m), dist) == expected_revenue(m, dist)


def test_example7_menu_is_ic_and_ir(example7_menu, example7_types):
    direct = menu_to_direct(example7_menu, example7_types)
    report = verify_ic_ir(direct, example7_types)
    assert report.ok
    assert report.constraints_checked == 36 * 35 + 36
    assert mechanism_revenue(direct, example7_types) == randomized_revenue(example7_menu, example7_types)


def test_full_surplus_extraction_is_not_ic():
    dist = JointDistribution(n=1, atoms=[((1,), '1/2'), ((2,), '1/2')])
    direct = DirectMechanism(n=1, types=[(1,), (2,)], allocations=[(Fraction(1),), (Fraction(1),)],
                             payments=[Fraction(1), Fraction(2)])
    report = verify_ic_ir(direct, dist)
    assert not report.ok
    assert [(x.kind, x.type_index, x.deviation_index) for x in report.violations] == [('IC', 1, 0)]


def test_floating_mechanisms_use_a_tolerance():
    dist = JointDistribution.point(1)
    direct = DirectMechanism(n=1, types=[(1,)], allocations=[(1.0,)], payments=[1.0 + 1e-12])
    assert verify_ic_ir(direct, dist).ok


def test_null_mechanism_is_ic(example7_types):
    types = example7_types.valuations
    direct = DirectMechanism(n=2, types=types, allocations=[(Fraction(0), Fraction(0))] * len(types),
                             payments=[Fraction(0)] * len(types))
    assert verify_ic_ir(direct, example7_types).ok


def test_symmetrized_mechanism(example7_menu, example7_types):
    direct = menu_to_direct(example7_menu, example7_types)
    swapped = permute_mechanism(direct, (2, 1))
    assert swapped.types[0] == tuple(reversed(direct.types[0]))
    symmetric = symmetrize_mechanism(direct)
    assert verify_ic_ir(symmetric, example7_types).ok
    assert mechanism_revenue(symmetric, example7_types) == mechanism_revenue(direct, example7_types)
    with pytest.raises(InputError):
        permute_mechanism(direct, (1, 1))


def test_budget_linear_prices():
    assert budget_linear_payment([10, 20], 15, ['1/2', '1/2']) == 15
    assert budget_linear_payment([10, 20], 12, [1, 1]) == 12
    assert budget_linear_payment([10, 20], 100, ['1/4', 0]) == Fraction(5, 2)
    menu = budget_linear_menu([10, 20], 15, [[1, 0], [0, 1], [1, 1]])
    assert [e.payment for e in menu.entries] == [0, 10, 15, 15]


def test_xos_lottery_price():
    assert xos_payment([(5, 0, 0), (0, 7, 5)], (1, '1/2', 1)) == Fraction(17, 2)
    with pytest.raises(InputError):
        xos_payment([], (1,))


def test_menu_entry_validation():
    with pytest.raises(ValueError):
        MenuEntry(allocation=(Fraction(1),), payment=-1)
    with pytest.raises(ValueError):
        RandomizedMenu(n=2, entries=[MenuEntry(allocation=(Fraction(1),), payment=1)])
