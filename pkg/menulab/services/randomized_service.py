"""Lottery menus: buyer choice, false-name deviations and IC/IR checks."""
import logging
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

from menulab import conf
from menulab.errors import EnumerationLimitError, InputError
from menulab.model.distribution_model import JointDistribution
from menulab.model.menu_model import Menu, bundle_items, bundle_order
from menulab.model.randomized_model import (CombinationRule, Deviation, DirectMechanism, ICReport, ICViolation,
                                            MenuEntry, RandomizedMenu)
from menulab.utils.rational import parse_rational

logger = logging.getLogger(__name__)

FLOAT_TOLERANCE = 1e-9

Pick = Union[int, MenuEntry]


def _valuation(m: RandomizedMenu, v: Sequence) -> list[Fraction]:
    if len(v) != m.n:
        raise InputError(f"valuation has {len(v)} entries but the menu allocates {m.n} items")
    return [parse_rational(x) for x in v]


def entry_utility(entry: MenuEntry, v: Sequence[Fraction]) -> Fraction:
    return sum((x * q for x, q in zip(v, entry.allocation)), Fraction(0)) - entry.payment


def rchoice_index(m: RandomizedMenu, v: Sequence) -> int:
    """Utility-maximizing entry; ties go to the higher payment, then the lower index."""
    v = _valuation(m, v)
    best, best_key = 0, None
    for k, entry in enumerate(m.entries):
        key = (entry_utility(entry, v), entry.payment)
        if best_key is None or key > best_key:
            best, best_key = k, key
    return best


def rchoice(m: RandomizedMenu, v: Sequence) -> MenuEntry:
    return m.entries[rchoice_index(m, v)]


def combine(first: Sequence[Fraction], second: Sequence[Fraction], rule: CombinationRule) -> tuple[Fraction, ...]:
    if rule == CombinationRule.CAPPED_ADDITIVE:
        return tuple(min(Fraction(1), x + y) for x, y in zip(first, second))
    return tuple(1 - (1 - x) * (1 - y) for x, y in zip(first, second))


def _entries(m: RandomizedMenu, picks: Sequence[Pick]) -> list[MenuEntry]:
    chosen = []
    for pick in picks:
        if isinstance(pick, MenuEntry):
            chosen.append(pick)
        elif 0 <= pick < len(m.entries):
            chosen.append(m.entries[pick])
        else:
            raise InputError(f"menu has no entry {pick}")
    return chosen


def false_name_utility(m: RandomizedMenu, v: Sequence, picks: Sequence[Pick], rule) -> Fraction:
    """Utility of buying every pick under its own name and merging the lotteries."""
    if not picks:
        raise InputError("a deviation needs at least one pick")
    rule = CombinationRule(rule)
    v = _valuation(m, v)
    chosen = _entries(m, picks)
    allocation = chosen[0].allocation
    for entry in chosen[1:]:
        allocation = combine(allocation, entry.allocation, rule)
    paid = sum((entry.payment for entry in chosen), Fraction(0))
    return sum((x * q for x, q in zip(v, allocation)), Fraction(0)) - paid


def best_false_name_deviation(m: RandomizedMenu, v: Sequence, rule, k: int = 2,
                              max_picks: Optional[int] = None) -> Deviation:
    """Best multiset of at most ``k`` entries; smaller multisets win ties."""
    rule = CombinationRule(rule)
    max_picks = max_picks or conf.MAX_PICKS
    if k < 1:
        raise InputError("at least one pick is needed")
    if k > max_picks:
        raise EnumerationLimitError(f"refusing to enumerate multisets of more than {max_picks} picks")
    entries = len(m.entries)
    total = sum(comb(entries + size - 1, size) for size in range(1, k + 1))
    if total > conf.MAX_DEVIATIONS:
        raise EnumerationLimitError(f"{total} multisets exceed the limit of {conf.MAX_DEVIATIONS}")

    truthful = entry_utility(rchoice(m, v), _valuation(m, v))
    best, best_utility = None, None
    for size in range(1, k + 1):
        for picks in combinations_with_replacement(range(entries), size):
            utility = false_name_utility(m, v, picks, rule)
            if best_utility is None or utility > best_utility:
                best, best_utility = picks, utility
    logger.debug("best deviation %s gains %s over truthful %s", best, best_utility - truthful, truthful)
    return Deviation(picks=best, utility=best_utility, truthful_utility=truthful)


# --- direct mechanisms ------------------------------------------------------------


def _same_items(m: RandomizedMenu, dist: JointDistribution) -> None:
    if m.n != dist.n:
        raise InputError(f"menu allocates {m.n} items but the distribution has {dist.n}")


def randomized_revenue(m: RandomizedMenu, dist: JointDistribution) -> Fraction:
    _same_items(m, dist)
    return sum((p * rchoice(m, v).payment for v, p in dist.atoms), Fraction(0))


def menu_to_direct(m: RandomizedMenu, dist: JointDistribution) -> DirectMechanism:
    _same_items(m, dist)
    outcomes = [rchoice(m, v) for v in dist.valuations]
    return DirectMechanism(n=m.n, types=dist.valuations, allocations=[e.allocation for e in outcomes],
                           payments=[e.payment for e in outcomes])


def mechanism_revenue(d: DirectMechanism, dist: JointDistribution):
    row = {v: k for k, v in enumerate(d.types)}
    return sum(p * d.payments[row[v]] for v, p in dist.atoms)


def verify_ic_ir(d: DirectMechanism, dist: JointDistribution) -> ICReport:
    """All IC and IR constraints of ``d`` on the support of ``dist``.

    Exact mechanisms are checked in rational arithmetic, others within 1e-9.
    """
    if d.n != dist.n:
        raise InputError(f"mechanism allocates {d.n} items but the distribution has {dist.n}")
    row = {v: k for k, v in enumerate(d.types)}
    missing = [v for v in dist.valuations if v not in row]
    if missing:
        raise InputError(f"mechanism has no outcome for type {missing[0]}")
    exact = d.exact
    dtype = object if exact else float
    tolerance = 0 if exact else FLOAT_TOLERANCE
    types = np.array([[x if exact else float(x) for x in v] for v in dist.valuations], dtype=dtype)
    allocations = np.array([[q if exact else float(q) for q in d.allocations[row[v]]] for v in dist.valuations],
                           dtype=dtype).reshape(len(types), d.n)
    payments = np.array([d.payments[row[v]] if exact else float(d.payments[row[v]]) for v in dist.valuations],
                        dtype=dtype)

    # utility[t, s]: type t reporting s
    utility = np.dot(types, allocations.T) - payments[None, :]
    truthful = np.diagonal(utility).copy()
    gains = utility - truthful[:, None]
    violations = []
    for t, s in zip(*np.nonzero(gains > tolerance)):
        violations.append(ICViolation(kind='IC', type_index=int(t), deviation_index=int(s),
                                      gain=float(gains[t, s])))
    for t in np.nonzero(truthful < -tolerance)[0]:
        violations.append(ICViolation(kind='IR', type_index=int(t), gain=float(-truthful[t])))
    checked = len(types) * (len(types) - 1) + len(types)
    return ICReport(ok=not violations, constraints_checked=checked, violations=tuple(violations))


def from_deterministic(menu: Menu) -> RandomizedMenu:
    entries = []
    for bundle in bundle_order(menu.n):
        allocation = tuple(Fraction(int(i + 1 in bundle_items(bundle))) for i in range(menu.n))
        entries.append(MenuEntry(allocation=allocation, payment=menu.price(bundle)))
    return RandomizedMenu(n=menu.n, entries=entries)


def budget_linear_payment(item_prices: Sequence, budget, allocation: Sequence) -> Fraction:
    """min(budget, sum of allocation_i * price_i)"""
    linear = sum((parse_rational(q) * parse_rational(p) for q, p in zip(allocation, item_prices)), Fraction(0))
    return min(parse_rational(budget), linear)


def budget_linear_menu(item_prices: Sequence, budget, allocations: Sequence[Sequence]) -> RandomizedMenu:
    entries = [MenuEntry(allocation=tuple(parse_rational(q) for q in allocation),
                         payment=budget_linear_payment(item_prices, budget, allocation))
               for allocation in allocations]
    return RandomizedMenu(n=len(item_prices), entries=entries)


def xos_payment(clauses: Sequence[Sequence], allocation: Sequence) -> Fraction:
    """max over clauses of sum of allocation_i * clause price_i"""
    if not clauses:
        raise InputError("an XOS price needs at least one clause")
    q = [parse_rational(x) for x in allocation]
    return max(sum((parse_rational(p) * x for p, x in zip(clause, q)), Fraction(0)) for clause in clauses)


def xos_randomized_menu(clauses: Sequence[Sequence], allocations: Sequence[Sequence]) -> RandomizedMenu:
    entries = [MenuEntry(allocation=tuple(parse_rational(q) for q in allocation),
                         payment=xos_payment(clauses, allocation))
               for allocation in allocations]
    return RandomizedMenu(n=len(clauses[0]), entries=entries)


# --- symmetry ---------------------------------------------------------------------


def permute_mechanism(d: DirectMechanism, order: Sequence[int]) -> DirectMechanism:
    """Relabel items: new item k is old item ``order[k]`` (1-based), for types and allocations alike."""
    if sorted(order) != list(range(1, d.n + 1)):
        raise InputError(f"{tuple(order)} is not a permutation of 1..{d.n}")

    def move(row):
        return tuple(row[i - 1] for i in order)

    return DirectMechanism(n=d.n, types=[move(v) for v in d.types],
                           allocations=[move(x) for x in d.allocations], payments=d.payments)


def symmetrize_mechanism(d: DirectMechanism) -> DirectMechanism:
    """Average of a two-item mechanism and its item-swapped copy, on the original type set."""
    if d.n != 2:
        raise InputError("mechanism symmetrization is implemented for two items")
    swapped = permute_mechanism(d, (2, 1))
    row = {v: k for k, v in enumerate(swapped.types)}
    if set(row) != set(d.types):
        raise InputError("the type set is not closed under swapping the items")
    half = Fraction(1, 2) if d.exact else 0.5
    allocations, payments = [], []
    for k, v in enumerate(d.types):
        mirror = row[v]
        allocations.append(tuple(half * (x + y) for x, y in zip(d.allocations[k], swapped.allocations[mirror])))
        payments.append(half * (d.payments[k] + swapped.payments[mirror]))
    return DirectMechanism(n=2, types=d.types, allocations=allocations, payments=payments)
