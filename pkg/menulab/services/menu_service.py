"""Structural predicates and builders for deterministic menus."""
from fractions import Fraction
from typing import Sequence

from menulab.errors import InputError
from menulab.model.menu_model import Menu, bundle_items, bundle_order, bundle_size
from menulab.model.search_model import SearchConstraint


def _pairs(n: int):
    bundles = (0,) + bundle_order(n)
    for s in bundles:
        for t in bundles:
            if s < t:
                yield s, t


def is_submodular(m: Menu) -> bool:
    """p(S) + p(T) >= p(S & T) + p(S | T) for every pair of bundles."""
    return all(m.price(s) + m.price(t) >= m.price(s & t) + m.price(s | t) for s, t in _pairs(m.n))


def is_subadditive(m: Menu) -> bool:
    return all(m.price(s) + m.price(t) >= m.price(s | t) for s, t in _pairs(m.n))


def is_symmetric(m: Menu) -> bool:
    by_size = {}
    for bundle, price in m.as_map().items():
        if by_size.setdefault(bundle_size(bundle), price) != price:
            return False
    return True


def is_additive(m: Menu) -> bool:
    singles = [m.price(1 << i) for i in range(m.n)]
    return all(p == sum(singles[i - 1] for i in bundle_items(b)) for b, p in m.as_map().items())


def is_bundle_only(m: Menu) -> bool:
    return len(set(m.prices)) == 1


def is_monotone(m: Menu) -> bool:
    return all(m.price(s) <= m.price(t) for s, t in _pairs(m.n) if s & t == s)


def normalize(m: Menu) -> Menu:
    """Cap each price at the cheapest price of a superset.

    For two items this is ``(min(a, c), min(b, c), c)``. The buyer pays the
    same at every valuation, since a bundle priced above one of its supersets
    is never chosen over that superset.
    """
    full = (1 << m.n) - 1
    capped = {}
    for bundle in bundle_order(m.n):
        rest = full & ~bundle
        best = m.price(bundle)
        extra = rest
        # walk the nonempty subsets of the missing items
        while extra:
            best = min(best, m.price(bundle | extra))
            extra = (extra - 1) & rest
        capped[bundle] = best
    return Menu.from_map(m.n, capped)


def modularity(m: Menu) -> str:
    """'submodular', 'supermodular' or 'additive' for a two-item menu."""
    if m.n != 2:
        raise InputError("modularity is defined here for two-item menus only")
    if m.c == m.a + m.b:
        return 'additive'
    return 'supermodular' if m.c > m.a + m.b else 'submodular'


def satisfies(m: Menu, constraint: SearchConstraint) -> bool:
    if constraint == SearchConstraint.UNRESTRICTED:
        return True
    if constraint == SearchConstraint.SYMMETRIC:
        return is_symmetric(m)
    if constraint == SearchConstraint.SUBMODULAR:
        return is_submodular(m)
    if constraint == SearchConstraint.SYMMETRIC_SUBMODULAR:
        return is_symmetric(m) and is_submodular(m)
    if constraint == SearchConstraint.ADDITIVE:
        return is_additive(m)
    return is_bundle_only(m)


def additive_menu(item_prices: Sequence) -> Menu:
    prices = [Fraction(p) for p in item_prices]
    return Menu.from_map(len(prices), {b: sum(prices[i - 1] for i in bundle_items(b))
                                       for b in bundle_order(len(prices))})


def bundle_only_menu(n: int, price) -> Menu:
    return Menu(n=n, prices=(Fraction(price),) * ((1 << n) - 1))


def budget_additive_menu(item_prices: Sequence, budget) -> Menu:
    """p(S) = min(budget, sum of the item prices in S)."""
    budget = Fraction(budget)
    additive = additive_menu(item_prices)
    return Menu(n=additive.n, prices=tuple(min(budget, p) for p in additive.prices))


def xos_menu(n: int, clauses: Sequence[Sequence]) -> Menu:
    """p(S) = max over clauses of the clause's item prices summed over S."""
    if not clauses:
        raise InputError("an XOS menu needs at least one clause")
    rows = [[Fraction(p) for p in clause] for clause in clauses]
    for row in rows:
        if len(row) != n:
            raise InputError(f"clause {row} prices {len(row)} items, expected {n}")
    return Menu.from_map(n, {
        b: max(sum(row[i - 1] for i in bundle_items(b)) for row in rows) for b in bundle_order(n)
    })
