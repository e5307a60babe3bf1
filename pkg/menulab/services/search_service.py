"""Exhaustive optimal-menu search over candidate price grids.

The vectorised engine fixes the single-item prices, streams blocks of
intermediate bundle prices and evaluates every grand-bundle price at once
for every type. All arithmetic is on integers scaled by a common
denominator, so revenues compare exactly; the winning menu's revenue is
recomputed in Fractions at the end.
"""
import csv
import io
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import islice, product as cartesian
from math import ceil
from typing import Iterable, Optional, Sequence

import numpy as np

from menulab import conf
from menulab.errors import InputError, SearchError
from menulab.model.distribution_model import JointDistribution
from menulab.model.menu_model import Menu, bundle_items, bundle_order, bundle_size
from menulab.model.search_model import CandidateGrid, GapReport, GridMode, SearchConstraint, SearchResult
from menulab.services.buyer_service import expected_revenue
from menulab.services.distribution_service import marginals
from menulab.services.menu_service import additive_menu, bundle_only_menu, satisfies
from menulab.utils.rational import INT_LIMIT, common_denominator, describe, fraction_str, render_decimal, scaled_ints

logger = logging.getLogger(__name__)

GENERAL = (SearchConstraint.UNRESTRICTED, SearchConstraint.SYMMETRIC,
           SearchConstraint.SUBMODULAR, SearchConstraint.SYMMETRIC_SUBMODULAR)


# --- grids ------------------------------------------------------------------


def _welfare(dist: JointDistribution, bundle: int) -> Fraction:
    return max(sum((v[i - 1] for i in bundle_items(bundle)), Fraction(0)) for v in dist.valuations)


def candidate_grid(dist: JointDistribution, mode, explicit: Optional[CandidateGrid] = None,
                   max_price: Optional[int] = None) -> CandidateGrid:
    mode = GridMode(mode)
    if mode == GridMode.EXPLICIT:
        if explicit is None:
            raise SearchError("explicit grid mode needs a grid")
        if explicit.n != dist.n:
            raise SearchError(f"grid prices {explicit.n} items but the distribution has {dist.n}")
        return explicit
    bundles = bundle_order(dist.n)
    if mode == GridMode.INTEGER:
        if any(x.denominator != 1 for v in dist.valuations for x in v):
            raise SearchError("integer grid requested but the support has non-integer values")
        if max_price is not None and max_price < 0:
            raise InputError(f"max price {max_price} is negative")
        tops = [max_price if max_price is not None else ceil(_welfare(dist, b)) for b in bundles]
        return CandidateGrid(n=dist.n, mode=mode,
                             prices=tuple(tuple(Fraction(k) for k in range(top + 1)) for top in tops))
    supports = [sorted(set(part.values) | {Fraction(0)}) for part in marginals(dist)]
    prices = []
    for bundle in bundles:
        sums = {Fraction(0)}
        for combo in cartesian(*(supports[i - 1] for i in bundle_items(bundle))):
            sums.add(sum(combo, Fraction(0)))
        prices.append(tuple(sorted(sums)))
    return CandidateGrid(n=dist.n, mode=mode, prices=tuple(prices))


def _effective_options(grid: CandidateGrid, constraint: SearchConstraint) -> dict[int, tuple]:
    """Options per bundle; under symmetric constraints every same-size bundle gets the union of their options."""
    options = {b: grid.options(b) for b in bundle_order(grid.n)}
    if constraint in (SearchConstraint.SYMMETRIC, SearchConstraint.SYMMETRIC_SUBMODULAR):
        for size in range(1, grid.n + 1):
            same = [b for b in options if bundle_size(b) == size]
            pooled = set().union(*(options[b] for b in same))
            for b in same:
                options[b] = tuple(sorted(pooled))
    return options


def closed_under_repair(options: dict[int, tuple]) -> bool:
    """Lowering any price to a superset's price keeps the menu on the grid."""
    for s, mine in options.items():
        top = mine[-1]
        have = set(mine)
        for t, theirs in options.items():
            if t != s and t & s == s and any(x < top and x not in have for x in theirs):
                return False
    return True


# --- exact oracle -----------------------------------------------------------


def _derived_menus(grid: CandidateGrid, constraint: SearchConstraint) -> Iterable[Menu]:
    n = grid.n
    if constraint == SearchConstraint.ADDITIVE:
        for singles in cartesian(*(grid.options(1 << i) for i in range(n))):
            yield additive_menu(singles)
    elif constraint == SearchConstraint.BUNDLE_ONLY:
        for price in grid.options((1 << n) - 1):
            yield bundle_only_menu(n, price)
    else:
        options = _effective_options(grid, constraint)
        for prices in cartesian(*(options[b] for b in bundle_order(n))):
            menu = Menu(n=n, prices=prices)
            if satisfies(menu, constraint):
                yield menu


def search_bruteforce(dist: JointDistribution, constraint, grid: CandidateGrid) -> SearchResult:
    """Plain loop over every menu in the grid, Fraction arithmetic, no pruning."""
    constraint = SearchConstraint(constraint)
    _check_grid(dist, grid)
    started = time.perf_counter()
    best, best_revenue, examined = None, None, 0
    for menu in _derived_menus(grid, constraint):
        examined += 1
        revenue = expected_revenue(menu, dist)
        if best_revenue is None or revenue > best_revenue:
            best, best_revenue = menu, revenue
    if best is None:
        raise SearchError(f"no menu in the grid satisfies the {constraint.value} constraint")
    return SearchResult(best=best, revenue=best_revenue, examined=examined, constraint=constraint,
                        mode=grid.mode, elapsed=time.perf_counter() - started)


def _check_grid(dist: JointDistribution, grid: CandidateGrid) -> None:
    if grid.n != dist.n:
        raise SearchError(f"grid prices {grid.n} items but the distribution has {dist.n}")


# --- separable constraints ---------------------------------------------------


def _best_posted(prices: Sequence[Fraction], tail) -> tuple[Fraction, Fraction]:
    best, best_revenue = None, None
    for price in prices:
        revenue = price * tail(price)
        if best_revenue is None or revenue > best_revenue:
            best, best_revenue = price, revenue
    return best, best_revenue


def _search_separable(dist: JointDistribution, constraint: SearchConstraint, grid: CandidateGrid) -> tuple[Menu, int]:
    n = grid.n
    if constraint == SearchConstraint.BUNDLE_ONLY:
        options = grid.options((1 << n) - 1)
        price, _ = _best_posted(options, lambda p: dist.probability(lambda v: sum(v) >= p))
        return bundle_only_menu(n, price), len(options)
    # additive: only the single-item options are searched; every other bundle is
    # priced at its item sum, which may lie off an explicit grid
    singles, examined = [], 1
    for i, part in enumerate(marginals(dist)):
        options = grid.options(1 << i)
        price, _ = _best_posted(options, part.tail)
        singles.append(price)
        examined *= len(options)
    return additive_menu(singles), examined


# --- vectorised engine -------------------------------------------------------


class _Layout:
    """Column bookkeeping shared by every worker."""

    def __init__(self, n: int, constraint: SearchConstraint, prune: bool):
        self.n = n
        self.grand = (1 << n) - 1
        self.singles = tuple(1 << i for i in range(n))
        self.middle = tuple(b for b in bundle_order(n) if 1 < bundle_size(b) < n)
        # column 0 is the empty bundle
        self.column = {0: 0}
        for k, b in enumerate(self.singles + self.middle):
            self.column[b] = k + 1
        self.submodular = constraint in (SearchConstraint.SUBMODULAR, SearchConstraint.SYMMETRIC_SUBMODULAR)
        self.prune = prune
        inner = (0,) + self.singles + self.middle
        self.row_pairs, self.grand_pairs, self.below = [], [], []
        if self.submodular:
            for s in inner[1:]:
                for t in inner[1:]:
                    if s < t and s & t not in (s, t):
                        cols = (self.column[s], self.column[t], self.column[s & t])
                        if s | t == self.grand:
                            self.grand_pairs.append(cols)
                        else:
                            self.row_pairs.append(cols + (self.column[s | t],))
        if prune:
            for big in self.middle:
                for small in self.singles + self.middle:
                    if small != big and small & big == small:
                        self.below.append((self.column[small], self.column[big]))


class _Engine:
    def __init__(self, dist: JointDistribution, constraint: SearchConstraint, options: dict[int, tuple],
                 prune: bool, block: int):
        self.layout = _Layout(dist.n, constraint, prune)
        self.constraint = constraint
        self.options = options
        layout = self.layout
        everything = [x for opts in options.values() for x in opts] + [x for v in dist.valuations for x in v]
        self.price_denom = common_denominator(everything)
        scaled = {b: scaled_ints(opts, self.price_denom) for b, opts in options.items()}
        values = scaled_ints([x for v in dist.valuations for x in v], self.price_denom)
        if values is None or any(s is None for s in scaled.values()):
            raise OverflowError("prices do not fit in scaled integers")
        self.scaled = scaled
        values = values.reshape(len(dist.atoms), dist.n)
        self.single_values = values
        self.middle_values = np.stack(
            [values[:, [i - 1 for i in bundle_items(b)]].sum(axis=1) for b in layout.middle], axis=1
        ) if layout.middle else np.zeros((len(dist.atoms), 0), dtype=np.int64)
        self.grand_values = values.sum(axis=1)
        self.grand_prices = scaled[layout.grand]

        self.weight_denom = common_denominator(dist.probabilities)
        weights = scaled_ints(dist.probabilities, self.weight_denom)
        top_payment = int(max(abs(int(s.max())) for s in scaled.values()))
        if weights is not None and top_payment * self.weight_denom < INT_LIMIT:
            self.weights = weights
        else:
            logger.info("revenue sums exceed int64; ranking menus in float64")
            self.weights = np.array([float(p) for p in dist.probabilities])
        types, cells = len(dist.atoms), len(self.grand_prices)
        self.block = max(1, block // max(1, types * cells))

    def singles_vectors(self) -> list[tuple[int, ...]]:
        layout = self.layout
        if self.constraint in (SearchConstraint.SYMMETRIC, SearchConstraint.SYMMETRIC_SUBMODULAR):
            return [(int(x),) * layout.n for x in self.scaled[layout.singles[0]]]
        return [tuple(int(x) for x in combo)
                for combo in cartesian(*(self.scaled[b] for b in layout.singles))]

    def middle_rows(self) -> Iterable[tuple[int, ...]]:
        layout = self.layout
        if not layout.middle:
            return iter([()])
        if self.constraint in (SearchConstraint.SYMMETRIC, SearchConstraint.SYMMETRIC_SUBMODULAR):
            sizes = sorted({bundle_size(b) for b in layout.middle})
            first = {size: next(b for b in layout.middle if bundle_size(b) == size) for size in sizes}
            return (tuple(int(choice[sizes.index(bundle_size(b))]) for b in layout.middle)
                    for choice in cartesian(*(self.scaled[first[size]] for size in sizes)))
        return (tuple(int(x) for x in row) for row in cartesian(*(self.scaled[b] for b in layout.middle)))

    def run(self, singles_chunk: Sequence[tuple[int, ...]]):
        """Best (revenue, price vector) over the given single-item price vectors, and menus examined."""
        best_revenue, best_prices, examined = None, None, 0
        for singles in singles_chunk:
            rows = self.middle_rows()
            while True:
                chunk = list(islice(rows, self.block))
                if not chunk:
                    break
                middle = np.array(chunk, dtype=np.int64).reshape(len(chunk), len(self.layout.middle))
                found, count = self._evaluate(singles, middle)
                examined += count
                if found is not None and (best_revenue is None or found[0] > best_revenue):
                    best_revenue, best_prices = found
        return best_revenue, best_prices, examined

    def _evaluate(self, singles: tuple[int, ...], middle: np.ndarray):
        layout = self.layout
        rows = len(middle)
        single_prices = np.array(singles, dtype=np.int64)
        # prices of the empty bundle, the singles and the middle bundles, per row
        inner = np.concatenate([np.zeros((rows, 1), dtype=np.int64),
                                np.broadcast_to(single_prices, (rows, layout.n)), middle], axis=1)
        keep = np.ones(rows, dtype=bool)
        for s, t, meet, join in layout.row_pairs:
            keep &= inner[:, s] + inner[:, t] >= inner[:, meet] + inner[:, join]
        for small, big in layout.below:
            keep &= inner[:, small] <= inner[:, big]
        if not keep.any():
            return None, 0
        index = np.nonzero(keep)[0]
        inner, middle = inner[index], middle[index]

        grand = self.grand_prices
        allowed = np.ones((len(index), len(grand)), dtype=bool)
        if layout.grand_pairs:
            cap = np.min(np.stack([inner[:, s] + inner[:, t] - inner[:, meet]
                                   for s, t, meet in layout.grand_pairs], axis=1), axis=1)
            allowed &= grand[None, :] <= cap[:, None]
        if layout.prune:
            allowed &= grand[None, :] >= inner.max(axis=1)[:, None]
        count = int(allowed.sum())
        if not count:
            return None, 0

        # best (utility, payment) among the empty bundle and the singles
        utility = np.concatenate([np.zeros((len(self.single_values), 1), dtype=np.int64),
                                  self.single_values - single_prices[None, :]], axis=1)
        paid = np.concatenate([[0], single_prices])
        top = utility.max(axis=1)
        pay = np.where(utility == top[:, None], paid[None, :], -1).max(axis=1)
        top = np.broadcast_to(top, (len(index), len(top)))
        pay = np.broadcast_to(pay, top.shape)
        if middle.shape[1]:
            mid_utility = self.middle_values[None, :, :] - middle[:, None, :]
            mid_top = mid_utility.max(axis=2)
            mid_pay = np.where(mid_utility == mid_top[:, :, None], middle[:, None, :], -1).max(axis=2)
            new_top = np.maximum(top, mid_top)
            pay = np.maximum(np.where(top == new_top, pay, -1), np.where(mid_top == new_top, mid_pay, -1))
            top = new_top

        grand_utility = self.grand_values[None, :, None] - grand[None, None, :]
        takes_grand = (grand_utility > top[:, :, None]) | (
            (grand_utility == top[:, :, None]) & (grand[None, None, :] >= pay[:, :, None]))
        payment = np.where(takes_grand, grand[None, None, :], pay[:, :, None])
        revenue = np.einsum('mtg,t->mg', payment, self.weights)
        revenue = np.where(allowed, revenue, -1)
        flat = int(np.argmax(revenue))
        m, g = divmod(flat, len(grand))
        prices = tuple(singles) + tuple(int(x) for x in middle[m]) + (int(grand[g]),)
        return (revenue[m, g].item(), prices), count

    def menu(self, prices: tuple[int, ...]) -> Menu:
        layout = self.layout
        by_bundle = dict(zip(layout.singles + layout.middle + (layout.grand,), prices))
        return Menu.from_map(layout.n, {b: Fraction(p, self.price_denom) for b, p in by_bundle.items()})


def _split(items: list, parts: int) -> list[list]:
    size = ceil(len(items) / parts) if items else 1
    return [items[k:k + size] for k in range(0, len(items), size)]


def search_optimal(dist: JointDistribution, constraint, grid: CandidateGrid, prune: bool = True,
                   workers: Optional[int] = None) -> SearchResult:
    """Revenue-maximizing menu of the grid under ``constraint``.

    Ties go to the lexicographically smallest price vector in bundle order.
    Bundle-monotone pruning is used only when the grid is closed under
    lowering a price to a superset's price.
    """
    constraint = SearchConstraint(constraint)
    _check_grid(dist, grid)
    started = time.perf_counter()
    workers = workers or conf.WORKERS

    if constraint not in GENERAL or grid.n == 1:
        simple = constraint if constraint not in GENERAL else SearchConstraint.BUNDLE_ONLY
        best, examined = _search_separable(dist, simple, grid)
        return _result(dist, best, examined, constraint, grid, False, started)

    options = _effective_options(grid, constraint)
    if any(not opts for opts in options.values()):
        raise SearchError(f"no menu in the grid satisfies the {constraint.value} constraint")
    prune = prune and closed_under_repair(options)
    if not prune:
        logger.debug("monotone pruning disabled for this grid")
    try:
        engine = _Engine(dist, constraint, options, prune, conf.SEARCH_BLOCK)
    except OverflowError:
        logger.warning("grid too fine for the integer engine, using the exact oracle")
        result = search_bruteforce(dist, constraint, grid)
        return result.model_copy(update={'elapsed': time.perf_counter() - started})

    vectors = engine.singles_vectors()
    if workers > 1 and len(vectors) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(engine.run, _split(vectors, workers)))
    else:
        outcomes = [engine.run(vectors)]

    best_revenue, best_prices, examined = None, None, 0
    for revenue, prices, count in outcomes:
        examined += count
        if revenue is None:
            continue
        if best_revenue is None or (-revenue, prices) < (-best_revenue, best_prices):
            best_revenue, best_prices = revenue, prices
        logger.debug("worker best %s at %s after %d menus", revenue, prices, count)
    if best_prices is None:
        raise SearchError(f"no menu in the grid satisfies the {constraint.value} constraint")
    return _result(dist, engine.menu(best_prices), examined, constraint, grid, prune, started)


def _result(dist, best: Menu, examined: int, constraint, grid, pruned: bool, started: float) -> SearchResult:
    revenue = expected_revenue(best, dist)
    logger.info("%s: %s earns %s over %d menus", constraint.value, best, describe(revenue), examined)
    return SearchResult(best=best, revenue=revenue, examined=examined, constraint=constraint,
                        mode=grid.mode, pruned=pruned, elapsed=time.perf_counter() - started)


# --- reports ------------------------------------------------------------------


def _ratio(top: Fraction, bottom: Fraction) -> Optional[Fraction]:
    return top / bottom if bottom else None


def gap_report(dist: JointDistribution, grid: CandidateGrid, workers: Optional[int] = None) -> GapReport:
    searches = {
        name: search_optimal(dist, constraint, grid, workers=workers)
        for name, constraint in (('drev', SearchConstraint.UNRESTRICTED), ('srev', SearchConstraint.ADDITIVE),
                                 ('brev', SearchConstraint.BUNDLE_ONLY), ('smdrev', SearchConstraint.SUBMODULAR),
                                 ('symdrev', SearchConstraint.SYMMETRIC))
    }
    revenue = {name: result.revenue for name, result in searches.items()}
    ratios = {
        'drev/srev': _ratio(revenue['drev'], revenue['srev']),
        'drev/brev': _ratio(revenue['drev'], revenue['brev']),
        'drev/smdrev': _ratio(revenue['drev'], revenue['smdrev']),
        'drev/symdrev': _ratio(revenue['drev'], revenue['symdrev']),
        'smdrev/srev': _ratio(revenue['smdrev'], revenue['srev']),
        'brev/srev': _ratio(revenue['brev'], revenue['srev']),
    }
    return GapReport(ratios=ratios, **searches)


RESULT_COLUMNS = ('constraint', 'menu', 'revenue', 'decimal', 'examined')


def result_row(result: SearchResult, timing: bool = False) -> dict:
    row = {
        'constraint': result.constraint.value,
        'menu': str(result.best),
        'revenue': fraction_str(result.revenue),
        'decimal': render_decimal(result.revenue),
        'examined': result.examined,
    }
    if timing:
        row['seconds'] = round(result.elapsed, 3)
    return row


def serialize_results(results: Sequence[SearchResult], fmt: str = 'json', timing: bool = False) -> str:
    rows = [result_row(result, timing) for result in results]
    if fmt == 'json':
        return json.dumps(rows, indent=2)
    if fmt == 'csv':
        buffer = io.StringIO()
        columns = RESULT_COLUMNS + (('seconds',) if timing else ())
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()
    if fmt == 'text':
        return '\n'.join(f"{row['constraint']}: {row['menu']} earns {row['revenue']} ({row['decimal']})"
                         f" over {row['examined']} menus" for row in rows) + '\n'
    raise InputError(f"unknown output format {fmt!r}")
