"""Buyer best response, expected revenue and the geometry of two-item menus."""
import logging
from fractions import Fraction
from itertools import product as cartesian
from typing import Optional, Sequence

import numpy as np

from menulab.errors import InputError
from menulab.model.distribution_model import JointDistribution, Valuation
from menulab.model.menu_model import Menu, bundle_items, bundle_order, bundle_size
from menulab.model.outcome_model import (BuyerOutcome, HalfPlane, MonotonicityReport, Region,
                                         RegionPartition2, Violation)
from menulab.services.menu_service import modularity
from menulab.utils.rational import common_denominator, parse_rational, scaled_ints

logger = logging.getLogger(__name__)

# rows of the pairwise comparison matrix evaluated at once
MONOTONE_ROWS = 512


def _check_dims(m: Menu, v: Sequence) -> None:
    if len(v) != m.n:
        raise InputError(f"valuation has {len(v)} entries but the menu prices {m.n} items")


def _value(v: Sequence[Fraction], bundle: int) -> Fraction:
    return sum((v[i - 1] for i in bundle_items(bundle)), Fraction(0))


def buyer_choice(m: Menu, v: Sequence) -> BuyerOutcome:
    """Utility-maximizing bundle.

    Ties go to the higher payment, then the larger bundle, then the
    lexicographically smallest item set.
    """
    _check_dims(m, v)
    v = [parse_rational(x) for x in v]
    best, best_key = 0, (Fraction(0), Fraction(0), 0)
    for bundle in bundle_order(m.n):
        price = m.price(bundle)
        key = (_value(v, bundle) - price, price, bundle_size(bundle))
        if key > best_key:
            best, best_key = bundle, key
    return BuyerOutcome(bundle=best, payment=best_key[1], utility=best_key[0])


def revenue_at(m: Menu, v: Sequence) -> Fraction:
    return buyer_choice(m, v).payment


def _same_items(m: Menu, dist: JointDistribution) -> None:
    if m.n != dist.n:
        raise InputError(f"menu prices {m.n} items but the distribution has {dist.n}")


def expected_revenue(m: Menu, dist: JointDistribution) -> Fraction:
    _same_items(m, dist)
    return sum((p * revenue_at(m, v) for v, p in dist.atoms), Fraction(0))


def sale_probabilities(m: Menu, dist: JointDistribution) -> dict[int, Fraction]:
    _same_items(m, dist)
    sold = {bundle: Fraction(0) for bundle in (0,) + bundle_order(m.n)}
    for v, p in dist.atoms:
        sold[buyer_choice(m, v).bundle] += p
    return sold


def region_mass(m: Menu, dist: JointDistribution, bundle: int) -> Fraction:
    return sale_probabilities(m, dist)[bundle]


# --- two-item regions -------------------------------------------------------


def _indicator(bundle: int, n: int) -> tuple[int, ...]:
    return tuple(bundle >> i & 1 for i in range(n))


def _clip(polygon: list, plane: HalfPlane) -> list:
    """Sutherland-Hodgman step against the closed half-plane."""
    def side(point):
        return sum(c * x for c, x in zip(plane.coefficients, point)) - plane.rhs

    clipped = []
    for k, current in enumerate(polygon):
        previous = polygon[k - 1]
        fc, fp = side(current), side(previous)
        if (fc >= 0) != (fp >= 0):
            t = fp / (fp - fc)
            clipped.append(tuple(p + t * (c - p) for p, c in zip(previous, current)))
        if fc >= 0:
            clipped.append(current)
    deduped = []
    for point in clipped:
        if not deduped or deduped[-1] != point:
            deduped.append(point)
    if len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()
    return deduped


def region_partition_2(m: Menu) -> RegionPartition2:
    """Half-plane description of where each bundle is bought, for a normalized two-item menu.

    A boundary point belongs to the neighbouring region that wins the
    buyer's tie-break, i.e. the higher payment first.
    """
    if m.n != 2:
        raise InputError("region partitions exist for two-item menus only")
    if m.c < max(m.a, m.b):
        raise InputError(f"menu {m} is not normalized (bundle price below an item price)")

    bundles = (0,) + bundle_order(2)
    position = {bundle: k for k, bundle in enumerate(bundles)}

    def rank(bundle):
        return m.price(bundle), bundle_size(bundle), -position[bundle]

    box = max(m.c * Fraction(5, 4), Fraction(1))
    square = [(Fraction(0), Fraction(0)), (box, Fraction(0)), (box, box), (Fraction(0), box)]
    regions = []
    for s in bundles:
        constraints = []
        for t in bundles:
            if t == s:
                continue
            coefficients = tuple(x - y for x, y in zip(_indicator(s, 2), _indicator(t, 2)))
            constraints.append(HalfPlane(coefficients=coefficients, rhs=m.price(s) - m.price(t),
                                         strict=rank(t) > rank(s)))
        polygon = square
        for plane in constraints:
            polygon = _clip(polygon, plane)
            if not polygon:
                break
        regions.append(Region(bundle=s, payment=m.price(s), constraints=tuple(constraints),
                              vertices=tuple(polygon)))
    markers = {'a': m.a, 'b': m.b, 'c-a': m.c - m.a, 'c-b': m.c - m.b}
    return RegionPartition2(menu=m, kind=modularity(m), markers=markers, box=box, regions=tuple(regions))


# --- revenue monotonicity ---------------------------------------------------


def _corner_coordinates(m: Menu) -> set:
    if m.n == 2:
        raw = {Fraction(0), m.a, m.b, m.c - m.a, m.c - m.b, m.c}
    else:
        raw = {Fraction(0)} | {m.price(1 << i) for i in range(m.n)}
    return {x for x in raw if x >= 0}


def monotonicity_grid(m: Menu, dist: Optional[JointDistribution] = None) -> list[Valuation]:
    """Support of ``dist`` plus a lattice through the menu's corner coordinates.

    Each coordinate also appears shifted by a quarter of the smallest gap
    between coordinates, on both sides, so points just inside every region
    are present. For more than two items only the item prices seed the lattice.
    """
    coordinates = _corner_coordinates(m)
    if dist is not None:
        _same_items(m, dist)
        coordinates |= {x for v in dist.valuations for x in v}
    ordered = sorted(coordinates)
    gaps = [hi - lo for lo, hi in zip(ordered, ordered[1:])]
    delta = min(gaps) / 4 if gaps else Fraction(1, 4)
    shifted = set()
    for x in ordered:
        shifted.update({x, x + delta, x - delta})
    axis = sorted(x for x in shifted if x >= 0)
    grid = [tuple(point) for point in cartesian(axis, repeat=m.n)]
    if dist is not None:
        grid.extend(dist.valuations)
    return grid


def _as_array(values: list[Fraction]) -> np.ndarray:
    scaled = scaled_ints(values, common_denominator(values))
    if scaled is None:
        return np.array(values, dtype=object)
    return scaled


def check_monotone(m: Menu, grid: Sequence[Sequence]) -> MonotonicityReport:
    """Every pair low <= high (coordinatewise) in ``grid`` whose revenue drops."""
    points = list(dict.fromkeys(tuple(parse_rational(x) for x in v) for v in grid))
    for v in points:
        _check_dims(m, v)
    if not points:
        return MonotonicityReport(violations=(), pairs_checked=0)
    revenues = [revenue_at(m, v) for v in points]
    coords = _as_array([x for v in points for x in v]).reshape(len(points), m.n)
    paid = _as_array(revenues)

    violations, pairs = [], 0
    for start in range(0, len(points), MONOTONE_ROWS):
        low = coords[start:start + MONOTONE_ROWS]
        below = np.all(low[:, None, :] <= coords[None, :, :], axis=2)
        rows = np.arange(start, start + len(low))
        below[np.arange(len(low)), rows] = False
        pairs += int(below.sum())
        drops = below & (paid[None, :] < paid[start:start + MONOTONE_ROWS, None])
        for i, j in zip(*np.nonzero(drops)):
            lo, hi = start + int(i), int(j)
            violations.append(Violation(low=points[lo], high=points[hi],
                                        revenue_low=revenues[lo], revenue_high=revenues[hi]))
    logger.debug("checked %d comparable pairs of menu %s, %d violations", pairs, m, len(violations))
    return MonotonicityReport(violations=tuple(violations), pairs_checked=pairs)
