"""Equal revenue distributions: the constant w, discretization and the numeric revenue gap.

Everything here is binary64 with explicit tolerances; results are reported,
never fed back into exact assertions.
"""
import logging
import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import bisect, newton

from menulab.errors import InputError
from menulab.model.continuous_model import ERDistribution, ERGapReport, NumericParams
from menulab.model.distribution_model import SingleItemDistribution
from menulab.model.search_model import CandidateGrid, GridMode, SearchConstraint
from menulab.services.distribution_service import product
from menulab.services.lp_service import lp_optimal
from menulab.services.search_service import search_optimal
from menulab.utils.rational import parse_rational

logger = logging.getLogger(__name__)

W_RESIDUAL = 1e-12


def w_equation(w: float) -> float:
    return (w - 1.0) * math.exp(w) - 1.0


def w_residual(w: float) -> float:
    return abs(w_equation(w))


def solve_w() -> float:
    """Root of (w - 1) e^w = 1, bisected on [1, 2] and polished by Newton."""
    rough = bisect(w_equation, 1.0, 2.0, xtol=1e-10)
    w = newton(w_equation, rough, fprime=lambda x: x * math.exp(x), tol=1e-15, maxiter=50)
    residual = w_residual(w)
    if residual >= W_RESIDUAL:
        logger.warning("w residual %.3g above %.0e", residual, W_RESIDUAL)
    return w


def er_tail(r: float, p: float) -> float:
    if r <= 0 or p <= 0:
        raise InputError(f"equal revenue tail needs positive r and p, got r={r}, p={p}")
    return ERDistribution(r=r).tail(p)


def _geometric_atoms(r: float, ratio: float, count: int, resolution: int) -> SingleItemDistribution:
    """Atoms at r * ratio^k rounded down to 1/resolution; Pr[v >= x] = r/x at every atom but the first.

    The last atom carries the remaining tail mass r/x.
    """
    level = parse_rational(r)
    points = []
    for k in range(count):
        x = Fraction(math.floor(r * ratio ** k * resolution), resolution)
        if k == 0:
            x = min(x, level) if x > 0 else level
        if not points or x > points[-1]:
            points.append(x)
    tails = [Fraction(1)] + [min(Fraction(1), level / x) for x in points[1:]]
    masses = [hi - lo for hi, lo in zip(tails, tails[1:])] + [tails[-1]]
    return SingleItemDistribution(atoms=[(x, m) for x, m in zip(points, masses) if m > 0])


def _conditioned_atoms(r: float, ratio: float, cap: float, resolution: int) -> SingleItemDistribution:
    """ER(r) conditioned on v < cap, on the atoms r * ratio^k below the cap rounded down to 1/resolution.

    Pr[v >= x] = r (cap - x) / (x (cap - r)) at every atom, so selling at r
    still earns r and every other tail grows with the cap.
    """
    level, top = parse_rational(r), parse_rational(cap)
    points, k = [level], 1
    while True:
        x = Fraction(math.floor(r * ratio ** k * resolution), resolution)
        if x >= top:
            break
        if x > points[-1]:
            points.append(x)
        k += 1
    tails = [level * (top - x) / (x * (top - level)) for x in points]
    masses = [hi - lo for hi, lo in zip(tails, tails[1:])] + [tails[-1]]
    return SingleItemDistribution(atoms=list(zip(points, masses)))


def _check_params(r: float, params: NumericParams) -> None:
    if r <= 0:
        raise InputError(f"revenue level must be positive, got {r}")
    if params.cap <= r:
        raise InputError(f"cap {params.cap} must exceed r={r}")


def er_discretize(r: float, params: NumericParams) -> SingleItemDistribution:
    _check_params(r, params)
    ratio = (params.cap / r) ** (1.0 / (params.grid_points - 1))
    return _geometric_atoms(r, ratio, params.grid_points, params.resolution)


def single_price_revenue(dist: SingleItemDistribution) -> tuple[Fraction, Fraction]:
    best, best_revenue = Fraction(0), Fraction(0)
    for value in dist.values:
        revenue = value * dist.tail(value)
        if revenue > best_revenue:
            best, best_revenue = value, revenue
    return best, best_revenue


def is_dominated_by_er(dist: SingleItemDistribution) -> bool:
    """Pr[v >= x] <= r/x at every support point x > 0, r the optimal single-price revenue."""
    _, r = single_price_revenue(dist)
    return all(dist.tail(x) <= r / x for x in dist.values if x > 0)


def bundle_price_sweep(first: SingleItemDistribution, second: SingleItemDistribution) -> tuple[float, float]:
    """Best grand-bundle price for the independent pair: max of p * Pr[v1 + v2 >= p]."""
    values = (np.array([float(x) for x in first.values])[:, None]
              + np.array([float(x) for x in second.values])[None, :]).ravel()
    probs = np.outer([float(p) for p in first.probabilities], [float(p) for p in second.probabilities]).ravel()
    order = np.argsort(values, kind='stable')
    values, probs = values[order], probs[order]
    tail = np.cumsum(probs[::-1])[::-1]
    starts = np.concatenate([[True], values[1:] != values[:-1]])
    revenue = values[starts] * tail[starts]
    k = int(np.argmax(revenue))
    return float(values[starts][k]), float(revenue[k])


def _coarse(r: float, params: NumericParams) -> SingleItemDistribution:
    if params.search_cap <= r:
        raise InputError(f"search cap {params.search_cap} must exceed r={r}")
    ratio = (params.search_cap / r) ** (1.0 / (params.search_points - 1))
    return _geometric_atoms(r, ratio, params.search_points, params.resolution)


def _menu_grid(first: SingleItemDistribution, second: SingleItemDistribution, withdraw: Fraction) -> CandidateGrid:
    items = [tuple(sorted(set(part.values) | {Fraction(0), withdraw})) for part in (first, second)]
    sums = tuple(sorted({x + y for x in items[0] for y in items[1] if x < withdraw and y < withdraw}))
    return CandidateGrid(n=2, mode=GridMode.EXPLICIT, prices=(items[0], items[1], sums))


def numeric_gap_er(r1: float, r2: float, params: Optional[NumericParams] = None) -> ERGapReport:
    """SRev, BRev and DRev of a discretized pair of equal revenue distributions.

    BRev is swept on the fine discretization. DRev comes from an exhaustive
    search on a coarse one (``search_points`` atoms per item) and must match
    the bundle price sweep on that same coarse discretization within
    ``gap_tolerance`` times SRev.
    """
    params = params or NumericParams()
    _check_params(r1, params)
    _check_params(r2, params)
    w = solve_w()
    srev = r1 + r2
    brev_price, brev = bundle_price_sweep(er_discretize(r1, params), er_discretize(r2, params))

    first, second = _coarse(r1, params), _coarse(r2, params)
    withdraw = 2 * parse_rational(params.search_cap)
    result = search_optimal(product([first, second]), SearchConstraint.UNRESTRICTED,
                            _menu_grid(first, second, withdraw))
    drev = float(result.revenue)
    _, brev_coarse = bundle_price_sweep(first, second)
    tolerance = params.gap_tolerance * srev
    gap = drev - brev_coarse
    within = abs(gap) <= tolerance and drev <= w * srev * (1 + params.tolerance)

    rev_lp = None
    if params.lp_points:
        lp_params = params.model_copy(update={'search_points': max(2, params.lp_points)})
        rev_lp = float(lp_optimal(product([_coarse(r1, lp_params), _coarse(r2, lp_params)])).revenue)

    logger.info("ER(%g) x ER(%g): srev %.6f brev %.6f drev %.6f", r1, r2, srev, brev, drev)
    return ERGapReport(
        r1=r1, r2=r2, cap=params.cap, grid_points=params.grid_points, srev=srev, brev=brev,
        brev_price=brev_price, drev=drev, brev_coarse=brev_coarse, drev_gap=gap, tolerance=tolerance,
        within_tolerance=within, brev_ratio=brev / srev, drev_ratio=drev / srev, w=w, rev_lp=rev_lp)


def er_cap_sweep(r1: float, r2: float, caps: Sequence[float],
                 params: Optional[NumericParams] = None) -> list[tuple[float, float, float]]:
    """(cap, brev, brev/srev) per cap for ER pairs conditioned below each cap.

    Every cap shares the atoms per decade of ``params``, so a larger cap keeps
    the smaller cap's atoms and raises their tails. srev stays r1 + r2.
    """
    params = params or NumericParams()
    _check_params(r1, params)
    _check_params(r2, params)
    rows = []
    for cap in caps:
        parts = []
        for r in (r1, r2):
            if cap <= r:
                raise InputError(f"cap {cap} must exceed r={r}")
            ratio = (params.cap / r) ** (1.0 / (params.grid_points - 1))
            parts.append(_conditioned_atoms(r, ratio, cap, params.resolution))
        _, brev = bundle_price_sweep(*parts)
        rows.append((cap, brev, brev / (r1 + r2)))
    return rows
