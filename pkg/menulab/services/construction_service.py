"""Menu transformations that never lose revenue, each returning a certificate.

A construction evaluates its candidates exactly, checks the guaranteed
revenue bound and raises ConstructionError with the certificate attached
when the bound fails.
"""
import logging
from fractions import Fraction
from typing import Optional, Sequence

from menulab.errors import ConstructionError, InputError
from menulab.model.certificate_model import ConstructionCertificate
from menulab.model.distribution_model import JointDistribution, SingleItemDistribution
from menulab.model.menu_model import Menu
from menulab.services.buyer_service import expected_revenue
from menulab.services.distribution_service import product
from menulab.services.menu_service import is_submodular, normalize
from menulab.utils.rational import describe

logger = logging.getLogger(__name__)


def _two_items(m: Menu) -> None:
    if m.n != 2:
        raise InputError(f"this construction needs a two-item menu, got {m.n} items")


def verify_dominance(candidates: Sequence[Menu], baseline: Menu,
                     dist: JointDistribution) -> tuple[Menu, Fraction]:
    """Best candidate by expected revenue (first listed on ties) and its margin over ``baseline``."""
    if not candidates:
        raise InputError("no candidate menus to compare")
    revenues = [expected_revenue(m, dist) for m in candidates]
    best = max(range(len(candidates)), key=lambda k: (revenues[k], -k))
    return candidates[best], revenues[best] - expected_revenue(baseline, dist)


def _certify(certificate: ConstructionCertificate) -> ConstructionCertificate:
    logger.debug("%s: branch %s, margin %s", certificate.construction, certificate.branch,
                 certificate.margin)
    if certificate.identity_holds is False:
        raise ConstructionError(
            f"{certificate.construction} of {certificate.input_menu}: rev(a,a,c) + rev(b,b,c) != 2 rev(a,b,c)",
            certificate=certificate)
    if not certificate.holds():
        raise ConstructionError(
            f"{certificate.construction} of {certificate.input_menu} ({certificate.branch}) earns "
            f"{describe(certificate.chosen_revenue)} < {describe(certificate.input_revenue)}",
            certificate=certificate)
    return certificate


def submodularize2(m: Menu, first: SingleItemDistribution,
                   second: SingleItemDistribution) -> ConstructionCertificate:
    """Replace a supermodular two-item menu by an additive one earning at least as much.

    With items relabelled so that a <= b and c > a + b, the menu (a, b, a+b)
    is chosen when Pr[a <= v1 < c-b] * a >= Pr[v1 >= c-b] * (c - a - b),
    and (c-b, b, c) otherwise. Independence of the items is required.
    """
    _two_items(m)
    dist = product([first, second])
    input_revenue = expected_revenue(m, dist)
    if m.c <= m.a + m.b:
        return _certify(ConstructionCertificate(
            construction='submodularize', input_menu=m, candidates=(m,), chosen=m,
            branch='already-submodular', input_revenue=input_revenue,
            candidate_revenues=(input_revenue,)))

    swapped = m.a > m.b
    work, f1 = (m.swapped(), second) if swapped else (m, first)
    a, b, c = work.a, work.b, work.c
    lhs = f1.between(a, c - b) * a
    rhs = f1.tail(c - b) * (c - a - b)
    options = (Menu.of(a, b, a + b), Menu.of(c - b, b, c))
    if swapped:
        options = tuple(option.swapped() for option in options)
    chosen, branch = (options[0], 'separate-at-item-prices') if lhs >= rhs else (options[1], 'raise-cheaper-item')
    return _certify(ConstructionCertificate(
        construction='submodularize', input_menu=m, candidates=options, chosen=chosen, branch=branch,
        swapped=swapped, inequality=(lhs, rhs), input_revenue=input_revenue,
        candidate_revenues=tuple(expected_revenue(option, dist) for option in options)))


def symmetric_average_identity(m: Menu, dist: JointDistribution) -> bool:
    """rev(a,a,c) + rev(b,b,c) == 2 rev(a,b,c); holds for exchangeable ``dist`` when c <= 2 min(a, b)."""
    _two_items(m)
    lo, hi = sorted((m.a, m.b))
    return (expected_revenue(Menu.of(lo, lo, m.c), dist) + expected_revenue(Menu.of(hi, hi, m.c), dist)
            == 2 * expected_revenue(m, dist))


def symmetrize2(m: Menu, marginal: SingleItemDistribution) -> ConstructionCertificate:
    """Symmetric menu earning at least as much as ``m`` when both items are IID.

    Non-submodular inputs are first submodularized; the result is then
    normalized and relabelled so that a < b <= c.
    """
    _two_items(m)
    dist = product([marginal, marginal])
    input_revenue = expected_revenue(m, dist)
    work = m
    prefix = ''
    if not is_submodular(work):
        work = submodularize2(work, marginal, marginal).chosen
        prefix = 'submodularized, '
    work = normalize(work)
    swapped = work.a > work.b
    if swapped:
        work = work.swapped()
    a, b, c = work.a, work.b, work.c

    if a == b:
        return _certify(ConstructionCertificate(
            construction='symmetrize', input_menu=m, candidates=(work,), chosen=work,
            branch=prefix + 'already-symmetric', swapped=swapped, input_revenue=input_revenue,
            candidate_revenues=(expected_revenue(work, dist),)))

    inequality: Optional[tuple[Fraction, Fraction]] = None
    identity = None
    if c <= 2 * a:
        options = (Menu.of(a, a, c), Menu.of(b, b, c))
        branch = 'average-of-cheap-and-dear'
        identity = symmetric_average_identity(work, dist)
    else:
        lhs = 2 * a * marginal.between(a, c - a)
        rhs = (c - 2 * a) * marginal.tail(c - a)
        inequality = (lhs, rhs)
        if lhs >= rhs:
            options = (Menu.of(b, b, c), Menu.of(a, a, 2 * a))
            branch = 'dear-or-cheap-separate'
        else:
            options = (Menu.of(b, b, c), Menu.of(c - a, c - a, 2 * (c - a)))
            branch = 'dear-or-raised-separate'
    revenues = tuple(expected_revenue(option, dist) for option in options)
    chosen = options[0] if revenues[0] >= revenues[1] else options[1]
    return _certify(ConstructionCertificate(
        construction='symmetrize', input_menu=m, candidates=options, chosen=chosen,
        branch=prefix + branch, swapped=swapped, inequality=inequality,
        input_revenue=input_revenue, candidate_revenues=revenues, identity_holds=identity))


def three_halves_decomposition(m: Menu) -> tuple[Menu, Menu]:
    """Split a strictly supermodular two-item menu into an additive and a bundle-only menu.

    With p = 2c - a - b, any distribution satisfies
    rev(a, b, c) <= rev(a, b, a+b) + rev(p, p, p) / 2.
    """
    _two_items(m)
    if m.c <= m.a + m.b:
        raise InputError(f"menu {m} is not strictly supermodular")
    p = 2 * m.c - m.a - m.b
    return Menu.of(m.a, m.b, m.a + m.b), Menu.of(p, p, p)


def three_halves(m: Menu, dist: JointDistribution) -> ConstructionCertificate:
    additive, bundle_only = three_halves_decomposition(m)
    input_revenue = expected_revenue(m, dist)
    revenues = (expected_revenue(additive, dist), expected_revenue(bundle_only, dist))
    bound = revenues[0] + revenues[1] / 2
    certificate = ConstructionCertificate(
        construction='three-halves', input_menu=m, candidates=(additive, bundle_only),
        chosen=additive if revenues[0] >= revenues[1] else bundle_only, branch='decompose',
        inequality=(input_revenue, bound), input_revenue=input_revenue, candidate_revenues=revenues,
        factor=Fraction(3, 2))
    if input_revenue > bound:
        raise ConstructionError(
            f"three-halves decomposition of {m}: {describe(input_revenue)} > {describe(bound)}",
            certificate=certificate)
    return _certify(certificate)
