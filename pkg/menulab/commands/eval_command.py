"""``menulab eval``: exact expected revenue of a menu."""
import json

from menulab.errors import InputError
from menulab.model.menu_model import bundle_key
from menulab.model.randomized_model import CombinationRule
from menulab.services.buyer_service import expected_revenue, sale_probabilities
from menulab.services.parse_service import parse_distribution, parse_menu, parse_randomized_menu
from menulab.services.randomized_service import best_false_name_deviation, randomized_revenue, rchoice_index
from menulab.utils.data import DISTRIBUTIONS, MENUS, RANDOMIZED_MENUS, resolve
from menulab.utils.output import emit, parse_valuation
from menulab.utils.rational import describe, fraction_str, render_decimal


def register(subparsers) -> None:
    parser = subparsers.add_parser('eval', help="expected revenue of a menu under a distribution")
    parser.add_argument('menu', help="menu JSON file, or @name for a bundled menu")
    parser.add_argument('distribution', help="distribution JSON file, or @name for a bundled one")
    parser.add_argument('--randomized', action='store_true', help="the menu lists lotteries")
    parser.add_argument('--at', help="also report the choice (and false-name deviation) at v1,v2,...")
    parser.add_argument('--rule', default='independent', help="combination rule: capped | independent")
    parser.add_argument('--k', type=int, default=2, help="largest number of entries a false-name buyer picks")
    parser.add_argument('--format', choices=('text', 'json'), default='text')
    parser.add_argument('--out')
    parser.set_defaults(handler=run)


def run(args) -> None:
    dist = parse_distribution(resolve(args.distribution, DISTRIBUTIONS))
    if args.randomized:
        emit(_randomized(args, dist), args.out)
        return
    menu = parse_menu(resolve(args.menu, MENUS))
    revenue = expected_revenue(menu, dist)
    sold = sale_probabilities(menu, dist)
    if args.format == 'json':
        emit(json.dumps({
            'menu': str(menu),
            'revenue': fraction_str(revenue),
            'decimal': render_decimal(revenue),
            'sales': {('' if b == 0 else bundle_key(b)): fraction_str(p) for b, p in sold.items()},
        }, indent=2), args.out)
        return
    lines = [describe(revenue)]
    for bundle, prob in sold.items():
        name = 'nothing' if bundle == 0 else '{' + bundle_key(bundle) + '}'
        lines.append(f"  {name}: {describe(prob)}")
    emit('\n'.join(lines), args.out)


def _randomized(args, dist) -> str:
    menu = parse_randomized_menu(resolve(args.menu, RANDOMIZED_MENUS))
    revenue = randomized_revenue(menu, dist)
    report = {'revenue': fraction_str(revenue), 'decimal': render_decimal(revenue)}
    if args.at:
        v = parse_valuation(args.at)
        deviation = best_false_name_deviation(menu, v, _rule(args.rule), k=args.k)
        report.update({
            'choice': rchoice_index(menu, v),
            'utility': fraction_str(deviation.truthful_utility),
            'deviation': list(deviation.picks),
            'deviation_utility': fraction_str(deviation.utility),
            'false_name_proof': deviation.false_name_proof,
        })
    if args.format == 'json':
        return json.dumps(report, indent=2)
    lines = [describe(revenue)]
    if args.at:
        lines.append(f"  choice at ({args.at}): entry {report['choice']}, utility "
                     f"{describe(deviation.truthful_utility)}")
        lines.append(f"  best deviation {deviation.picks}: utility {describe(deviation.utility)}"
                     f" ({'false-name-proof' if deviation.false_name_proof else 'profitable'})")
    return '\n'.join(lines)


def _rule(text: str) -> CombinationRule:
    try:
        return CombinationRule.parse(text)
    except ValueError:
        raise InputError(f"unknown combination rule {text!r} (capped | independent)") from None
