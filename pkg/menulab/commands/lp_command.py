import json

from menulab.services.lp_service import lp_optimal
from menulab.services.parse_service import parse_distribution, parse_randomized_menu
from menulab.services.randomized_service import randomized_revenue, verify_ic_ir
from menulab.utils.data import DISTRIBUTIONS, RANDOMIZED_MENUS, resolve
from menulab.utils.output import emit
from menulab.utils.rational import fraction_str


def register(subparsers) -> None:
    parser = subparsers.add_parser('lp', help="revenue-optimal randomized mechanism over the support")
    parser.add_argument('distribution', help="distribution JSON file, or @name for a bundled one")
    parser.add_argument('--method', choices=('auto', 'exact', 'highs'), help="default MENULAB_LP_METHOD")
    parser.add_argument('--compare', help="randomized menu whose revenue the optimum is compared with")
    parser.add_argument('--out')
    parser.set_defaults(handler=run)


def _number(x) -> str:
    return repr(x) if isinstance(x, float) else fraction_str(x)


def run(args) -> None:
    dist = parse_distribution(resolve(args.distribution, DISTRIBUTIONS))
    solution = lp_optimal(dist, args.method)
    mechanism = solution.mechanism
    report = {
        'method': solution.method,
        'exact': solution.exact,
        'revenue': _number(solution.revenue),
        'decimal': float(solution.revenue),
        'primal_residual': solution.primal_residual,
        'dual_residual': solution.dual_residual,
        'ic_ir': verify_ic_ir(mechanism, dist).ok,
        'mechanism': [
            {'type': [fraction_str(x) for x in t], 'alloc': [_number(q) for q in x], 'pay': _number(p)}
            for t, x, p in zip(mechanism.types, mechanism.allocations, mechanism.payments)
        ],
    }
    if args.compare:
        menu = parse_randomized_menu(resolve(args.compare, RANDOMIZED_MENUS))
        target = randomized_revenue(menu, dist)
        report['menu_revenue'] = fraction_str(target)
        report['difference'] = float(solution.revenue) - float(target)
    emit(json.dumps(report, indent=2), args.out)
