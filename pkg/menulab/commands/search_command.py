import json
import logging

from menulab.errors import InputError
from menulab.model.search_model import GridMode, SearchConstraint
from menulab.services.parse_service import parse_distribution, parse_grid, read_text
from menulab.services.search_service import candidate_grid, gap_report, search_optimal, serialize_results
from menulab.utils.data import DISTRIBUTIONS, resolve
from menulab.utils.output import emit
from menulab.utils.rational import fraction_str, render_decimal

logger = logging.getLogger(__name__)

CONSTRAINTS = ('unrestricted', 'symmetric', 'submodular', 'symmetric-submodular', 'symmetric-and-submodular',
               'additive', 'bundle-only')


def register(subparsers) -> None:
    parser = subparsers.add_parser('search', help="exhaustive optimal menu search over a price grid")
    parser.add_argument('distribution', help="distribution JSON file, or @name for a bundled one")
    parser.add_argument('--constraint', action='append', choices=CONSTRAINTS,
                        help="repeatable; default unrestricted")
    parser.add_argument('--grid', default='integer',
                        help="integer | support-sums | path of an explicit grid JSON file")
    parser.add_argument('--max-price', type=int, help="top of the integer grid for every bundle")
    parser.add_argument('--workers', type=int, help="search threads (default MENULAB_WORKERS)")
    parser.add_argument('--no-prune', action='store_true', help="disable bundle-monotone pruning")
    parser.add_argument('--gap', action='store_true', help="report drev, srev, brev, smdrev, symdrev and ratios")
    parser.add_argument('--format', choices=('json', 'csv', 'text'), default='csv')
    parser.add_argument('--timing', action='store_true', help="add wall time per row")
    parser.add_argument('--out')
    parser.set_defaults(handler=run)


def _grid(args, dist):
    if args.grid in ('integer', GridMode.INTEGER.value):
        return candidate_grid(dist, GridMode.INTEGER, max_price=args.max_price)
    if args.grid == GridMode.SUPPORT_SUMS.value:
        return candidate_grid(dist, GridMode.SUPPORT_SUMS)
    if args.max_price is not None:
        raise InputError("--max-price applies to the integer grid only")
    return candidate_grid(dist, GridMode.EXPLICIT, explicit=parse_grid(read_text(args.grid)))


def run(args) -> None:
    dist = parse_distribution(resolve(args.distribution, DISTRIBUTIONS))
    grid = _grid(args, dist)
    logger.info("grid %s with %d price combinations", grid.mode.value, grid.size)
    if args.gap:
        report = gap_report(dist, grid, workers=args.workers)
        emit(json.dumps({
            'revenues': {name: fraction_str(getattr(report, name).revenue)
                         for name in ('drev', 'srev', 'brev', 'smdrev', 'symdrev')},
            'menus': {name: str(getattr(report, name).best) for name in ('drev', 'srev', 'brev', 'smdrev', 'symdrev')},
            'ratios': {name: None if value is None else {'exact': fraction_str(value), 'decimal': render_decimal(value)}
                       for name, value in report.ratios.items()},
        }, indent=2), args.out)
        return
    constraints = [SearchConstraint.parse(c) for c in (args.constraint or ['unrestricted'])]
    results = [search_optimal(dist, c, grid, prune=not args.no_prune, workers=args.workers)
               for c in constraints]
    emit(serialize_results(results, args.format, timing=args.timing), args.out)
