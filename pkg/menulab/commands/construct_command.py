import logging

from menulab.errors import InputError
from menulab.services.construction_service import submodularize2, symmetrize2, three_halves
from menulab.services.distribution_service import iid_marginal, is_product, marginals
from menulab.services.parse_service import parse_distribution, parse_menu
from menulab.utils.data import DISTRIBUTIONS, MENUS, resolve
from menulab.utils.output import emit

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser('construct', help="transform a two-item menu and certify the revenue bound")
    parser.add_argument('kind', choices=('submodularize', 'symmetrize', 'three-halves'))
    parser.add_argument('menu', help="menu JSON file, or @name for a bundled menu")
    parser.add_argument('distribution', help="distribution JSON file, or @name for a bundled one")
    parser.add_argument('--out')
    parser.set_defaults(handler=run)


def run(args) -> None:
    menu = parse_menu(resolve(args.menu, MENUS))
    dist = parse_distribution(resolve(args.distribution, DISTRIBUTIONS))
    if args.kind == 'submodularize':
        if not is_product(dist):
            raise InputError("submodularize needs independent items (a product distribution)")
        first, second = marginals(dist)
        certificate = submodularize2(menu, first, second)
    elif args.kind == 'symmetrize':
        certificate = symmetrize2(menu, iid_marginal(dist))
    else:
        certificate = three_halves(menu, dist)
    logger.info("%s of %s: %s", args.kind, menu, certificate.branch)
    emit(certificate.model_dump_json(indent=2), args.out)
