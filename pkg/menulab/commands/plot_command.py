from menulab.services.parse_service import parse_menu
from menulab.services.plot_service import plot_menu
from menulab.utils.data import MENUS, resolve
from menulab.utils.output import emit


def register(subparsers) -> None:
    parser = subparsers.add_parser('plot', help="region partition of a two-item menu")
    parser.add_argument('menu', help="menu JSON file, or @name for a bundled menu")
    parser.add_argument('--out', help="SVG file to write; prints to stdout when omitted")
    parser.add_argument('--ascii', action='store_true', help="character map instead of SVG")
    parser.set_defaults(handler=run)


def run(args) -> None:
    menu = parse_menu(resolve(args.menu, MENUS))
    rendered = plot_menu(menu, out=args.out, fmt='ascii' if args.ascii else 'svg')
    if args.out is None:
        emit(rendered)
