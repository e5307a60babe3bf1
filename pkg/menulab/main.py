import argparse
import logging
import sys
from typing import Optional, Sequence

import menulab.commands.construct_command as construct
import menulab.commands.er_gap_command as er_gap
import menulab.commands.eval_command as evaluate
import menulab.commands.lp_command as lp
import menulab.commands.plot_command as plot
import menulab.commands.reproduce_command as reproduce
import menulab.commands.search_command as search
from menulab import conf
from menulab.errors import WorkbenchError

logger = logging.getLogger('menulab')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='menulab', description="revenue-optimal menus for an additive buyer")
    parser.add_argument('--log-level', default=conf.LOG_LEVEL, help="default MENULAB_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in (evaluate, search, construct, reproduce, plot, er_gap, lp):
        command.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        args.handler(args)
    except WorkbenchError as exc:
        logger.debug("%s: %s", type(exc).__name__, exc.detail)
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.status_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
