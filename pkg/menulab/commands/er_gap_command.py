import csv
import io
import json

from pydantic import ValidationError

from menulab.errors import InputError
from menulab.model.continuous_model import NumericParams
from menulab.services.continuous_service import er_cap_sweep, numeric_gap_er
from menulab.utils.output import emit


def register(subparsers) -> None:
    parser = subparsers.add_parser('er-gap', help="srev, brev and drev of two discretized equal revenue items")
    parser.add_argument('--r1', type=float, default=1.0)
    parser.add_argument('--r2', type=float, default=1.0)
    parser.add_argument('--cap', type=float, default=1e4)
    parser.add_argument('--grid-points', type=int, default=2000)
    parser.add_argument('--search-points', type=int, default=12)
    parser.add_argument('--lp-points', type=int, default=0, help="also solve the randomized LP at this size")
    parser.add_argument('--sweep', help="comma separated caps, e.g. 1e2,1e3,1e4")
    parser.add_argument('--format', choices=('json', 'csv'), default='json')
    parser.add_argument('--out')
    parser.set_defaults(handler=run)


def _params(args) -> NumericParams:
    try:
        return NumericParams(cap=args.cap, grid_points=args.grid_points, search_points=args.search_points,
                             lp_points=args.lp_points)
    except ValidationError as exc:
        raise InputError("invalid numeric parameters: " + '; '.join(
            f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors())) from None


def _csv(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def run(args) -> None:
    params = _params(args)
    if args.sweep:
        try:
            caps = [float(x) for x in args.sweep.split(',')]
        except ValueError:
            raise InputError(f"bad cap list {args.sweep!r}") from None
        rows = [{'cap': cap, 'brev': brev, 'brev/srev': ratio}
                for cap, brev, ratio in er_cap_sweep(args.r1, args.r2, caps, params)]
    else:
        rows = [numeric_gap_er(args.r1, args.r2, params).model_dump()]
    emit(json.dumps(rows if args.sweep else rows[0], indent=2) if args.format == 'json' else _csv(rows), args.out)
