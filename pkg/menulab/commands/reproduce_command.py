import sys

from menulab.errors import ReproductionFailure
from menulab.services.reproduce_service import PROPERTY_SEED, ReproduceService, ReproductionTarget
from menulab.utils.output import emit


def register(subparsers) -> None:
    parser = subparsers.add_parser('reproduce', help="recompute published results and compare")
    parser.add_argument('target', choices=[t.value for t in ReproductionTarget])
    parser.add_argument('--seed', type=int, default=PROPERTY_SEED, help="seed of the random property suites")
    parser.add_argument('--instances', type=int, help="instances per property suite")
    parser.add_argument('--workers', type=int)
    parser.add_argument('--out')
    parser.set_defaults(handler=run)


def run(args) -> None:
    service = ReproduceService(seed=args.seed, instances=args.instances, workers=args.workers)
    checks = service.run(args.target)
    emit('\n'.join(check.line() for check in checks), args.out)
    if not service.ok:
        failed = sum(not check.passed for check in checks)
        sys.stdout.flush()
        raise ReproductionFailure(f"{failed} of {len(checks)} checks failed")
