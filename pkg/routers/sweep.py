"""Complement Sampling Lab - Success-curve sweep"""

import csv
import io
import json
import logging
from fractions import Fraction
from pathlib import Path

from models.schemas import Curve
from routers.manifest import publish_manifest
from services.swapper_service import admissible_betas, success_curves

logger = logging.getLogger(__name__)

MAX_SWEEP_QUBITS = 12

CURVE_COLUMNS = [
    "beta", "K",
    "analytic_cs", "analytic_ze", "analytic_cc", "analytic_cl",
    "simulated_cs", "simulated_ze", "simulated_cc", "simulated_cl",
    "trials", "seed",
]


def _parse_curves(value: str):
    return [Curve(c.strip()) for c in value.split(",") if c.strip()]


def _parse_betas(value: str):
    return [Fraction(b.strip()) for b in value.split(",") if b.strip()]


def register(subparsers, common):
    p = subparsers.add_parser(
        "sweep-beta", parents=[common],
        help="Four success curves (analytic + simulated) over every admissible beta",
    )
    p.add_argument("--n", type=int, default=4, help=f"qubits, 1..{MAX_SWEEP_QUBITS}")
    p.add_argument("--beta", type=_parse_betas, default=None,
                   help="comma-separated betas (e.g. 0,1/4,-3/8); default: all admissible")
    p.add_argument("--trials", type=int, default=10_000, help="Monte Carlo shots per beta (0 = analytic only)")
    p.add_argument("--curves", type=_parse_curves, default=list(Curve),
                   help="curves to simulate, from cs,ze,cc,cl")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=cmd_sweep_beta)


def render_rows(rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.model_dump() for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CURVE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.model_dump().items()})
    return buf.getvalue()


def cmd_sweep_beta(args) -> int:
    if not 1 <= args.n <= MAX_SWEEP_QUBITS:
        logger.error("sweep-beta supports 1 <= n <= %d, got %d", MAX_SWEEP_QUBITS, args.n)
        return 2
    if args.trials < 0:
        logger.error("--trials must be >= 0")
        return 2

    N = 1 << args.n
    betas = args.beta if args.beta is not None else admissible_betas(N)
    rows = success_curves(betas, N, trials=args.trials, seed=args.seed, simulate=args.curves)
    text = render_rows(rows, args.format)

    if args.out is None:
        print(text, end="")
        return 0

    out = Path(args.out)
    out.write_text(text)
    logger.info("%d rows written to %s", len(rows), out)
    publish_manifest(
        args,
        parameters={
            "n": args.n,
            "betas": [str(b) for b in betas],
            "trials": args.trials,
            "curves": [c.value for c in args.curves],
            "format": args.format,
        },
        outputs=[out],
        master_seed=args.seed,
    )
    return 0
