"""Complement Sampling Lab - Classical bounds tables"""

import csv
import io
import json
import logging
from fractions import Fraction
from pathlib import Path

from models.errors import ScaleError
from routers.manifest import publish_manifest
from services.classical_service import (
    bounds_report, sample_complexity_success, unique_draw_distribution,
)

logger = logging.getLogger(__name__)

MAX_FULL_TABLE_BITS = 20

BOUNDS_COLUMNS = ["quantity", "N", "K", "delta", "d", "q", "exact", "value"]


def register(subparsers, common):
    p = subparsers.add_parser(
        "bounds", parents=[common],
        help="Query lower bound across K, draw-then-guess success across d",
    )
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--k", type=int, default=None, help="fix K (default: every K for the lower bound, N/2 elsewhere)")
    p.add_argument("--delta", type=Fraction, default=Fraction(1, 6), help="advantage over 1/2, e.g. 1/6 or 0.25")
    p.add_argument("--d", type=int, default=32, help="largest number of draws in the sample sweep")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=cmd_bounds)


def bounds_rows(n: int, delta: Fraction, d_max: int, K=None):
    N = 1 << n
    rows = []
    for k in ([K] if K is not None else range(1, N)):
        report = bounds_report(N, k, delta)
        rows.append({"quantity": "lower_bound_queries", "N": N, "K": k, "delta": str(report.delta),
                     "exact": str(report.min_queries), "value": float(report.min_queries)})

    k = K if K is not None else N // 2
    for d in range(1, d_max + 1):
        value = sample_complexity_success(N, k, d)
        rows.append({"quantity": "sample_complexity_success", "N": N, "K": k, "d": d,
                     "exact": str(value), "value": float(value)})

    for q, p in unique_draw_distribution(k, d_max).probabilities.items():
        rows.append({"quantity": "unique_draw_probability", "N": N, "K": k, "d": d_max, "q": q,
                     "exact": str(p), "value": float(p)})
    return rows


def render_rows(rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BOUNDS_COLUMNS, restval="", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def cmd_bounds(args) -> int:
    if not 1 <= args.n <= 32 or args.d < 1:
        logger.error("bounds needs 1 <= n <= 32 and d >= 1")
        return 2
    if args.k is None and args.n > MAX_FULL_TABLE_BITS:
        raise ScaleError(f"a full K table is limited to n <= {MAX_FULL_TABLE_BITS}; pass --k")

    rows = bounds_rows(args.n, args.delta, args.d, args.k)
    text = render_rows(rows, args.format)

    if args.out is None:
        print(text, end="")
        return 0

    out = Path(args.out)
    out.write_text(text)
    logger.info("%d rows written to %s", len(rows), out)
    publish_manifest(
        args,
        parameters={"n": args.n, "k": args.k, "delta": str(args.delta), "d": args.d, "format": args.format},
        outputs=[out],
    )
    return 0
