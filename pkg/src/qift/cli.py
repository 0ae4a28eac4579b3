"""Command-line front end.

Every command prints a short human-readable summary (6 significant digits) by
default, or a JSON envelope with ``--json``. ``--out FILE`` additionally writes
the result as JSON or CSV depending on the file extension.

Exit codes: 0 completed (including report-level failures such as an
unsuccessful factoring run), 2 usage error, 3 resource ceiling refused.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from importlib.metadata import PackageNotFoundError, version

from .errors import DomainError, InvalidArgument, ResourceLimitError
from .experiment import (
    CSV_HEADER,
    DEFAULT_SEED,
    DEFAULT_THRESHOLD,
    full_scan,
    peak_scan,
    table_reproduce,
)
from .numtheory import best_approx, ladder, success_window, window_k
from .shor import FactorJob, run_factor
from .transform_spec import TransformSpec
from .transforms import PeriodicState, barenco_bound, rp

EXIT_USAGE = 2
EXIT_RESOURCE = 3


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def dumps(obj) -> str:
    """Canonical JSON text; floats use shortest round-trip repr."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def g6(x: float) -> str:
    return f"{x:.6g}"


class UsageError(Exception):
    pass


def _spec(text: str) -> TransformSpec:
    try:
        return TransformSpec.parse(text)
    except InvalidArgument as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# Each command returns (payload dict, human text, csv (header, rows) or None).

def cmd_rp(args):
    state = PeriodicState(args.n, args.x0, args.r)
    val = rp(state, args.y, args.spec, args.method)
    p = state.A / state.N * val.value
    payload = {"state": state.to_dict(), "y": args.y, "rp": val.to_dict(), "prob": p,
               "window_k": window_k(args.y, state.N, state.r)}
    human = f"{g6(val.value)}\nprob {g6(p)}"
    table = (["n", "x0", "r", "y", "rp", "prob"],
             [[args.n, args.x0, args.r, args.y, val.value, p]])
    return payload, human, table


def _scan_csv(report):
    rows = []
    if report.mode == "peak":
        for row in report.rows:
            for y, v, c, hit in zip(row.y_tested, row.rp_values, row.recovered, row.window_hits):
                rows.append([row.k, y, v, report.state.A / report.state.N * v, str(c), hit])
    else:
        for h in report.threshold_hits:
            rows.append([h.k, h.y, h.rp, h.prob, str(h.recovered), h.window_hit])
    return ["k", "y", "rp", "prob", "recovered", "window_hit"], rows


def cmd_scan_peaks(args):
    state = PeriodicState(args.n, args.x0, args.r)
    report = peak_scan(state, args.spec, threads=args.threads, bound=args.bound,
                       force=args.force, include_k0=not args.exclude_k0)
    k0 = "included" if report.include_k0 else "excluded"
    human = (f"Pr {g6(report.pr_total)}\nMinPr(y) {g6(report.min_pr_y)}\n"
             f"windows {len(report.rows)}  (k=0 window {k0} in Pr)")
    return report.to_dict(rows=not args.summary), human, _scan_csv(report)


def cmd_scan_full(args):
    state = PeriodicState(args.n, args.x0, args.r)
    report = full_scan(state, args.spec, args.threshold, bound=args.bound, force=args.force)
    lines = [f"{'y':>12} {'rp':>10}  fraction  k  window"]
    for h in report.threshold_hits[: args.show]:
        lines.append(f"{h.y:>12} {g6(h.rp):>10}  {str(h.recovered)}  {h.k}  {h.window_hit}")
    if len(report.threshold_hits) > args.show:
        lines.append(f"... {len(report.threshold_hits) - args.show} more")
    lines.append(f"hits {len(report.threshold_hits)}  Pr {g6(report.pr_total)}  "
                 f"total mass {g6(report.total_mass)}")
    return report.to_dict(rows=not args.summary), "\n".join(lines), _scan_csv(report)


def cmd_table(args):
    if args.n_from > args.n_to:
        raise UsageError("--n-from must not exceed --n-to")
    table = table_reproduce(range(args.n_from, args.n_to + 1), args.spec, args.runs, args.seed,
                            args.r_parity, threads=args.threads, force=args.force,
                            fit=not args.no_fit)
    lines = [f"{'n':>3} {'pr_min':>9} {'min_min_pr_y':>13}"]
    for row in table.rows:
        lines.append(f"{row.n:>3} {g6(row.pr_min):>9} {g6(row.min_min_pr_y):>13}")
    if table.fit:
        lines.append(f"fit Pr_min = {g6(table.fit[0])} / n^{g6(table.fit[1])}")
    return table.to_dict(), "\n".join(lines), (CSV_HEADER, table.csv_rows())


def cmd_cf(args):
    N = 1 << args.n
    if not 0 <= args.y < N:
        raise UsageError("--y must satisfy 0 <= y < 2^n")
    bound = args.bound if args.bound is not None else 1 << ((args.n + 1) // 2)
    conv = best_approx(args.y, N, bound, convergents_only=args.convergents_only)
    steps = ladder(args.y, N, bound)
    payload = {"y": args.y, "N": N, "bound": bound, "result": conv.to_dict(),
               "ladder": [f"{p}/{q}" for p, q in steps]}
    if args.r is not None:
        k = conv.k * (args.r // conv.r) if args.r % conv.r == 0 else conv.k
        payload["window"] = {"k": k, "r": args.r, "hit": success_window(args.y, N, k, args.r)}
    human = f"{conv}\nladder {' '.join(payload['ladder'])}"
    return payload, human, None


def cmd_factor(args):
    job = FactorJob(args.target, a=args.a, c_min=args.c_min, max_attempts=args.max_attempts,
                    seed=args.seed)
    res = run_factor(job, args.spec)
    if res.success:
        human = f"{res.target} = {' * '.join(map(str, res.factors))}  (attempts {res.attempts})"
    else:
        human = f"failed after {res.attempts} attempts"
    return res.to_dict(), human, None


def cmd_bound(args):
    b = barenco_bound(args.n, args.m)
    return {"n": args.n, "m": args.m, "value": b.value, "guaranteed": b.guaranteed}, \
        g6(b.value) + ("" if b.guaranteed else "\n(not guaranteed: m <= log2(n) + 2)"), None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qift", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=tool_version())
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print the JSON envelope")
        sp.add_argument("--out", help="write JSON (.json) or CSV (.csv) to this file")
        return sp

    def state_args(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--x0", type=int, required=True)
        sp.add_argument("--r", type=int, required=True)
        sp.add_argument("--spec", type=_spec, default=TransformSpec.parse("integral"),
                        help="qft | aqft:m | maqft:m | integral (default)")

    sp = common(sub.add_parser("rp", help="relative probability of one outcome"))
    state_args(sp)
    sp.add_argument("--y", type=int, required=True)
    sp.add_argument("--method", default="auto", choices=["auto", "histogram", "closed", "direct"])
    sp.set_defaults(func=cmd_rp)

    sp = common(sub.add_parser("scan-full", help="RP over all outcomes, threshold hits"))
    state_args(sp)
    sp.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--force", action="store_true", help="allow n above 27")
    sp.add_argument("--show", type=int, default=20, help="hits listed in human output")
    sp.add_argument("--summary", action="store_true", help="omit per-k rows from JSON")
    sp.set_defaults(func=cmd_scan_full)

    sp = common(sub.add_parser("scan-peaks", help="four-outcome windows around every peak"))
    state_args(sp)
    sp.add_argument("--threads", type=int)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--force", action="store_true", help="allow n above 30")
    sp.add_argument("--exclude-k0", action="store_true", help="leave the y~0 window out of Pr")
    sp.add_argument("--summary", action="store_true", help="omit per-k rows from JSON")
    sp.set_defaults(func=cmd_scan_peaks)

    sp = common(sub.add_parser("table", help="Pr_min per n from seeded random runs"))
    sp.add_argument("--spec", type=_spec, default=TransformSpec.parse("integral"))
    sp.add_argument("--n-from", type=int, required=True)
    sp.add_argument("--n-to", type=int, required=True)
    sp.add_argument("--runs", type=int, default=3)
    sp.add_argument("--r-parity", choices=["odd", "even", "any"], default="odd")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--threads", type=int)
    sp.add_argument("--force", action="store_true", help="allow the long-running n > 27 rows")
    sp.add_argument("--no-fit", action="store_true")
    sp.set_defaults(func=cmd_table)

    sp = common(sub.add_parser("cf", help="continued-fraction recovery of k/r from y"))
    sp.add_argument("--y", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--r", type=int, help="true period, to report the window check")
    sp.add_argument("--convergents-only", action="store_true")
    sp.set_defaults(func=cmd_cf)

    sp = common(sub.add_parser("factor", help="toy end-to-end factoring run"))
    sp.add_argument("--target", type=int, required=True)
    sp.add_argument("--a", type=int, help="initial base (random if omitted)")
    sp.add_argument("--c-min", type=int, default=2)
    sp.add_argument("--spec", type=_spec, default=TransformSpec.parse("integral"))
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--max-attempts", type=int, default=20)
    sp.set_defaults(func=cmd_factor)

    sp = common(sub.add_parser("bound", help="worst-case AQFT success bound"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=cmd_bound)
    return p


def envelope(args, argv, payload, elapsed) -> dict:
    spec = getattr(args, "spec", None)
    return {
        "tool": "qift",
        "version": tool_version(),
        "command": ["qift", *argv],
        "seed": getattr(args, "seed", None),
        "spec": spec.to_dict() if spec is not None else None,
        "payload": payload,
        "wall_time": elapsed,
    }


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        payload, human, table = args.func(args)
    except ResourceLimitError as exc:
        print(f"qift: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, InvalidArgument, DomainError) as exc:
        print(f"qift {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    env = envelope(args, argv, payload, time.perf_counter() - start)
    if args.out:
        if args.out.endswith(".csv"):
            if table is None:
                print(f"qift {args.command}: error: no CSV form for this command", file=sys.stderr)
                return EXIT_USAGE
            text = _csv_text(*table)
        else:
            text = dumps(env)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(dumps(env) if args.json else human + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
