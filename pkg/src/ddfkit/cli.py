"""Command-line front end for the toolkit.

Evaluate and compose distribution functions, run the tensor engine and
the reproduction suite, and emit CSV/SVG data artifacts for curves.

The exit status separates mathematics from tooling: 0 means the
invocation did what was asked and any reproduction came back reproduced,
2 means the tool ran fine but the mathematics came back refuted or
undecided, and 1 means the invocation itself was bad -- usage errors,
malformed files, unknown names.
"""

import argparse
import math
import os
import sys
import tempfile

from .classify import CLASS_ORDER, classify
from .ddf import dumps_qcurve, loads_ddf, qinf, qsup
from .engine import (BoundedCurve, TensorRequest, dumps_curve, loads_curve,
                     tau_curve, tensor)
from .experiments import (ALL_THEOREMS, INCONCLUSIVE, REFUTED, REPRODUCED,
                          TheoremReport, run_suite)
from .falsify import L_CONDITIONS, T_CONDITIONS, falsify, flag_for
from .ops import parse_lop, parse_tnorm
from .pl import INF, PL


class _Parser(argparse.ArgumentParser):
    """Exits 1 on usage errors; 2 is reserved for refuted mathematics."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _uint64(tok):
    value = int(tok)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seeds are 64-bit unsigned decimals")
    return value


def _fmt(v):
    return "inf" if math.isinf(v) else repr(v)


def _write_atomic(path, text):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(text, path):
    if path:
        _write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _read_file(path):
    try:
        with open(path, "r") as handle:
            return handle.read()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load(path, loader):
    text = _read_file(path)
    try:
        return loader(text)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def _load_any(path):
    """Load a function or an enclosure, telling them apart by header."""
    text = _read_file(path)
    header = next((ln.strip() for ln in text.splitlines()
                   if ln.strip() and not ln.strip().startswith("#")), "")
    loader = loads_curve if header.startswith("curve v1") else loads_ddf
    try:
        return loader(text)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def _pl_curve(f, tol):
    """Exact enclosure rows for a piecewise-linear result.

    Rows sit at 0, at every breakpoint, one float past each breakpoint
    (so jumps survive the row encoding), and at inf; a rising piece gets
    interior rows (at most 1024 per piece) until consecutive row values
    differ by at most ``tol``.
    """
    points = {0.0}
    n = len(f.xs)
    for i in range(n):
        lo = f.xs[i]
        hi = f.xs[i + 1] if i + 1 < n else f.top
        points.add(lo)
        points.add(math.nextafter(lo, INF))
        rise = f.slopes[i] * (hi - lo) if math.isfinite(hi) else 0.0
        if tol > 0.0 and rise > tol:
            cuts = min(int(rise / tol), 1023)
            step = (hi - lo) / (cuts + 1)
            for k in range(1, cuts + 1):
                points.add(lo + k * step)
    xs = sorted(p for p in points if not math.isinf(p))
    vals = [f.value(p) for p in xs]
    xs.append(INF)
    vals.append(f.limit_left(INF))
    return BoundedCurve(tuple(xs), tuple(vals), tuple(vals), "exact")


def _csv(curve):
    lines = ["x,lo,hi"]
    for x, lo, hi in zip(curve.xs, curve.lows, curve.highs):
        lines.append(f"{_fmt(x)},{_fmt(lo)},{_fmt(hi)}")
    return "\n".join(lines) + "\n"


def _svg(curve):
    """Lower/upper envelopes as two polylines over a shaded band.

    A data emitter with a fixed canvas: the finite span maps onto the
    drawing area and a limit row at inf extends to the right edge.
    """
    w, h, m = 640.0, 320.0, 40.0
    xs, los, his = curve.xs, curve.lows, curve.highs
    finite = [x for x in xs if not math.isinf(x)]
    span = finite[-1] if finite and finite[-1] > 0.0 else 1.0
    inner = w - m - (60.0 if curve.has_limit_row else 0.0)

    def px(x):
        if math.isinf(x):
            return w - m
        return m + (inner - m) * (x / span)

    def py(v):
        return h - m - (h - 2.0 * m) * v

    def pts(pairs):
        return " ".join(f"{px(x):.3f},{py(v):.3f}" for x, v in pairs)

    band = pts(list(zip(xs, los)) + list(zip(reversed(xs), reversed(his))))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:g} {h:g}">\n'
        f'<rect x="{m:g}" y="{m:g}" width="{w - 2 * m:g}"'
        f' height="{h - 2 * m:g}" fill="none" stroke="#cccccc"/>\n'
        f'<polygon points="{band}" fill="#bdd7e7" stroke="none"/>\n'
        f'<polyline points="{pts(zip(xs, los))}" fill="none"'
        f' stroke="#2171b5"/>\n'
        f'<polyline points="{pts(zip(xs, his))}" fill="none"'
        f' stroke="#cb181d"/>\n'
        "</svg>\n")


# -- subcommands ----------------------------------------------------------------


def _cmd_eval(args):
    f = _load(args.f, loads_ddf)
    lines = []
    for x in args.x:
        if x < 0.0 or math.isnan(x):
            raise ValueError(f"evaluation points live in [0, inf]: {x!r}")
        lines.append(f"{_fmt(x)} {_fmt(f.value(x))}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_qinv(args):
    f = _load(args.f, loads_ddf)
    v = qsup(f) if args.side == "sup" else qinf(f)
    _emit(dumps_qcurve(v), args.out)
    return 0


def _cmd_tensor(args):
    lop, tnorm = parse_lop(args.L), parse_tnorm(args.T)
    f = _load(args.f, loads_ddf)
    g = _load(args.g, loads_ddf)
    out = tensor(TensorRequest(lop, tnorm, f, g, tolerance=args.tol,
                               max_depth=args.depth))
    curve = _pl_curve(out, args.tol) if isinstance(out, PL) else out
    _emit(dumps_curve(curve), args.out)
    return 0


def _cmd_tau(args):
    lop, tnorm = parse_lop(args.L), parse_tnorm(args.T)
    f = _load(args.f, loads_ddf)
    g = _load(args.g, loads_ddf)
    curve = tau_curve(lop, tnorm, f, g, tolerance=args.tol,
                      max_depth=args.depth)
    _emit(dumps_curve(curve), args.out)
    return 0


def _cmd_classify(args):
    obj = _load_any(args.f)
    record = classify(obj, tolerance=args.tol)
    lines = []
    for name in CLASS_ORDER:
        m = record[name]
        detail = f"  ({m.detail})" if m.detail else ""
        lines.append(f"{name}: {m.status}{detail}")
    lines.append(f"smallest class: {record.smallest() or '-'}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_check_op(args):
    try:
        op = parse_lop(args.op)
    except ValueError:
        try:
            op = parse_tnorm(args.op)
        except ValueError:
            raise ValueError(f"unknown operation {args.op!r}") from None
    conditions = L_CONDITIONS if op.kind == "lop" else T_CONDITIONS
    if args.cond not in conditions:
        raise ValueError(f"condition {args.cond!r} does not apply to"
                         f" {op.name}; choose from {', '.join(conditions)}")
    result = falsify(op, args.cond, budget=args.budget, seed=args.seed)
    flag = flag_for(args.cond, op.kind)
    declared = None if flag is None else op.flags[flag]
    print(f"op: {op.name}")
    shown = "-" if declared is None else str(declared).lower()
    print(f"condition: {args.cond} (declared: {shown})")
    if result.found:
        points = " ".join(_fmt(p) for p in result.witness.points)
        values = " ".join(_fmt(v) for v in result.witness.values)
        print(f"witness: {points} -> {values}")
    else:
        print(f"witness: none in {result.checked} evaluations")
    if declared is None:
        print("verdict: report only")
        return 0
    if result.found and declared:
        print(f"verdict: contradicts the declared flag {flag}")
        return 2
    if result.found:
        print("verdict: consistent (the flag already records this failure)")
    elif declared:
        print("verdict: consistent (no counterexample found)")
    else:
        print("verdict: unresolved (a recorded failure eluded this budget)")
    return 0


def _remerged(report, directions):
    outcomes = [d.outcome for d in directions]
    if REFUTED in outcomes:
        verdict = REFUTED
    elif INCONCLUSIVE in outcomes:
        verdict = INCONCLUSIVE
    else:
        verdict = REPRODUCED
    return TheoremReport(theorem_id=report.theorem_id,
                         directions=tuple(directions), verdict=verdict,
                         notes=report.notes)


def _cmd_reproduce(args):
    report = run_suite([args.theorem], samples=args.samples, seed=args.seed,
                       tolerance=args.tol)[0]
    if args.L or args.T:
        lname = parse_lop(args.L).name if args.L else None
        tname = parse_tnorm(args.T).name if args.T else None
        kept = tuple(d for d in report.directions
                     if (lname is None or d.lop == lname)
                     and (tname is None or d.tnorm == tname))
        if not kept:
            raise ValueError(f"{args.theorem} has no direction for"
                             f" L={lname or '*'}, T={tname or '*'}")
        report = _remerged(report, kept)
    if args.out:
        path = report.save(args.out)
        print(f"{report.theorem_id}: {report.verdict} -> {path}")
    else:
        sys.stdout.write(report.dumps())
    return 0 if report.verdict == REPRODUCED else 2


def _cmd_suite(args):
    ids = args.theorems or list(ALL_THEOREMS)
    reports = run_suite(ids, samples=args.samples, seed=args.seed,
                        tolerance=args.tol)
    status = 0
    for report in reports:
        line = (f"{report.theorem_id}: {report.verdict}"
                f" ({len(report.directions)} directions)")
        if args.out:
            line += f" -> {report.save(args.out)}"
        print(line)
        if report.verdict != REPRODUCED:
            status = 2
    return status


def _cmd_export(args):
    obj = _load_any(args.f)
    curve = _pl_curve(obj, args.tol) if isinstance(obj, PL) else obj
    _emit(_csv(curve) if args.format == "csv" else _svg(curve), args.out)
    return 0


# -- wiring ----------------------------------------------------------------------


def _add_out(sub, what="result"):
    sub.add_argument("-o", "--out", metavar="FILE",
                     help=f"write the {what} here instead of stdout")


def _add_pair(sub):
    sub.add_argument("--L", required=True, metavar="NAME",
                     help="distance operation (registry grammar)")
    sub.add_argument("--T", required=True, metavar="NAME",
                     help="t-norm (registry grammar)")
    sub.add_argument("--f", required=True, metavar="FILE",
                     help="left input, ddf v1")
    sub.add_argument("--g", required=True, metavar="FILE",
                     help="right input, ddf v1")
    sub.add_argument("--tol", type=float, default=1e-3, metavar="EPS",
                     help="enclosure tolerance (default 1e-3)")
    sub.add_argument("--depth", type=int, default=24, metavar="N",
                     help="search depth per axis (default 24)")
    _add_out(sub, "curve v1 output")


def _add_suite_flags(sub):
    sub.add_argument("--samples", type=int, default=20, metavar="N",
                     help="random pairs per direction (default 20)")
    sub.add_argument("--seed", type=_uint64, default=0, metavar="N",
                     help="base seed (default 0)")
    sub.add_argument("--tol", type=float, default=1e-2, metavar="EPS",
                     help="classification tolerance (default 1e-2)")
    sub.add_argument("-o", "--out", metavar="DIR",
                     help="save report and witness files here")


def _build_parser():
    parser = _Parser(prog="ddfkit",
                     description="distance distribution function toolkit")
    subs = parser.add_subparsers(dest="subcommand", metavar="subcommand",
                                 required=True)

    sub = subs.add_parser("eval", help="evaluate a function at points")
    sub.add_argument("--f", required=True, metavar="FILE",
                     help="input function, ddf v1")
    sub.add_argument("--x", action="append", required=True, type=float,
                     metavar="X", help="evaluation point (repeatable)")
    _add_out(sub, "x/value lines")
    sub.set_defaults(run=_cmd_eval)

    sub = subs.add_parser("qinv", help="quasi-inverse of a function")
    sub.add_argument("--f", required=True, metavar="FILE",
                     help="input function, ddf v1")
    sub.add_argument("--side", choices=("sup", "inf"), default="sup",
                     help="which quasi-inverse (default sup)")
    _add_out(sub, "qcurve v1 output")
    sub.set_defaults(run=_cmd_qinv)

    sub = subs.add_parser("tensor",
                          help="tensor two functions (strict constraint)")
    _add_pair(sub)
    sub.set_defaults(run=_cmd_tensor)

    sub = subs.add_parser("tau",
                          help="classical construction (weak constraint)")
    _add_pair(sub)
    sub.set_defaults(run=_cmd_tau)

    sub = subs.add_parser("classify", help="class memberships of a function")
    sub.add_argument("--f", required=True, metavar="FILE",
                     help="ddf v1 or curve v1 input")
    sub.add_argument("--tol", type=float, default=1e-3, metavar="EPS",
                     help="evidence tolerance for enclosures (default 1e-3)")
    _add_out(sub, "classification")
    sub.set_defaults(run=_cmd_classify)

    sub = subs.add_parser("check-op",
                          help="search for a condition counterexample")
    sub.add_argument("--op", required=True, metavar="NAME",
                     help="operation name (registry grammar)")
    sub.add_argument("--cond", required=True, metavar="COND",
                     help="condition to attack (e.g. NZD, LS, LCS, CL)")
    sub.add_argument("--budget", type=int, default=100_000, metavar="N",
                     help="candidate evaluations (default 100000)")
    sub.add_argument("--seed", type=_uint64, default=0, metavar="N",
                     help="search seed (default 0)")
    sub.set_defaults(run=_cmd_check_op)

    sub = subs.add_parser("reproduce", help="reproduce one theorem report")
    sub.add_argument("theorem", metavar="ID",
                     help=f"one of {', '.join(ALL_THEOREMS)}")
    sub.add_argument("--L", metavar="NAME",
                     help="keep only directions with this distance operation")
    sub.add_argument("--T", metavar="NAME",
                     help="keep only directions with this t-norm")
    _add_suite_flags(sub)
    sub.set_defaults(run=_cmd_reproduce)

    sub = subs.add_parser("suite", help="run many theorem reports")
    sub.add_argument("theorems", nargs="*", metavar="ID",
                     help="theorem ids (default: all)")
    _add_suite_flags(sub)
    sub.set_defaults(run=_cmd_suite)

    sub = subs.add_parser("export", help="curve or function to CSV/SVG data")
    sub.add_argument("--f", required=True, metavar="FILE",
                     help="curve v1 or ddf v1 input")
    sub.add_argument("--format", choices=("csv", "svg"), default="csv",
                     help="artifact format (default csv)")
    sub.add_argument("--tol", type=float, default=1e-3, metavar="EPS",
                     help="row spacing when the input is exact")
    _add_out(sub, "artifact")
    sub.set_defaults(run=_cmd_export)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
