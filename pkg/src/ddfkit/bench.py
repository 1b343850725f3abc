"""Benchmark the pure and compiled enclosure kernels on shared workloads.

Run as ``python -m ddfkit.bench``.  Each workload is executed with both
backends (when the compiled one is available) and the per-call time and
speedup are printed; results are also checked to be bit-identical, since
the two kernels promise matching arithmetic.
"""

import argparse
import math
import time

import numpy as np

from . import gen
from .ddf import make_ddf, qsup
from .engine import pybb

try:
    from .engine import _bb
except ImportError:
    _bb = None


def _sup_workload(rng, n):
    cases = []
    for k in range(n):
        f = gen.random_ddf(rng, gen.KINDS[k % len(gen.KINDS)])
        g = gen.random_ddf(rng, gen.KINDS[(k // 5) % len(gen.KINDS)])
        x = float(rng.uniform(0.0, 1.5 * (f.xs[-1] + g.xs[-1]) + 1.0))
        weak = bool(rng.random() < 0.3)
        cases.append((f.xs, f.starts, f.slopes, g.xs, g.starts, g.slopes,
                      k % 5, (0, 1, 2, 10, 11, 12, 13, 14)[k % 8],
                      x, weak, 1e-4, 24))
    return cases


def _inf_workload(rng, n):
    cases = []
    for k in range(n):
        u = qsup(gen.random_ddf(rng, gen.KINDS[k % len(gen.KINDS)]))
        v = qsup(gen.random_ddf(rng, gen.KINDS[(k // 3) % len(gen.KINDS)]))
        y = float(rng.uniform(0.0, 0.999))
        cases.append((u.xs, u.starts, u.slopes, u.vtop,
                      v.xs, v.starts, v.slopes, v.vtop,
                      k % 5, (0, 1, 2, 10, 11, 12, 13, 14)[k % 8],
                      y, 1e-4, 24))
    return cases


def _ramp_rows(tol):
    f = make_ddf((0.0, 2.0), (0.0, 1.0), (0.5, 0.0))
    xs = [0.125 * i for i in range(1, 33)]
    return [(f.xs, f.starts, f.slopes, f.xs, f.starts, f.slopes,
             1, 1, x, False, tol, 24) for x in xs]


def _time(fn, cases, repeat):
    out = []
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [fn(*args) for args in cases]
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="python -m ddfkit.bench",
        description="compare the pure and compiled enclosure kernels")
    ap.add_argument("--cases", type=int, default=300,
                    help="random cases per workload (default 300)")
    ap.add_argument("--repeat", type=int, default=3,
                    help="timing repetitions, best-of (default 3)")
    ap.add_argument("--seed", type=int, default=20250815)
    args = ap.parse_args(argv)

    workloads = [
        ("point_sup random mix tol=1e-4", "point_sup",
         _sup_workload(np.random.default_rng(args.seed), args.cases)),
        ("point_inf random mix tol=1e-4", "point_inf",
         _inf_workload(np.random.default_rng(args.seed + 1), args.cases)),
        ("point_sup ramp rows  tol=1e-5", "point_sup", _ramp_rows(1e-5)),
    ]

    print(f"{'workload':34} {'calls':>5} {'pure':>12} {'compiled':>12} {'speedup':>8}")
    for label, attr, cases in workloads:
        t_pure, r_pure = _time(getattr(pybb, attr), cases, args.repeat)
        line = f"{label:34} {len(cases):5d} {t_pure * 1e3:10.1f} ms"
        if _bb is None:
            print(line + f" {'(not built)':>12} {'-':>8}")
            continue
        t_comp, r_comp = _time(getattr(_bb, attr), cases, args.repeat)
        if r_pure != r_comp:
            raise SystemExit(f"backends disagree on {label!r}")
        line += f" {t_comp * 1e3:10.1f} ms {t_pure / t_comp:7.1f}x"
        print(line)
    if _bb is None:
        print("compiled kernel not built; run: python3 setup.py build_ext --inplace")


if __name__ == "__main__":
    main()
