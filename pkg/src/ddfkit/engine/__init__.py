"""Triangle constructions: combining two distribution functions along a
distance operation ``L`` and a t-norm ``T``.

The central object is the sup-construction

    (f, g) -> x -> sup{ T(f(r), g(s)) : L(r, s) < x }

which is again a distribution function whenever ``L`` is right-continuous
and ``T`` is left-continuous.  :func:`tensor` computes it, returning an
exact piecewise-linear result when the operation pair admits one (step
inputs, pointwise combinations for ``L = max``, inverse-curve combinations
for ``T = godel``) and a rigorous :class:`BoundedCurve` enclosure from the
branch-and-bound kernels otherwise.

:func:`tau` / :func:`tau_curve` compute the weak variant with constraint
``L(r, s) <= x``, which coincides with the sup-construction exactly when
``L`` has no interior plateaus (strictness below each finite level); the
step-function plateau probe :func:`tau_equals_tensor` searches for a pair
separating the two.  :func:`tensor_quasi` encloses the dual formula

    y -> inf{ L(u(p), v(q)) : T(p, q) > y }

on inverse curves, which is the right-continuous inverse of the
sup-construction.

Kernels come from the compiled module :mod:`ddfkit.engine._bb` when it is
importable and from the pure-Python twin :mod:`ddfkit.engine.pybb`
otherwise; set ``DDFKIT_PURE=1`` to force the fallback.  Both produce
bit-identical results.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from ..ddf import as_step, from_qsup, is_ddf, make_ddf, make_step, qsup
from ..ops import parse_lop, parse_tnorm
from ..pl import INF, LEFT, RIGHT, PL, _weld_gaps, _weld_width
from . import pybb
from .pybb import lop_code, tnorm_code

__all__ = [
    "TensorRequest",
    "BoundedCurve",
    "Verdict",
    "tensor",
    "tensor_at",
    "tau",
    "tau_bounds",
    "tau_curve",
    "tensor_quasi",
    "tau_equals_tensor",
    "backend_name",
    "dumps_curve",
    "loads_curve",
]

if os.environ.get("DDFKIT_PURE"):
    _K = pybb
else:
    try:
        from . import _bb as _K  # type: ignore[no-redef]
    except ImportError:
        _K = pybb


def backend_name():
    """Name of the active kernel backend: ``"compiled"`` or ``"pure"``."""
    return _K.BACKEND_NAME


def _as_lop(op):
    return parse_lop(op) if isinstance(op, str) else op


def _as_tnorm(op):
    return parse_tnorm(op) if isinstance(op, str) else op


def _require_compatible(lop, tnorm):
    if not getattr(lop, "right_continuous", False):
        raise ValueError(
            f"distance operation {lop.name!r} is not declared right-continuous;"
            " the sup-construction is only a distribution function for"
            " right-continuous L"
        )
    if not getattr(tnorm, "left_continuous", False):
        raise ValueError(
            f"t-norm {tnorm.name!r} is not declared left-continuous;"
            " the sup-construction is only a distribution function for"
            " left-continuous T"
        )


def _require_ddf(f, role):
    if not is_ddf(f):
        raise ValueError(f"{role} must be a distribution function")


# -- requests and enclosure curves --------------------------------------------


@dataclass(frozen=True)
class TensorRequest:
    """Inputs for :func:`tensor`; names may stand in for the operations."""

    L: object
    T: object
    f: PL
    g: PL
    tolerance: float = 1e-3
    max_depth: int = 24

    def __post_init__(self):
        object.__setattr__(self, "L", _as_lop(self.L))
        object.__setattr__(self, "T", _as_tnorm(self.T))
        _require_ddf(self.f, "f")
        _require_ddf(self.g, "g")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")


@dataclass(frozen=True)
class BoundedCurve:
    """Row-wise enclosure of an increasing function ``[0, inf] -> [0, 1]``.

    Each row ``(xs[i], lows[i], highs[i])`` bounds the function's value at
    ``xs[i]``.  A final row at ``inf`` bounds the limit from the left at
    infinity (the function's value *at* infinity is 1 by convention and is
    not stored).  Between rows the bounds follow from monotonicity:
    ``lows`` of the last row at or before ``x`` and ``highs`` of the first
    row at or after ``x``.
    """

    xs: tuple
    lows: tuple
    highs: tuple
    provenance: str = ""

    def __post_init__(self):
        n = len(self.xs)
        if not (n and n == len(self.lows) == len(self.highs)):
            raise ValueError("rows must align")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("row positions must increase strictly")
        if self.xs[0] < 0.0 or (math.isinf(self.xs[0]) and n > 1):
            raise ValueError("rows must lie in [0, inf]")
        prev_lo, prev_hi = 0.0, 0.0
        for lo, hi in zip(self.lows, self.highs):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ValueError("bounds must satisfy 0 <= lo <= hi <= 1")
            if lo < prev_lo or hi < prev_hi:
                raise ValueError("bounds must be nondecreasing")
            prev_lo, prev_hi = lo, hi

    @property
    def has_limit_row(self):
        return math.isinf(self.xs[-1])

    @property
    def tail(self):
        """Bounds on the limit from the left at infinity."""
        if self.has_limit_row:
            return (self.lows[-1], self.highs[-1])
        return (self.lows[-1], 1.0)

    def bounds(self, x):
        """``(lo, hi)`` bracketing the value at ``x`` (at ``inf``: the limit)."""
        if math.isinf(x):
            return self.tail
        if x < 0.0:
            raise ValueError("curves live on [0, inf]")
        i = bisect_right(self.xs, x) - 1
        lo = self.lows[i] if i >= 0 else 0.0
        j = bisect_left(self.xs, x)
        hi = self.highs[j] if j < len(self.xs) else self.tail[1]
        return (lo, hi)

    def width(self):
        """Largest gap ``hi - lo`` over all representable finite points."""
        out = max(hi - lo for lo, hi in zip(self.lows, self.highs))
        for i in range(len(self.xs) - 1):
            x1, x2 = self.xs[i], self.xs[i + 1]
            if math.isinf(x2) or math.nextafter(x1, INF) < x2:
                gap = self.highs[i + 1] - self.lows[i]
                if gap > out:
                    out = gap
        return out

    def dumps(self):
        return dumps_curve(self)


def _fmt(v):
    return "inf" if math.isinf(v) else repr(v)


def dumps_curve(curve):
    """Serialize a curve; one ``row x lo hi`` line per row."""
    lines = ["curve v1"]
    for x, lo, hi in zip(curve.xs, curve.lows, curve.highs):
        lines.append(f"row {_fmt(x)} {_fmt(lo)} {_fmt(hi)}")
    return "\n".join(lines) + "\n"


def loads_curve(text):
    pairs = ((i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1))
    lines = [(i, ln) for i, ln in pairs if ln and not ln.startswith("#")]
    if not lines or lines[0][1] != "curve v1":
        no = lines[0][0] if lines else 1
        raise ValueError(f"line {no}: expected a 'curve v1' header")
    xs, lows, highs = [], [], []
    for no, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4 or parts[0] != "row":
            raise ValueError(f"line {no}: bad line {ln!r}")
        try:
            x, lo, hi = (_parse_float(t) for t in parts[1:])
        except ValueError as exc:
            raise ValueError(f"line {no}: {exc}") from None
        xs.append(x)
        lows.append(lo)
        highs.append(hi)
    return BoundedCurve(tuple(xs), tuple(lows), tuple(highs), "loaded")


def _parse_float(tok):
    if tok == "inf":
        return INF
    try:
        return float(tok)
    except ValueError:
        raise ValueError(f"bad number {tok!r}") from None


# -- kernel-backed curve assembly ----------------------------------------------


def _point(lop_c, tnorm_c, f, g, x, weak, tol, max_depth):
    return _K.point_sup(
        f.xs, f.starts, f.slopes, g.xs, g.starts, g.slopes,
        tnorm_c, lop_c, x, weak, tol, max_depth,
    )


def _sup_curve(lop, tnorm, f, g, tol, max_depth, weak, provenance,
               max_rows=4000, max_sweeps=64):
    """Assemble a BoundedCurve by querying the point kernel row by row.

    The seed grid holds every finite value ``L`` takes on breakpoint pairs
    (where the construction can jump), the floats next to them (so jumps
    are pinned to one ulp), midpoints, and spread points past the last
    corner; gaps whose step bound exceeds ``tol`` are then bisected.

    A staircase gap bundles two row enclosures plus the rise between the
    rows, so rows are queried at ``tol / 4``, leaving ``tol / 2`` of slack
    for the rise and letting the bisection terminate.
    """
    lop_c = lop_code(lop.name)
    tnorm_c = tnorm_code(tnorm.name)
    ptol = 0.25 * tol

    corners = set()
    for cu in f.xs:
        for cv in g.xs:
            w = lop.fn(cu, cv)
            if w < INF:
                corners.add(w)
    grid = {0.0}
    for w in corners:
        grid.add(w)
        grid.add(math.nextafter(w, INF))
        if w > 0.0:
            grid.add(math.nextafter(w, -INF))
    cs = sorted(corners)
    for a, b in zip(cs, cs[1:]):
        grid.add(0.5 * (a + b))
    spread = (cs[-1] if cs else 0.0) + 1.0
    grid.add(spread)
    grid.add(2.0 * spread)

    rows = sorted(v for v in grid if 0.0 <= v < INF)
    vals = {}
    for x in rows:
        vals[x] = _point(lop_c, tnorm_c, f, g, x, weak, ptol, max_depth)

    # the limit from the left at infinity: the strict constraint at x = inf
    tail = _point(lop_c, tnorm_c, f, g, INF, False, ptol, max_depth)

    # march further out until the finite rows reach the tail (the region
    # saturates once exp(-x) underflows, so this always terminates)
    last = rows[-1]
    for _ in range(80):
        if tail[1] - vals[last][0] <= tol:
            break
        last = 2.0 * last
        if not last < INF:
            break
        vals[last] = _point(lop_c, tnorm_c, f, g, last, weak, ptol, max_depth)
        rows.append(last)

    for _ in range(max_sweeps):
        inserts = []
        for x1, x2 in zip(rows, rows[1:]):
            if vals[x2][1] - vals[x1][0] > tol and math.nextafter(x1, INF) < x2:
                mid = 0.5 * (x1 + x2)
                if not x1 < mid < x2:
                    mid = math.nextafter(x1, INF)
                inserts.append(mid)
        if not inserts or len(rows) + len(inserts) > max_rows:
            break
        for x in inserts:
            if x not in vals:
                vals[x] = _point(lop_c, tnorm_c, f, g, x, weak, ptol, max_depth)
        rows = sorted(vals)

    # plateaus generate no rise and hence no bisection rows, yet pinning one
    # down needs an interior row (boundary rows keep loose upper bounds), so
    # drop a single midpoint into every gap that shows no provable rise
    inserts = []
    for x1, x2 in zip(rows, rows[1:]):
        if vals[x2][0] <= vals[x1][1] and math.nextafter(x1, INF) < x2:
            mid = 0.5 * (x1 + x2)
            if x1 < mid < x2:
                inserts.append(mid)
    if inserts and len(rows) + len(inserts) <= max_rows:
        for x in inserts:
            if x not in vals:
                vals[x] = _point(lop_c, tnorm_c, f, g, x, weak, ptol, max_depth)
        rows = sorted(vals)

    los = [vals[x][0] for x in rows]
    his = [vals[x][1] for x in rows]
    los.append(tail[0])
    his.append(tail[1])
    for i in range(1, len(los)):
        if los[i] < los[i - 1]:
            los[i] = los[i - 1]
    for i in range(len(his) - 2, -1, -1):
        if his[i] > his[i + 1]:
            his[i] = his[i + 1]
    # a float evaluation of T at a feasible probe can land a rounding ulp
    # above the algebraic bound of a neighbouring row's cells; lowering the
    # lower bound is always sound, so reconcile within noise and fail loudly
    # past it
    cap = 1.0
    for i in range(len(los) - 1, -1, -1):
        m = min(cap, his[i])
        if los[i] > m:
            if los[i] - m > 1e-12:
                raise ArithmeticError(
                    f"lower bound exceeds upper bound by {los[i] - m!r}")
            los[i] = m
        cap = los[i]
    return BoundedCurve(tuple(rows) + (INF,), tuple(los), tuple(his), provenance)


def _pointwise_curve(tnorm, f, g, tol, provenance, max_rows=4000,
                     max_sweeps=64):
    """Exact rows of ``x -> T(f(x), g(x))`` (the ``L = max`` construction).

    Row values are exact up to the float evaluation of ``T``; the only width
    left is the step bound across row gaps, which gap bisection pushes below
    ``tol`` everywhere except across genuine jumps, which end up pinned
    between ulp-adjacent rows.  Multi-operation t-norms can dip by an ulp
    between adjacent rows where the true rise is below rounding noise, so
    sub-noise dips are clamped to keep the rows nondecreasing; anything
    above noise size is a genuine bug and still raises.
    """

    def val(x):
        return tnorm.fn(f.value(x), g.value(x))

    grid = {0.0}
    for c in tuple(f.xs) + tuple(g.xs):
        grid.add(c)
        grid.add(math.nextafter(c, INF))
    spread = max(f.xs[-1], g.xs[-1]) + 1.0
    grid.add(spread)
    grid.add(2.0 * spread)
    rows = sorted(grid)
    vals = {x: val(x) for x in rows}
    tail_v = tnorm.fn(f.tail_value, g.tail_value)

    for _ in range(max_sweeps):
        inserts = []
        for x1, x2 in zip(rows, rows[1:]):
            if vals[x2] - vals[x1] > tol and math.nextafter(x1, INF) < x2:
                mid = 0.5 * (x1 + x2)
                if not x1 < mid < x2:
                    mid = math.nextafter(x1, INF)
                inserts.append(mid)
        if not inserts or len(rows) + len(inserts) > max_rows:
            break
        for x in inserts:
            if x not in vals:
                vals[x] = val(x)
        rows = sorted(vals)

    vs = [vals[x] for x in rows] + [tail_v]
    for i in range(1, len(vs)):
        if vs[i] < vs[i - 1]:
            if vs[i - 1] - vs[i] > 1e-12:
                raise ArithmeticError(
                    f"pointwise rows decrease by {vs[i - 1] - vs[i]!r}")
            vs[i] = vs[i - 1]
    return BoundedCurve(tuple(rows) + (INF,), tuple(vs), tuple(vs), provenance)


# -- the sup-construction --------------------------------------------------------


def tensor(req, path="auto"):
    """The sup-construction for ``req``; exact when a closed path applies.

    Returns a :class:`~ddfkit.pl.PL` distribution function on the exact
    paths (two steps; ``L = max`` with ``T`` godel or lukasiewicz; ``T =
    godel`` with ``L`` max or plus) and a :class:`BoundedCurve` whose width
    is at most ``req.tolerance`` (up to cells abandoned at ``req.max_depth``)
    otherwise.  ``path="bb"`` skips the exact shortcuts and forces the
    branch-and-bound kernel, which is useful for cross-checking them.
    """
    if not isinstance(req, TensorRequest):
        raise TypeError("tensor expects a TensorRequest")
    if path not in ("auto", "bb"):
        raise ValueError(f"unknown path {path!r}")
    lop, tnorm, f, g = req.L, req.T, req.f, req.g
    _require_compatible(lop, tnorm)
    if path == "auto":
        out = _exact_path(lop, tnorm, f, g, req.tolerance)
        if out is not None:
            return out
    label = (f"tensor path=bb L={lop.name} T={tnorm.name}"
             f" tol={req.tolerance!r}")
    return _sup_curve(lop, tnorm, f, g, req.tolerance, req.max_depth,
                      weak=False, provenance=label)


def _exact_path(lop, tnorm, f, g, tol):
    rf = as_step(f)
    rg = as_step(g)
    if rf == (0.0, 1.0):  # the unit: a full jump at 0 leaves g unchanged
        return g
    if rg == (0.0, 1.0):
        return f
    if rf is not None and rg is not None:
        return make_step(lop.fn(rf[0], rg[0]), tnorm.fn(rf[1], rg[1]))
    if lop.name == "max":
        if tnorm.name == "godel":
            c = f.combine(g, "min")
            return make_ddf(c.xs, c.starts, c.slopes)
        if tnorm.name == "lukasiewicz":
            s = f.combine(g, "plus")
            one = PL((0.0,), (1.0,), (0.0,), INF, LEFT, 1.0, 1.0)
            m = s.combine(one, "max")
            # a crossing breakpoint interpolated on the sum can land a hair
            # below 1.0; after the shift that hair would be a negative value
            starts = []
            for a in m.starts:
                v = a - 1.0
                if v < 0.0:
                    if v < -1e-12:
                        raise ArithmeticError(
                            f"crossing undershoots 1.0 by {-v!r}")
                    v = 0.0
                starts.append(v)
            slopes = list(m.slopes)
            # the shift moves crossing seams anchored near 1.0 down to the
            # finer float grid near 0.0, where a piece end can overshoot the
            # next start by ~slope * ulp(x); shave the slope so the seam
            # closes (anything past 1e-12 is a genuine bug and still raises)
            for i in range(len(starts) - 1):
                dx = m.xs[i + 1] - m.xs[i]
                b = slopes[i]
                nxt = starts[i + 1]
                if b == 0.0 or not 0.0 < starts[i] + b * dx - nxt <= 1e-12:
                    continue
                b = (nxt - starts[i]) / dx
                for _ in range(8):
                    if starts[i] + b * dx <= nxt:
                        slopes[i] = b
                        break
                    b = math.nextafter(b, 0.0)

            def artifact_only(x):
                # the shift also leaves undershoot seams; close them unless
                # an operand genuinely jumps at x
                return (f.jump_at(x) <= _weld_width(f.value(x))
                        and g.jump_at(x) <= _weld_width(g.value(x)))

            xs = list(m.xs)
            _weld_gaps(xs, starts, slopes, artifact_only)
            return make_ddf(tuple(xs), tuple(starts), tuple(slopes))
        label = f"tensor path=pointwise L=max T={tnorm.name} tol={tol!r}"
        return _pointwise_curve(tnorm, f, g, tol, label)
    if tnorm.name == "godel" and lop.name in ("max", "plus"):
        if max(f.xs[-1], g.xs[-1]) < 1e150:
            qf = _cap_inf(qsup(f))
            qg = _cap_inf(qsup(g))
            q = _restore_inf(qf.combine(qg, lop.name))
            return from_qsup(q)
    return None


# Inverse curves of defective inputs are ``inf`` past the tail level.  The
# piecewise combiner works on finite numbers, so those flat pieces are
# capped at a sentinel far above any attainable finite value (curve values
# are breakpoint positions, which the caller keeps below 1e150) and mapped
# back afterwards; sums and maxima never cross the gap in between.
_BIG = 1e300


def _cap_inf(u):
    if not any(math.isinf(a) for a in u.starts):
        return u
    starts = tuple(_BIG if math.isinf(a) else a for a in u.starts)
    vtop = _BIG if math.isinf(u.vtop) else u.vtop
    return PL(u.xs, starts, u.slopes, u.top, u.side, starts[0], vtop)


def _restore_inf(q):
    starts = []
    slopes = []
    for a, b in zip(q.starts, q.slopes):
        if a >= _BIG:
            starts.append(INF)
            slopes.append(0.0)
        else:
            starts.append(a)
            slopes.append(b)
    return PL(q.xs, tuple(starts), tuple(slopes), 1.0, RIGHT, starts[0], INF)


def tensor_at(req, x, weak=False):
    """Point enclosure ``(lo, hi)`` of the construction at ``x``.

    ``x = inf`` gives the limit from the left at infinity.  With
    ``weak=True`` the constraint is ``L(r, s) <= x`` instead.
    """
    if not isinstance(req, TensorRequest):
        raise TypeError("tensor_at expects a TensorRequest")
    _require_compatible(req.L, req.T)
    if math.isinf(x) and not weak:
        pass  # the strict constraint at inf is exactly the limit
    return _point(lop_code(req.L.name), tnorm_code(req.T.name), req.f, req.g,
                  x, weak, req.tolerance, req.max_depth)


# -- the weak variant ------------------------------------------------------------


def tau_bounds(L, T, f, g, x, tolerance=1e-3, max_depth=24):
    """Enclosure of ``sup{T(f(r), g(s)) : L(r, s) <= x}`` at one point."""
    lop = _as_lop(L)
    tnorm = _as_tnorm(T)
    _require_compatible(lop, tnorm)
    _require_ddf(f, "f")
    _require_ddf(g, "g")
    if math.isinf(x):
        return (1.0, 1.0)
    if x < 0.0:
        return (0.0, 0.0)
    if lop.name == "max":
        # the weak region [0, x]^2 is closed; the corner attains the sup
        v = tnorm.fn(f.value(x), g.value(x))
        return (v, v)
    return _point(lop_code(lop.name), tnorm_code(tnorm.name), f, g,
                  x, True, tolerance, max_depth)


def tau(L, T, f, g, x, tolerance=1e-3, max_depth=24):
    """Point value of the weak variant: midpoint of its enclosure.

    The enclosure has width 0 on every exactly-resolved input (steps,
    plateaus, ``L = max``), so the midpoint is then the true value.
    """
    lo, hi = tau_bounds(L, T, f, g, x, tolerance, max_depth)
    return 0.5 * (lo + hi)


def tau_curve(L, T, f, g, tolerance=1e-3, max_depth=24):
    """BoundedCurve enclosure of the weak variant on all of ``[0, inf]``."""
    lop = _as_lop(L)
    tnorm = _as_tnorm(T)
    _require_compatible(lop, tnorm)
    _require_ddf(f, "f")
    _require_ddf(g, "g")
    if lop.name == "max":
        label = f"tau path=pointwise L=max T={tnorm.name} tol={tolerance!r}"
        return _pointwise_curve(tnorm, f, g, tolerance, label)
    label = f"tau path=bb L={lop.name} T={tnorm.name} tol={tolerance!r}"
    return _sup_curve(lop, tnorm, f, g, tolerance, max_depth,
                      weak=True, provenance=label)


# -- the dual construction on inverse curves -------------------------------------


def tensor_quasi(L, T, u, v, y, tolerance=1e-3, max_depth=24):
    """Enclose ``inf{L(u(p), v(q)) : T(p, q) > y}`` for inverse curves.

    ``u`` and ``v`` must be right-continuous increasing curves on ``[0, 1]``
    with value ``inf`` at 1 (the shape :func:`ddfkit.qsup` produces).  For
    ``T = godel`` the infimum is ``L(u(y), v(y))`` exactly.
    """
    lop = _as_lop(L)
    tnorm = _as_tnorm(T)
    _require_compatible(lop, tnorm)
    for w, role in ((u, "u"), (v, "v")):
        if not isinstance(w, PL) or w.side != RIGHT or w.top != 1.0 \
                or not math.isinf(w.vtop):
            raise ValueError(
                f"{role} must be a right-continuous inverse curve on [0, 1]"
                " with value inf at 1"
            )
    if y >= 1.0:
        return (INF, INF)
    if tnorm.name == "godel":
        w = lop.fn(u.value(y), v.value(y))
        return (w, w)
    return _K.point_inf(
        u.xs, u.starts, u.slopes, u.vtop,
        v.xs, v.starts, v.slopes, v.vtop,
        tnorm_code(tnorm.name), lop_code(lop.name), y, tolerance, max_depth,
    )


# -- separating the strict and weak constructions --------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of the search for inputs separating strict from weak.

    ``equal`` is False with a ``witness`` ``(f, g, x0)`` when a separating
    pair was found and verified, True when the operation is declared
    plateau-free below finite levels (then the constructions coincide), and
    None when nothing was found within the budget for an undeclared case.
    """

    equal: object
    witness: object
    detail: str


def tau_equals_tensor(L, T, budget=30_000, seed=0):
    """Do the strict and weak constructions agree for this pair?

    A plateau of ``L`` below a finite level -- points ``x < x'``, ``y < y'``
    with ``L(x, y) = L(x', y') < inf`` -- separates them on a pair of unit
    steps: the weak construction already jumps at the plateau level, the
    strict one only after it.  The falsifier supplies candidate plateaus.
    """
    from ..falsify import falsify

    lop = _as_lop(L)
    tnorm = _as_tnorm(T)
    _require_compatible(lop, tnorm)
    res = falsify(lop, "LCS", budget=budget, seed=seed)
    if res.found:
        r, s = res.witness.points[0], res.witness.points[1]
        x0 = res.witness.values[0]
        f = make_step(r, 1.0)
        g = make_step(s, 1.0)
        weak_lo, _ = tau_bounds(lop, tnorm, f, g, x0)
        strict = tensor(TensorRequest(lop, tnorm, f, g))
        strict_at = strict.value(x0)
        if weak_lo > strict_at:
            return Verdict(
                equal=False,
                witness=(f, g, x0),
                detail=(
                    f"unit steps at {r!r} and {s!r} separate the"
                    f" constructions at level {x0!r}:"
                    f" weak >= {weak_lo!r} > strict = {strict_at!r}"
                ),
            )
        return Verdict(
            equal=None,
            witness=None,
            detail=(
                "a plateau was reported but did not separate the"
                f" constructions at level {x0!r}"
            ),
        )
    if lop.LCS:
        return Verdict(
            equal=True,
            witness=None,
            detail=(
                f"{lop.name} is declared strictly increasing below finite"
                f" levels and {res.checked} falsification candidates agree;"
                " the constructions coincide"
            ),
        )
    return Verdict(
        equal=None,
        witness=None,
        detail=(
            f"no separating plateau among {res.checked} candidates, but"
            f" {lop.name} carries no strictness declaration"
        ),
    )
