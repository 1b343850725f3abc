"""Pure-Python enclosure kernels for combining distribution functions.

Both kernels are branch-and-bound sweeps over axis-aligned cells.  Because
the curves are monotone and the operations are monotone in each argument,
every cell can be bounded from its corners; cells whose upper bound cannot
beat the running optimum are dropped, cells whose critical corner lies
inside the constraint region are resolved exactly, and the rest are bisected
until they matter less than ``tol`` or the depth budget runs out.

``point_sup`` encloses, for left-continuous curves ``f`` and ``g`` laid out
on ``[0, inf]``,

    sup{ T(f(r), g(s)) : L(r, s) < x }            (``weak=False``)
    sup{ T(f(r), g(s)) : L(r, s) <= x }           (``weak=True``)

and ``point_inf`` encloses, for right-continuous inverse curves ``u`` and
``v`` on ``[0, 1]``,

    inf{ L(u(p), v(q)) : T(p, q) > y }.

The module :mod:`ddfkit.engine._bb` is a compiled twin of this file; the two
implementations must agree bit for bit, so any change here has to be
mirrored there statement for statement.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right

from .. import ops

INF = math.inf

BACKEND_NAME = "pure"

# Safety cap on cells examined per point query.  Cells that provably cannot
# be tightened are closed out directly, so the sweep normally terminates well
# below this; if an unforeseen interaction still diverges, the cap turns it
# into a wider but sound enclosure at bounded cost instead of a hang.
_MAX_POPS = 1_000_000

# -- operation codes ----------------------------------------------------------
#
# The kernels dispatch on small integer codes so the compiled twin can use a
# switch over hand-written C arithmetic.  ``wstar`` keeps its own code: it is
# the same function as ``transpose(lukasiewicz)`` but written directly, and
# the two disagree in their guard clauses at the last few ulps.

_T_ORDER = ("godel", "product", "lukasiewicz", "ordinal_033_2", "dyadic_033_3")
_T_CODES = {name: code for code, name in enumerate(_T_ORDER)}
_L_CODES = {"max": 0, "plus": 1, "wstar": 2}
for _code, _name in enumerate(_T_ORDER):
    _L_CODES[f"transpose({_name})"] = 10 + _code


def tnorm_code(name):
    """Kernel opcode for a t-norm name; raises for unsupported names."""
    try:
        return _T_CODES[name]
    except KeyError:
        raise ValueError(f"no enclosure kernel for t-norm {name!r}") from None


def lop_code(name):
    """Kernel opcode for a distance-operation name."""
    try:
        return _L_CODES[name]
    except KeyError:
        raise ValueError(
            f"no enclosure kernel for distance operation {name!r}"
        ) from None


_T_FNS = tuple(ops.TNORMS[name].fn for name in _T_ORDER)
_L_FNS = {0: ops.l_max, 1: ops.l_plus, 2: ops.l_wstar}
for _code, _name in enumerate(_T_ORDER):
    _L_FNS[10 + _code] = ops.transpose(_name).fn


# -- piecewise-linear evaluation ----------------------------------------------
#
# These reproduce PL.value / PL.limit_right bit for bit for the curve shapes
# the kernels receive (left-continuous on [0, inf] with value 0 at 0, and
# right-continuous on [0, 1]), without constructing PL objects in the loop.


def _pl_val(xs, starts, slopes, x):
    """Value at finite ``x >= 0`` of a left-continuous curve with f(0) = 0."""
    if x <= 0.0:
        return 0.0
    i = bisect_left(xs, x) - 1
    b = slopes[i]
    if b == 0.0 or x == xs[i]:
        return starts[i]
    return starts[i] + b * (x - xs[i])


def _pl_rlim(xs, starts, slopes, x):
    """Right limit at finite ``x >= 0`` (the post-jump value at breakpoints)."""
    i = bisect_right(xs, x) - 1
    b = slopes[i]
    if b == 0.0 or x == xs[i]:
        return starts[i]
    return starts[i] + b * (x - xs[i])


def _ql_val(xs, starts, slopes, top_val, p):
    """Value at ``p`` in ``[0, 1]`` of a right-continuous inverse curve."""
    if p >= 1.0:
        return top_val
    if p <= 0.0:
        return starts[0]
    i = bisect_right(xs, p) - 1
    b = slopes[i]
    if b == 0.0 or p == xs[i]:
        return starts[i]
    return starts[i] + b * (p - xs[i])


# -- sup kernel -----------------------------------------------------------------


def point_sup(fxs, fstarts, fslopes, gxs, gstarts, gslopes,
              tcode, lcode, x, weak, tol, max_depth):
    """Enclose ``sup{T(f(r), g(s)) : L(r, s) < x}`` (``<= x`` when weak).

    Returns ``(lo, hi)`` with ``lo <= sup <= hi``.  ``lo`` only collects
    values of ``T`` at points of the region (or right limits at strictly
    interior corners, which the region's declared one-sided continuity makes
    attainable), so it is a genuine lower bound; ``hi`` additionally counts
    the optimistic bounds of cells abandoned at ``max_depth``.
    """
    tfn = _T_FNS[tcode]
    lfn = _L_FNS[lcode]
    nextafter = math.nextafter

    if x <= 0.0:
        # L dominates max, so only (0, 0) could ever qualify and T(0, 0) = 0
        return (0.0, 0.0)
    if weak and x == INF:
        return (1.0, 1.0)

    best = 0.0
    resid = 0.0
    # the largest abscissa certainly inside a strict constraint; probing the
    # top corner clipped to it reaches region points no breakpoint-aligned
    # corner ever lands on (e.g. just past a tear of T interior to a piece)
    xm = nextafter(x, -INF)
    box = x if x < INF else xm
    # f and g are constant past their last breakpoints and L is monotone, so
    # a feasible point out there has an equal-valued feasible shadow just
    # past the breakpoint: the search box never needs to reach further than
    # one float beyond the last breakpoint on each axis
    bu = nextafter(fxs[-1], INF)
    if bu > box:
        bu = box
    bv = nextafter(gxs[-1], INF)
    if bv > box:
        bv = box

    nf = len(fxs)
    ng = len(gxs)
    stack = []
    push = stack.append
    for i in range(nf):
        u1 = fxs[i]
        u2 = fxs[i + 1] if i + 1 < nf else INF
        for j in range(ng):
            v1 = gxs[j]
            v2 = gxs[j + 1] if j + 1 < ng else INF
            push((u1, u2, v1, v2, 0, 0))

    pops = 0
    while stack:
        if pops >= _MAX_POPS:
            # out of budget: a cell whose binding axis is depth-exhausted
            # can keep halving the other axis without ever improving its
            # bound, so absorb what is left; the enclosure stays sound,
            # just wider
            for u1, u2, v1, v2, ud, vd in stack:
                w = lfn(u1, v1)
                if (w > x) if weak else (w >= x):
                    continue
                if u2 > bu:
                    u2 = bu
                if v2 > bv:
                    v2 = bv
                ub = tfn(_pl_val(fxs, fstarts, fslopes, u2),
                         _pl_val(gxs, gstarts, gslopes, v2))
                if ub > resid:
                    resid = ub
            break
        pops += 1
        u1, u2, v1, v2, ud, vd = stack.pop()
        w = lfn(u1, v1)
        if (w > x) if weak else (w >= x):
            continue  # the cheapest corner is already outside
        # 0 is the unit of L, so L(r, s) >= max(r, s): everything feasible
        # lives in the box [0, x]^2 and the cell may be clipped to it; the
        # value at the clip is the sup of the left-continuous piece over the
        # clipped real range, so the corner bound stays sound and tears of T
        # past the constraint never inflate it
        if u2 > bu:
            u2 = bu
        if v2 > bv:
            v2 = bv
        au = u2
        av = v2
        fmax = _pl_val(fxs, fstarts, fslopes, au)
        gmax = _pl_val(gxs, gstarts, gslopes, av)
        ub = tfn(fmax, gmax)
        if ub <= best:
            continue
        w = lfn(au, av)
        if (w <= x) if weak else (w < x):
            # the richest corner is inside: the sup over this cell is
            # attained there because f and g are left-continuous increasing
            best = ub
            continue
        if weak:
            fv1 = _pl_val(fxs, fstarts, fslopes, u1)
            gv1 = _pl_val(gxs, gstarts, gslopes, v1)
            cand = tfn(fv1, gv1)
            if cand > best:
                best = cand
            pu = nextafter(u1, INF)
            pv = nextafter(v1, INF)
            fpu = _pl_val(fxs, fstarts, fslopes, pu)
            gpv = _pl_val(gxs, gstarts, gslopes, pv)
            for r, s, fr_, gs_ in (
                (pu, pv, fpu, gpv),
                (u1, av, fv1, gmax),
                (au, v1, fmax, gv1),
                (au, pv, fmax, gpv),
                (pu, av, fpu, gmax),
            ):
                cand = tfn(fr_, gs_)
                if cand > best and lfn(r, s) <= x:
                    best = cand
        else:
            # the open corner: values just past (u1, v1) are feasible by
            # right continuity of L and approach the right limits of f, g
            fr = _pl_rlim(fxs, fstarts, fslopes, u1)
            gr = _pl_rlim(gxs, gstarts, gslopes, v1)
            cand = tfn(fr, gr)
            if cand > best:
                best = cand
            if lfn(au, v1) < x:
                cand = tfn(fmax, gr)
                if cand > best:
                    best = cand
            if lfn(u1, av) < x:
                cand = tfn(fr, gmax)
                if cand > best:
                    best = cand
            # top corner clipped strictly inside the constraint: reaches
            # region floats past tears of T interior to the cell, which no
            # breakpoint-aligned corner ever lands on
            cu = au if au < x else xm
            cv = av if av < x else xm
            fcu = _pl_val(fxs, fstarts, fslopes, cu)
            gcv = _pl_val(gxs, gstarts, gslopes, cv)
            if lfn(cu, cv) < x:
                cand = tfn(fcu, gcv)
                if cand > best:
                    best = cand
            if lfn(cu, v1) < x:
                cand = tfn(fcu, gr)
                if cand > best:
                    best = cand
            if lfn(u1, cv) < x:
                cand = tfn(fr, gcv)
                if cand > best:
                    best = cand
        if ub <= best:
            continue
        if ub <= best + tol:
            if ub > resid:
                resid = ub
            continue
        # the corner limit from inside: when a point one ulp below (au, av)
        # is feasible, monotonicity keeps the whole diagonal approach to the
        # corner feasible, and the sup over that approach is ub itself by
        # left continuity of f, g and T -- splitting cannot tighten such a
        # cell, so close it out (the gap that remains is a genuine jump)
        w = lfn(nextafter(au, -INF), nextafter(av, -INF))
        if (w <= x) if weak else (w < x):
            if ub > resid:
                resid = ub
            continue
        # each axis may be halved at most max_depth times
        du = u2 - u1 if ud < max_depth else -1.0
        dv = v2 - v1 if vd < max_depth else -1.0
        if du >= dv and du > 0.0:
            mid = 0.5 * (u1 + u2)
            if u1 < mid < u2:
                push((u1, mid, v1, v2, ud + 1, vd))
                push((mid, u2, v1, v2, ud + 1, vd))
                continue
            du = -1.0
        if dv > 0.0:
            mid = 0.5 * (v1 + v2)
            if v1 < mid < v2:
                push((u1, u2, v1, mid, ud, vd + 1))
                push((u1, u2, mid, v2, ud, vd + 1))
                continue
            dv = -1.0
        if du > 0.0:
            mid = 0.5 * (u1 + u2)
            if u1 < mid < u2:
                push((u1, mid, v1, v2, ud + 1, vd))
                push((mid, u2, v1, v2, ud + 1, vd))
                continue
        if ub > resid:
            resid = ub

    hi = resid if resid > best else best
    return (best + 0.0, hi + 0.0)


# -- inf kernel -----------------------------------------------------------------


def point_inf(uxs, ustarts, uslopes, utop, vxs, vstarts, vslopes, vtop,
              tcode, lcode, y, tol, max_depth):
    """Enclose ``inf{L(u(p), v(q)) : T(p, q) > y}`` over ``[0, 1]^2``.

    ``u`` and ``v`` are right-continuous increasing curves into ``[0, inf]``
    (inverse curves of distribution functions).  Returns ``(lo, hi)``; the
    infimum over an empty region is ``inf``.
    """
    tfn = _T_FNS[tcode]
    lfn = _L_FNS[lcode]

    if y >= 1.0:
        return (INF, INF)

    best = INF
    floor = INF

    pcuts = list(uxs)
    if pcuts[-1] < 1.0:
        pcuts.append(1.0)
    qcuts = list(vxs)
    if qcuts[-1] < 1.0:
        qcuts.append(1.0)

    stack = []
    push = stack.append
    for i in range(len(pcuts) - 1):
        for j in range(len(qcuts) - 1):
            push((pcuts[i], pcuts[i + 1], qcuts[j], qcuts[j + 1], 0, 0))

    pops = 0
    while stack:
        if pops >= _MAX_POPS:
            # out of budget: absorb the optimistic bound of every remaining
            # cell; the enclosure stays sound, just wider
            for p1, p2, q1, q2, pd, qd in stack:
                if tfn(p2, q2) <= y:
                    continue
                lb = lfn(_ql_val(uxs, ustarts, uslopes, utop, p1),
                         _ql_val(vxs, vstarts, vslopes, vtop, q1))
                if lb < floor:
                    floor = lb
            break
        pops += 1
        p1, p2, q1, q2, pd, qd = stack.pop()
        if tfn(p2, q2) <= y:
            continue  # even the richest corner fails the constraint
        up1 = _ql_val(uxs, ustarts, uslopes, utop, p1)
        vq1 = _ql_val(vxs, vstarts, vslopes, vtop, q1)
        lb = lfn(up1, vq1)
        if lb >= best:
            continue
        if tfn(p1, q1) > y:
            # the whole cell is feasible and u, v are right-continuous
            # increasing, so the min corner attains the cell's infimum
            best = lb
            continue
        up2 = _ql_val(uxs, ustarts, uslopes, utop, p2)
        vq2 = _ql_val(vxs, vstarts, vslopes, vtop, q2)
        cand = lfn(up2, vq2)
        if cand < best:
            best = cand
        if tfn(p1, q2) > y:
            cand = lfn(up1, vq2)
            if cand < best:
                best = cand
        if tfn(p2, q1) > y:
            cand = lfn(up2, vq1)
            if cand < best:
                best = cand
        if lb >= best:
            continue
        if lb >= best - tol:
            if lb < floor:
                floor = lb
            continue
        # the corner limit from inside: when a point one ulp past (p1, q1)
        # still meets the constraint, the cell's infimum over that approach
        # is lb itself by right continuity of u, v and L -- splitting cannot
        # tighten such a cell, so close it out
        if tfn(math.nextafter(p1, INF), math.nextafter(q1, INF)) > y:
            if lb < floor:
                floor = lb
            continue
        # each axis may be halved at most max_depth times
        dp = p2 - p1 if pd < max_depth else -1.0
        dq = q2 - q1 if qd < max_depth else -1.0
        if dp >= dq and dp > 0.0:
            mid = 0.5 * (p1 + p2)
            if p1 < mid < p2:
                push((mid, p2, q1, q2, pd + 1, qd))
                push((p1, mid, q1, q2, pd + 1, qd))
                continue
            dp = -1.0
        if dq > 0.0:
            mid = 0.5 * (q1 + q2)
            if q1 < mid < q2:
                push((p1, p2, mid, q2, pd, qd + 1))
                push((p1, p2, q1, mid, pd, qd + 1))
                continue
            dq = -1.0
        if dp > 0.0:
            mid = 0.5 * (p1 + p2)
            if p1 < mid < p2:
                push((mid, p2, q1, q2, pd + 1, qd))
                push((p1, mid, q1, q2, pd + 1, qd))
                continue
        if lb < floor:
            floor = lb

    lo = floor if floor < best else best
    return (lo + 0.0, best + 0.0)
