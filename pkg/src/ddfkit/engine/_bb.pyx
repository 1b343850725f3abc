# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: initializedcheck=False, language_level=3
"""Compiled enclosure kernels: the hot twin of :mod:`ddfkit.engine.pybb`.

The two implementations must agree bit for bit.  Every statement here
mirrors the pure-Python kernel in order and arithmetic: the scalar
operations are re-expressed as a C switch over the same opcode table, the
cell stack pops in the same order, and all floating-point expressions keep
the same shape (same association, same comparison directions), so both
backends explore identical cell trees and return identical enclosures.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from libc.math cimport INFINITY, exp, frexp, ldexp, log, nextafter

BACKEND_NAME = "compiled"

# Safety cap on cells examined per point query (see pybb._MAX_POPS).
cdef int MAX_POPS = 1000000


# -- scalar operations ----------------------------------------------------------
#
# Codes follow ddfkit.engine.pybb: t-norms 0..4, distance operations
# 0 = max, 1 = plus, 2 = wstar, 10 + t = transpose(t).  Python's min/max
# pick the first argument on ties, which the ternaries below reproduce.


cdef int _block(double x) noexcept nogil:
    cdef int e
    cdef double man = frexp(x, &e)  # x = man * 2**e, man in [0.5, 1)
    if man == 0.5:
        return 1 - e
    return -e


cdef double t_eval(int code, double x, double y) noexcept nogil:
    cdef double s, p, q, f
    cdef int m, n
    if code == 0:  # godel
        return y if y < x else x
    if code == 1:  # product
        return x * y
    if code == 2:  # lukasiewicz
        if x == 1.0:
            return y
        if y == 1.0:
            return x
        s = x + y - 1.0
        return 0.0 if 0.0 > s else s
    if code == 3:  # ordinal_033_2
        if x == 1.0:
            return y
        if y == 1.0:
            return x
        if x <= 0.5 and y <= 0.5:
            return 2.0 * (x * y)
        if x >= 0.5 and y >= 0.5:
            s = x + y - 1.0
            return 0.5 if 0.5 > s else s
        return y if y < x else x
    # dyadic_033_3
    if x == 1.0:
        return y
    if y == 1.0:
        return x
    if x == 0.0 or y == 0.0:
        return 0.0
    m = _block(x)
    n = _block(y)
    p = ldexp(x, m)
    q = ldexp(y, n)
    f = 2.0 * (p * q) - (p + q) + 1.0
    return ldexp(f, -(m + n))


cdef double l_eval(int code, double x, double y) noexcept nogil:
    cdef double u, v, t
    if code == 0:  # max
        return y if y > x else x
    if code == 1:  # plus
        return x + y
    if code == 2:  # wstar, written directly
        if x == 0.0:
            return y
        if y == 0.0:
            return x
        if x == INFINITY or y == INFINITY:
            return INFINITY
        t = exp(-x) + exp(-y) - 1.0
        if t <= 0.0:
            return INFINITY
        if t >= 1.0:
            return 0.0
        return -log(t)
    # transpose(t): -ln T(exp(-x), exp(-y)) with the retrace guards
    if x == 0.0:
        return y
    if y == 0.0:
        return x
    if x == INFINITY or y == INFINITY:
        return INFINITY
    u = exp(-x)
    v = exp(-y)
    t = t_eval(code - 10, u, v)
    if t == u and t == v:
        return y if y > x else x  # exp collapsed both arguments to one float
    if t == u:
        return x
    if t == v:
        return y
    if t <= 0.0:
        return INFINITY
    if t >= 1.0:
        return 0.0
    return -log(t)


# -- piecewise-linear evaluation --------------------------------------------------


cdef int _bisect_left(double* a, int n, double x) noexcept nogil:
    cdef int lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef int _bisect_right(double* a, int n, double x) noexcept nogil:
    cdef int lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef double _pl_val(double* xs, double* starts, double* slopes, int n,
                    double x) noexcept nogil:
    cdef int i
    cdef double b
    if x <= 0.0:
        return 0.0
    i = _bisect_left(xs, n, x) - 1
    b = slopes[i]
    if b == 0.0 or x == xs[i]:
        return starts[i]
    return starts[i] + b * (x - xs[i])


cdef double _pl_rlim(double* xs, double* starts, double* slopes, int n,
                     double x) noexcept nogil:
    cdef int i
    cdef double b
    i = _bisect_right(xs, n, x) - 1
    b = slopes[i]
    if b == 0.0 or x == xs[i]:
        return starts[i]
    return starts[i] + b * (x - xs[i])


cdef double _ql_val(double* xs, double* starts, double* slopes, int n,
                    double top_val, double p) noexcept nogil:
    cdef int i
    cdef double b
    if p >= 1.0:
        return top_val
    if p <= 0.0:
        return starts[0]
    i = _bisect_right(xs, n, p) - 1
    b = slopes[i]
    if b == 0.0 or p == xs[i]:
        return starts[i]
    return starts[i] + b * (p - xs[i])


# -- cell stack -------------------------------------------------------------------


cdef struct Cell:
    double u1
    double u2
    double v1
    double v2
    int ud
    int vd


cdef struct Stack:
    Cell* data
    int size
    int cap


cdef int _push(Stack* s, double u1, double u2, double v1, double v2,
               int ud, int vd) except -1:
    cdef Cell* grown
    if s.size == s.cap:
        s.cap *= 2
        grown = <Cell*> PyMem_Realloc(s.data, s.cap * sizeof(Cell))
        if grown == NULL:
            raise MemoryError()
        s.data = grown
    s.data[s.size].u1 = u1
    s.data[s.size].u2 = u2
    s.data[s.size].v1 = v1
    s.data[s.size].v2 = v2
    s.data[s.size].ud = ud
    s.data[s.size].vd = vd
    s.size += 1
    return 0


cdef int _fill(object seq, double* dst) except -1:
    cdef Py_ssize_t i, n = len(seq)
    for i in range(n):
        dst[i] = <double> seq[i]
    return 0


# -- sup kernel -------------------------------------------------------------------


def point_sup(fxs, fstarts, fslopes, gxs, gstarts, gslopes,
              int tcode, int lcode, double x, bint weak, double tol,
              int max_depth):
    """Enclose ``sup{T(f(r), g(s)) : L(r, s) < x}`` (``<= x`` when weak)."""
    cdef int nf = len(fxs)
    cdef int ng = len(gxs)
    cdef double* buf = <double*> PyMem_Malloc((3 * nf + 3 * ng) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* fx = buf
    cdef double* fa = buf + nf
    cdef double* fb = buf + 2 * nf
    cdef double* gx = buf + 3 * nf
    cdef double* ga = buf + 3 * nf + ng
    cdef double* gb = buf + 3 * nf + 2 * ng

    cdef Stack s
    s.size = 0
    s.cap = 256
    s.data = <Cell*> PyMem_Malloc(s.cap * sizeof(Cell))
    if s.data == NULL:
        PyMem_Free(buf)
        raise MemoryError()

    cdef double best = 0.0, resid = 0.0, hi
    cdef double u1, u2, v1, v2, au, av, w, fmax, gmax, ub, cand, mid
    cdef double fv1, gv1, pu, pv, fpu, gpv, fr, gr, du, dv
    cdef double xm, box, bu, bv, cu, cv, fcu, gcv
    cdef int i, j, ud, vd, pops
    cdef bint skip

    try:
        _fill(fxs, fx)
        _fill(fstarts, fa)
        _fill(fslopes, fb)
        _fill(gxs, gx)
        _fill(gstarts, ga)
        _fill(gslopes, gb)

        if x <= 0.0:
            # L dominates max, so only (0, 0) could qualify and T(0, 0) = 0
            return (0.0, 0.0)
        if weak and x == INFINITY:
            return (1.0, 1.0)
        # the largest abscissa certainly inside a strict constraint; probing
        # the top corner clipped to it reaches region points no breakpoint-
        # aligned corner ever lands on (e.g. just past a tear of T interior
        # to a piece)
        xm = nextafter(x, -INFINITY)
        box = x if x < INFINITY else xm
        # f and g are constant past their last breakpoints and L is
        # monotone, so a feasible point out there has an equal-valued
        # feasible shadow just past the breakpoint: the search box never
        # needs to reach further than one float beyond the last breakpoint
        # on each axis
        bu = nextafter(fx[nf - 1], INFINITY)
        if bu > box:
            bu = box
        bv = nextafter(gx[ng - 1], INFINITY)
        if bv > box:
            bv = box

        for i in range(nf):
            u1 = fx[i]
            u2 = fx[i + 1] if i + 1 < nf else INFINITY
            for j in range(ng):
                v1 = gx[j]
                v2 = gx[j + 1] if j + 1 < ng else INFINITY
                _push(&s, u1, u2, v1, v2, 0, 0)

        pops = 0
        while s.size > 0:
            if pops >= MAX_POPS:
                # out of budget: a cell whose binding axis is depth-exhausted
                # can keep halving the other axis without ever improving its
                # bound, so absorb what is left; the enclosure stays sound,
                # just wider
                for i in range(s.size):
                    u1 = s.data[i].u1
                    u2 = s.data[i].u2
                    v1 = s.data[i].v1
                    v2 = s.data[i].v2
                    w = l_eval(lcode, u1, v1)
                    skip = (w > x) if weak else (w >= x)
                    if skip:
                        continue
                    if u2 > bu:
                        u2 = bu
                    if v2 > bv:
                        v2 = bv
                    ub = t_eval(tcode, _pl_val(fx, fa, fb, nf, u2),
                                _pl_val(gx, ga, gb, ng, v2))
                    if ub > resid:
                        resid = ub
                break
            pops += 1
            s.size -= 1
            u1 = s.data[s.size].u1
            u2 = s.data[s.size].u2
            v1 = s.data[s.size].v1
            v2 = s.data[s.size].v2
            ud = s.data[s.size].ud
            vd = s.data[s.size].vd
            w = l_eval(lcode, u1, v1)
            skip = (w > x) if weak else (w >= x)
            if skip:
                continue  # the cheapest corner is already outside
            # 0 is the unit of L, so L(r, s) >= max(r, s): everything
            # feasible lives in the box [0, x]^2 and the cell may be clipped
            # to it; the value at the clip is the sup of the left-continuous
            # piece over the clipped real range, so the corner bound stays
            # sound and tears of T past the constraint never inflate it
            if u2 > bu:
                u2 = bu
            if v2 > bv:
                v2 = bv
            au = u2
            av = v2
            fmax = _pl_val(fx, fa, fb, nf, au)
            gmax = _pl_val(gx, ga, gb, ng, av)
            ub = t_eval(tcode, fmax, gmax)
            if ub <= best:
                continue
            w = l_eval(lcode, au, av)
            skip = (w <= x) if weak else (w < x)
            if skip:
                # the richest corner is inside: the sup over this cell is
                # attained there because f and g are left-continuous increasing
                best = ub
                continue
            if weak:
                fv1 = _pl_val(fx, fa, fb, nf, u1)
                gv1 = _pl_val(gx, ga, gb, ng, v1)
                cand = t_eval(tcode, fv1, gv1)
                if cand > best:
                    best = cand
                pu = nextafter(u1, INFINITY)
                pv = nextafter(v1, INFINITY)
                fpu = _pl_val(fx, fa, fb, nf, pu)
                gpv = _pl_val(gx, ga, gb, ng, pv)
                cand = t_eval(tcode, fpu, gpv)
                if cand > best and l_eval(lcode, pu, pv) <= x:
                    best = cand
                cand = t_eval(tcode, fv1, gmax)
                if cand > best and l_eval(lcode, u1, av) <= x:
                    best = cand
                cand = t_eval(tcode, fmax, gv1)
                if cand > best and l_eval(lcode, au, v1) <= x:
                    best = cand
                cand = t_eval(tcode, fmax, gpv)
                if cand > best and l_eval(lcode, au, pv) <= x:
                    best = cand
                cand = t_eval(tcode, fpu, gmax)
                if cand > best and l_eval(lcode, pu, av) <= x:
                    best = cand
            else:
                # the open corner: values just past (u1, v1) are feasible by
                # right continuity of L and approach the right limits of f, g
                fr = _pl_rlim(fx, fa, fb, nf, u1)
                gr = _pl_rlim(gx, ga, gb, ng, v1)
                cand = t_eval(tcode, fr, gr)
                if cand > best:
                    best = cand
                if l_eval(lcode, au, v1) < x:
                    cand = t_eval(tcode, fmax, gr)
                    if cand > best:
                        best = cand
                if l_eval(lcode, u1, av) < x:
                    cand = t_eval(tcode, fr, gmax)
                    if cand > best:
                        best = cand
                # top corner clipped strictly inside the constraint: reaches
                # region floats past tears of T interior to the cell, which
                # no breakpoint-aligned corner ever lands on
                cu = au if au < x else xm
                cv = av if av < x else xm
                fcu = _pl_val(fx, fa, fb, nf, cu)
                gcv = _pl_val(gx, ga, gb, ng, cv)
                if l_eval(lcode, cu, cv) < x:
                    cand = t_eval(tcode, fcu, gcv)
                    if cand > best:
                        best = cand
                if l_eval(lcode, cu, v1) < x:
                    cand = t_eval(tcode, fcu, gr)
                    if cand > best:
                        best = cand
                if l_eval(lcode, u1, cv) < x:
                    cand = t_eval(tcode, fr, gcv)
                    if cand > best:
                        best = cand
            if ub <= best:
                continue
            if ub <= best + tol:
                if ub > resid:
                    resid = ub
                continue
            # the corner limit from inside: when a point one ulp below
            # (au, av) is feasible, monotonicity keeps the whole diagonal
            # approach to the corner feasible, and the sup over that approach
            # is ub itself by left continuity of f, g and T -- splitting
            # cannot tighten such a cell, so close it out (the gap that
            # remains is a genuine jump)
            w = l_eval(lcode, nextafter(au, -INFINITY),
                       nextafter(av, -INFINITY))
            skip = (w <= x) if weak else (w < x)
            if skip:
                if ub > resid:
                    resid = ub
                continue
            # each axis may be halved at most max_depth times
            du = u2 - u1 if ud < max_depth else -1.0
            dv = v2 - v1 if vd < max_depth else -1.0
            if du >= dv and du > 0.0:
                mid = 0.5 * (u1 + u2)
                if u1 < mid < u2:
                    _push(&s, u1, mid, v1, v2, ud + 1, vd)
                    _push(&s, mid, u2, v1, v2, ud + 1, vd)
                    continue
                du = -1.0
            if dv > 0.0:
                mid = 0.5 * (v1 + v2)
                if v1 < mid < v2:
                    _push(&s, u1, u2, v1, mid, ud, vd + 1)
                    _push(&s, u1, u2, mid, v2, ud, vd + 1)
                    continue
                dv = -1.0
            if du > 0.0:
                mid = 0.5 * (u1 + u2)
                if u1 < mid < u2:
                    _push(&s, u1, mid, v1, v2, ud + 1, vd)
                    _push(&s, mid, u2, v1, v2, ud + 1, vd)
                    continue
            if ub > resid:
                resid = ub

        hi = resid if resid > best else best
        return (best + 0.0, hi + 0.0)
    finally:
        PyMem_Free(s.data)
        PyMem_Free(buf)


# -- inf kernel -------------------------------------------------------------------


def point_inf(uxs, ustarts, uslopes, double utop, vxs, vstarts, vslopes,
              double vtop, int tcode, int lcode, double y, double tol,
              int max_depth):
    """Enclose ``inf{L(u(p), v(q)) : T(p, q) > y}`` over ``[0, 1]^2``."""
    cdef int nu = len(uxs)
    cdef int nv = len(vxs)
    cdef double* buf = <double*> PyMem_Malloc(
        (3 * nu + 3 * nv + 2) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* ux = buf
    cdef double* ua = buf + nu
    cdef double* ub_ = buf + 2 * nu
    cdef double* vx = buf + 3 * nu
    cdef double* va = buf + 3 * nu + nv
    cdef double* vb = buf + 3 * nu + 2 * nv

    cdef Stack s
    s.size = 0
    s.cap = 256
    s.data = <Cell*> PyMem_Malloc(s.cap * sizeof(Cell))
    if s.data == NULL:
        PyMem_Free(buf)
        raise MemoryError()

    cdef double best = INFINITY, floor_ = INFINITY, lo
    cdef double p1, p2, q1, q2, up1, vq1, up2, vq2, lb, cand, mid, dp, dq
    cdef int i, j, pd, qd, np_, nq_, pops

    try:
        _fill(uxs, ux)
        _fill(ustarts, ua)
        _fill(uslopes, ub_)
        _fill(vxs, vx)
        _fill(vstarts, va)
        _fill(vslopes, vb)

        if y >= 1.0:
            return (INFINITY, INFINITY)

        # close the grids at 1.0 like the pure kernel's pcuts/qcuts lists
        np_ = nu
        if ux[nu - 1] < 1.0:
            buf[3 * nu + 3 * nv] = 1.0
            np_ = nu + 1
        nq_ = nv
        if vx[nv - 1] < 1.0:
            buf[3 * nu + 3 * nv + 1] = 1.0
            nq_ = nv + 1

        for i in range(np_ - 1):
            p1 = ux[i]
            p2 = ux[i + 1] if i + 1 < nu else 1.0
            for j in range(nq_ - 1):
                q1 = vx[j]
                q2 = vx[j + 1] if j + 1 < nv else 1.0
                _push(&s, p1, p2, q1, q2, 0, 0)

        pops = 0
        while s.size > 0:
            if pops >= MAX_POPS:
                # out of budget: absorb the optimistic bound of every
                # remaining cell; the enclosure stays sound, just wider
                for i in range(s.size):
                    p1 = s.data[i].u1
                    p2 = s.data[i].u2
                    q1 = s.data[i].v1
                    q2 = s.data[i].v2
                    if t_eval(tcode, p2, q2) <= y:
                        continue
                    lb = l_eval(lcode,
                                _ql_val(ux, ua, ub_, nu, utop, p1),
                                _ql_val(vx, va, vb, nv, vtop, q1))
                    if lb < floor_:
                        floor_ = lb
                break
            pops += 1
            s.size -= 1
            p1 = s.data[s.size].u1
            p2 = s.data[s.size].u2
            q1 = s.data[s.size].v1
            q2 = s.data[s.size].v2
            pd = s.data[s.size].ud
            qd = s.data[s.size].vd
            if t_eval(tcode, p2, q2) <= y:
                continue  # even the richest corner fails the constraint
            up1 = _ql_val(ux, ua, ub_, nu, utop, p1)
            vq1 = _ql_val(vx, va, vb, nv, vtop, q1)
            lb = l_eval(lcode, up1, vq1)
            if lb >= best:
                continue
            if t_eval(tcode, p1, q1) > y:
                # the whole cell is feasible and u, v are right-continuous
                # increasing, so the min corner attains the cell's infimum
                best = lb
                continue
            up2 = _ql_val(ux, ua, ub_, nu, utop, p2)
            vq2 = _ql_val(vx, va, vb, nv, vtop, q2)
            cand = l_eval(lcode, up2, vq2)
            if cand < best:
                best = cand
            if t_eval(tcode, p1, q2) > y:
                cand = l_eval(lcode, up1, vq2)
                if cand < best:
                    best = cand
            if t_eval(tcode, p2, q1) > y:
                cand = l_eval(lcode, up2, vq1)
                if cand < best:
                    best = cand
            if lb >= best:
                continue
            if lb >= best - tol:
                if lb < floor_:
                    floor_ = lb
                continue
            # the corner limit from inside: when a point one ulp past
            # (p1, q1) still meets the constraint, the cell's infimum over
            # that approach is lb itself by right continuity of u, v and L
            # -- splitting cannot tighten such a cell, so close it out
            if t_eval(tcode, nextafter(p1, INFINITY),
                      nextafter(q1, INFINITY)) > y:
                if lb < floor_:
                    floor_ = lb
                continue
            # each axis may be halved at most max_depth times
            dp = p2 - p1 if pd < max_depth else -1.0
            dq = q2 - q1 if qd < max_depth else -1.0
            if dp >= dq and dp > 0.0:
                mid = 0.5 * (p1 + p2)
                if p1 < mid < p2:
                    _push(&s, mid, p2, q1, q2, pd + 1, qd)
                    _push(&s, p1, mid, q1, q2, pd + 1, qd)
                    continue
                dp = -1.0
            if dq > 0.0:
                mid = 0.5 * (q1 + q2)
                if q1 < mid < q2:
                    _push(&s, p1, p2, mid, q2, pd, qd + 1)
                    _push(&s, p1, p2, q1, mid, pd, qd + 1)
                    continue
                dq = -1.0
            if dp > 0.0:
                mid = 0.5 * (p1 + p2)
                if p1 < mid < p2:
                    _push(&s, mid, p2, q1, q2, pd + 1, qd)
                    _push(&s, p1, mid, q1, q2, pd + 1, qd)
                    continue
            if lb < floor_:
                floor_ = lb

        lo = floor_ if floor_ < best else best
        return (lo + 0.0, best + 0.0)
    finally:
        PyMem_Free(s.data)
        PyMem_Free(buf)
