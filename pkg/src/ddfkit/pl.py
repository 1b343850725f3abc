"""Monotone piecewise-linear functions on ``[0, top]`` with one-sided continuity.

Everything in this package that is "exact" reduces to the little algebra of
functions implemented here: nondecreasing piecewise-linear maps whose value
may be ``inf`` on a tail, tagged with the side on which each piece is closed.

A :class:`PL` with ``side == LEFT`` assigns piece ``i`` to the interval
``]xs[i], xs[i+1]]`` (the function is left-continuous inside its pieces and
every jump happens *just after* a breakpoint); with ``side == RIGHT`` piece
``i`` owns ``[xs[i], xs[i+1][``.  The value at ``0`` and at ``top`` is stored
explicitly, so jumps at either end of the domain are representable.

No tolerances appear in this module.  Operations (pointwise max / min / sum,
canonical form, generalized inverses) are closed-form manipulations of the
breakpoint data, and two functions are equal as functions iff their canonical
forms compare equal field by field.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, replace

INF = math.inf

LEFT = "left"
RIGHT = "right"

SUP_LEQ = "sup_leq"
INF_GEQ = "inf_geq"


def _norm(v):
    # collapse -0.0 to +0.0 so serialization and equality are stable
    return float(v) + 0.0


def _monotone_repair(xs, starts, slopes, top, vcap):
    """Clamp ulp-level overshoots left behind by crossing arithmetic.

    Pointwise combinations are nondecreasing in exact arithmetic, but a
    crossing breakpoint is computed by division and the pieces it splits
    can overshoot the exact anchor of the next cell by a few ulps.  The
    anchors themselves are exact, so the repair only ever *lowers* a
    computed piece end onto the following anchor (never raises anything).
    Mutates the lists in place; processed back to front so fixes cascade.
    """
    n = len(xs)
    for i in range(n - 1, -1, -1):
        cap = starts[i + 1] if i + 1 < n else vcap
        if math.isinf(cap) or math.isinf(starts[i]):
            continue
        if starts[i] > cap:
            starts[i] = cap
        if slopes[i] == 0.0:
            continue
        hi_x = xs[i + 1] if i + 1 < n else top
        if math.isinf(hi_x):
            continue
        w = hi_x - xs[i]
        while starts[i] + slopes[i] * w > cap:
            slopes[i] = math.nextafter(slopes[i], 0.0)


def _weld_width(v):
    """Gaps up to this size at value scale ``v`` count as rounding, not jumps."""
    return 4.0 * math.ulp(max(1.0, abs(v)))


def _weld_gaps(xs, starts, slopes, jump_free):
    """Close ulp-level undershoots left behind by crossing arithmetic.

    The mirror image of :func:`_monotone_repair`: a rising piece whose
    interpolated end lands a few ulps *below* the exact anchor of the next
    cell would read back as a spurious jump.  Where ``jump_free(x)``
    vouches that no operand genuinely jumps at ``x``, the slope is renudged
    so the piece end meets the anchor bit-exactly.  Anchors are never
    touched, so the adjustment cannot cascade.  Mutates the lists in place.
    """
    for i in range(len(xs) - 1):
        b = slopes[i]
        nxt = starts[i + 1]
        if b <= 0.0 or math.isinf(starts[i]) or not nxt < 1e250:
            continue
        dx = xs[i + 1] - xs[i]
        gap = nxt - (starts[i] + b * dx)
        if not 0.0 < gap <= _weld_width(nxt) or not jump_free(xs[i + 1]):
            continue
        b = (nxt - starts[i]) / dx
        for _ in range(8):
            v = starts[i] + b * dx
            if v == nxt:
                slopes[i] = b
                break
            b = math.nextafter(b, INF if v < nxt else 0.0)


def _end_anchored(end, b, dx):
    """Anchor value ``a >= 0`` with ``a + b * dx`` rounding exactly to ``end``.

    Crossing breakpoints are generally not representable, so a piece that
    mathematically ends at an exactly-known value would drift by an ulp if
    anchored naively; nudging the anchor restores the exact end value.
    """
    a = max(end - b * dx, 0.0)
    for _ in range(8):
        v = a + b * dx
        if v == end:
            return a
        a = math.nextafter(a, -INF if v > end else INF)
        if a < 0.0:
            break
    return max(end - b * dx, 0.0)


@dataclass(frozen=True)
class PL:
    """A nondecreasing piecewise-linear function on ``[0, top]``.

    Fields
    ------
    xs:      breakpoints; finite, strictly increasing, ``xs[0] == 0``.
    starts:  value of piece ``i`` at its anchor ``xs[i]`` (taken as a right
             limit when ``side == LEFT``).  May be ``inf`` (slope must be 0).
    slopes:  nonnegative finite slopes.
    top:     right end of the domain; ``inf`` or a finite float.
    side:    ``LEFT`` or ``RIGHT`` -- which end of each cell a piece owns.
    v0:      value at 0 (must equal ``starts[0]`` when ``side == RIGHT``).
    vtop:    value at ``top``.
    """

    xs: tuple
    starts: tuple
    slopes: tuple
    top: float
    side: str
    v0: float
    vtop: float

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(_norm(x) for x in self.xs))
        object.__setattr__(self, "starts", tuple(_norm(a) for a in self.starts))
        object.__setattr__(self, "slopes", tuple(_norm(b) for b in self.slopes))
        object.__setattr__(self, "top", _norm(self.top))
        object.__setattr__(self, "v0", _norm(self.v0))
        object.__setattr__(self, "vtop", _norm(self.vtop))
        self._validate()

    # -- construction-time checks ------------------------------------------

    def _validate(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"bad side {self.side!r}")
        n = len(self.xs)
        if n == 0 or len(self.starts) != n or len(self.slopes) != n:
            raise ValueError("xs/starts/slopes must be nonempty and equally long")
        if self.xs[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        for i in range(n - 1):
            if not self.xs[i] < self.xs[i + 1]:
                raise ValueError("breakpoints must be strictly increasing")
        if not self.xs[-1] < self.top:
            raise ValueError("last breakpoint must lie below top")
        if any(math.isinf(x) or math.isnan(x) for x in self.xs):
            raise ValueError("breakpoints must be finite")
        for a, b in zip(self.starts, self.slopes):
            if math.isnan(a) or a < 0.0:
                raise ValueError("piece values must be >= 0")
            if not (0.0 <= b < INF):
                raise ValueError("slopes must be finite and >= 0")
            if math.isinf(a) and b != 0.0:
                raise ValueError("an infinite piece must have slope 0")
        if math.isinf(self.top) and self.slopes[-1] != 0.0:
            raise ValueError("the unbounded last piece must be constant")
        # monotone across pieces
        for i in range(n - 1):
            if self._piece_end(i) > self.starts[i + 1]:
                raise ValueError("pieces must be nondecreasing across breakpoints")
        last_end = self._piece_end(n - 1)
        if self.side == LEFT:
            if self.v0 > self.starts[0]:
                raise ValueError("v0 must not exceed the first piece value")
            if math.isfinite(self.top):
                if self.vtop != last_end:
                    raise ValueError("a left-continuous function determines vtop")
            elif self.vtop < last_end:
                raise ValueError("vtop must dominate the tail value")
        else:
            if self.v0 != self.starts[0]:
                raise ValueError("a right-continuous function determines v0")
            if self.vtop < last_end:
                raise ValueError("vtop must dominate the last piece")

    # -- basic queries ------------------------------------------------------

    def _piece_end(self, i):
        """Limit of piece ``i`` at its right end."""
        right = self.xs[i + 1] if i + 1 < len(self.xs) else self.top
        a, b = self.starts[i], self.slopes[i]
        if b == 0.0:
            return a
        return a + b * (right - self.xs[i])

    def piece_index(self, x):
        """Index of the piece whose cell contains ``x`` (0 < x < top)."""
        if self.side == LEFT:
            return bisect_left(self.xs, x) - 1
        return bisect_right(self.xs, x) - 1

    def value(self, x):
        """f(x) for ``x`` in ``[0, top]``."""
        if x == self.top:
            return self.vtop
        if x == 0.0:
            return self.v0 if self.side == LEFT else self.starts[0]
        if not 0.0 < x < self.top:
            raise ValueError(f"{x} outside domain [0, {self.top}]")
        i = self.piece_index(x)
        a, b = self.starts[i], self.slopes[i]
        if b == 0.0 or x == self.xs[i]:
            return a
        return a + b * (x - self.xs[i])

    def limit_right(self, x):
        """lim_{t -> x+} f(t) for ``x`` in ``[0, top[``."""
        if not 0.0 <= x < self.top:
            raise ValueError(f"no right limit at {x}")
        i = bisect_right(self.xs, x) - 1
        a, b = self.starts[i], self.slopes[i]
        if b == 0.0 or x == self.xs[i]:
            return a
        return a + b * (x - self.xs[i])

    def limit_left(self, x):
        """lim_{t -> x-} f(t) for ``x`` in ``]0, top]``."""
        if not 0.0 < x <= self.top:
            raise ValueError(f"no left limit at {x}")
        if x == self.top:
            return self._piece_end(len(self.xs) - 1)
        i = bisect_left(self.xs, x) - 1
        a, b = self.starts[i], self.slopes[i]
        if b == 0.0:
            return a
        return a + b * (x - self.xs[i])

    @property
    def tail_value(self):
        """Left limit at ``top`` (for distribution functions: f(inf-))."""
        return self._piece_end(len(self.xs) - 1)

    def jump_at(self, x):
        """Size of the jump at ``x``; 0 at continuity points.

        Reads the one-sided limits of the finite representation, so anchor
        values an ulp apart count as a jump of that ulp.
        """
        if self.side == LEFT:
            return self.limit_right(x) - self.value(x)
        return self.value(x) - self.limit_left(x)

    # -- canonical form and equality ---------------------------------------

    def canonical(self):
        """Merge redundant breakpoints; result represents the same function."""
        xs, starts, slopes = [self.xs[0]], [self.starts[0]], [self.slopes[0]]
        for i in range(1, len(self.xs)):
            x, a, b = self.xs[i], self.starts[i], self.slopes[i]
            prev_end = (
                starts[-1]
                if slopes[-1] == 0.0
                else starts[-1] + slopes[-1] * (x - xs[-1])
            )
            if b == slopes[-1] and a == prev_end:
                continue
            xs.append(x)
            starts.append(a)
            slopes.append(b)
        return PL(
            tuple(xs), tuple(starts), tuple(slopes),
            self.top, self.side, self.v0, self.vtop,
        )

    def same_function(self, other):
        """True iff both represent the same function (same side and domain)."""
        return self.canonical() == other.canonical()

    # -- pointwise combinations --------------------------------------------

    def _anchor(self, x):
        """Value of the piece active on the cell just right of ``x``."""
        return self.limit_right(x)

    def _slope_after(self, x):
        i = bisect_right(self.xs, x) - 1
        return self.slopes[i]

    def merged_grid(self, other):
        if self.side != other.side or self.top != other.top:
            raise ValueError("operands live on different domains")
        return sorted(set(self.xs) | set(other.xs))

    def combine(self, other, op):
        """Pointwise ``max``, ``min`` or ``plus`` of two functions.

        Crossings of ``max``/``min`` operands are inserted as new
        breakpoints, so the result is again piecewise linear and exact.
        """
        grid = self.merged_grid(other)
        cells = list(zip(grid, grid[1:] + [self.top]))
        xs, starts, slopes = [], [], []

        def emit(x, a, b):
            xs.append(x)
            starts.append(a)
            slopes.append(b)

        for p, q in cells:
            au, bu = self._anchor(p), self._slope_after(p)
            av, bv = other._anchor(p), other._slope_after(p)
            if math.isinf(au) or math.isinf(av):
                if op == "min":
                    if math.isinf(au):
                        emit(p, av, bv)
                    else:
                        emit(p, au, bu)
                else:
                    emit(p, INF, 0.0)
                continue
            if op == "plus":
                emit(p, au + av, bu + bv)
                continue
            width = q - p
            d0 = au - av
            if math.isinf(width):
                d1 = d0  # the unbounded cell is constant (validated)
            else:
                d1 = (au + bu * width) - (av + bv * width)
            pick_u = (d0 >= 0.0) if op == "max" else (d0 <= 0.0)
            pick_u_end = (d1 >= 0.0) if op == "max" else (d1 <= 0.0)
            if pick_u and pick_u_end:
                emit(p, au, bu)
            elif not pick_u and not pick_u_end:
                emit(p, av, bv)
            else:
                t = p + (av - au) / (bu - bv)
                if t <= p:
                    # tie at the left edge: the end-dominant piece owns the cell
                    if pick_u_end:
                        emit(p, au, bu)
                    else:
                        emit(p, av, bv)
                elif t >= q:
                    if pick_u:
                        emit(p, au, bu)
                    else:
                        emit(p, av, bv)
                else:
                    # the overtaking line ends the cell; anchor its piece so
                    # that the value at the cell edge is bit-exact
                    if pick_u:
                        emit(p, au, bu)
                        emit(t, _end_anchored(av + bv * width, bv, q - t), bv)
                    else:
                        emit(p, av, bv)
                        emit(t, _end_anchored(au + bu * width, bu, q - t), bu)

        def cmb(a, b):
            if op == "plus":
                return a + b
            return max(a, b) if op == "max" else min(a, b)

        if self.side == LEFT and math.isfinite(self.top):
            vcap = INF  # vtop is derived from the last piece afterwards
        else:
            vcap = cmb(self.vtop, other.vtop)
        _monotone_repair(xs, starts, slopes, self.top, vcap)

        def artifact_only(x):
            # a residual gap is a seam unless an operand genuinely jumps here
            return (self.jump_at(x) <= _weld_width(self.value(x))
                    and other.jump_at(x) <= _weld_width(other.value(x)))

        _weld_gaps(xs, starts, slopes, artifact_only)
        if self.side == LEFT and math.isfinite(self.top):
            last = len(xs) - 1
            vtop = starts[last] + slopes[last] * (self.top - xs[last])
        else:
            vtop = vcap
        if self.side == LEFT:
            v0 = min(cmb(self.v0, other.v0), starts[0])
        else:
            v0 = starts[0]
        out = PL(
            tuple(xs), tuple(starts), tuple(slopes),
            self.top, self.side, v0, vtop,
        )
        return out.canonical()

    def pointwise_leq(self, other, tol=0.0):
        """Check ``self(x) <= other(x) + tol`` for all ``x``.

        With the default ``tol == 0`` the check is exact; pass a small
        tolerance when an operand came out of a ramp crossing, whose
        breakpoint is rounded to float64 and can shift values by ulps.
        """
        if self.side != other.side or self.top != other.top:
            raise ValueError("operands live on different domains")

        def leq(a, b):
            return a <= b or a - b <= tol

        if self.side == LEFT and not leq(self.v0, other.v0):
            return False
        if not leq(self.vtop, other.vtop):
            return False
        grid = self.merged_grid(other)
        for p, q in zip(grid, grid[1:] + [self.top]):
            au, bu = self._anchor(p), self._slope_after(p)
            av, bv = other._anchor(p), other._slope_after(p)
            if not leq(au, av):
                return False
            if math.isinf(av):
                continue
            width = q - p
            if math.isinf(width):
                continue  # the unbounded cell is constant (validated)
            if not leq(au + bu * width, av + bv * width):
                return False
        return True

    def sup_distance(self, other):
        """sup |self - other| over the domain (inf-aware; exact)."""
        if self.side != other.side or self.top != other.top:
            raise ValueError("operands live on different domains")
        best = 0.0

        def gap(a, b):
            if math.isinf(a) and math.isinf(b):
                return 0.0
            return abs(a - b)

        if self.side == LEFT:
            best = max(best, gap(self.v0, other.v0))
        best = max(best, gap(self.vtop, other.vtop))
        grid = self.merged_grid(other)
        for p, q in zip(grid, grid[1:] + [self.top]):
            au, bu = self._anchor(p), self._slope_after(p)
            av, bv = other._anchor(p), other._slope_after(p)
            best = max(best, gap(au, av))
            if math.isinf(au) or math.isinf(av) or math.isinf(q):
                continue
            w = q - p
            best = max(best, gap(au + bu * w, av + bv * w))
        return best

    # -- regularizations -----------------------------------------------------

    def lower_reg(self):
        """Largest left-continuous minorant (sup of values strictly below).

        The piece data is unchanged; only the endpoint values move: the
        value at 0 becomes 0 (empty sup) and the value at ``top`` becomes
        the left limit there.
        """
        return PL(
            self.xs, self.starts, self.slopes,
            self.top, LEFT, 0.0, self.tail_value,
        )

    def upper_reg(self, cod_top):
        """Smallest right-continuous majorant; ``cod_top`` is inf over the
        empty set (the top of the codomain, e.g. ``1`` or ``inf``)."""
        return PL(
            self.xs, self.starts, self.slopes,
            self.top, RIGHT, self.starts[0], cod_top,
        )

    # -- generalized inverses ------------------------------------------------

    def essential_vertices(self):
        """The graph of the function away from endpoint conventions.

        Returns the monotone polyline from ``(0, f(0+))`` to
        ``(top, f(top-))``; vertical edges are jumps, horizontal edges are
        plateaus.  The values *at* 0 and ``top`` do not appear: generalized
        inverses are insensitive to them.
        """
        verts = [(0.0, self.starts[0])]
        n = len(self.xs)
        for i in range(n):
            if i > 0 and self.starts[i] != verts[-1][1]:
                verts.append((self.xs[i], self.starts[i]))
            right = self.xs[i + 1] if i + 1 < n else self.top
            end = self._piece_end(i)
            if (right, end) != verts[-1]:
                verts.append((right, end))
        return verts

    def pseudo_inverse(self, mode, out_top):
        """Generalized inverse onto ``[0, out_top]``.

        ``mode == SUP_LEQ``:  y  |->  sup{x : f(x) <= y}   (right-continuous)
        ``mode == INF_GEQ``:  y  |->  inf{x : f(x) >= y}   (left-continuous)

        with sup over the empty set = 0 and inf over the empty set = top.
        """
        if mode not in (SUP_LEQ, INF_GEQ):
            raise ValueError(f"bad mode {mode!r}")
        verts = self.essential_vertices()
        segs = []  # (ylo, yhi, value at ylo, slope)
        y_first = verts[0][1]
        if y_first > 0.0:
            segs.append((0.0, min(y_first, out_top), 0.0, 0.0))
        for (x1, ya), (x2, yb) in zip(verts, verts[1:]):
            if yb == ya:
                continue  # plateau: becomes a jump of the inverse
            ylo, yhi = ya, yb
            if ylo >= out_top:
                break
            yhi = min(yhi, out_top)
            if x2 == x1:
                segs.append((ylo, yhi, x1, 0.0))
            elif math.isinf(yb):
                raise AssertionError("ramp to infinity cannot occur")
            else:
                segs.append((ylo, yhi, x1, (x2 - x1) / (yb - ya)))
        reach = verts[-1][1]
        if reach < out_top:
            segs.append((reach, out_top, self.top, 0.0))

        if not segs:
            # constant function filling the whole output range
            segs = [(0.0, out_top, 0.0 if mode == SUP_LEQ else self.top, 0.0)]

        xs = [s[0] for s in segs]
        starts = [s[2] for s in segs]
        slopes = [s[3] for s in segs]
        # inverse slopes come from a division, so piece ends can overshoot
        # the next (exact) anchor by an ulp; clamp as in combine()
        if mode == SUP_LEQ:
            _monotone_repair(xs, starts, slopes, out_top, self.top)
            return PL(
                tuple(xs), tuple(starts), tuple(slopes),
                out_top, RIGHT, starts[0], self.top,
            )
        _monotone_repair(xs, starts, slopes, out_top, INF)
        if math.isinf(out_top):
            vtop = starts[-1]
        else:
            vtop = starts[-1] + slopes[-1] * (out_top - xs[-1])
        return PL(tuple(xs), tuple(starts), tuple(slopes), out_top, LEFT, 0.0, vtop)
