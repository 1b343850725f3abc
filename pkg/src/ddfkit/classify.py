"""Membership of distribution functions in the nested regularity classes.

The classes form a chain

    strict  <=  continuous  <=  continuous on ]0, inf]  <=  non-defective
    (d_plus_sc)   (d_plus_c)        (d_plus_0)               (d_plus)

inside the set of all distance distribution functions (``delta_plus``).
Classification is exact on piecewise-linear functions: defectiveness is the
last piece's value, jumps and plateaus are read off the canonical form.  On
:class:`~ddfkit.engine.BoundedCurve` enclosures each membership is
three-valued -- ``holds`` / ``fails`` / ``undecided`` -- and follows the
evidence rules

* a jump is asserted only where a short chain of rows on consecutive
  floats leaves a gap larger than the tolerance between the lower bound
  above and the upper bound below (smaller gaps are indistinguishable
  from slope);
* a plateau is asserted only where a later row's upper bound does not exceed
  an earlier row's lower bound (the function is pinned constant in between);
* continuity is asserted only when the envelope width is within tolerance,
  and so certifies the absence of jumps above that size, not of all jumps.

Strictness of a finite representation is read in the finitary sense: the
function must be continuous, climb with strictly positive slope wherever its
value is below 1, and actually reach 1.
"""

import math
from dataclasses import dataclass

from .ddf import is_ddf
from .engine import BoundedCurve
from .pl import INF, PL

HOLDS = "holds"
FAILS = "fails"
UNDECIDED = "undecided"

CLASS_ORDER = ("delta_plus", "d_plus", "d_plus_0", "d_plus_c", "d_plus_sc")


@dataclass(frozen=True)
class Membership:
    status: str
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.status == HOLDS


@dataclass(frozen=True)
class DDFClass:
    delta_plus: Membership
    d_plus: Membership
    d_plus_0: Membership
    d_plus_c: Membership
    d_plus_sc: Membership
    tolerance: float = 0.0  # 0 for exact, syntactic classification

    def __getitem__(self, name):
        if name not in CLASS_ORDER:
            raise KeyError(name)
        return getattr(self, name)

    def statuses(self):
        return tuple(self[name].status for name in CLASS_ORDER)

    def smallest(self):
        """Name of the smallest class that still holds, or None."""
        found = None
        for name in CLASS_ORDER:
            if self[name].status == HOLDS:
                found = name
        return found

    def summary(self):
        parts = []
        for name in CLASS_ORDER:
            m = self[name]
            mark = {HOLDS: "+", FAILS: "-", UNDECIDED: "?"}[m.status]
            parts.append(f"{name}{mark}")
        return " ".join(parts)


def _fails(witness, detail):
    return Membership(FAILS, witness, detail)


def _under(parent, own):
    """Combine a parent-class verdict with this class's extra condition."""
    for m in (parent, own):
        if m.status == FAILS:
            return m
    for m in (parent, own):
        if m.status == UNDECIDED:
            return m
    return own


# -- exact classification of piecewise-linear functions ---------------------------


def _piece_end(g, i):
    if i + 1 < len(g.xs):
        return g.starts[i] + g.slopes[i] * (g.xs[i + 1] - g.xs[i])
    return g.starts[i]  # the unbounded last piece is constant


def _classify_pl(f):
    if not is_ddf(f):
        bad = _fails(None, "not a distance distribution function")
        return DDFClass(bad, bad, bad, bad, bad)
    g = f.canonical()
    delta = Membership(HOLDS, None, "validated distribution function")

    tail = g.tail_value
    if tail == 1.0:
        d_plus = Membership(HOLDS, None, "reaches 1 before infinity")
    else:
        d_plus = _fails(("tail", tail, tail), f"defective: limit {tail!r} < 1")

    interior = None
    for i in range(len(g.xs) - 1):
        end = _piece_end(g, i)
        nxt = g.starts[i + 1]
        if end < nxt:
            interior = ("jump", g.xs[i + 1], g.xs[i + 1], nxt - end)
            break
    own0 = (_fails(interior, f"jump of {interior[3]!r} at {interior[1]!r}")
            if interior else Membership(HOLDS))
    d_plus_0 = _under(d_plus, own0)

    if g.starts[0] > 0.0:
        ownc = _fails(("jump", 0.0, 0.0, g.starts[0]),
                      f"jump of {g.starts[0]!r} at 0")
    else:
        ownc = Membership(HOLDS)
    d_plus_c = _under(d_plus_0, ownc)

    owns = Membership(HOLDS)
    for i in range(len(g.xs)):
        if g.starts[i] < 1.0 and g.slopes[i] == 0.0:
            hi = g.xs[i + 1] if i + 1 < len(g.xs) else INF
            owns = _fails(("plateau", g.xs[i], hi, g.starts[i]),
                          f"constant at {g.starts[i]!r} on "
                          f"[{g.xs[i]!r}, {hi!r}]")
            break
    d_plus_sc = _under(d_plus_c, owns)

    return DDFClass(delta, d_plus, d_plus_0, d_plus_c, d_plus_sc)


# -- certified evidence on enclosure curves ----------------------------------------


def certified_jumps(curve, threshold=0.0, span=3):
    """Jumps provable from the rows of an enclosure curve.

    Returns tuples ``(x_left, x_right, size)``: the function rises by at
    least ``size`` between two abscissae that are at most ``span`` floats
    apart, every row in between being one ulp from the next.  Only gaps
    above ``threshold`` are reported: an exact row pair one ulp apart on a
    continuous ramp still shows a gap of slope times ulp, so a tiny
    positive gap is evidence of slope, not of a discontinuity.  Allowing a
    chain instead of a single pair matters right of a tear interior to the
    search region: the first float past the tear has no floating-point
    witness for the climbed value even though every real just below it
    does, so that one row stays wide and the gap only closes against the
    row two ulps out.  A chain of ``k`` adjacent rows certifies at
    effective slope ``threshold / (k * ulp)`` instead of
    ``threshold / ulp`` -- the same calibration up to the small factor.
    """
    out = []
    xs, lows, highs = curve.xs, curve.lows, curve.highs
    n = len(xs)
    last = 0  # rows before this index are consumed by an earlier report
    for b in range(1, n):
        if math.isinf(xs[b]):
            continue
        # tightest pair: the largest a < b whose chain up to b is
        # consecutively ulp-adjacent and whose gap clears the threshold
        found = None
        a = b
        while a > last and b - a < span \
                and math.nextafter(xs[a - 1], INF) == xs[a]:
            a -= 1
            if lows[b] - highs[a] > threshold:
                found = a
                break
        if found is not None:
            out.append((xs[found], xs[b], lows[b] - highs[found]))
            last = b - 1  # a later jump may still start at row b
    return out


def certified_plateaus(curve):
    """Constant stretches provable from the rows.

    Returns tuples ``(x1, x2, value)`` where monotonicity pins the function
    to a single value on ``[x1, x2]`` and the stretch contains interior
    floats (an ulp-wide stretch is no evidence of a plateau).
    """
    out = []
    xs, lows, highs = curve.xs, curve.lows, curve.highs
    i = 0
    n = len(xs)
    while i < n - 1:
        j = i + 1
        while (j < n and not math.isinf(xs[j])
               and highs[j] <= lows[i]):
            j += 1
        j -= 1
        if j > i and math.nextafter(xs[i], INF) < xs[j]:
            out.append((xs[i], xs[j], lows[i]))
            i = j
        else:
            i += 1
    return out


def _classify_curve(c, tol):
    delta = Membership(HOLDS, None, "enclosure of a distribution function")

    tail_lo, tail_hi = c.tail
    if tail_lo >= 1.0:
        d_plus = Membership(HOLDS, None, "tail bound reaches 1")
    elif tail_hi < 1.0:
        d_plus = _fails(("tail", tail_lo, tail_hi),
                        f"defective: limit <= {tail_hi!r} < 1")
    else:
        d_plus = Membership(UNDECIDED, ("tail", tail_lo, tail_hi),
                            "tail enclosure straddles 1")

    jumps = certified_jumps(c, threshold=tol)
    width = c.width()
    interior = next((j for j in jumps if j[0] > 0.0), None)
    if interior is not None:
        own0 = _fails(("jump",) + interior,
                      f"jump of at least {interior[2]!r} at {interior[1]!r}")
    elif width <= tol:
        own0 = Membership(HOLDS, None, f"envelope width {width!r} within tolerance")
    else:
        own0 = Membership(UNDECIDED, ("width", width),
                          f"envelope width {width!r} exceeds tolerance")
    d_plus_0 = _under(d_plus, own0)

    zero = next((j for j in jumps if j[0] == 0.0), None)
    if zero is not None:
        ownc = _fails(("jump",) + zero,
                      f"jump of at least {zero[2]!r} at 0")
    else:
        x0p = math.nextafter(0.0, INF)
        hi0 = c.bounds(x0p)[1] if c.xs and c.xs[0] <= x0p else c.bounds(c.xs[0])[1]
        if hi0 <= tol:
            ownc = Membership(HOLDS, None, f"value just past 0 at most {hi0!r}")
        else:
            ownc = Membership(UNDECIDED, ("origin", hi0),
                              f"value just past 0 only bounded by {hi0!r}")
    d_plus_c = _under(d_plus_0, ownc)

    plateaus = [p for p in certified_plateaus(c) if p[2] < 1.0]
    if plateaus:
        p = plateaus[0]
        owns = _fails(("plateau",) + p,
                      f"constant at {p[2]!r} on [{p[0]!r}, {p[1]!r}]")
    else:
        owns = Membership(HOLDS, None, "no certified plateau below 1")
    d_plus_sc = _under(d_plus_c, owns)

    return DDFClass(delta, d_plus, d_plus_0, d_plus_c, d_plus_sc,
                    tolerance=tol)


def classify(f, tolerance=1e-3):
    """Class memberships of ``f`` (a distribution function or an enclosure).

    Piecewise-linear input is classified exactly; enclosure input gets
    three-valued verdicts at ``tolerance`` following the module's evidence
    rules.  The result never violates the class chain.
    """
    if isinstance(f, PL):
        return _classify_pl(f)
    if isinstance(f, BoundedCurve):
        if not tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        return _classify_curve(f, tolerance)
    raise TypeError("classify expects a PL distribution function or a BoundedCurve")
