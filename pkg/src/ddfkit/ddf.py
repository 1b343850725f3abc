"""Distance distribution functions and their generalized inverses.

A distance distribution function (d.d.f.) is a nondecreasing
``f : [0, inf] -> [0, 1]`` with ``f(0) = 0`` and ``f(inf) = 1`` that is
left-continuous on ``]0, inf[``.  Here they are finite piecewise-linear
:class:`~ddfkit.pl.PL` objects with ``side == LEFT``, ``top == inf``,
``v0 == 0`` and ``vtop == 1``; the left limit at infinity ``f(inf-)``
is the constant value of the unbounded last piece and may be below 1
("defective" functions put mass at infinity).

The two generalized inverses used throughout:

    qsup(f)(y) = sup{x : f(x) <= y} = inf{x : f(x) > y}      (right-continuous)
    qinf(f)(y) = sup{x : f(x) < y} = inf{x : f(x) >= y}      (left-continuous)

``qsup`` maps onto nondecreasing right-continuous ``[0,1] -> [0,inf]``
functions with ``v(1) = inf``, and ``from_qsup`` inverts it exactly.
"""

from __future__ import annotations

import math

from .pl import INF, INF_GEQ, LEFT, RIGHT, SUP_LEQ, PL

__all__ = [
    "make_ddf",
    "make_step",
    "bottom",
    "top",
    "is_ddf",
    "as_step",
    "qsup",
    "qinf",
    "from_qsup",
    "sup_of",
    "step_family",
    "dumps_ddf",
    "loads_ddf",
    "dumps_qcurve",
    "loads_qcurve",
]


def make_ddf(xs, starts, slopes):
    """Build a d.d.f. from breakpoints, piece values and slopes.

    The pieces must stay within ``[0, 1]``, reach a constant final piece,
    and be nondecreasing; the values at 0 and infinity are fixed to 0 and 1.
    """
    f = PL(tuple(xs), tuple(starts), tuple(slopes), INF, LEFT, 0.0, 1.0)
    _check_range(f)
    return f


def _check_range(f):
    for i in range(len(f.xs)):
        if f._piece_end(i) > 1.0 or f.starts[i] > 1.0:
            raise ValueError("a distribution function cannot exceed 1")
    return f


def is_ddf(f):
    """True iff ``f`` is a PL object satisfying every d.d.f. invariant."""
    if not isinstance(f, PL):
        return False
    if f.side != LEFT or f.top != INF or f.v0 != 0.0 or f.vtop != 1.0:
        return False
    try:
        _check_range(f)
    except ValueError:
        return False
    return True


def make_step(r, p):
    """The step function with jump of height ``p`` just after ``r``.

    Value 0 on ``[0, r]``, ``p`` on ``]r, inf[`` and 1 at infinity.  The
    degenerate cases ``r == inf`` and ``p == 0`` both give the least
    d.d.f. (0 below infinity).
    """
    if not 0.0 <= r <= INF or math.isnan(r):
        raise ValueError("step position must lie in [0, inf]")
    if not 0.0 <= p <= 1.0:
        raise ValueError("step height must lie in [0, 1]")
    if math.isinf(r) or p == 0.0:
        return make_ddf((0.0,), (0.0,), (0.0,))
    if r == 0.0:
        return make_ddf((0.0,), (p,), (0.0,))
    return make_ddf((0.0, r), (0.0, p), (0.0, 0.0))


def bottom():
    """Least d.d.f.: 0 everywhere below infinity."""
    return make_step(INF, 0.0)


def top():
    """Greatest d.d.f.: 1 everywhere above 0."""
    return make_step(0.0, 1.0)


def as_step(f):
    """``(r, p)`` if ``f`` is a step function, else ``None``.

    Degenerate steps normalize to ``(inf, 0.0)``.
    """
    c = f.canonical()
    if any(b != 0.0 for b in c.slopes):
        return None
    if len(c.xs) == 1:
        v = c.starts[0]
        return (INF, 0.0) if v == 0.0 else (0.0, v)
    if len(c.xs) == 2 and c.starts[0] == 0.0:
        return (c.xs[1], c.starts[1])
    return None


# -- generalized inverses ---------------------------------------------------


def qsup(f):
    """Right-continuous inverse ``y -> sup{x : f(x) <= y}`` on ``[0, 1]``."""
    return f.pseudo_inverse(SUP_LEQ, 1.0)


def qinf(f):
    """Left-continuous inverse ``y -> inf{x : f(x) >= y}`` on ``[0, 1]``."""
    return f.pseudo_inverse(INF_GEQ, 1.0)


def from_qsup(v):
    """Rebuild the d.d.f. whose right-continuous inverse is ``v``.

    ``v`` must be a nondecreasing right-continuous map ``[0,1] -> [0,inf]``
    with ``v(1) = inf``; the result is ``x -> inf{y : v(y) >= x}`` with the
    value at infinity reset to 1.
    """
    if v.side != RIGHT or v.top != 1.0:
        raise ValueError("expected a right-continuous function on [0, 1]")
    if not math.isinf(v.vtop):
        raise ValueError("an inverse of a d.d.f. is infinite at 1")
    w = v.pseudo_inverse(INF_GEQ, INF)
    f = PL(w.xs, w.starts, w.slopes, INF, LEFT, 0.0, 1.0)
    return _check_range(f)


def sup_of(fs):
    """Pointwise supremum of finitely many d.d.f.s (exact)."""
    fs = list(fs)
    if not fs:
        return bottom()
    out = fs[0]
    for f in fs[1:]:
        out = out.combine(f, "max")
    return out


def step_family(f):
    """The steps ``make_step(x, f(x+))``, one per breakpoint of ``f``.

    Right limits are used so each jump of ``f`` is captured whole.  The
    pointwise supremum of the family is a minorant of ``f`` that equals
    ``f`` whenever ``f`` is piecewise constant; refining with extra cut
    points tightens it towards ``f``.
    """
    return [make_step(x, f.limit_right(x)) for x in f.xs]


# -- plain-text formats -----------------------------------------------------


def _fmt(v):
    if math.isinf(v):
        return "inf"
    return repr(v)


def _parse_float(tok):
    if tok == "inf":
        return INF
    try:
        return float(tok)
    except ValueError:
        raise ValueError(f"bad number {tok!r}") from None


def _content_lines(text):
    """Strip comments and blanks, keeping original line numbers for errors."""
    pairs = ((i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1))
    return [(i, ln) for i, ln in pairs if ln and not ln.startswith("#")]


def dumps_ddf(f):
    """Serialize a d.d.f.; one ``piece xlo xhi start slope`` line per piece."""
    if not is_ddf(f):
        raise ValueError("only valid distribution functions are serializable")
    lines = ["ddf v1"]
    n = len(f.xs)
    for i in range(n):
        hi = f.xs[i + 1] if i + 1 < n else INF
        lines.append(
            f"piece {_fmt(f.xs[i])} {_fmt(hi)} {_fmt(f.starts[i])} {_fmt(f.slopes[i])}"
        )
    return "\n".join(lines) + "\n"


def loads_ddf(text):
    lines = _content_lines(text)
    if not lines or lines[0][1] != "ddf v1":
        no = lines[0][0] if lines else 1
        raise ValueError(f"line {no}: expected a 'ddf v1' header")
    xs, starts, slopes = [], [], []
    prev_hi = 0.0
    for no, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 5 or parts[0] != "piece":
            raise ValueError(f"line {no}: bad line {ln!r}")
        try:
            xlo, xhi, a, b = (_parse_float(t) for t in parts[1:])
        except ValueError as exc:
            raise ValueError(f"line {no}: {exc}") from None
        if xlo != prev_hi:
            raise ValueError(f"line {no}: pieces must tile [0, inf] in order")
        if not xlo < xhi:
            raise ValueError(f"line {no}: pieces must have positive width")
        xs.append(xlo)
        starts.append(a)
        slopes.append(b)
        prev_hi = xhi
    if not math.isinf(prev_hi):
        raise ValueError("the last piece must extend to inf")
    return make_ddf(xs, starts, slopes)


def dumps_qcurve(v):
    """Serialize a generalized inverse (values may be ``inf``)."""
    if v.top != 1.0:
        raise ValueError("inverse curves live on [0, 1]")
    lines = [f"qcurve v1 side={v.side}"]
    n = len(v.xs)
    for i in range(n):
        hi = v.xs[i + 1] if i + 1 < n else 1.0
        lines.append(
            f"piece {_fmt(v.xs[i])} {_fmt(hi)} {_fmt(v.starts[i])} {_fmt(v.slopes[i])}"
        )
    lines.append(f"at0 {_fmt(v.v0)}")
    lines.append(f"at1 {_fmt(v.vtop)}")
    return "\n".join(lines) + "\n"


def loads_qcurve(text):
    lines = _content_lines(text)
    if not lines or not lines[0][1].startswith("qcurve v1 side="):
        no = lines[0][0] if lines else 1
        raise ValueError(f"line {no}: expected a 'qcurve v1' header")
    side = lines[0][1].split("side=", 1)[1]
    xs, starts, slopes = [], [], []
    v0 = vtop = None
    prev_hi = 0.0
    for no, ln in lines[1:]:
        parts = ln.split()
        try:
            if parts[0] == "at0" and len(parts) == 2:
                v0 = _parse_float(parts[1])
            elif parts[0] == "at1" and len(parts) == 2:
                vtop = _parse_float(parts[1])
            elif parts[0] == "piece" and len(parts) == 5:
                xlo, xhi, a, b = (_parse_float(t) for t in parts[1:])
                if xlo != prev_hi:
                    raise ValueError("pieces must tile [0, 1] in order")
                xs.append(xlo)
                starts.append(a)
                slopes.append(b)
                prev_hi = xhi
            else:
                raise ValueError(f"bad line {ln!r}")
        except ValueError as exc:
            msg = str(exc)
            if not msg.startswith("line "):
                msg = f"line {no}: {msg}"
            raise ValueError(msg) from None
    if prev_hi != 1.0 or v0 is None or vtop is None:
        raise ValueError("incomplete curve")
    return PL(tuple(xs), tuple(starts), tuple(slopes), 1.0, side, v0, vtop)
