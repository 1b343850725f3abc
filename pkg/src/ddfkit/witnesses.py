"""Deterministic counterexample constructions for the closure results.

Each constructor turns a structural defect of a distance operation (a
finite plateau, a zero divisor, a cancellation failure) into concrete
distribution functions whose tensor leaves a regularity class:

* :func:`witness_thm38` — a plateau below infinity separates the strict
  construction from the weak one on a pair of unit steps;
* :func:`witness_thm42` — a zero divisor makes the tensor of a strict
  non-defective function with itself defective;
* :func:`witness_prop43` — a t-norm that is only left-continuous tears a
  jump into the tensor of two perfectly tame inputs;
* :func:`witness_prop44` — a finite plateau maps two continuous two-ramp
  functions onto an output with a jump;
* :func:`witness_thm49` — a cancellation failure does the same with one
  jumpy but non-defective input.

Constructors validate their inputs by re-evaluating the operation and
raise ``ValueError`` when the supplied points do not exhibit the claimed
defect.  The guarantee clauses (how the tensor output misbehaves) are
re-checked against the engine in the experiment layer and the test suite.

Ramps are anchored: slopes are nudged by ulps so that every seam value
(``y0``, ``1.0``) is attained exactly in float arithmetic, which keeps the
constructed functions exactly continuous for the classifier.
"""

import math

from .ddf import make_ddf, make_step
from .falsify import Witness, falsify
from .ops import parse_lop
from .pl import INF

__all__ = [
    "witness_thm38",
    "witness_thm42",
    "witness_prop43",
    "witness_prop44",
    "witness_thm49",
]


def _as_lop(op):
    if isinstance(op, str):
        return parse_lop(op)
    return op


def _points(witness, n, kind):
    if isinstance(witness, Witness):
        pts = witness.points
    else:
        pts = tuple(witness)
    if len(pts) != n:
        raise ValueError(f"a {kind} witness needs {n} points, got {len(pts)}")
    return tuple(float(p) for p in pts)


def _anchored_slope(v0, v1, x0, x1):
    """Slope ``b`` with ``v0 + b * (x1 - x0)`` rounding exactly to ``v1``."""
    dx = x1 - x0
    b = (v1 - v0) / dx
    for _ in range(64):
        end = v0 + b * dx
        if end == v1:
            return b
        b = math.nextafter(b, INF if end < v1 else -INF)
    raise ArithmeticError(
        f"cannot anchor a ramp from {v0!r} at {x0!r} to {v1!r} at {x1!r}")


def _two_ramp(a, b, y0):
    """Continuous: 0 at 0, ``y0`` at ``a``, 1 at ``b``, then constant 1."""
    return make_ddf(
        (0.0, a, b),
        (0.0, y0, 1.0),
        (_anchored_slope(0.0, y0, 0.0, a), _anchored_slope(y0, 1.0, a, b), 0.0),
    )


def witness_thm38(op, witness=None, budget=100_000, seed=0):
    """Unit steps separating the weak and strict constructions.

    ``witness`` is a plateau of ``op`` below infinity: points
    ``(r, s, r2, s2)`` with ``r < r2``, ``s < s2`` and
    ``op(r, s) == op(r2, s2) < inf``; when omitted it is searched for.
    Returns ``(f, g, x0)`` with ``f = step(r, 1)``, ``g = step(s, 1)`` and
    ``x0 = op(r, s)``: the weak construction of ``(f, g)`` is 0 below
    ``x0`` and already 1 at ``x0``, while the strict one is still 0 there.
    """
    op = _as_lop(op)
    if witness is None:
        res = falsify(op, "LCS", budget=budget, seed=seed)
        if not res.found:
            raise ValueError(
                f"no finite plateau found for {op.name} "
                f"(checked {res.checked} candidates)")
        witness = res.witness
    r, s, r2, s2 = _points(witness, 4, "plateau")
    x0 = op.fn(r, s)
    if not (r < r2 and s < s2 and math.isfinite(x0)
            and x0 == op.fn(r2, s2)):
        raise ValueError("witness invalid on re-evaluation")
    return make_step(r, 1.0), make_step(s, 1.0), x0


def witness_thm42(op, witness=None, budget=100_000, seed=0):
    """A strict non-defective function whose self-tensor is defective.

    ``witness`` is a zero divisor of ``op``: finite points ``(a, b)`` with
    ``op(a, b) == inf``; when omitted it is searched for.  With
    ``x0 = max(a, b)`` every pair feasible at finite ``x`` has a coordinate
    at most ``x0``, so the tensor of the returned ``f`` with itself never
    exceeds ``f(x0) = 1/2`` and stays defective under every t-norm.
    """
    op = _as_lop(op)
    if witness is None:
        res = falsify(op, "NZD", budget=budget, seed=seed)
        if not res.found:
            raise ValueError(
                f"no zero divisor found for {op.name} "
                f"(checked {res.checked} candidates)")
        witness = res.witness
    a, b = _points(witness, 2, "zero-divisor")
    x0 = max(a, b)
    if not (math.isfinite(x0) and x0 > 0.0 and math.isinf(op.fn(a, b))
            and math.isinf(op.fn(x0, x0))):
        raise ValueError("witness invalid on re-evaluation")
    return _two_ramp(x0, 2.0 * x0, 0.5)


def witness_prop43(p):
    """The pair exposing a t-norm that is not continuous.

    ``f`` sits at the plateau ``p`` on ``]0, 1]`` and then ramps with
    slope ``p`` up to 1; ``g`` is the identity ramp capped at 1.  For any
    right-continuous distance operation with ``L(0, s) = s`` the tensor
    equals ``T(p, x)`` on ``]0, 1]``, so a jump of ``T(p, -)`` lands in
    the output unchanged.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    x1 = 1.0 + (1.0 - p) / p
    for _ in range(64):
        if p + p * (x1 - 1.0) == 1.0:
            break
        x1 = math.nextafter(x1, INF if p + p * (x1 - 1.0) < 1.0 else 1.0)
    else:
        raise ArithmeticError(f"cannot anchor the slope-{p!r} ramp to 1")
    f = make_ddf((0.0, 1.0, x1), (p, p, 1.0), (0.0, p, 0.0))
    g = make_ddf((0.0, 1.0), (0.0, 1.0), (1.0, 0.0))
    return f, g


def witness_prop44(r, r2, s, s2, y0, op=None):
    """Two continuous two-ramp functions that a plateau maps onto a jump.

    The parameters come from a plateau of the operation: ``op(r, s) ==
    op(r2, s2)`` with ``r < r2`` and ``s < s2``.  ``f`` climbs to ``y0``
    at ``r`` and to 1 at ``r2``; ``g`` likewise with ``s, s2``.  The
    inverse of the tensor output is then constant on ``[y0, 1[``, so the
    output jumps and leaves every continuity class.
    """
    if not (0.0 < r < r2 < INF and 0.0 < s < s2 < INF):
        raise ValueError("parameter ordering violated: need 0 < r < r2 "
                         "and 0 < s < s2, all finite")
    if not 0.0 < y0 < 1.0:
        raise ValueError("parameter ordering violated: y0 must lie "
                         "strictly between 0 and 1")
    if op is not None:
        op = _as_lop(op)
        if op.fn(r, s) != op.fn(r2, s2):
            raise ValueError("witness invalid on re-evaluation")
    return _two_ramp(r, r2, y0), _two_ramp(s, s2, y0)


def witness_thm49(r, s, s2, y0, op=None):
    """A jumpy non-defective ``f`` and a strict ``g`` for a cancellation failure.

    The parameters come from ``op(r, s) == op(r, s2)`` with ``s < s2`` and
    finite ``r``.  ``f`` climbs to ``y0`` at ``r`` and jumps to 1 just
    past it; ``g`` is continuous and strictly increasing on ``[0, s2]``
    with ``g(s) = y0`` and ``g(s2) = 1``.  The inverse of the tensor
    output is constant on ``[y0, 1[``, so the output is not continuous.
    """
    if not (0.0 < r < INF and 0.0 < s < s2 < INF):
        raise ValueError("parameter ordering violated: need finite "
                         "0 < r and 0 < s < s2")
    if not 0.0 < y0 < 1.0:
        raise ValueError("parameter ordering violated: y0 must lie "
                         "strictly between 0 and 1")
    if op is not None:
        op = _as_lop(op)
        if op.fn(r, s) != op.fn(r, s2):
            raise ValueError("witness invalid on re-evaluation")
    f = make_ddf((0.0, r), (0.0, 1.0), (_anchored_slope(0.0, y0, 0.0, r), 0.0))
    return f, _two_ramp(s, s2, y0)
