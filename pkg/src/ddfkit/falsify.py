"""Counterexample search for structural conditions on operations.

Each condition is a universally quantified implication; the falsifier
enumerates candidate tuples (a deterministic structured grid first, then a
seeded random phase up to the budget) and reports the first tuple that
violates it.

The search runs in two tiers.  A vectorized float scan proposes candidates
by *exact* float equality of the two compared operation values: every
genuine violation realized by the builtin operations evaluates both sides
through the identical code path (a shared plateau, a zero region, or
inf == inf), so no true witness is missed.  Float equality alone is not
sufficient, though: an operation that is strictly increasing in the reals
can still collide in floats where its increment falls below one ulp (the
dyadic t-norm's active slope ``2p - 1`` vanishes as ``exp(-x)`` approaches
a block boundary from above).  Every flagged candidate is therefore
re-verified against an exact model of the operation before being reported:
the t-norms, ``max`` and ``plus`` are piecewise rational and are evaluated
with ``fractions.Fraction`` (floats are rationals, so this is exact), and
the exp-based distance operations are evaluated to 50 significant digits
with ``decimal``, comparing the transformed values ``exp(-L)`` so that no
logarithm is needed.  A candidate whose violation is not structurally
certain at that precision (for example, within 1e-45 relative of a dyadic
block boundary) is conservatively rejected.

Conditions for distance operations ``L`` (on [0, inf]):

``CL``   L(x,y) = L(x,z) and x < inf  imply  y = z
``LS``   x < x' and y < y'            imply  L(x,y) < L(x',y')
``LCS``  LS restricted to L(x',y') < inf
``NZD``  L(x,y) = inf                 implies x = inf or y = inf

Conditions for t-norms ``T`` (on [0, 1]):

``TS``          p < p' and q < q'  imply  T(p,q) < T(p',q')
``TS_literal``  (p,q) <= (p',q') and (p,q) != (p',q') imply strict increase
                (the stronger per-coordinate reading; min fails it)
``CL``          T(p,q) = T(p,r) and p > 0  imply  q = r
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

INF = math.inf

L_CONDITIONS = ("CL", "LS", "LCS", "NZD")
T_CONDITIONS = ("TS", "TS_literal", "CL")


@dataclass(frozen=True)
class Witness:
    condition: str
    op: str
    points: tuple
    values: tuple

    def describe(self):
        pts = ", ".join(_fmt(p) for p in self.points)
        vals = ", ".join(_fmt(v) for v in self.values)
        return f"{self.condition} fails for {self.op} at ({pts}); values ({vals})"


@dataclass(frozen=True)
class SearchResult:
    op: str
    condition: str
    found: bool
    witness: object
    checked: int
    budget: int
    seed: int


def _fmt(v):
    return "inf" if math.isinf(v) else repr(float(v))


# -- candidate grids ---------------------------------------------------------

_LN2 = math.log(2.0)


def _l_grid():
    vals = [k * 0.25 for k in range(33)]  # 0 .. 8
    vals += [-math.log(k / 16.0) for k in range(1, 16)]
    vals += [-math.log(k / 10.0) for k in range(1, 10)]
    vals += [0.5 * _LN2, _LN2, 2.0 * _LN2, 3.0 * _LN2]
    return np.array(sorted(set(vals)))


def _l_offsets():
    return np.array([0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 0.5 * _LN2, _LN2])


def _t_grid():
    vals = [k / 16.0 for k in range(17)]
    vals += [k / 10.0 for k in range(1, 10)]
    vals += [2.0 ** -j for j in range(2, 7)]
    vals += [3.0 * 2.0 ** -j for j in range(3, 7)]
    vals += [0.5 + 1.0 / 32.0, 0.5 - 1.0 / 32.0, 0.55, 0.6, 0.65, 0.7, 0.75,
             0.8, 0.85, 0.9]
    return np.array(sorted(set(v for v in vals if 0.0 <= v <= 1.0)))


def _t_offsets():
    return np.array([1.0 / 32.0, 1.0 / 16.0, 0.05, 0.1, 0.125, 0.25])


def _mesh(*arrays):
    grids = np.meshgrid(*arrays, indexing="ij")
    return [g.ravel() for g in grids]


def _cap(arrays, limit):
    if arrays[0].size > limit:
        return [a[:limit] for a in arrays], True
    return arrays, False


# -- exact verification ------------------------------------------------------

_RATIONAL_T = ("godel", "product", "lukasiewicz", "ordinal_033_2",
               "dyadic_033_3")
_PREC = 50
_ZERO_MARGIN = Decimal("1e-40")   # distance from a zero/plateau boundary
_BLOCK_MARGIN = Decimal("1e-45")  # relative distance from a dyadic boundary
_HALF = Decimal("0.5")
_EXP_CACHE = {}


def _dexp(x):
    """exp(-x) to 50 significant digits (deterministic, memoized)."""
    got = _EXP_CACHE.get(x)
    if got is None:
        with localcontext() as ctx:
            ctx.prec = _PREC
            got = Decimal(-x).exp()
        _EXP_CACHE[x] = got
    return got


def _frac_tnorm(name, x, y):
    """The t-norm evaluated exactly at float points, as a Fraction."""
    a, b = Fraction(x), Fraction(y)
    if name == "godel":
        return min(a, b)
    if name == "product":
        return a * b
    if name == "lukasiewicz":
        return max(a + b - 1, Fraction(0))
    if name == "ordinal_033_2":
        half = Fraction(1, 2)
        if a <= half and b <= half:
            return 2 * a * b
        if a >= half and b >= half:
            return max(a + b - 1, half)
        return min(a, b)
    if name == "dyadic_033_3":
        if a == 0 or b == 0:
            return Fraction(0)
        man, e = math.frexp(x)
        m = 1 - e if man == 0.5 else -e
        man, e = math.frexp(y)
        n = 1 - e if man == 0.5 else -e
        p = a * Fraction(2) ** m
        q = b * Fraction(2) ** n
        f = 2 * p * q - (p + q) + 1
        return f / Fraction(2) ** (m + n)
    raise KeyError(name)


def _dec_block(w):
    """Dyadic block of a Decimal in (0, 1]; None if too close to a boundary.

    Block ``m`` covers ]2**-(m+1), 2**-m]; returns ``(m, p)`` with
    ``p = w * 2**m``.  The t-norm jumps across block boundaries, so a value
    whose true position relative to the boundary is uncertain at working
    precision cannot be assigned a block.
    """
    m = 0
    upper = Decimal(1)
    while w <= upper / 2:
        upper = upper / 2
        m += 1
    lower = upper / 2
    if w - lower < lower * _BLOCK_MARGIN or upper - w < upper * _BLOCK_MARGIN:
        return None
    return m, w / upper


def _dec_tnorm(name, u, v):
    """The t-norm on Decimal arguments in (0, 1]; None when ambiguous.

    Branch boundaries where the value is continuous need no guard: a
    misassigned branch moves the result by less than working precision,
    which exact equality later absorbs.  Guards are only needed where the
    outcome is structural: the lukasiewicz zero region, the ordinal
    plateau, and the dyadic block assignment.
    """
    with localcontext() as ctx:
        ctx.prec = _PREC
        if name == "godel":
            return min(u, v)
        if name == "product":
            return u * v
        if name == "lukasiewicz":
            s = u + v - 1
            if s <= -_ZERO_MARGIN:
                return Decimal(0)
            if s < _ZERO_MARGIN:
                return None
            return s
        if name == "ordinal_033_2":
            if u <= _HALF and v <= _HALF:
                return 2 * u * v
            if u >= _HALF and v >= _HALF:
                s = u + v - 1
                if s <= _HALF - _ZERO_MARGIN:
                    return _HALF
                if s < _HALF + _ZERO_MARGIN:
                    return None
                return s
            return min(u, v)
        if name == "dyadic_033_3":
            bu = _dec_block(u)
            bv = _dec_block(v)
            if bu is None or bv is None:
                return None
            m, p = bu
            n, q = bv
            f = 2 * p * q - (p + q) + 1
            return f / Decimal(2) ** (m + n)
    raise KeyError(name)


def _l_value(op, x, y):
    """Exact-model value of a distance operation, tagged.

    Returns ``("inf", None)``, ``("num", key)`` where equal keys certify
    equal real values, or ``("ambig", None)`` when undecidable at working
    precision.  Exp-based operations are keyed by ``exp(-L)``, which is
    the t-norm of the transformed arguments and needs no logarithm.
    """
    if math.isinf(x) or math.isinf(y):
        return ("inf", None)
    if op.name == "max":
        return ("num", max(Fraction(x), Fraction(y)))
    if op.name == "plus":
        return ("num", Fraction(x) + Fraction(y))
    t = _dec_tnorm(op.transpose_of, _dexp(x), _dexp(y))
    if t is None:
        return ("ambig", None)
    if t == 0:
        return ("inf", None)
    return ("num", t)


def _certified_equal(a, b):
    if a[0] == "ambig" or b[0] == "ambig":
        return False
    if a[0] == "inf" or b[0] == "inf":
        return a[0] == b[0]
    return a[1] == b[1]


def _certify(op, condition, pts):
    """True when the flagged tuple violates the *real* operation.

    Float collisions caused by sub-ulp increments of a strictly increasing
    operation are rejected here.  Operations outside the builtin families
    have no exact model; their float-level verdict stands.
    """
    if op.kind == "tnorm":
        if op.name not in _RATIONAL_T:
            return True
        if condition == "CL":
            x, y, z = pts
            return _frac_tnorm(op.name, x, y) == _frac_tnorm(op.name, x, z)
        p, q, p2, q2 = pts
        return _frac_tnorm(op.name, p, q) == _frac_tnorm(op.name, p2, q2)
    if op.name not in ("max", "plus") and op.transpose_of not in _RATIONAL_T:
        return True
    if condition == "NZD":
        x, y = pts
        return _l_value(op, x, y)[0] == "inf"
    if condition == "CL":
        x, y, z = pts
        return _certified_equal(_l_value(op, x, y), _l_value(op, x, z))
    p, q, p2, q2 = pts
    a = _l_value(op, p, q)
    b = _l_value(op, p2, q2)
    if condition == "LCS" and (a[0] != "num" or b[0] != "num"):
        return False
    return _certified_equal(a, b)


# -- the search --------------------------------------------------------------


def falsify(op, condition, budget=100_000, seed=0):
    """Search for a counterexample to ``condition`` on ``op``.

    Deterministic for a fixed (op, condition, budget, seed): the structured
    phase is enumerated in a fixed order and the random phase uses a seeded
    generator.  Returns a :class:`SearchResult`.
    """
    kind = op.kind
    allowed = L_CONDITIONS if kind == "lop" else T_CONDITIONS
    if condition not in allowed:
        raise ValueError(f"condition {condition!r} undefined for {kind}")
    rng = np.random.default_rng(seed)
    checked = 0
    for phase in ("structured", "random"):
        room = budget - checked
        if room <= 0:
            break
        tuples = _candidates(op, condition, phase, room, rng)
        if tuples[0].size == 0:
            continue
        checked += tuples[0].size
        hit = _scan(op, condition, tuples)
        if hit is not None:
            return SearchResult(op.name, condition, True, hit, checked,
                                budget, seed)
    return SearchResult(op.name, condition, False, None, checked, budget, seed)


def _candidates(op, condition, phase, room, rng):
    lop = op.kind == "lop"
    if phase == "structured":
        grid = _l_grid() if lop else _t_grid()
        offs = _l_offsets() if lop else _t_offsets()
        if condition == "NZD":
            arrs = _mesh(grid, grid)
        elif condition == "CL":
            base, third, d = _mesh(grid, grid, offs)
            arrs = [base, third, third + d]
        elif condition == "TS_literal":
            # vary one coordinate at a time: first block moves p, second q
            p, q, d = _mesh(grid, grid, offs)
            arrs = [
                np.concatenate([p, p]),
                np.concatenate([q, q]),
                np.concatenate([p + d, p]),
                np.concatenate([q, q + d]),
            ]
        else:  # LS / LCS / TS
            p, q, d1, d2 = _mesh(grid, grid, offs, offs)
            arrs = [p, q, p + d1, q + d2]
        arrs, _ = _cap(arrs, room)
        return arrs
    # random phase
    n = min(room, 40_000)
    if n <= 0:
        return [np.empty(0)]
    if lop:
        lo, hi = 0.0, 6.0
        dmin, dmax = 0.001, 2.0
    else:
        lo, hi = 0.0, 1.0
        dmin, dmax = 0.001, 0.3
    a = rng.uniform(lo, hi, n)
    b = rng.uniform(lo, hi, n)
    d1 = rng.uniform(dmin, dmax, n)
    d2 = rng.uniform(dmin, dmax, n)
    if condition == "NZD":
        return [a, b]
    if condition == "CL":
        return [a, b, b + d2]
    if condition == "TS_literal":
        half = n // 2
        d1[:half] = 0.0
        d2[half:] = 0.0
        return [a, b, a + d1, b + d2]
    return [a, b, a + d1, b + d2]


def _scan(op, condition, tuples):
    vfn = op.vfn
    fn = op.fn
    if condition == "NZD":
        x, y = tuples
        vals = vfn(x, y)
        mask = np.isinf(vals) & np.isfinite(x) & np.isfinite(y)
        for i in np.nonzero(mask)[0]:
            a, b = float(x[i]), float(y[i])
            if math.isinf(fn(a, b)) and _certify(op, condition, (a, b)):
                return Witness(condition, op.name, (a, b), (INF,))
        return None
    if condition == "CL":
        x, y, z = tuples
        if op.kind == "tnorm":
            ok = (x > 0.0) & (x <= 1.0) & (y <= 1.0) & (z <= 1.0) & (y < z)
        else:
            ok = np.isfinite(x) & (y < z)
        v1 = vfn(x, y)
        v2 = vfn(x, z)
        mask = ok & (v1 == v2)
        for i in np.nonzero(mask)[0]:
            a, b, c = float(x[i]), float(y[i]), float(z[i])
            w1, w2 = fn(a, b), fn(a, c)
            if w1 == w2 and _certify(op, condition, (a, b, c)):
                return Witness(condition, op.name, (a, b, c), (w1, w2))
        return None
    # strictness conditions: LS / LCS / TS / TS_literal
    p, q, p2, q2 = tuples
    if condition == "TS_literal":
        ok = (p <= p2) & (q <= q2) & ((p < p2) | (q < q2))
    else:
        ok = (p < p2) & (q < q2)
    if op.kind == "tnorm":
        ok &= (p2 <= 1.0) & (q2 <= 1.0)
    v1 = vfn(p, q)
    v2 = vfn(p2, q2)
    mask = ok & (v1 == v2)
    if condition == "LCS":
        mask &= np.isfinite(v2)
    for i in np.nonzero(mask)[0]:
        a, b, c, d = (float(p[i]), float(q[i]), float(p2[i]), float(q2[i]))
        w1, w2 = fn(a, b), fn(c, d)
        if w1 != w2:
            continue
        if condition == "LCS" and math.isinf(w2):
            continue
        if _certify(op, condition, (a, b, c, d)):
            return Witness(condition, op.name, (a, b, c, d), (w1, w2))
    return None


def survey(op, budget=100_000, seed=0):
    """Run every applicable condition; returns {condition: SearchResult}."""
    conds = L_CONDITIONS if op.kind == "lop" else T_CONDITIONS
    return {c: falsify(op, c, budget=budget, seed=seed) for c in conds}


def flag_for(condition, kind):
    """The declared-flag name a found witness refutes (None = report only)."""
    if kind == "lop":
        return condition
    return {"TS": "strict_on_pairs", "CL": "cancellative",
            "TS_literal": None}[condition]


def contradictions(op, budget=100_000, seed=0):
    """Declared flags refuted by search: [(flag, witness)]."""
    out = []
    for cond, res in survey(op, budget, seed).items():
        flag = flag_for(cond, op.kind)
        if flag is None or not res.found:
            continue
        if op.flags.get(flag, False):
            out.append((flag, res.witness))
    return out
