"""Triangular norms on [0, 1] and their counterparts on [0, inf].

A t-norm ``T`` is an associative, commutative, nondecreasing operation on
``[0, 1]`` with identity 1.  An extended-distance operation ``L`` is the
mirror structure on ``[0, inf]``: identity 0, absorbing element ``inf``,
and ``L(x, y) >= max(x, y)``.  The two are linked by transposition,

    transpose(T)(x, y) = -ln T(exp(-x), exp(-y)),

which turns the godel t-norm (min) into max and the product t-norm into
addition.  Transposed evaluators retrace the guard cases so that these
identities are bit-exact: whenever ``T`` returns one of its arguments
unchanged, the transpose returns the corresponding original argument.

Every operation carries declared structural flags.  Declarations are
trusted by the classifiers but can be refuted by the falsifier
(:mod:`ddfkit.falsify`), which searches for concrete counterexamples.

Flags for t-norms
-----------------
``continuous``, ``left_continuous`` : topological properties (declared)
``strict_on_pairs``  : p < p' and q < q'  imply  T(p, q) < T(p', q')
``cancellative``     : T(p, q) = T(p, r) and p > 0  imply  q = r

Flags for distance operations
-----------------------------
``continuous``, ``right_continuous``
``CL``  : L(x, y) = L(x, z) and x < inf  imply  y = z   (cancellation)
``LS``  : x < x' and y < y'  imply  L(x, y) < L(x', y')
``LCS`` : LS restricted to pairs with L(x', y') < inf
``NZD`` : L(x, y) = inf  implies  x = inf or y = inf
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

INF = math.inf

# -- scalar t-norms ---------------------------------------------------------


def t_godel(x, y):
    """Minimum: the largest t-norm."""
    return min(x, y)


def t_product(x, y):
    return x * y


def t_lukasiewicz(x, y):
    """max(x + y - 1, 0); the guard keeps the identity law bit-exact."""
    if x == 1.0:
        return y
    if y == 1.0:
        return x
    return max(x + y - 1.0, 0.0)


def t_ordinal_033_2(x, y):
    """Two-piece ordinal construction: a scaled product below 1/2 and a
    shifted lukasiewicz summand above, glued by min; continuous but with a
    plateau at value 1/2 over the square [1/2, 1]^2."""
    if x == 1.0:
        return y
    if y == 1.0:
        return x
    if x <= 0.5 and y <= 0.5:
        return 2.0 * (x * y)
    if x >= 0.5 and y >= 0.5:
        return max(x + y - 1.0, 0.5)
    return min(x, y)


def _block(x):
    """Exponent ``m >= 0`` with ``2**m * x`` in ]1/2, 1]; exact bit fiddling."""
    man, e = math.frexp(x)  # x = man * 2**e, man in [0.5, 1)
    return 1 - e if man == 0.5 else -e


def t_dyadic_033_3(x, y):
    """A left-continuous, cancellative t-norm that is not continuous.

    On each dyadic block ]1/2^(m+1), 1/2^m] x ]1/2^(n+1), 1/2^n] the value
    is F(2^m x, 2^n y) / 2^(m+n) with F(p, q) = 2(pq) - (p+q) + 1 on
    ]1/2, 1]^2.  Scaling by powers of two is exact in binary floating
    point, so block arithmetic introduces no rounding of its own.
    """
    if x == 1.0:
        return y
    if y == 1.0:
        return x
    if x == 0.0 or y == 0.0:
        return 0.0
    m = _block(x)
    n = _block(y)
    p = math.ldexp(x, m)
    q = math.ldexp(y, n)
    f = 2.0 * (p * q) - (p + q) + 1.0
    return math.ldexp(f, -(m + n))


# -- vectorized t-norms (numpy) ---------------------------------------------


def vt_godel(x, y):
    return np.minimum(x, y)


def vt_product(x, y):
    return x * y


def vt_lukasiewicz(x, y):
    out = np.maximum(x + y - 1.0, 0.0)
    out = np.where(x == 1.0, y, out)
    out = np.where(y == 1.0, x, out)
    return out


def vt_ordinal_033_2(x, y):
    low = (x <= 0.5) & (y <= 0.5)
    high = (x >= 0.5) & (y >= 0.5)
    out = np.minimum(x, y)
    out = np.where(low, 2.0 * (x * y), out)
    out = np.where(high, np.maximum(x + y - 1.0, 0.5), out)
    out = np.where(x == 1.0, y, out)
    out = np.where(y == 1.0, x, out)
    return out


def _vblock(x):
    man, e = np.frexp(np.where(x > 0.0, x, 0.5))
    return np.where(man == 0.5, 1 - e, -e)


def vt_dyadic_033_3(x, y):
    m = _vblock(x)
    n = _vblock(y)
    p = np.ldexp(x, m)
    q = np.ldexp(y, n)
    f = 2.0 * (p * q) - (p + q) + 1.0
    out = np.ldexp(f, -(m + n))
    out = np.where((x == 0.0) | (y == 0.0), 0.0, out)
    out = np.where(x == 1.0, y, out)
    out = np.where(y == 1.0, x, out)
    return out


# -- scalar distance operations ---------------------------------------------


def l_max(x, y):
    return max(x, y)


def l_plus(x, y):
    return x + y


def l_wstar(x, y):
    """Transpose of the lukasiewicz t-norm, written out directly.

    It is continuous, yet two finite distances can combine to ``inf``:
    exp(-x) + exp(-y) <= 1 already at x = y = ln 2.
    """
    if x == 0.0:
        return y
    if y == 0.0:
        return x
    if math.isinf(x) or math.isinf(y):
        return INF
    t = math.exp(-x) + math.exp(-y) - 1.0
    if t <= 0.0:
        return INF
    if t >= 1.0:
        return 0.0
    return -math.log(t)


def make_transpose_scalar(t_fn):
    def l_fn(x, y):
        if x == 0.0:
            return y
        if y == 0.0:
            return x
        if math.isinf(x) or math.isinf(y):
            return INF
        u = math.exp(-x)
        v = math.exp(-y)
        t = t_fn(u, v)
        if t == u and t == v:
            return max(x, y)  # exp collapsed both arguments to one float
        if t == u:
            return x  # retrace: T returned an argument unchanged
        if t == v:
            return y
        if t <= 0.0:
            return INF
        if t >= 1.0:
            return 0.0
        return -math.log(t)

    return l_fn


def vl_max(x, y):
    return np.maximum(x, y)


def vl_plus(x, y):
    return x + y


def make_transpose_vector(vt_fn):
    def vl_fn(x, y):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            u = np.exp(-np.asarray(x, dtype=float))
            v = np.exp(-np.asarray(y, dtype=float))
            t = vt_fn(u, v)
            out = np.where(t > 0.0, -np.log(np.where(t > 0.0, t, 1.0)), INF)
        out = np.where(t == u, x, out)
        out = np.where(t == v, y, out)
        out = np.where((t == u) & (t == v), np.maximum(x, y), out)
        out = np.where(x == 0.0, y, out)
        out = np.where(y == 0.0, x, out)
        out = np.where(np.isinf(x) | np.isinf(y), INF, out)
        return np.maximum(out, 0.0)

    return vl_fn


def vl_wstar(x, y):
    return make_transpose_vector(vt_lukasiewicz)(x, y)


# -- descriptors and the registry -------------------------------------------


@dataclass(frozen=True)
class TNorm:
    """A t-norm with scalar and vectorized evaluators and declared flags."""

    name: str
    fn: object
    vfn: object
    continuous: bool
    left_continuous: bool
    strict_on_pairs: bool
    cancellative: bool
    notes: str = ""

    def __call__(self, x, y):
        return self.fn(x, y)

    @property
    def kind(self):
        return "tnorm"

    @property
    def flags(self):
        return {
            "continuous": self.continuous,
            "left_continuous": self.left_continuous,
            "strict_on_pairs": self.strict_on_pairs,
            "cancellative": self.cancellative,
        }


@dataclass(frozen=True)
class LOp:
    """A distance operation on [0, inf] with declared structural flags."""

    name: str
    fn: object
    vfn: object
    continuous: bool
    right_continuous: bool
    CL: bool
    LS: bool
    LCS: bool
    NZD: bool
    transpose_of: str = ""
    notes: str = ""

    def __call__(self, x, y):
        return self.fn(x, y)

    @property
    def kind(self):
        return "lop"

    @property
    def flags(self):
        return {
            "continuous": self.continuous,
            "right_continuous": self.right_continuous,
            "CL": self.CL,
            "LS": self.LS,
            "LCS": self.LCS,
            "NZD": self.NZD,
        }


TNORMS = {}
LOPS = {}


def _add_t(t):
    TNORMS[t.name] = t
    return t


def _add_l(op):
    LOPS[op.name] = op
    return op


GODEL = _add_t(TNorm(
    "godel", t_godel, vt_godel,
    continuous=True, left_continuous=True,
    strict_on_pairs=True, cancellative=False,
    notes="minimum; the largest t-norm",
))
PRODUCT = _add_t(TNorm(
    "product", t_product, vt_product,
    continuous=True, left_continuous=True,
    strict_on_pairs=True, cancellative=True,
))
LUKASIEWICZ = _add_t(TNorm(
    "lukasiewicz", t_lukasiewicz, vt_lukasiewicz,
    continuous=True, left_continuous=True,
    strict_on_pairs=False, cancellative=False,
    notes="max(x+y-1, 0); collapses small pairs to 0",
))
ORDINAL_033_2 = _add_t(TNorm(
    "ordinal_033_2", t_ordinal_033_2, vt_ordinal_033_2,
    continuous=True, left_continuous=True,
    strict_on_pairs=False, cancellative=False,
    notes="continuous with a plateau at 1/2 on [1/2,1]^2",
))
DYADIC_033_3 = _add_t(TNorm(
    "dyadic_033_3", t_dyadic_033_3, vt_dyadic_033_3,
    continuous=False, left_continuous=True,
    strict_on_pairs=True, cancellative=True,
    notes="left-continuous, cancellative, not continuous",
))

MAX = _add_l(LOp(
    "max", l_max, vl_max,
    continuous=True, right_continuous=True,
    CL=False, LS=True, LCS=True, NZD=True,
    notes="the smallest distance operation",
))
PLUS = _add_l(LOp(
    "plus", l_plus, vl_plus,
    continuous=True, right_continuous=True,
    CL=True, LS=True, LCS=True, NZD=True,
))
WSTAR = _add_l(LOp(
    "wstar", l_wstar, vl_wstar,
    continuous=True, right_continuous=True,
    CL=False, LS=False, LCS=True, NZD=False,
    transpose_of="lukasiewicz",
    notes="finite distances can combine to inf",
))


_TRANSPOSE_FLAGS = {
    # transposition turns strictness on pairs into LS and cancellativity
    # into CL wherever no zero divisors interfere; these are the paper-level
    # declarations for the five builtin t-norms
    "godel": dict(CL=False, LS=True, LCS=True, NZD=True, continuous=True,
                  right_continuous=True),
    "product": dict(CL=True, LS=True, LCS=True, NZD=True, continuous=True,
                    right_continuous=True),
    "lukasiewicz": dict(CL=False, LS=False, LCS=True, NZD=False,
                        continuous=True, right_continuous=True),
    "ordinal_033_2": dict(CL=False, LS=False, LCS=False, NZD=True,
                          continuous=True, right_continuous=True),
    "dyadic_033_3": dict(CL=True, LS=True, LCS=True, NZD=True,
                         continuous=False, right_continuous=True),
}


def transpose(t):
    """The distance operation ``-ln T(exp(-x), exp(-y))`` for a t-norm."""
    if isinstance(t, str):
        t = TNORMS[t]
    name = f"transpose({t.name})"
    if name in LOPS:
        return LOPS[name]
    flags = _TRANSPOSE_FLAGS.get(t.name)
    if flags is None:
        # unknown t-norm: declare conservatively, let the falsifier decide
        flags = dict(CL=False, LS=False, LCS=False, NZD=False,
                     continuous=t.continuous, right_continuous=True)
    op = LOp(
        name,
        make_transpose_scalar(t.fn),
        make_transpose_vector(t.vfn),
        transpose_of=t.name,
        **flags,
    )
    return _add_l(op)


# register the transposes of all builtins up front
for _t in list(TNORMS.values()):
    transpose(_t)


_ALIASES = {
    "min": "godel",
    "godel": "godel",
    "prod": "product",
    "product": "product",
    "luk": "lukasiewicz",
    "lukasiewicz": "lukasiewicz",
    "ordinal033_2": "ordinal_033_2",
    "ordinal_033_2": "ordinal_033_2",
    "dyadic033_3": "dyadic_033_3",
    "dyadic_033_3": "dyadic_033_3",
    "max": "max",
    "plus": "plus",
    "sum": "plus",
    "wstar": "wstar",
    "w_star": "wstar",
}


def parse_tnorm(text):
    """Parse a t-norm name (aliases: min, prod, luk, ordinal033_2, ...)."""
    key = _ALIASES.get(text.strip().lower())
    if key is None or key not in TNORMS:
        raise ValueError(f"unknown t-norm {text!r}")
    return TNORMS[key]


def parse_lop(text):
    """Parse a distance operation: max | plus | wstar | transpose(<t-norm>)."""
    s = text.strip().lower()
    if s.startswith("transpose(") and s.endswith(")"):
        return transpose(parse_tnorm(s[len("transpose("):-1]))
    key = _ALIASES.get(s)
    if key is None or key not in LOPS:
        raise ValueError(f"unknown distance operation {text!r}")
    return LOPS[key]


def builtin_tnorms():
    return [TNORMS[k] for k in
            ("godel", "product", "lukasiewicz", "ordinal_033_2", "dyadic_033_3")]


def builtin_lops():
    """The eight distance operations exercised by the test-bed."""
    return [LOPS["max"], LOPS["plus"], LOPS["wstar"]] + [
        transpose(t) for t in builtin_tnorms()
    ]


# -- law checking -----------------------------------------------------------


@dataclass
class LawReport:
    name: str
    ok: bool
    failures: list = field(default_factory=list)

    def add(self, law, detail):
        self.ok = False
        self.failures.append(f"{law}: {detail}")


def _law_samples(kind, rng, n):
    if kind == "tnorm":
        vals = rng.random(n)
        vals = np.concatenate([vals, [0.0, 1.0, 0.5, 0.25, 2.0 ** -30]])
    else:
        vals = np.concatenate([
            rng.random(n) * 4.0,
            [0.0, INF, math.log(2.0), 1.0, 0.125],
        ])
    return vals


def check_laws(op, n=300, seed=20250815, rtol=1e-12):
    """Identity/commutativity/associativity/monotonicity/boundary checks.

    Identity and commutativity must hold bit-exactly; associativity and
    monotonicity are allowed a relative slack of ``rtol`` because chained
    evaluations round differently depending on grouping.
    """
    rng = np.random.default_rng(seed)
    rep = LawReport(op.name, True)
    xs = _law_samples(op.kind, rng, n)
    ident = 1.0 if op.kind == "tnorm" else 0.0
    for x in xs:
        got = op.fn(x, ident)
        if got != x:
            rep.add("identity", f"T({x!r}, id) = {got!r}")
            break
    pairs = [(float(a), float(b)) for a, b in zip(xs, xs[::-1])]
    for a, b in pairs:
        if op.fn(a, b) != op.fn(b, a):
            rep.add("commutativity", f"({a!r}, {b!r})")
            break

    def close(a, b):
        if a == b or (math.isinf(a) and math.isinf(b)):
            return True
        return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))

    triples = rng.choice(xs, size=(120, 3))
    for a, b, c in triples:
        l = op.fn(op.fn(a, b), c)
        r = op.fn(a, op.fn(b, c))
        if not close(l, r):
            rep.add("associativity", f"({a!r}, {b!r}, {c!r}): {l!r} vs {r!r}")
            break
    quads = rng.choice(xs, size=(200, 3))
    for a, b, c in quads:
        lo, hi = min(b, c), max(b, c)
        if op.fn(a, lo) > op.fn(a, hi) + rtol:
            rep.add("monotonicity", f"({a!r}, {lo!r} -> {hi!r})")
            break
    if op.kind == "tnorm":
        if op.fn(0.0, 1.0) != 0.0 or op.fn(0.0, 0.0) != 0.0:
            rep.add("boundary", "T(0, .) must be 0")
    else:
        if not math.isinf(op.fn(INF, 0.5)) or not math.isinf(op.fn(INF, INF)):
            rep.add("boundary", "L(inf, .) must be inf")
        for x in xs[:50]:
            for y in xs[:10]:
                if op.fn(x, y) < max(x, y) - 1e-12:
                    rep.add("dominates-max", f"({x!r}, {y!r})")
                    break
    return rep


def check_all_laws():
    """Validate every registered operation; returns the failing reports."""
    bad = []
    for op in list(TNORMS.values()) + list(LOPS.values()):
        rep = check_laws(op)
        if not rep.ok:
            bad.append(rep)
    return bad
