import functools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfkit import gen
from ddfkit.ddf import (
    bottom,
    from_qsup,
    is_ddf,
    make_ddf,
    make_step,
    qsup,
    top,
)
from ddfkit.engine import (
    BoundedCurve,
    TensorRequest,
    backend_name,
    dumps_curve,
    loads_curve,
    tau,
    tau_bounds,
    tau_curve,
    tau_equals_tensor,
    tensor,
    tensor_at,
    tensor_quasi,
)
from ddfkit.ops import TNorm, builtin_lops, builtin_tnorms, parse_lop, parse_tnorm
from ddfkit.pl import PL

INF = math.inf

ALL_PAIRS = [(lop, tnorm) for lop in builtin_lops() for tnorm in builtin_tnorms()]


def ramp(width=2.0):
    """The d.d.f. rising linearly from 0 to 1 on [0, width]."""
    return make_ddf((0.0, width), (0.0, 1.0), (1.0 / width, 0.0))


# -- independent oracle --------------------------------------------------------
#
# A grid maximum over explicitly feasible points.  Every reported value is
# T at a point that the scalar operations themselves accept as feasible, so
# it is a hard lower bound for the construction: `oracle <= hi` must hold
# exactly.  The kernel may legitimately beat the grid (it probes right
# limits next to jumps), so the other direction carries a slack computed
# from the grid spacing and the curves' slopes.


def grid_oracle(lop, tnorm, f, g, x, weak, n=64):
    xm = max(f.xs[-1], g.xs[-1], 1.0) * 1.5 + 1.0
    base = np.linspace(0.0, xm, n)
    rr = np.unique(np.concatenate([
        base, np.asarray(f.xs), np.nextafter(np.asarray(f.xs), np.inf)]))
    ss = np.unique(np.concatenate([
        base, np.asarray(g.xs), np.nextafter(np.asarray(g.xs), np.inf)]))
    fv = np.array([f.value(float(r)) for r in rr])
    gv = np.array([g.value(float(s)) for s in ss])
    lv = lop.vfn(*np.meshgrid(rr, ss, indexing="ij"))
    tv = tnorm.vfn(*np.meshgrid(fv, gv, indexing="ij"))
    mask = (lv <= x) if weak else (lv < x)
    if not mask.any():
        return 0.0, 0.0
    flat = np.where(mask, tv, -1.0).ravel()
    order = np.argsort(flat)[::-1]
    ncols = ss.size
    for idx in order[:64]:
        if flat[idx] < 0.0:
            break
        r = float(rr[idx // ncols])
        s = float(ss[idx % ncols])
        w = lop.fn(r, s)
        if (w <= x) if weak else (w < x):
            value = tnorm.fn(f.value(r), g.value(s))
            spacing = float(np.diff(rr).max() + np.diff(ss).max())
            slack = 2.0 * max(*f.slopes, *g.slopes, 1.0) * spacing + 1e-12
            return value, slack
    return 0.0, 0.0


@pytest.mark.parametrize("lop", builtin_lops(), ids=lambda op: op.name)
def test_enclosures_bracket_the_grid_oracle(lop):
    rng = np.random.default_rng(20250815)
    for tnorm in builtin_tnorms():
        for _ in range(50):
            kind = gen.KINDS[rng.integers(0, len(gen.KINDS))]
            f = gen.random_ddf(rng, kind)
            g = gen.random_ddf(rng, kind)
            x = float(rng.uniform(0.0, 1.5 * (f.xs[-1] + g.xs[-1]) + 1.0))
            weak = bool(rng.random() < 0.3)
            req = TensorRequest(lop, tnorm, f, g)
            lo, hi = tensor_at(req, x, weak=weak)
            assert lo <= hi
            oracle, slack = grid_oracle(lop, tnorm, f, g, x, weak)
            assert oracle <= hi, (lop.name, tnorm.name, x, weak, oracle, hi)
            assert lo <= oracle + slack, (lop.name, tnorm.name, x, weak)


# -- frozen spot values --------------------------------------------------------


def test_two_ramps_under_plus_product():
    # maximize (r/2)(s/2) subject to r + s < x: r = s = x/2, value x^2/16
    f = ramp(2.0)
    req = TensorRequest("plus", "product", f, f, tolerance=1e-4)
    for x, want in ((1.0, 1.0 / 16.0), (2.0, 0.25), (3.0, 9.0 / 16.0)):
        lo, hi = tensor_at(req, x)
        assert lo - 1e-12 <= want <= hi + 1e-12
        assert hi - lo <= 1e-4
    curve = tensor(TensorRequest("plus", "product", f, f, tolerance=1e-2))
    lo, hi = curve.bounds(2.0)
    assert lo - 1e-12 <= 0.25 <= hi + 1e-12
    assert curve.width() <= 1e-2
    assert curve.tail == (1.0, 1.0)


def test_two_ramps_under_max_product():
    # the region [0, x[^2 gives f(x)^2 up to left limits
    f = ramp(2.0)
    out = tensor(TensorRequest("max", "product", f, f))
    assert isinstance(out, BoundedCurve)
    lo, hi = out.bounds(1.0)
    assert lo <= 0.25 <= hi
    assert hi - lo <= 1e-3


def test_step_law_spot():
    f = make_step(1.0, 0.75)
    g = make_step(2.0, 0.5)
    out = tensor(TensorRequest("plus", "lukasiewicz", f, g))
    assert isinstance(out, PL)
    assert out.same_function(make_step(3.0, 0.25))


# -- the step law ----------------------------------------------------------------


STEP_TUPLES = [
    (0.5, 0.25, 1.5, 0.875),
    (1.0, 1.0, 2.0, 0.5),
    (0.0, 0.5, 3.0, 0.75),
    (2.0, 0.125, 2.0, 0.125),
    (INF, 0.0, 1.0, 0.5),
]


@pytest.mark.parametrize("lop", builtin_lops(), ids=lambda op: op.name)
def test_step_law_exact(lop):
    for tnorm in builtin_tnorms():
        for r, p, s, q in STEP_TUPLES:
            f = make_step(r, p)
            g = make_step(s, q)
            out = tensor(TensorRequest(lop, tnorm, f, g))
            want = make_step(lop.fn(r, s), tnorm.fn(p, q))
            assert isinstance(out, PL)
            assert out.same_function(want), (lop.name, tnorm.name, r, p, s, q)


def test_step_law_matches_kernel_curve():
    f = make_step(1.0, 0.75)
    g = make_step(2.0, 0.5)
    for lname, tname in (("plus", "lukasiewicz"), ("wstar", "godel"),
                         ("transpose(ordinal_033_2)", "product")):
        req = TensorRequest(lname, tname, f, g)
        step = tensor(req)
        curve = tensor(req, path="bb")
        assert curve.width() == 0.0
        for x, lo, hi in zip(curve.xs, curve.lows, curve.highs):
            v = step.tail_value if math.isinf(x) else step.value(x)
            assert lo <= v <= hi


def test_unit_step_is_the_identity():
    rng = np.random.default_rng(7)
    for _ in range(20):
        g = gen.random_ddf(rng, "plain")
        for lop, tnorm in ((parse_lop("plus"), parse_tnorm("product")),
                           (parse_lop("wstar"), parse_tnorm("godel"))):
            assert tensor(TensorRequest(lop, tnorm, top(), g)) is g
            assert tensor(TensorRequest(lop, tnorm, g, top())) is g


def test_bottom_annihilates():
    g = ramp(2.0)
    out = tensor(TensorRequest("plus", "product", bottom(), g), path="bb")
    assert out.tail == (0.0, 0.0)
    assert out.bounds(5.0) == (0.0, 0.0)


# -- exact paths against the kernel ---------------------------------------------


def _assert_inside(req):
    exact = tensor(req)
    curve = tensor(req, path="bb")
    assert isinstance(curve, BoundedCurve)
    assert curve.width() <= req.tolerance + 1e-12
    for x, lo, hi in zip(curve.xs, curve.lows, curve.highs):
        if isinstance(exact, PL):
            v = exact.tail_value if math.isinf(x) else exact.value(x)
            assert lo - 1e-12 <= v <= hi + 1e-12, (req.L.name, req.T.name, x)
        else:
            elo, ehi = exact.bounds(x)
            assert max(lo, elo) <= min(hi, ehi) + 1e-12


@pytest.mark.parametrize("lname,tname", [
    ("max", "godel"), ("max", "lukasiewicz"), ("max", "product"),
    ("plus", "godel"),
])
def test_exact_paths_inside_kernel_enclosures(lname, tname):
    rng = np.random.default_rng(20250816)
    for _ in range(6):
        f = gen.random_ddf(rng, "plain")
        g = gen.random_ddf(rng, "nondefective")
        _assert_inside(TensorRequest(lname, tname, f, g, tolerance=1e-2))


def test_inverse_curve_path_handles_defective_inputs():
    # both inputs stall below 1, so their inverse curves are inf past the
    # tail level; the combined inverse must stay exact
    f = make_ddf((0.0, 1.0), (0.0, 0.5), (0.5, 0.0))   # tail 1/2
    g = make_ddf((0.0, 2.0), (0.0, 0.75), (0.375, 0.0))  # tail 3/4
    for lname in ("max", "plus"):
        req = TensorRequest(lname, "godel", f, g)
        h = tensor(req)
        assert isinstance(h, PL) and is_ddf(h)
        assert h.tail_value == 0.5  # min of the tails
        _assert_inside(TensorRequest(lname, "godel", f, g, tolerance=1e-2))


def test_commuted_requests_agree():
    rng = np.random.default_rng(11)
    f = gen.random_ddf(rng, "plain")
    g = gen.random_ddf(rng, "d0")
    for lname, tname in (("plus", "product"), ("wstar", "lukasiewicz")):
        a = tensor(TensorRequest(lname, tname, f, g), path="bb")
        b = tensor(TensorRequest(lname, tname, g, f), path="bb")
        assert a.xs == b.xs
        assert a.lows == b.lows
        assert a.highs == b.highs


def test_associativity_on_the_exact_inverse_path():
    rng = np.random.default_rng(13)
    for _ in range(10):
        f = gen.random_ddf(rng, "plain")
        g = gen.random_ddf(rng, "plain")
        h = gen.random_ddf(rng, "plain")
        fg = tensor(TensorRequest("plus", "godel", f, g))
        gh = tensor(TensorRequest("plus", "godel", g, h))
        left = tensor(TensorRequest("plus", "godel", fg, h))
        right = tensor(TensorRequest("plus", "godel", f, gh))
        assert left.canonical().same_function(right.canonical())


def test_monotone_in_each_argument():
    rng = np.random.default_rng(17)
    for _ in range(4):
        f = gen.random_ddf(rng, "plain")
        f2 = gen.random_ddf(rng, "plain")
        g = gen.random_ddf(rng, "plain")
        fbig = f.combine(f2, "max")  # pointwise larger than f
        small = tensor(TensorRequest("plus", "product", f, g), path="bb")
        big = tensor(TensorRequest("plus", "product",
                                   make_ddf(fbig.xs, fbig.starts, fbig.slopes),
                                   g), path="bb")
        for x in (0.5, 1.0, 2.0, 5.0, INF):
            assert small.bounds(x)[0] <= big.bounds(x)[1] + 1e-12


# -- the weak variant -------------------------------------------------------------


def test_weak_dominates_strict():
    rng = np.random.default_rng(19)
    f = gen.random_ddf(rng, "plain")
    g = gen.random_ddf(rng, "plain")
    for lname, tname in (("plus", "product"), ("wstar", "godel")):
        req = TensorRequest(lname, tname, f, g)
        for x in (0.25, 1.0, 2.0, 4.0):
            s_lo, _ = tensor_at(req, x)
            _, w_hi = tensor_at(req, x, weak=True)
            assert w_hi >= s_lo


def test_weak_and_strict_agree_for_strictly_increasing_ops():
    rng = np.random.default_rng(23)
    f = gen.random_ddf(rng, "plain")
    g = gen.random_ddf(rng, "plain")
    for lname in ("max", "plus"):
        t_curve = tau_curve(lname, "product", f, g, tolerance=1e-2)
        s_curve = tensor(TensorRequest(lname, "product", f, g,
                                       tolerance=1e-2), path="bb")
        for x in (0.5, 1.0, 2.0, 3.0, 6.0):
            tlo, thi = t_curve.bounds(x)
            slo, shi = s_curve.bounds(x)
            assert max(tlo, slo) <= min(thi, shi) + 1e-12


def test_plateau_separates_weak_from_strict():
    lop = parse_lop("transpose(ordinal_033_2)")
    # the transposed plateau: -ln(max(u + v - 1, 1/2)) is constant at ln 2
    # on a whole region, e.g. around u = v = 0.7
    r = -math.log(0.7)
    x0 = math.log(2.0)
    f = make_step(r, 1.0)
    assert lop.fn(r, r) == x0
    assert tau(lop, "godel", f, f, x0) == 1.0
    assert tau(lop, "godel", f, f, math.nextafter(x0, 0.0)) == 0.0
    strict = tensor(TensorRequest(lop, "godel", f, f))
    assert strict.value(x0) == 0.0
    assert strict.value(math.nextafter(x0, INF)) == 1.0


def test_tau_equals_tensor_verdicts():
    sep = tau_equals_tensor("transpose(ordinal_033_2)", "godel")
    assert sep.equal is False
    f, g, x0 = sep.witness
    assert tau("transpose(ordinal_033_2)", "godel", f, g, x0) == 1.0

    for lname, tname in (("plus", "lukasiewicz"), ("wstar", "godel")):
        ver = tau_equals_tensor(lname, tname)
        assert ver.equal is True
        assert ver.witness is None


def test_weak_edge_levels():
    f = ramp(2.0)
    assert tau_bounds("plus", "product", f, f, INF) == (1.0, 1.0)
    assert tau_bounds("plus", "product", f, f, 0.0) == (0.0, 0.0)
    assert tau_bounds("plus", "product", f, f, -1.0) == (0.0, 0.0)


def test_tensor_at_infinity_matches_curve_tail():
    # the curve queries its rows at a tighter internal tolerance, so the
    # tail is not bit-identical to tensor_at, but both enclose the limit
    f = ramp(2.0)
    g = make_step(1.0, 0.5)
    for lname in ("plus", "wstar"):
        req = TensorRequest(lname, "product", f, g)
        lo1, hi1 = tensor_at(req, INF)
        lo2, hi2 = tensor(req, path="bb").tail
        assert lo1 <= hi2 and lo2 <= hi1
        assert hi2 - lo2 <= hi1 - lo1 + 1e-12


def test_finite_inputs_can_stall_below_one():
    # exp(-x) + exp(-y) <= 1 caps the reachable region: with mass only past
    # ln 2 on both sides, the combined function never reaches 1
    f = make_step(math.log(2.0), 1.0)
    req = TensorRequest("wstar", "godel", f, f)
    lo, hi = tensor_at(req, INF)
    assert hi < 1.0 - 1e-6


# -- the dual construction ---------------------------------------------------------


def test_dual_matches_the_exact_inverse_for_godel():
    rng = np.random.default_rng(29)
    for _ in range(8):
        f = gen.random_ddf(rng, "plain")
        g = gen.random_ddf(rng, "plain")
        for lname in ("max", "plus"):
            h = tensor(TensorRequest(lname, "godel", f, g))
            qh = qsup(h)
            for y in (0.0, 0.25, 0.5, 0.875, 0.999):
                lo, hi = tensor_quasi(lname, "godel", qsup(f), qsup(g), y)
                assert lo == hi
                # the forward path inverts twice, which costs a few ulps
                assert math.isclose(lo, qh.value(y), rel_tol=1e-12, abs_tol=1e-12)


def test_dual_encloses_the_inverse_of_the_kernel_curve():
    f = ramp(2.0)
    g = make_ddf((0.0, 1.0, 2.0), (0.0, 0.25, 1.0), (0.25, 0.75, 0.0))
    curve = tensor(TensorRequest("plus", "product", f, g, tolerance=1e-3),
                   path="bb")
    for y in (0.1, 0.3, 0.6, 0.9):
        dlo, dhi = tensor_quasi("plus", "product", qsup(f), qsup(g), y,
                                tolerance=1e-6)
        # bracket inf{x : h(x) > y} from the curve rows
        lower, upper = 0.0, INF
        for x, lo, hi in zip(curve.xs, curve.lows, curve.highs):
            if math.isinf(x):
                continue
            if hi <= y:
                lower = max(lower, x)
            if lo > y and x < upper:
                upper = x
        assert max(dlo, lower) <= min(dhi, upper) + 1e-6


def test_dual_validates_curve_shapes():
    f = ramp(2.0)
    with pytest.raises(ValueError):
        tensor_quasi("plus", "product", f, qsup(f), 0.5)  # f is not inverse
    assert tensor_quasi("plus", "product", qsup(f), qsup(f), 1.0) == (INF, INF)


# -- curve plumbing ---------------------------------------------------------------


def test_curve_bounds_are_a_staircase():
    c = BoundedCurve((0.0, 1.0, 2.0, INF), (0.0, 0.2, 0.5, 0.9),
                     (0.0, 0.3, 0.6, 1.0))
    assert c.bounds(0.5) == (0.0, 0.3)
    assert c.bounds(1.0) == (0.2, 0.3)
    assert c.bounds(1.5) == (0.2, 0.6)
    assert c.bounds(5.0) == (0.5, 1.0)
    assert c.bounds(INF) == (0.9, 1.0)
    assert c.tail == (0.9, 1.0)
    assert c.width() == pytest.approx(0.5)  # highs[3] - lows[2] over ]2, inf[
    with pytest.raises(ValueError):
        c.bounds(-0.5)


def test_curve_round_trip():
    f = ramp(2.0)
    curve = tensor(TensorRequest("plus", "product", f, f, tolerance=1e-2),
                   path="bb")
    again = loads_curve(dumps_curve(curve))
    assert again.xs == curve.xs
    assert again.lows == curve.lows
    assert again.highs == curve.highs


def test_curve_validation():
    with pytest.raises(ValueError):
        BoundedCurve((0.0, 0.0), (0.0, 0.1), (0.0, 0.2))  # repeated x
    with pytest.raises(ValueError):
        BoundedCurve((0.0, 1.0), (0.5, 0.1), (0.6, 0.2))  # decreasing rows
    with pytest.raises(ValueError):
        BoundedCurve((0.0,), (0.4,), (0.2,))  # lo above hi
    with pytest.raises(ValueError):
        loads_curve("not a curve\n")
    with pytest.raises(ValueError):
        loads_curve("curve v1\nrow 0.0 0.0\n")


def test_request_validation():
    f = ramp(2.0)
    with pytest.raises(ValueError):
        TensorRequest("plus", "product", f, f, tolerance=0.0)
    with pytest.raises(ValueError):
        TensorRequest("plus", "product", f, f, max_depth=-1)
    with pytest.raises(ValueError):
        TensorRequest("plus", "product", f, qsup(f))
    with pytest.raises(ValueError):
        TensorRequest("nope", "product", f, f)
    with pytest.raises(ValueError):
        tensor(TensorRequest("plus", "product", f, f), path="fast")
    with pytest.raises(TypeError):
        tensor("plus")
    # alias parsing keeps working through the request
    req = TensorRequest("w_star", "min", f, f)
    assert req.L.name == "wstar" and req.T.name == "godel"


def test_refuses_wrong_one_sided_continuity():
    f = ramp(2.0)
    bad_t = TNorm("leftward", lambda x, y: min(x, y), None,
                  continuous=False, left_continuous=False,
                  strict_on_pairs=False, cancellative=False)
    with pytest.raises(ValueError, match="left-continuous"):
        tensor(TensorRequest("plus", bad_t, f, f))
    good_but_unknown = TNorm("mystery", lambda x, y: x * y, None,
                             continuous=True, left_continuous=True,
                             strict_on_pairs=True, cancellative=True)
    with pytest.raises(ValueError, match="no enclosure kernel"):
        tensor(TensorRequest("plus", good_but_unknown, f, f), path="bb")


def test_backend_is_reported():
    assert backend_name() in ("pure", "compiled")


# -- determinism -------------------------------------------------------------------


def test_curves_are_reproducible():
    rng = np.random.default_rng(31)
    f = gen.random_ddf(rng, "plain")
    g = gen.random_ddf(rng, "plain")
    req = TensorRequest("wstar", "ordinal_033_2", f, g, tolerance=1e-2)
    a = tensor(req, path="bb")
    b = tensor(req, path="bb")
    assert dumps_curve(a) == dumps_curve(b)


# -- property tests -----------------------------------------------------------------


height = st.floats(0.0, 1.0, allow_nan=False)
place = st.floats(0.0, 8.0, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(place, height, place, height)
def test_step_law_holds_for_random_steps(r, p, s, q):
    lop = parse_lop("plus")
    tnorm = parse_tnorm("lukasiewicz")
    out = tensor(TensorRequest(lop, tnorm, make_step(r, p), make_step(s, q)))
    assert out.same_function(make_step(lop.fn(r, s), tnorm.fn(p, q)))


@functools.lru_cache(maxsize=None)
def _monotone_probe_curve():
    f = ramp(2.0)
    g = make_step(1.0, 0.5)
    return tensor(TensorRequest("plus", "product", f, g, tolerance=1e-2),
                  path="bb")


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 10.0, allow_nan=False), st.floats(0.0, 10.0, allow_nan=False))
def test_curve_bounds_respect_monotonicity(x1, x2):
    curve = _monotone_probe_curve()
    if x1 > x2:
        x1, x2 = x2, x1
    lo1, hi1 = curve.bounds(x1)
    lo2, hi2 = curve.bounds(x2)
    assert lo1 <= lo2 and hi1 <= hi2
    assert lo1 <= hi2
