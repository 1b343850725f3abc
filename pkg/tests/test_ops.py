import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfkit import ops
from ddfkit.ops import (
    DYADIC_033_3,
    GODEL,
    LUKASIEWICZ,
    MAX,
    ORDINAL_033_2,
    PLUS,
    PRODUCT,
    WSTAR,
    builtin_lops,
    builtin_tnorms,
    check_all_laws,
    check_laws,
    parse_lop,
    parse_tnorm,
    transpose,
)

INF = math.inf

unit = st.floats(0.0, 1.0, allow_nan=False)
dist = st.one_of(
    st.floats(0.0, 50.0, allow_nan=False),
    st.just(INF),
    st.just(math.log(2.0)),
)


# -- frozen spot values ------------------------------------------------------


def test_dyadic_block_values():
    # both arguments in the top block: F(p, q) = 2pq - (p+q) + 1, no scaling
    assert DYADIC_033_3(0.75, 0.75) == 0.625
    # 0.5 belongs to the block below, where it scales to 1 and F(p, 1) = p
    assert DYADIC_033_3(0.75, 0.5) == 0.375
    # approaching 0.5 from above stays in the top block: the limit is
    # F(0.75, 0.5) = 2*0.375 - 1.25 + 1 = 0.5, so there is a jump of 1/8
    x = np.nextafter(0.5, 1.0)
    assert DYADIC_033_3(0.75, x) == pytest.approx(0.5, abs=1e-12)
    assert DYADIC_033_3(0.75, 0.5) < 0.5 - 0.1  # not continuous here


def test_dyadic_is_a_tnorm_on_samples():
    rep = check_laws(DYADIC_033_3)
    assert rep.ok, rep.failures


def test_ordinal_seams_agree():
    # the three branch formulas coincide where regions touch
    assert ORDINAL_033_2(0.5, 0.5) == 0.5
    assert ORDINAL_033_2(0.5, 0.7) == 0.5
    assert ORDINAL_033_2(0.3, 0.7) == 0.3
    assert ORDINAL_033_2(0.5, 0.3) == 2.0 * (0.5 * 0.3)
    # the plateau: everything in [1/2, 1]^2 with x + y <= 3/2 maps to 1/2
    assert ORDINAL_033_2(0.55, 0.6) == 0.5
    assert ORDINAL_033_2(0.6, 0.65) == 0.5
    assert ORDINAL_033_2(0.7, 0.8) == 0.5


def test_lukasiewicz_zero_region():
    assert LUKASIEWICZ(0.3, 0.5) == 0.0
    assert LUKASIEWICZ(0.4, 0.6) == 0.0
    assert LUKASIEWICZ(0.9, 0.8) == pytest.approx(0.7, abs=1e-15)


def test_wstar_zero_divisor_pair():
    ln2 = math.log(2.0)
    assert math.isinf(WSTAR(ln2, ln2))
    assert math.isinf(WSTAR(1.0, 1.0))
    assert not math.isinf(WSTAR(0.5, 0.5))


def test_wstar_equals_transposed_lukasiewicz_bitwise():
    tl = transpose(LUKASIEWICZ)
    pts = [0.0, 0.1, 0.25, math.log(2.0), 1.0, 2.5, 7.0, INF]
    for x in pts:
        for y in pts:
            a, b = WSTAR(x, y), tl(x, y)
            assert a == b or (math.isinf(a) and math.isinf(b))


def test_transposed_godel_is_max_bitwise():
    tg = transpose(GODEL)
    pts = [0.0, 0.1, 1.0 / 3.0, 0.5, 1.0, 2.0, 17.3, 700.0, INF]
    for x in pts:
        for y in pts:
            assert tg(x, y) == max(x, y)


@settings(max_examples=200, deadline=None)
@given(dist, dist)
def test_transposed_product_is_addition(x, y):
    tp = transpose(PRODUCT)
    got = tp(x, y)
    want = x + y
    if math.isinf(want):
        assert math.isinf(got)
    else:
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(builtin_tnorms()), unit, unit)
def test_tnorm_basic_laws(t, x, y):
    assert t(x, 1.0) == x
    assert t(1.0, x) == x
    assert t(x, 0.0) == 0.0
    assert t(x, y) == t(y, x)
    assert 0.0 <= t(x, y) <= min(x, y)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(builtin_lops()), dist, dist)
def test_lop_basic_laws(op, x, y):
    assert op(x, 0.0) == x
    assert op(0.0, x) == x
    assert math.isinf(op(x, INF))
    assert op(x, y) == op(y, x)
    if op.transpose_of:
        # domination by max is ill-conditioned through -ln near the blow-up
        # boundary (a half ulp of t costs e^value upstairs); the equivalent
        # downstairs law T(u, v) <= min(u, v) is stable there
        w = op(x, y)
        assert math.exp(-w) <= min(math.exp(-x), math.exp(-y)) + 1e-12
    else:
        assert op(x, y) >= max(x, y) or op(x, y) == pytest.approx(max(x, y))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(builtin_tnorms()), unit, unit, unit)
def test_tnorm_monotone_and_associative(t, x, y, z):
    lo, hi = min(y, z), max(y, z)
    assert t(x, lo) <= t(x, hi) + 1e-12
    a = t(t(x, y), z)
    b = t(x, t(y, z))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_vector_evaluators_match_scalar():
    # t-norms and max/plus use only exact float arithmetic, so the vector
    # evaluators must agree with the scalars bit for bit.  wstar and the
    # transposes route through exp/log, where numpy's vectorized kernels may
    # round differently from libm by an ulp or two; the witness search never
    # trusts those vector values without scalar re-verification.
    rng = np.random.default_rng(7)
    xs = np.concatenate([rng.random(500), [0.0, 1.0, 0.5, 0.25]])
    ys = np.concatenate([rng.random(500), [1.0, 0.0, 0.5, 2.0 ** -20]])
    for t in builtin_tnorms():
        vec = t.vfn(xs, ys)
        for i in range(xs.size):
            assert vec[i] == t.fn(float(xs[i]), float(ys[i])), t.name
    lxs = np.concatenate([rng.random(500) * 5.0, [0.0, INF, math.log(2.0)]])
    lys = np.concatenate([rng.random(500) * 5.0, [INF, 0.0, math.log(2.0)]])
    for op in builtin_lops():
        exact = op.name in ("max", "plus")
        vec = op.vfn(lxs, lys)
        for i in range(lxs.size):
            s = op.fn(float(lxs[i]), float(lys[i]))
            v = float(vec[i])
            if math.isinf(s) or math.isinf(v):
                assert math.isinf(s) and math.isinf(v), op.name
            elif exact:
                assert v == s, op.name
            else:
                assert math.isclose(v, s, rel_tol=1e-12, abs_tol=1e-12), op.name


def test_all_registered_operations_pass_laws():
    assert check_all_laws() == []


def test_parsing_and_aliases():
    assert parse_tnorm("min") is GODEL
    assert parse_tnorm("prod") is PRODUCT
    assert parse_tnorm("luk") is LUKASIEWICZ
    assert parse_tnorm("ordinal033_2") is ORDINAL_033_2
    assert parse_lop("max") is MAX
    assert parse_lop("plus") is PLUS
    assert parse_lop("wstar") is WSTAR
    assert parse_lop("transpose(min)").name == "transpose(godel)"
    assert parse_lop("transpose(dyadic033_3)").name == "transpose(dyadic_033_3)"
    with pytest.raises(ValueError):
        parse_tnorm("nope")
    with pytest.raises(ValueError):
        parse_lop("transpose(nope)")
    with pytest.raises(ValueError):
        parse_lop("transpose(max)")


def test_transpose_is_cached():
    assert transpose(GODEL) is transpose("godel")
    assert len(builtin_lops()) == 8


def test_declared_flags_read_back():
    assert WSTAR.flags["NZD"] is False and WSTAR.flags["LCS"] is True
    assert MAX.flags["CL"] is False and MAX.flags["LS"] is True
    assert PLUS.flags["CL"] is True
    t_ord = transpose(ORDINAL_033_2)
    assert t_ord.flags["LCS"] is False and t_ord.flags["continuous"] is True
    t_dy = transpose(DYADIC_033_3)
    assert t_dy.flags["CL"] is True and t_dy.flags["continuous"] is False
    assert GODEL.flags["strict_on_pairs"] is True
    assert GODEL.flags["cancellative"] is False
    assert DYADIC_033_3.flags["cancellative"] is True
