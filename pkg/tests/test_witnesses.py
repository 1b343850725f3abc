import math

import pytest

from ddfkit.classify import FAILS, HOLDS, certified_jumps, classify
from ddfkit.ddf import make_step, qsup
from ddfkit.engine import TensorRequest, tau_bounds, tensor, tensor_quasi
from ddfkit.falsify import falsify
from ddfkit.ops import parse_lop
from ddfkit.pl import INF
from ddfkit.witnesses import (
    witness_prop43,
    witness_prop44,
    witness_thm38,
    witness_thm42,
    witness_thm49,
)

ORD = parse_lop("transpose(ordinal_033_2)")


def test_thm38_witness_separates_weak_from_strict():
    f, g, x0 = witness_thm38(ORD)
    assert math.isfinite(x0) and x0 > 0.0
    # the weak construction jumps to 1 exactly at x0 ...
    assert tau_bounds(ORD, "godel", f, g, x0) == (1.0, 1.0)
    for x in (0.5 * x0, 0.9 * x0, math.nextafter(x0, 0.0)):
        assert tau_bounds(ORD, "godel", f, g, x) == (0.0, 0.0)
    # ... while the strict one is still 0 there: its output is the step at x0
    out = tensor(TensorRequest(ORD, "godel", f, g, tolerance=1e-6))
    assert out.same_function(make_step(x0, 1.0))


def test_thm38_rejects_a_stale_witness():
    with pytest.raises(ValueError, match="re-evaluation"):
        witness_thm38("plus", witness=(1.0, 1.0, 2.0, 2.0))


def test_thm38_reports_when_no_plateau_exists():
    with pytest.raises(ValueError, match="no finite plateau"):
        witness_thm38("plus", budget=20_000)


def test_thm42_self_tensor_is_defective_under_wstar():
    res = falsify(parse_lop("wstar"), "NZD", budget=50_000)
    assert res.found
    x0 = max(res.witness.points)
    f = witness_thm42("wstar", res.witness)
    assert f.value(x0) == 0.5
    rec = classify(f)
    assert rec.d_plus_sc.status == HOLDS  # strict and non-defective

    curve = tensor(TensorRequest("wstar", "godel", f, f, tolerance=1e-3))
    assert max(curve.highs) <= 0.5 + 1e-3
    out = classify(curve, tolerance=1e-3)
    assert out.d_plus.status == FAILS  # certified defective

    # the same function under an operation without zero divisors reaches 1
    out = tensor(TensorRequest("plus", "godel", f, f, tolerance=1e-3))
    assert out.tail_value == 1.0


def test_thm42_searches_for_its_own_witness():
    f = witness_thm42("wstar")
    assert classify(f).d_plus_sc.status == HOLDS


def test_thm42_degenerate_identity_stays_nondefective():
    e = make_step(0.0, 1.0)
    out = tensor(TensorRequest("wstar", "godel", e, e, tolerance=1e-6))
    assert out.same_function(e)


def test_thm42_rejects_an_operation_without_zero_divisors():
    with pytest.raises(ValueError, match="no zero divisor"):
        witness_thm42("max", budget=20_000)


def test_prop43_closed_forms_for_continuous_tnorms():
    f, g = witness_prop43(0.5)
    exact = tensor(TensorRequest("max", "godel", f, g, tolerance=1e-6))
    for x in (0.125, 0.25, 0.5, 0.75, 1.0):
        assert exact.value(x) == min(0.5, x)
    curve = tensor(TensorRequest("max", "product", f, g, tolerance=1e-4))
    for x in (0.125, 0.25, 0.5, 0.75, 1.0):
        lo, hi = curve.bounds(x)
        assert lo - 1e-12 <= 0.5 * x <= hi + 1e-12


def test_prop43_left_continuous_tnorm_tears_a_jump():
    # T(p, .) of the dyadic-block t-norm is continuous exactly at the block
    # boundaries p = 2^-m, so pick p off the boundary; the largest tear is
    # (1 - 2 p mod 1)-sized at x = 1/2.
    f, g = witness_prop43(0.75)
    curve = tensor(TensorRequest("max", "dyadic_033_3", f, g, tolerance=1e-3))
    rec = classify(curve, tolerance=1e-3)
    assert rec.d_plus_0.status == FAILS
    assert rec.d_plus_0.witness[0] == "jump"
    big = [j for j in certified_jumps(curve, threshold=1e-3)
           if 0.0 < j[0] <= 1.0 and j[2] > 10 * 1e-3]
    assert big, "no jump above 10x tolerance certified on ]0,1]"


def test_prop43_validates_p():
    for p in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            witness_prop43(p)


def _ls_plateau_of(op):
    res = falsify(op, "LS", budget=50_000)
    assert res.found
    return res.witness


def test_prop44_output_inverse_is_pinned_constant():
    w = _ls_plateau_of(ORD)
    r, s, r2, s2 = w.points
    y0 = 0.5
    f, g = witness_prop44(r, r2, s, s2, y0, op=ORD)
    assert classify(f).d_plus_c.status == HOLDS
    assert classify(g).d_plus_c.status == HOLDS
    assert qsup(f).value(y0) == r
    assert qsup(f).limit_left(1.0) == r2
    assert qsup(g).value(y0) == s
    assert qsup(g).limit_left(1.0) == s2

    c = ORD.fn(r, s)
    u, v = qsup(f), qsup(g)
    for y in (y0, 0.75, 0.9, 1.0 - 1e-9):
        assert tensor_quasi(ORD, "godel", u, v, y) == (c, c)

    curve = tensor(TensorRequest(ORD, "godel", f, g, tolerance=1e-3))
    rec = classify(curve, tolerance=1e-3)
    assert rec.d_plus_0.status == FAILS
    assert rec.d_plus_0.witness[0] == "jump"


def test_prop44_validates_ordering_and_witness():
    with pytest.raises(ValueError, match="ordering"):
        witness_prop44(2.0, 1.0, 0.5, 1.0, 0.5)
    with pytest.raises(ValueError, match="ordering"):
        witness_prop44(1.0, 2.0, 0.5, 1.0, 1.5)
    with pytest.raises(ValueError, match="re-evaluation"):
        witness_prop44(1.0, 2.0, 0.5, 1.0, 0.5, op="plus")


def test_thm49_max_witness_from_the_cancellation_failure():
    f, g = witness_thm49(2.0, 0.5, 1.0, 0.5, op="max")
    assert f.value(2.0) == 0.5
    assert f.limit_right(2.0) == 1.0
    assert classify(f).d_plus.status == HOLDS
    assert classify(g).d_plus_sc.status == HOLDS
    assert qsup(f).value(0.5) == 2.0
    assert qsup(f).limit_left(1.0) == 2.0

    u, v = qsup(f), qsup(g)
    for y in (0.5, 0.7, 0.95):
        assert tensor_quasi("max", "godel", u, v, y) == (2.0, 2.0)

    out = tensor(TensorRequest("max", "godel", f, g, tolerance=1e-6))
    rec = classify(out)
    assert rec.d_plus.status == HOLDS
    assert rec.d_plus_c.status == FAILS
    assert rec.d_plus_0.witness[0] == "jump"
    assert rec.d_plus_0.witness[1] == 2.0


def test_thm49_validates_ordering_and_witness():
    with pytest.raises(ValueError, match="ordering"):
        witness_thm49(INF, 0.5, 1.0, 0.5)
    with pytest.raises(ValueError, match="ordering"):
        witness_thm49(2.0, 1.0, 0.5, 0.5)
    with pytest.raises(ValueError, match="re-evaluation"):
        witness_thm49(2.0, 0.5, 1.0, 0.5, op="plus")
