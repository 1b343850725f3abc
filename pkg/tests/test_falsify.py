import math

import pytest

from ddfkit.falsify import contradictions, falsify, survey
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
    transpose,
)

BUDGET = 30_000  # plenty for the structured phase; acceptance uses 100k


def found(op, cond):
    return falsify(op, cond, budget=BUDGET, seed=0)


def test_wstar_violates_nzd_with_finite_pair():
    res = found(WSTAR, "NZD")
    assert res.found
    x, y = res.witness.points
    assert math.isfinite(x) and math.isfinite(y)
    assert math.isinf(WSTAR(x, y))


def test_wstar_violates_ls_but_not_lcs():
    res = found(WSTAR, "LS")
    assert res.found
    x, y, x2, y2 = res.witness.points
    assert x < x2 and y < y2
    assert WSTAR(x, y) == WSTAR(x2, y2)
    assert math.isinf(WSTAR(x2, y2))  # equal values are necessarily infinite
    assert not found(WSTAR, "LCS").found


def test_max_violates_cl_only():
    res = found(MAX, "CL")
    assert res.found
    x, y, z = res.witness.points
    assert math.isfinite(x) and y < z
    assert max(x, y) == max(x, z)
    for cond in ("LS", "LCS", "NZD"):
        assert not found(MAX, cond).found


def test_plus_satisfies_everything():
    for cond, res in survey(PLUS, budget=BUDGET).items():
        assert not res.found, cond


def test_transposed_ordinal_violates_lcs_with_finite_values():
    op = transpose(ORDINAL_033_2)
    res = found(op, "LCS")
    assert res.found
    x, y, x2, y2 = res.witness.points
    assert x < x2 and y < y2
    v1, v2 = op(x, y), op(x2, y2)
    assert v1 == v2 and math.isfinite(v2)
    # the shared value is -ln(1/2): the image of the plateau at one half
    assert v1 == pytest.approx(math.log(2.0), abs=1e-12)
    assert found(op, "LS").found
    assert not found(op, "NZD").found


def test_transposed_dyadic_is_clean():
    op = transpose(DYADIC_033_3)
    for cond, res in survey(op, budget=BUDGET).items():
        assert not res.found, cond


def test_godel_strict_on_pairs_but_not_literal():
    assert not found(GODEL, "TS").found
    res = found(GODEL, "TS_literal")
    assert res.found
    p, q, p2, q2 = res.witness.points
    assert (p, q) != (p2, q2) and p <= p2 and q <= q2
    assert min(p, q) == min(p2, q2)
    assert found(GODEL, "CL").found  # min is not cancellative


def test_lukasiewicz_zero_region_breaks_strictness():
    res = found(LUKASIEWICZ, "TS")
    assert res.found
    assert res.witness.values[0] == 0.0
    assert found(LUKASIEWICZ, "CL").found


def test_ordinal_plateau_breaks_strictness():
    res = found(ORDINAL_033_2, "TS")
    assert res.found
    assert res.witness.values[0] == 0.5


def test_product_and_dyadic_are_strict_and_cancellative():
    for t in (PRODUCT, DYADIC_033_3):
        assert not found(t, "TS").found, t.name
        assert not found(t, "CL").found, t.name


def test_no_declared_flag_is_refuted():
    for op in builtin_tnorms() + builtin_lops():
        assert contradictions(op, budget=BUDGET) == [], op.name


def test_search_is_deterministic():
    a = falsify(WSTAR, "NZD", budget=BUDGET, seed=123)
    b = falsify(WSTAR, "NZD", budget=BUDGET, seed=123)
    assert a == b


def test_unknown_condition_rejected():
    with pytest.raises(ValueError):
        falsify(GODEL, "NZD")
    with pytest.raises(ValueError):
        falsify(MAX, "TS")
