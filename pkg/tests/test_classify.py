import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfkit.classify import (
    CLASS_ORDER,
    FAILS,
    HOLDS,
    UNDECIDED,
    certified_jumps,
    certified_plateaus,
    classify,
)
from ddfkit.ddf import bottom, make_ddf, make_step, qsup, top
from ddfkit.engine import TensorRequest, tensor
from ddfkit.gen import KINDS, random_ddf
from ddfkit.pl import INF


def seeded(seed):
    return np.random.default_rng(seed)


def ramp(c):
    """Continuous, strictly increasing to 1 at ``c``, then 1."""
    return make_ddf((0.0, c), (0.0, 1.0), (1.0 / c, 0.0))


def statuses(record):
    return record.statuses()


# -- exact classification of piecewise-linear functions ---------------------------


def test_unit_step_at_zero_is_continuous_except_at_zero():
    rec = classify(make_step(0.0, 1.0))
    assert statuses(rec) == (HOLDS, HOLDS, HOLDS, FAILS, FAILS)
    assert rec.d_plus_c.witness == ("jump", 0.0, 0.0, 1.0)
    assert rec.smallest() == "d_plus_0"
    assert classify(top()).statuses() == statuses(rec)


def test_bottom_is_only_a_distribution_function():
    rec = classify(bottom())
    assert statuses(rec) == (HOLDS, FAILS, FAILS, FAILS, FAILS)
    assert rec.d_plus.witness == ("tail", 0.0, 0.0)
    assert rec.smallest() == "delta_plus"


def test_interior_unit_step_fails_past_nondefective():
    rec = classify(make_step(2.0, 1.0))
    assert statuses(rec) == (HOLDS, HOLDS, FAILS, FAILS, FAILS)
    assert rec.d_plus_0.witness == ("jump", 2.0, 2.0, 1.0)


def test_defective_step_fails_at_nondefective():
    rec = classify(make_step(2.0, 0.5))
    assert rec.d_plus.status == FAILS
    assert rec.d_plus.witness == ("tail", 0.5, 0.5)
    # the chain propagates the first failure downward
    assert rec.d_plus_sc.witness == rec.d_plus.witness


def test_strict_ramp_is_in_every_class():
    rec = classify(ramp(2.0))
    assert statuses(rec) == (HOLDS,) * 5
    assert rec.smallest() == "d_plus_sc"


def test_interior_plateau_fails_only_strictness():
    f = make_ddf((0.0, 1.0, 2.0, 3.0), (0.0, 0.5, 0.5, 1.0),
                 (0.5, 0.0, 0.5, 0.0))
    rec = classify(f)
    assert statuses(rec) == (HOLDS, HOLDS, HOLDS, HOLDS, FAILS)
    assert rec.d_plus_sc.witness == ("plateau", 1.0, 2.0, 0.5)


def test_defective_continuous_function_fails_from_nondefective_down():
    f = make_ddf((0.0, 1.0), (0.0, 0.8), (0.8, 0.0))
    rec = classify(f)
    assert statuses(rec) == (HOLDS, FAILS, FAILS, FAILS, FAILS)


def test_everything_fails_for_a_function_that_is_not_a_ddf():
    v = qsup(ramp(2.0))  # right-continuous inverse, not a d.d.f.
    rec = classify(v)
    assert statuses(rec) == (FAILS,) * 5


def test_slope_reaching_one_inside_a_piece_is_still_strict():
    f = make_ddf((0.0, 2.0), (0.0, 1.0), (0.5, 0.0))
    assert classify(f).d_plus_sc.status == HOLDS


def test_classify_rejects_other_types():
    with pytest.raises(TypeError):
        classify(0.5)


_KIND_CLASS = {
    "plain": "delta_plus",
    "nondefective": "d_plus",
    "d0": "d_plus_0",
    "continuous": "d_plus_c",
    "strict": "d_plus_sc",
}


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(KINDS))
def test_generator_kinds_land_in_their_class_and_chain_is_consistent(seed, kind):
    f = random_ddf(seeded(seed), kind)
    rec = classify(f)
    assert rec[_KIND_CLASS[kind]].status == HOLDS
    # memberships are downward closed along the chain
    seen_non_hold = False
    for name in CLASS_ORDER:
        if rec[name].status != HOLDS:
            seen_non_hold = True
        elif seen_non_hold:
            pytest.fail(f"{name} holds below a failure: {rec.summary()}")


# -- certified verdicts on enclosure curves ----------------------------------------


def test_step_tensor_curve_certifies_jump_and_defect():
    req = TensorRequest("max", "godel", make_step(1.0, 0.75),
                        make_step(2.0, 0.5), tolerance=1e-3)
    curve = tensor(req, path="bb")
    rec = classify(curve, tolerance=1e-3)
    assert rec.d_plus.status == FAILS
    assert rec.d_plus.witness[0] == "tail"
    assert rec.d_plus.witness[2] < 1.0
    jumps = certified_jumps(curve)
    assert len(jumps) == 1
    x1, x2, size = jumps[0]
    assert x1 == 2.0 and x2 == math.nextafter(2.0, INF)
    assert size == pytest.approx(0.5, abs=1e-12)


def test_nondefective_step_curve_fails_exactly_at_continuity():
    req = TensorRequest("plus", "product", make_step(1.0, 1.0),
                        make_step(0.5, 1.0), tolerance=1e-3)
    curve = tensor(req, path="bb")
    rec = classify(curve, tolerance=1e-3)
    assert statuses(rec) == (HOLDS, HOLDS, FAILS, FAILS, FAILS)
    kind, x1, x2, size = rec.d_plus_0.witness
    assert kind == "jump"
    assert x1 == 1.5 and size == pytest.approx(1.0, abs=1e-9)


def test_strict_pair_under_plus_product_holds_everywhere_at_tolerance():
    req = TensorRequest("plus", "product", ramp(1.0), ramp(2.0),
                        tolerance=1e-2)
    curve = tensor(req)
    rec = classify(curve, tolerance=1e-2)
    assert statuses(rec) == (HOLDS,) * 5
    assert rec.smallest() == "d_plus_sc"
    # pinned stretches at the saturated top are fine; below 1 they are not
    assert not [p for p in certified_plateaus(curve) if p[2] < 1.0]


def test_tight_tolerance_turns_holds_into_undecided():
    req = TensorRequest("plus", "product", ramp(1.0), ramp(2.0),
                        tolerance=1e-2)
    curve = tensor(req)
    rec = classify(curve, tolerance=1e-5)
    assert rec.d_plus.status == HOLDS
    assert rec.d_plus_0.status == UNDECIDED
    assert rec.d_plus_sc.status == UNDECIDED


def test_plateaued_step_output_fails_strictness_with_a_plateau():
    req = TensorRequest("max", "godel", make_step(1.0, 0.5), ramp(1.0),
                        tolerance=1e-3)
    curve = tensor(req, path="bb")
    plateaus = [p for p in certified_plateaus(curve) if p[2] < 1.0]
    # the output sits at 0 until 1 and at 1/2 afterwards; both are pinned
    assert [p[2] for p in plateaus] == [0.0, 0.5]
    for x1, x2, _ in plateaus:
        assert x2 > math.nextafter(x1, INF)


def test_exact_paths_classify_through_the_same_entry_point():
    req = TensorRequest("max", "godel", make_step(1.0, 0.75),
                        make_step(2.0, 0.5), tolerance=1e-3)
    out = tensor(req)  # exact: a piecewise-linear step
    rec = classify(out)
    assert rec.tolerance == 0.0
    assert rec.d_plus.status == FAILS
    assert rec.d_plus.witness == ("tail", 0.5, 0.5)


def test_classify_requires_positive_tolerance_for_curves():
    req = TensorRequest("plus", "product", ramp(1.0), ramp(1.0),
                        tolerance=1e-2)
    curve = tensor(req)
    with pytest.raises(ValueError):
        classify(curve, tolerance=0.0)


def test_tensor_output_never_exceeds_the_pointwise_minimum():
    f, g = ramp(1.0), make_ddf((0.0, 2.0), (0.25, 1.0), (0.375, 0.0))
    req = TensorRequest("plus", "product", f, g, tolerance=1e-3)
    curve = tensor(req)
    for x, lo, hi in zip(curve.xs, curve.lows, curve.highs):
        if math.isinf(x):
            continue
        cap = min(f.value(x), g.value(x))
        assert lo <= cap + 1e-12
        assert hi <= cap + 1e-3 + 1e-12
