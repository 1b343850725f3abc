import os

import pytest

from ddfkit.classify import classify
from ddfkit.ddf import loads_ddf
from ddfkit.engine import loads_curve
from ddfkit.experiments import (
    ALL_THEOREMS,
    CLASSES,
    closure_experiment,
    run_suite,
)
from ddfkit.ops import builtin_lops, builtin_tnorms
from ddfkit.pl import PL


def test_suite_reproduces_every_report():
    for report in run_suite(ALL_THEOREMS, samples=5, seed=0):
        assert report.verdict == "reproduced", (
            f"{report.theorem_id}: {report.verdict}\n{report.dumps()}")


def test_closure_without_zero_divisors_holds_on_samples():
    rep = closure_experiment("plus", "godel", "d_plus", samples=10, seed=3)
    d = rep.directions[0]
    assert d.predicate_closed is True
    assert rep.verdict == "reproduced"
    assert all(i.outcome == "in-class" for i in d.instances)


def test_closure_with_zero_divisors_finds_a_witness():
    rep = closure_experiment("wstar", "godel", "d_plus", samples=4, seed=0)
    d = rep.directions[0]
    assert d.predicate_closed is False
    assert rep.verdict == "reproduced"
    escaped = [i for i in d.instances if i.outcome == "out-of-class"]
    assert escaped
    # the violation is verified: the instance carries its inputs and output
    w = escaped[0]
    assert w.f is not None and w.output is not None
    assert classify(w.output, tolerance=d.tolerance).d_plus.status == "fails"


def test_ideal_breaks_without_cancellation():
    rep = closure_experiment("max", "product", "ideal", samples=4, seed=0)
    d = rep.directions[0]
    assert d.predicate_closed is False
    assert rep.verdict == "reproduced"
    assert any(i.outcome == "out-of-class" for i in d.instances)


def test_predicate_agrees_with_observation_on_every_builtin_pair():
    # the flags decide closure; random draws plus constructed witnesses must
    # land on the same side for every operation pair and class
    for lop in builtin_lops():
        for tnorm in builtin_tnorms():
            for cls in CLASSES:
                rep = closure_experiment(lop.name, tnorm.name, cls,
                                         samples=2, seed=0)
                d = rep.directions[0]
                want = ("inconclusive" if d.predicate_closed is None
                        else "reproduced")
                assert rep.verdict == want, (
                    f"{lop.name} x {tnorm.name} / {cls}:\n{rep.dumps()}")


def test_jump_witnesses_clear_the_tolerance():
    rep = closure_experiment("max", "dyadic_033_3", "d_plus_0",
                             samples=2, seed=0)
    d = rep.directions[0]
    jumps = [i for i in d.instances if i.jump_size is not None]
    assert jumps
    for inst in jumps:
        assert inst.jump_size > d.tolerance
        assert inst.envelope_width >= 0.0


def test_reports_are_deterministic():
    a = closure_experiment("plus", "product", "d_plus_sc", samples=6, seed=11)
    b = closure_experiment("plus", "product", "d_plus_sc", samples=6, seed=11)
    assert a.dumps() == b.dumps()
    sa = run_suite(("thm42", "prop44"), samples=3, seed=2)
    sb = run_suite(("thm42", "prop44"), samples=3, seed=2)
    assert [r.dumps() for r in sa] == [r.dumps() for r in sb]


def test_save_writes_report_and_witness_files(tmp_path):
    rep = closure_experiment("wstar", "godel", "d_plus", samples=2, seed=0)
    path = rep.save(tmp_path)
    assert os.path.basename(path) == "thm42.report"
    text = open(path).read()
    assert text == rep.dumps(witness_paths=_paths_of(tmp_path, text))
    # no temporary files survive the atomic renames
    assert not [n for n in os.listdir(tmp_path) if n.startswith(".tmp-")]
    # witness inputs round-trip through the ddf v1 format
    d = rep.directions[0]
    escaped = [i for i in d.instances if i.outcome == "out-of-class"][0]
    stem = [n for n in os.listdir(tmp_path)
            if n.endswith(f"_{escaped.index}_f.ddf")]
    assert stem
    back = loads_ddf(open(os.path.join(tmp_path, stem[0])).read())
    assert back.same_function(escaped.f)
    curves = [n for n in os.listdir(tmp_path)
              if n.endswith(f"_{escaped.index}_out.curve")]
    if curves and not isinstance(escaped.output, PL):
        loaded = loads_curve(open(os.path.join(tmp_path, curves[0])).read())
        assert loaded.xs == escaped.output.xs


def _paths_of(directory, text):
    paths = {}
    d_i = -1
    index = None
    for line in text.splitlines():
        if line.startswith("direction: "):
            d_i += 1
        elif line.startswith("instance: "):
            index = int(line.split(": ")[1])
        elif line.startswith("witness_files: "):
            paths[(d_i, index)] = tuple(line.split(": ")[1].split())
    return paths


def test_unknown_class_and_theorem_ids_raise():
    with pytest.raises(ValueError, match="unknown class"):
        closure_experiment("plus", "godel", "everything", samples=1)
    with pytest.raises(ValueError, match="unknown theorem ids"):
        run_suite(("thm42", "thm99"))
    with pytest.raises(ValueError, match="no theorem ids"):
        run_suite(())
