"""Closure and agreement experiments over the sup-construction.

Each closure experiment draws random members of a regularity class, pushes
pairs through the tensor, classifies the outputs, and compares the observed
closure with the predicate promised by the operation flags:

* ``d_plus`` is closed iff ``L`` has no zero divisors;
* ``d_plus_0`` is closed iff ``T`` is continuous and ``L`` is strictly
  increasing below infinity;
* ``d_plus_c`` (given a continuous ``T``) is closed iff ``L`` is strictly
  increasing below infinity;
* ``d_plus_sc`` (given continuous ``T`` and ``L``) is closed iff ``L`` is
  strictly increasing below infinity and ``T`` is strict on pairs;
* ``ideal`` asks whether tensoring a continuous function with an arbitrary
  non-defective one stays continuous, which holds iff ``T`` is continuous
  and ``L`` is cancellative.

When the predicate says "not closed" and random search does not stumble on
a violation, the deterministic witness constructors take over.  Every
witness is re-verified through the engine before it is reported; a witness
that fails its own guarantee raises instead of passing silently.

Verdicts: ``reproduced`` (observation matches the predicate),
``refuted-instance-found`` (a verified violation of a predicate that claims
closure), and ``inconclusive`` (hypotheses unmet, or enclosures that stayed
undecided after one tolerance tightening).
"""

import math
import os
import re
import tempfile
from dataclasses import dataclass, field, replace

import numpy as np

from .classify import FAILS, HOLDS, UNDECIDED, classify
from .ddf import dumps_ddf, make_ddf, make_step, qsup
from .engine import (TensorRequest, dumps_curve, tau_bounds,
                     tau_equals_tensor, tensor, tensor_quasi)
from .falsify import falsify
from .gen import random_ddf
from .ops import parse_lop, parse_tnorm
from .pl import PL
from .witnesses import (witness_prop43, witness_prop44, witness_thm42,
                        witness_thm49)

CLASSES = ("d_plus", "d_plus_0", "d_plus_c", "d_plus_sc", "ideal")

ALL_THEOREMS = ("thm38", "thm42", "prop43", "prop44",
                "thm46", "thm47", "cor48", "thm49")

REPRODUCED = "reproduced"
REFUTED = "refuted-instance-found"
INCONCLUSIVE = "inconclusive"

_CLASS_THEOREM = {"d_plus": "thm42", "d_plus_0": "thm46",
                  "d_plus_c": "thm47", "d_plus_sc": "cor48",
                  "ideal": "thm49"}
_CLASS_KINDS = {"d_plus": ("nondefective", "nondefective"),
                "d_plus_0": ("d0", "d0"),
                "d_plus_c": ("continuous", "continuous"),
                "d_plus_sc": ("strict", "strict"),
                "ideal": ("nondefective", "continuous")}


@dataclass(frozen=True)
class Instance:
    """One sampled or constructed input pair and what became of it."""

    index: int
    source: str            # "random" or "constructed"
    outcome: str           # "in-class" / "out-of-class" / "undecided" / ...
    detail: str = ""
    jump_location: float = None
    jump_size: float = None
    envelope_width: float = 0.0   # largest pointwise row width (0 if exact)
    f: object = field(default=None, repr=False)
    g: object = field(default=None, repr=False)
    output: object = field(default=None, repr=False)


@dataclass(frozen=True)
class Direction:
    """One (operation pair, class) leg of a theorem at desk scale."""

    label: str
    lop: str
    tnorm: str
    cls: str
    hypotheses: tuple
    predicate_closed: object   # True / False / None when hypotheses unmet
    samples: int
    seed: int
    tolerance: float
    instances: tuple
    outcome: str
    notes: tuple = ()


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    directions: tuple
    verdict: str
    notes: tuple = ()

    def dumps(self, witness_paths=None):
        """Key-value text: a report header, then one block per instance."""
        paths = witness_paths or {}
        lines = [f"theorem: {self.theorem_id}",
                 f"verdict: {self.verdict}",
                 f"directions: {len(self.directions)}"]
        for note in self.notes:
            lines.append(f"note: {note}")
        for d_i, d in enumerate(self.directions):
            lines.append("")
            lines.extend([
                f"direction: {d.label}",
                f"lop: {d.lop}",
                f"tnorm: {d.tnorm}",
                f"class: {d.cls}",
                f"hypotheses: {'; '.join(d.hypotheses) or '-'}",
                f"predicate_closed: {_show(d.predicate_closed)}",
                f"samples: {d.samples}",
                f"seed: {d.seed}",
                f"tolerance: {_show(d.tolerance)}",
                f"outcome: {d.outcome}",
            ])
            for note in d.notes:
                lines.append(f"note: {note}")
            for inst in d.instances:
                lines.append("")
                lines.extend([
                    f"instance: {inst.index}",
                    f"theorem_id: {self.theorem_id}",
                    f"source: {inst.source}",
                    f"outcome: {inst.outcome}",
                    f"jump_location: {_show(inst.jump_location)}",
                    f"jump_size: {_show(inst.jump_size)}",
                    f"envelope_width: {_show(inst.envelope_width)}",
                ])
                if inst.detail:
                    lines.append(f"detail: {inst.detail}")
                names = paths.get((d_i, inst.index))
                if names:
                    lines.append(f"witness_files: {' '.join(names)}")
        return "\n".join(lines) + "\n"

    def save(self, directory):
        """Write the report and the witness files; returns the report path.

        Witness inputs are written in the ``ddf v1`` format and enclosure
        outputs in ``curve v1``; only instances that left their class (or
        separated the two constructions) carry files.  All writes go
        through a temporary file and an atomic rename.
        """
        os.makedirs(directory, exist_ok=True)
        paths = {}
        for d_i, d in enumerate(self.directions):
            tag = _safe_name(f"{self.theorem_id}_{d_i}_{d.lop}_{d.tnorm}")
            for inst in d.instances:
                if inst.outcome in ("in-class", "undecided") or inst.f is None:
                    continue
                names = []
                for role, obj in (("f", inst.f), ("g", inst.g),
                                  ("out", inst.output)):
                    if obj is None:
                        continue
                    if isinstance(obj, PL):
                        name = f"{tag}_{inst.index}_{role}.ddf"
                        text = dumps_ddf(obj)
                    else:
                        name = f"{tag}_{inst.index}_{role}.curve"
                        text = dumps_curve(obj)
                    _write_atomic(os.path.join(directory, name), text)
                    names.append(name)
                paths[(d_i, inst.index)] = tuple(names)
        report_path = os.path.join(directory, f"{self.theorem_id}.report")
        _write_atomic(report_path, self.dumps(witness_paths=paths))
        return report_path


def _show(v):
    if v is None:
        return "-"
    if v is True:
        return "true"
    if v is False:
        return "false"
    return repr(v)


def _safe_name(s):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", s)


def _write_atomic(path, text):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# -- closure experiments ------------------------------------------------------------


def _predicate(lop, tnorm, cls):
    """(closed?, hypothesis strings, reason); closed is None if hypotheses fail."""
    if cls == "d_plus":
        return (lop.NZD, (f"L.NZD={lop.NZD}",),
                "closed iff L has no zero divisors")
    if cls == "d_plus_0":
        hyp = (f"T.continuous={tnorm.continuous}", f"L.LS={lop.LS}")
        return (tnorm.continuous and lop.LS, hyp,
                "closed iff T is continuous and L is strictly increasing"
                " below infinity")
    if cls == "d_plus_c":
        hyp = (f"T.continuous={tnorm.continuous}", f"L.LS={lop.LS}")
        if not tnorm.continuous:
            return (None, hyp, "stated for continuous T only")
        return (lop.LS, hyp, "closed iff L is strictly increasing below"
                " infinity (T continuous given)")
    if cls == "d_plus_sc":
        hyp = (f"T.continuous={tnorm.continuous}",
               f"L.continuous={lop.continuous}",
               f"L.LS={lop.LS}",
               f"T.strict_on_pairs={tnorm.strict_on_pairs}")
        if not (tnorm.continuous and lop.continuous):
            return (None, hyp, "stated for continuous T and L only")
        return (lop.LS and tnorm.strict_on_pairs, hyp,
                "closed iff L is strictly increasing below infinity and T"
                " is strict on pairs")
    if cls == "ideal":
        hyp = (f"T.continuous={tnorm.continuous}", f"L.CL={lop.CL}")
        return (tnorm.continuous and lop.CL, hyp,
                "an ideal iff T is continuous and L is cancellative")
    raise ValueError(f"unknown class {cls!r}; pick one of {CLASSES}")


def _target_class(cls):
    return "d_plus_c" if cls == "ideal" else cls


def _classify_output(out, tol):
    if isinstance(out, PL):
        return classify(out)
    return classify(out, tolerance=tol)


def _row_width(out):
    if isinstance(out, PL):
        return 0.0
    return max(hi - lo for lo, hi in zip(out.lows, out.highs))


def _membership(lop, tnorm, f, g, cls, tol):
    """Tensor the pair and classify; tightens once if undecided."""
    out = tensor(TensorRequest(lop, tnorm, f, g, tolerance=tol))
    rec = _classify_output(out, tol)
    m = rec[_target_class(cls)]
    if m.status == UNDECIDED and not isinstance(out, PL):
        out = tensor(TensorRequest(lop, tnorm, f, g, tolerance=tol / 10.0))
        rec = _classify_output(out, tol / 10.0)
        m = rec[_target_class(cls)]
    return out, m


_OUTCOME = {HOLDS: "in-class", FAILS: "out-of-class", UNDECIDED: "undecided"}


def _instance(index, source, f, g, out, m):
    jump_at = jump_size = None
    w = m.witness
    if isinstance(w, tuple) and w and w[0] == "jump":
        jump_at, jump_size = w[2], w[3]
    return Instance(index=index, source=source, outcome=_OUTCOME[m.status],
                    detail=m.detail, jump_location=jump_at,
                    jump_size=jump_size, envelope_width=_row_width(out),
                    f=f, g=g, output=out)


def _tnorm_jump_level(tnorm):
    """A level ``p`` whose section ``T(p, .)`` visibly jumps, or None.

    Scans a sixteenths grid and probes the right limit one ulp away; the
    largest observed tear wins.
    """
    best, best_p = 0.0, None
    for i in range(1, 16):
        p = i / 16.0
        for j in range(1, 16):
            y = j / 16.0
            tear = tnorm.fn(p, math.nextafter(y, 1.0)) - tnorm.fn(p, y)
            if tear > best:
                best, best_p = tear, p
    return best_p


def _normalized_cl_points(lop, witness):
    """CL witness as (r, s, s2) with 0 < s < s2 and L(r,s) = L(r,s2)."""
    r, a, b = witness.points
    s, s2 = sorted((a, b))
    if s > 0.0:
        return r, s, s2
    target = lop.fn(r, s2)
    for c in (0.5 * s2, 0.25 * s2, 0.75 * s2):
        if 0.0 < c < s2 and lop.fn(r, c) == target:
            return r, c, s2
    raise ValueError("cancellation witness could not be moved off zero")


def _witness_candidates(lop, tnorm, cls):
    """Deterministic constructions that should violate closure of ``cls``."""
    out = []
    if cls == "d_plus" and not lop.NZD:
        def build_nzd():
            f = witness_thm42(lop)
            return f, f
        out.append(("zero-divisor self-tensor ramp", build_nzd))
    if cls in ("d_plus_0", "ideal") and not tnorm.continuous:
        def build_tear():
            p = _tnorm_jump_level(tnorm)
            if p is None:
                raise ValueError(f"no visible tear in {tnorm.name}")
            return witness_prop43(p)
        out.append(("plateau-then-ramp pair at a tearing level", build_tear))
    if cls in ("d_plus_0", "d_plus_c", "d_plus_sc") and not lop.LS:
        def build_ls():
            res = falsify(lop, "LS", budget=100_000, seed=0)
            if not res.found:
                raise ValueError(f"no LS failure found for {lop.name}")
            r, s, r2, s2 = res.witness.points
            return witness_prop44(r, r2, s, s2, 0.5, op=lop)
        out.append(("two-ramp pair over an LS plateau", build_ls))
    if cls == "d_plus_sc" and not tnorm.strict_on_pairs:
        def build_ramps():
            ramp = make_ddf((0.0, 1.0), (0.0, 1.0), (1.0, 0.0))
            return ramp, ramp
        out.append(("unit ramp pair (T not strict on pairs)", build_ramps))
    if cls == "ideal" and not lop.CL:
        def build_cl():
            res = falsify(lop, "CL", budget=100_000, seed=0)
            if not res.found:
                raise ValueError(f"no CL failure found for {lop.name}")
            r, s, s2 = _normalized_cl_points(lop, res.witness)
            return witness_thm49(r, s, s2, 0.5, op=lop)
        out.append(("jump-after-plateau against a cancellation failure",
                    build_cl))
    return out


def _construct_witness(lop, tnorm, cls, tol, index):
    """A verified out-of-class instance, or RuntimeError if none verifies."""
    tried = []
    for label, build in _witness_candidates(lop, tnorm, cls):
        try:
            f, g = build()
        except (ValueError, ArithmeticError) as exc:
            tried.append(f"{label}: {exc}")
            continue
        out, m = _membership(lop, tnorm, f, g, cls, tol)
        if m.status == FAILS:
            inst = _instance(index, "constructed", f, g, out, m)
            return replace(inst, detail=f"{label}; {m.detail}")
        tried.append(f"{label}: output classified {m.status}")
    raise RuntimeError(
        f"no witness violating {cls} closure under ({lop.name},"
        f" {tnorm.name}) survived engine verification: {'; '.join(tried)}")


def closure_experiment(L, T, cls, samples=100, seed=0, tolerance=1e-2):
    """Random closure check of ``cls`` under ``(L, T)`` plus witness duty.

    Draws ``samples`` random class members, tensors and classifies them,
    and compares the observation with the flag predicate.  When the
    predicate says "not closed" and no random pair left the class, a
    deterministic witness is constructed and verified.  Returns a
    single-direction :class:`TheoremReport`.
    """
    lop = parse_lop(L) if isinstance(L, str) else L
    tnorm = parse_tnorm(T) if isinstance(T, str) else T
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}; pick one of {CLASSES}")
    closed, hyps, reason = _predicate(lop, tnorm, cls)

    rng = np.random.default_rng(seed)
    kf, kg = _CLASS_KINDS[cls]
    instances = []
    for i in range(int(samples)):
        f = random_ddf(rng, kf)
        g = random_ddf(rng, kg)
        out, m = _membership(lop, tnorm, f, g, cls, tolerance)
        instances.append(_instance(i, "random", f, g, out, m))

    notes = [reason]
    escaped = [x for x in instances if x.outcome == "out-of-class"]
    undecided = [x for x in instances if x.outcome == "undecided"]
    if closed is None:
        outcome = INCONCLUSIVE
        notes.append("hypotheses not met; the stated direction does not"
                     " apply to this pair")
    elif closed:
        if escaped:
            outcome = REFUTED
            notes.append(f"instance {escaped[0].index} left the class"
                         " despite a closure predicate")
        elif undecided:
            outcome = INCONCLUSIVE
            notes.append(f"{len(undecided)} enclosures stayed undecided"
                         " after tightening")
        else:
            outcome = REPRODUCED
    else:
        if not escaped:
            witness = _construct_witness(lop, tnorm, cls, tolerance,
                                         len(instances))
            instances.append(witness)
            escaped.append(witness)
        outcome = REPRODUCED
        notes.append(f"violation verified on instance {escaped[0].index}")

    direction = Direction(
        label=f"closure of {cls} under (L={lop.name}, T={tnorm.name})",
        lop=lop.name, tnorm=tnorm.name, cls=cls, hypotheses=hyps,
        predicate_closed=closed, samples=int(samples), seed=int(seed),
        tolerance=tolerance, instances=tuple(instances), outcome=outcome,
        notes=tuple(notes))
    return TheoremReport(theorem_id=_CLASS_THEOREM[cls],
                         directions=(direction,), verdict=outcome)


# -- the per-theorem suite ---------------------------------------------------------


def _merge(theorem_id, directions, notes=()):
    outcomes = [d.outcome for d in directions]
    if REFUTED in outcomes:
        verdict = REFUTED
    elif INCONCLUSIVE in outcomes:
        verdict = INCONCLUSIVE
    else:
        verdict = REPRODUCED
    return TheoremReport(theorem_id=theorem_id, directions=tuple(directions),
                         verdict=verdict, notes=tuple(notes))


def _closure_directions(cls, pairs, samples, seed, tolerance):
    return [closure_experiment(L, T, cls, samples=samples, seed=seed,
                               tolerance=tolerance).directions[0]
            for L, T in pairs]


def _agreement_direction(lname, seed):
    """Strict against weak construction for one operation (step inputs)."""
    lop = parse_lop(lname)
    verdict = tau_equals_tensor(lop, "godel", budget=60_000, seed=seed)
    agree = lop.LCS
    instances = ()
    if verdict.equal is False:
        f, g, x0 = verdict.witness
        lo, hi = tau_bounds(lop, "godel", f, g, x0)
        strict_at = tensor(TensorRequest(lop, "godel", f, g)).value(x0)
        if not (lo == hi == 1.0 and strict_at == 0.0):
            raise RuntimeError(
                f"separating witness for {lop.name} failed re-verification")
        instances = (Instance(
            index=0, source="constructed", outcome="separated",
            detail=(f"weak construction reaches 1 at {x0!r} while the"
                    " strict one is still 0"),
            jump_location=x0, jump_size=1.0, envelope_width=0.0,
            f=f, g=g),)
        outcome = REFUTED if agree else REPRODUCED
    elif verdict.equal is True:
        outcome = REPRODUCED if agree else REFUTED
    else:
        outcome = INCONCLUSIVE
    return Direction(
        label=f"strict-weak agreement for {lop.name}",
        lop=lop.name, tnorm="godel", cls="-",
        hypotheses=(f"L.LCS={agree}",), predicate_closed=agree,
        samples=0, seed=int(seed), tolerance=0.0, instances=instances,
        outcome=outcome, notes=(verdict.detail,))


def _report_thm38(samples, seed, tolerance):
    directions = [_agreement_direction(name, seed) for name in
                  ("max", "plus", "wstar", "transpose(ordinal_033_2)")]
    return _merge("thm38", directions,
                  notes=("the weak and strict constructions coincide"
                         " exactly for operations without finite"
                         " plateaus",))


def _prop43_direction(tname, tolerance):
    tnorm = parse_tnorm(tname)
    preserved = tnorm.continuous
    if preserved:
        p = 0.5
    else:
        p = _tnorm_jump_level(tnorm)
        if p is None:
            raise RuntimeError(f"no visible tear found in {tnorm.name}")
    f, g = witness_prop43(p)
    out, m = _membership(parse_lop("max"), tnorm, f, g, "d_plus_0",
                         tolerance)
    inst = _instance(0, "constructed", f, g, out, m)
    matches = (m.status == HOLDS) if preserved else (m.status == FAILS)
    if m.status == UNDECIDED:
        outcome = INCONCLUSIVE
    elif matches:
        outcome = REPRODUCED
    else:
        raise RuntimeError(
            f"plateau-then-ramp pair under {tnorm.name} classified"
            f" {m.status}, expected {'in' if preserved else 'out of'}"
            " d_plus_0")
    return Direction(
        label=f"continuity across the tensor under T={tnorm.name}",
        lop="max", tnorm=tnorm.name, cls="d_plus_0",
        hypotheses=(f"T.continuous={tnorm.continuous}",),
        predicate_closed=preserved, samples=0, seed=0, tolerance=tolerance,
        instances=(inst,), outcome=outcome,
        notes=(f"plateau level p={p!r}",))


def _report_prop43(samples, seed, tolerance):
    directions = [_prop43_direction(t, tolerance)
                  for t in ("godel", "product", "dyadic_033_3")]
    return _merge("prop43", directions)


def _report_prop44(samples, seed, tolerance):
    lop = parse_lop("transpose(ordinal_033_2)")
    res = falsify(lop, "LS", budget=100_000, seed=seed)
    if not res.found:
        raise RuntimeError(f"no LS failure found for {lop.name}")
    r, s, r2, s2 = res.witness.points
    y0 = 0.5
    f, g = witness_prop44(r, r2, s, s2, y0, op=lop)
    # guarantee: the output's inverse is pinned to one value on [y0, 1[
    c = lop.fn(r, s)
    u, v = qsup(f), qsup(g)
    for y in (y0, 0.5 * (1.0 + y0), 1.0 - 1e-9):
        if tensor_quasi(lop, "godel", u, v, y) != (c, c):
            raise RuntimeError("two-ramp witness failed its pinned-inverse"
                               " guarantee")
    out, m = _membership(lop, "godel", f, g, "d_plus_0", tolerance)
    if m.status != FAILS:
        raise RuntimeError("two-ramp witness output did not leave d_plus_0")
    inst = _instance(0, "constructed", f, g, out, m)
    direction = Direction(
        label=f"two continuous ramps tear under L={lop.name}",
        lop=lop.name, tnorm="godel", cls="d_plus_0",
        hypotheses=(f"L.LS={lop.LS}",), predicate_closed=False,
        samples=0, seed=int(seed), tolerance=tolerance, instances=(inst,),
        outcome=REPRODUCED,
        notes=(f"output inverse pinned at {c!r} on [{y0!r}, 1[",))
    return _merge("prop44", [direction])


def _report_thm42(samples, seed, tolerance):
    directions = _closure_directions(
        "d_plus", (("plus", "godel"), ("wstar", "godel")),
        samples, seed, tolerance)
    return _merge("thm42", directions)


def _report_thm46(samples, seed, tolerance):
    directions = _closure_directions(
        "d_plus_0", (("max", "godel"), ("max", "dyadic_033_3"),
                     ("transpose(ordinal_033_2)", "godel")),
        samples, seed, tolerance)
    return _merge("thm46", directions)


def _report_thm47(samples, seed, tolerance):
    directions = _closure_directions(
        "d_plus_c", (("max", "godel"),
                     ("transpose(ordinal_033_2)", "godel")),
        samples, seed, tolerance)
    unit = classify(make_step(0.0, 1.0))
    if not (unit.d_plus.status == HOLDS and unit.d_plus_c.status == FAILS):
        raise RuntimeError("the unit step misclassified")
    return _merge("thm47", directions,
                  notes=("the unit step lies outside d_plus_c, so the"
                         " closed cases form a subsemigroup but not a"
                         " submonoid",))


def _report_cor48(samples, seed, tolerance):
    directions = _closure_directions(
        "d_plus_sc", (("plus", "product"), ("max", "lukasiewicz"),
                      ("transpose(ordinal_033_2)", "godel")),
        samples, seed, tolerance)
    return _merge("cor48", directions)


def _report_thm49(samples, seed, tolerance):
    directions = _closure_directions(
        "ideal", (("plus", "product"), ("max", "product")),
        samples, seed, tolerance)
    return _merge("thm49", directions)


_REPORTERS = {"thm38": _report_thm38, "thm42": _report_thm42,
              "prop43": _report_prop43, "prop44": _report_prop44,
              "thm46": _report_thm46, "thm47": _report_thm47,
              "cor48": _report_cor48, "thm49": _report_thm49}


def run_suite(ids, samples=20, seed=0, tolerance=1e-2):
    """One deterministic report per theorem id, in the order given."""
    if not ids:
        raise ValueError("no theorem ids given")
    unknown = [i for i in ids if i not in _REPORTERS]
    if unknown:
        raise ValueError(f"unknown theorem ids {unknown!r}; known ids are"
                         f" {ALL_THEOREMS}")
    return [_REPORTERS[i](samples, seed, tolerance) for i in ids]
