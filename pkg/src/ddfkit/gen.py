"""Seeded random distribution functions for tests and experiments.

All coordinates are dyadic rationals (cuts on a 1/8 grid inside ]0, 8[,
values on a 1/1024 grid, slopes equal to powers of two), so evaluating the
generated functions and inverting them is exact in double precision.  That
lets round-trip identities be asserted with zero tolerance.

Kinds
-----
``plain``        anything: jumps, plateaus, ramps, possibly defective
``nondefective`` reaches 1 before infinity (jumps and plateaus allowed)
``d0``           nondefective, continuous except possibly at 0
``continuous``   nondefective and continuous everywhere
``strict``       continuous, strictly increasing until it reaches 1
"""

from __future__ import annotations

import numpy as np

from .ddf import make_ddf, make_step

KINDS = ("plain", "nondefective", "d0", "continuous", "strict")

_X_STEP = 0.125
_V_STEP = 1.0 / 1024.0


def _dyadic_value(rng, lo, hi):
    """A multiple of 1/1024 in [lo, hi] (lo, hi already dyadic)."""
    nlo = int(round(lo / _V_STEP))
    nhi = int(round(hi / _V_STEP))
    return int(rng.integers(nlo, nhi + 1)) * _V_STEP


def random_ddf(rng, kind="plain", max_cuts=4):
    """One random d.d.f. of the given kind, exact on dyadic grids."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "plain" and rng.random() < 0.15:
        # explicit steps, including degenerate ones
        r = float(rng.integers(0, 65)) * _X_STEP
        if rng.random() < 0.1:
            return make_step(np.inf, 0.0)
        return make_step(r, _dyadic_value(rng, 0.0, 1.0))

    ncuts = int(rng.integers(0, max_cuts + 1))
    cuts = sorted(rng.choice(np.arange(1, 64), size=ncuts, replace=False))
    xs = [0.0] + [float(c) * _X_STEP for c in cuts]

    jumps_ok = kind in ("plain", "nondefective")
    jump_at_0 = kind in ("plain", "nondefective", "d0")
    flats_ok = kind != "strict"

    starts, slopes = [], []
    cur = 0.0
    if jump_at_0 and rng.random() < 0.4:
        cur = _dyadic_value(rng, 0.0, 0.5)
    i = 0
    while i < len(xs):
        if i > 0 and jumps_ok and rng.random() < 0.35:
            cur = _dyadic_value(rng, cur, 1.0)
        width = xs[i + 1] - xs[i] if i + 1 < len(xs) else np.inf
        want_ramp = True if not flats_ok else rng.random() < 0.55
        b = 0.0
        if np.isfinite(width) and want_ramp:
            b = 2.0 ** int(rng.integers(-3, 3))
            while cur + b * width > 1.0 and b > 0.125:
                b /= 2.0
            if cur + b * width > 1.0:
                b = 0.0
        if not flats_ok and b == 0.0 and np.isfinite(width):
            # a strict function may not plateau: end the cut list here and
            # let the closing ramp below finish the climb to 1
            xs = xs[: i + 1]
            width = np.inf
        starts.append(cur)
        slopes.append(b)
        if b:
            cur = cur + b * width
        i += 1

    if kind != "plain":
        if cur < 1.0:
            # close with a ramp of power-of-two slope hitting 1 exactly
            last_x = xs[-1]
            b = 2.0 ** int(rng.integers(-2, 2))
            width = (1.0 - cur) / b  # exact: dyadic / power of two
            slopes[-1] = b
            xs.append(last_x + width)
            starts.append(1.0)
            slopes.append(0.0)
    elif rng.random() < 0.2 and cur < 1.0:
        # sprinkle in functions that do reach 1
        xs.append(xs[-1] + _X_STEP)
        starts.append(1.0)
        slopes.append(0.0)

    return make_ddf(xs, starts, slopes).canonical()


def random_pair(rng, kind="plain", max_cuts=4):
    return random_ddf(rng, kind, max_cuts), random_ddf(rng, kind, max_cuts)
