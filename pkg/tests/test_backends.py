import math
import os
import subprocess
import sys

import numpy as np
import pytest

from ddfkit import gen
from ddfkit.ddf import qsup
from ddfkit.engine import backend_name, pybb

_bb = pytest.importorskip(
    "ddfkit.engine._bb", reason="compiled kernel not built"
)

L_CODES = (0, 1, 2, 10, 11, 12, 13, 14)


def test_backend_names():
    assert pybb.BACKEND_NAME == "pure"
    assert _bb.BACKEND_NAME == "compiled"
    expected = "pure" if os.environ.get("DDFKIT_PURE") else "compiled"
    assert backend_name() == expected


def test_env_var_selects_pure_backend():
    env = dict(os.environ, DDFKIT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from ddfkit.engine import backend_name; print(backend_name())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "pure"


def test_point_sup_is_bit_identical_across_backends():
    rng = np.random.default_rng(99)
    for k in range(150):
        f = gen.random_ddf(rng, gen.KINDS[k % len(gen.KINDS)])
        g = gen.random_ddf(rng, gen.KINDS[(k // 5) % len(gen.KINDS)])
        x = float(rng.uniform(0.0, 1.5 * (f.xs[-1] + g.xs[-1]) + 1.0))
        if k % 7 == 0:
            x = math.inf
        weak = bool(rng.random() < 0.4)
        args = (f.xs, f.starts, f.slopes, g.xs, g.starts, g.slopes,
                k % 5, L_CODES[k % 8], x, weak, 1e-3, 24)
        assert pybb.point_sup(*args) == _bb.point_sup(*args)


def test_point_inf_is_bit_identical_across_backends():
    rng = np.random.default_rng(7)
    for k in range(80):
        f = gen.random_ddf(rng, gen.KINDS[k % len(gen.KINDS)])
        g = gen.random_ddf(rng, gen.KINDS[(k // 3) % len(gen.KINDS)])
        u, v = qsup(f), qsup(g)
        y = float(rng.uniform(0.0, 1.05))
        args = (u.xs, u.starts, u.slopes, u.vtop,
                v.xs, v.starts, v.slopes, v.vtop,
                k % 5, L_CODES[k % 8], y, 1e-3, 24)
        assert pybb.point_inf(*args) == _bb.point_inf(*args)
