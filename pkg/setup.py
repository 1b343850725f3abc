"""Build script: compiles the optional branch-and-bound kernel.

The package works without the extension (a pure-Python kernel with the
same semantics is selected at import time), so a failed compile is not
fatal to installation -- build with ``DDFKIT_SKIP_EXT=1`` to skip it
explicitly.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DDFKIT_SKIP_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ddfkit.engine._bb",
                ["src/ddfkit/engine/_bb.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
