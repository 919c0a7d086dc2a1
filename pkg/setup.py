"""Build script: compiles the Gauss-Seidel sweep kernel unless SEG_NO_EXT=1.

The extension is optional; the package falls back to a vectorized numpy
kernel at import time when the compiled module is absent.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SEG_NO_EXT", "0") != "1":
    from Cython.Build import cythonize

    ext = Extension(
        "triseg._kernels",
        ["src/triseg/_kernels.pyx"],
        # -ffp-contract=off keeps the C arithmetic bit-identical to the
        # numpy fallback (no FMA contraction).
        extra_compile_args=["-O3", "-ffp-contract=off"],
        optional=True,
    )
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
