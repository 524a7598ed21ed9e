"""Build script for the optional compiled beam-step kernel.

The package is pure Python plus one Cython extension. The extension is
marked optional: if it cannot be built the install still succeeds and
the decoder falls back to the numpy implementation selected at import
time in mintox._kernels.
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("MINTOX_SKIP_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "mintox._kernels._beamstep",
                ["src/mintox/_kernels/_beamstep.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
