"""Build script: compiles the RK4 propagation kernel when Cython + a C
compiler are available, and falls back to a pure-Python install otherwise."""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "agdops._core._propagate_cy",
                ["src/agdops/_core/_propagate_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print(f"agdops: skipping compiled kernel ({exc}); using pure-Python backend",
          file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
