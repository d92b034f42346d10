"""Build script for the optional Cython RHS kernel.

The package is pure Python except for cbsim._rhs_cy, which accelerates the
Lindblad right-hand side.  If the extension cannot be built the package still
works through the numpy fallback, so build failures are non-fatal.
"""
import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "cbsim._rhs_cy",
                ["src/cbsim/_rhs_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"cbsim: skipping Cython extension ({exc})", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
