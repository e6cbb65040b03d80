"""Build the optional Cython speed kernels.

The package works without them (pure NumPy fallback); any build failure here
is deliberately non-fatal so `pip install` succeeds on toolchain-less hosts.
"""
import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "splitlaw._kernels._speed",
                ["src/splitlaw/_kernels/_speed.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # bitwise parity with the NumPy backend requires no FMA fusion
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - toolchain-dependent
    print(f"speed kernels skipped: {exc}", file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
