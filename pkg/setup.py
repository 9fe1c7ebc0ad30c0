"""Build script for the optional compiled solver core.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the hot per-step kernel much faster.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "swe1d._corefv",
        ["src/swe1d/_corefv.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off keeps the C arithmetic bit-identical to the
        # numpy fallback (no fused multiply-add contraction).
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize(
        [ext],
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except Exception:
    # No Cython / no compiler: install the pure-python package.
    ext_modules = []

setup(ext_modules=ext_modules)
