"""Build script: compiles the optional extension core.

The package is fully functional without it (pure-NumPy kernels are
selected at import time); any failure to cythonize or compile therefore
downgrades to a warning instead of aborting the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension(
            "wavecut._kernels",
            ["src/wavecut/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )],
        language_level=3,
    )
except Exception as exc:  # noqa: BLE001 - any build-chain problem is non-fatal
    warnings.warn(f"compiled kernels skipped ({exc}); "
                  "falling back to pure NumPy backend")

setup(ext_modules=ext_modules)
