"""Build script: compiles the scan kernels; the package works without them
(pure numpy/scipy fallback is selected at import if the extension is absent)."""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "imjet._kernels._scan",
                ["src/imjet/_kernels/_scan.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
