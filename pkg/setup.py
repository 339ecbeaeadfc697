"""Build script for the optional compiled stepping kernel.

The extension links against FFTW3 and is strictly optional: if headers,
library, or a compiler are missing the build falls through and the package
uses the pure-numpy stepper selected at import time.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "zenolab._stepper",
                ["src/zenolab/_stepper.pyx"],
                include_dirs=[numpy.get_include()],
                libraries=["fftw3"],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
