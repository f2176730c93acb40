"""Build script: compiles the optional Cython pair-counting kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile only costs speed, not functionality.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "echoscope._accel",
                ["src/echoscope/_accel.pyx"],
                include_dirs=[np.get_include()],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
