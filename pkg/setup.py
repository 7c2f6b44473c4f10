import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "hochcalc._rowreduce_c",
                ["src/hochcalc/_rowreduce_c.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # plain install still works: linalg falls back to the numpy kernel
    extensions = []

setup(ext_modules=extensions)
