"""Build script for the optional compiled kernels.

The package works without the extension (a pure Python implementation of
the same kernels is selected at import time), so a missing compiler or a
missing Cython is not fatal: we simply skip the extension in that case.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "pherofly._kernels",
                ["src/pherofly/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
