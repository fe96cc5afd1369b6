import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("GHX_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ghx._speedups", ["src/ghx/_speedups.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False},
        )
    except ImportError:
        # no Cython: install pure-python only, kernels fall back at import
        ext_modules = []

setup(ext_modules=ext_modules)
