"""Builds the optional Cython kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("GFVFA_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("gfvfa._ckernels", ["src/gfvfa/_ckernels.pyx"],
                       include_dirs=[np.get_include()],
                       extra_compile_args=["-O3", "-fopenmp"],
                       extra_link_args=["-fopenmp"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
