"""Build the optional compiled kernels.

The package works without them: ``somoslab.kernels`` falls back to the
pure-Python implementation when ``somoslab._kernels`` is missing.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SOMOSLAB_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("somoslab._kernels", ["src/somoslab/_kernels.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
