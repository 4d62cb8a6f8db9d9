"""Optional compiled kernel; the package works without it (pure-Python fallback)."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("GEOLOG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("geolog.exactgeom._kernel", ["src/geolog/exactgeom/_kernel.pyx"])],
            language_level=3,
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
