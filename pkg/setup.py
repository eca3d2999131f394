"""Build script for the optional compiled solver kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); building it just makes the hot solver loop much faster.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "corrcolor._fastkern",
                sources=["src/corrcolor/_fastkern.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # No Cython available: install the pure-Python package only.
    ext_modules = []

setup(ext_modules=ext_modules)
