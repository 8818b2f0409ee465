"""Build script.

Tries to compile the F_p row-reduction kernel with Cython.  If Cython or a
C compiler is unavailable the build falls back to a pure-Python kernel;
the package selects the implementation at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("dgkoszul._fpkernel", ["src/dgkoszul/_fpkernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
