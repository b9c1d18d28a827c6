"""Build script: compiles the optional extension with the hot numeric kernels.

The package is fully functional without the extension (a pure NumPy
implementation is selected at import time), so any build failure here is
downgraded to a warning instead of aborting the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Compile extensions if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken toolchain
            warnings.warn(f"extension build skipped ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); using pure-Python kernels")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; using pure-Python kernels")
        return []
    ext = Extension("shapeft._kernels", ["src/shapeft/_kernels.pyx"])
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
