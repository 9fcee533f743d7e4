import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the compiled kernels if possible, otherwise install pure Python.

    The package selects the numpy fallback at import time when the
    extension is absent, so a failed compile must not fail the install.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"WARNING: building satcap.kernels._core failed ({exc}); "
              "falling back to the pure-Python kernels")


def _extensions():
    if os.environ.get("SATCAP_NO_EXTENSION"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "satcap.kernels._core",
        ["src/satcap/kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(cmdclass={"build_ext": OptionalBuildExt}, ext_modules=_extensions())
