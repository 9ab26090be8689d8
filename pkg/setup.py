"""Builds the compiled kernel; the package still works without it.

If Cython or a C compiler is missing the extension is skipped and the
pure-Python kernel is used at import time.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernel skipped ({exc}); "
                  f"falling back to the pure-Python kernel", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  f"falling back to the pure-Python kernel", file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/playmine/kernel/_ckernel.pyx"],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    print("warning: Cython unavailable, building without the compiled kernel",
          file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
