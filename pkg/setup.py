"""Build script: compiles the optional accelerator extension.

The package is fully functional without the extension (a pure-Python twin
is selected at import time); any failure here degrades to a pure install
rather than aborting, so `pip install` works on boxes without a C
toolchain. Set IPOBISIM_NO_EXT=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any toolchain failure
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import sys

        print(
            f"warning: building the accelerator extension failed ({exc!r}); "
            "falling back to the pure-Python kernel",
            file=sys.stderr,
        )


ext_modules = []
if os.environ.get("IPOBISIM_NO_EXT") != "1" and os.path.exists(
    "src/ipobisim/_step_core.pyx"
):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ipobisim._step_core", ["src/ipobisim/_step_core.pyx"])],
            language_level="3",
        )
    except ImportError:
        pass

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)
