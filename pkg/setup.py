"""Build script: compiles the optional Cython simulator core.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so a missing compiler or Cython must never fail
the install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("thqaoa._evolve", ["src/thqaoa/_evolve.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"thqaoa: building without the compiled core ({exc})")

setup(ext_modules=ext_modules)
