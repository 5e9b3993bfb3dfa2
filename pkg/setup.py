"""Build the optional compiled term kernels.

The package works without the extension (pure-Python fallback is selected at
import time); any build failure here is therefore non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "accesskit._kernels.fast",
                ["src/accesskit/_kernels/fast.pyx"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"accesskit: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
