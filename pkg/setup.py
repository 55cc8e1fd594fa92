"""Build script: compiles the optional C speedup kernel.

The package is pure Python plus one Cython extension holding the hot loop of
the spanner construction.  If Cython (or a C compiler) is unavailable the
extension is simply skipped and the NumPy fallback kernel is used at runtime.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "diskspanner._speedups",
                ["src/diskspanner/_speedups.pyx"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
