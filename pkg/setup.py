import os

from setuptools import setup

# The compiled kernels are an optimization, not a requirement: the package
# selects the pure-Python fallback at import when the extension is missing.
# POLYDISK_NO_EXT=1 skips the build entirely (e.g. no C compiler).
ext_modules = []
if not os.environ.get("POLYDISK_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "polydisk._kernels._speedups",
                    ["src/polydisk/_kernels/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
