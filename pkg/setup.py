import os

from setuptools import setup

# The compiled DFS kernel is optional: without Cython (or with
# SUMSETS_PURE_PYTHON=1) the package installs pure-Python and selects the
# fallback kernel at import time.
ext_modules = []
if os.environ.get("SUMSETS_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "sumsets._dfs_c",
                    ["src/sumsets/_dfs_c.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
