import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None and not os.environ.get("DIGRAPH_PSTAR_NO_EXT"):
    extensions = cythonize(
        [
            Extension(
                "digraph_pstar._kernels",
                ["src/digraph_pstar/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
