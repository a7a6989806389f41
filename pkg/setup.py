import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "diracmech.kernels._fastkern",
                ["src/diracmech/kernels/_fastkern.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # Cython unavailable: install pure-Python only, kernels fall back at import.
    ext_modules = []

setup(ext_modules=ext_modules)
