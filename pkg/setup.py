import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "ac_harnack._kernels",
        ["src/ac_harnack/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off: no FMA contraction, so results match the numpy
        # reference backend bit for bit
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
