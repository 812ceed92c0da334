from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    # Pure-python install: the package falls back to the numpy kernel.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "altgd._kernel._accel",
                ["src/altgd/_kernel/_accel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
