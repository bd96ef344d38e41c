from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; wlhier.kernels falls back
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "wlhier._ckernels",
                ["src/wlhier/_ckernels.pyx"],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
