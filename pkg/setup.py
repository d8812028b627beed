from setuptools import Extension, setup

# The edit-distance kernel compiles to a C extension when Cython is
# available; otherwise the package falls back to the pure-Python kernel
# selected at import time in cswaug._kernels.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cswaug._editdist", ["src/cswaug/_editdist.pyx"])],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
