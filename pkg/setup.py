"""Build script for the optional compiled spectrogram kernel.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); the Cython/FFTW kernel is built when the toolchain
and fftw3 headers are present.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    kernel = Extension(
        "mtmel._kernel",
        sources=["src/mtmel/_kernel.pyx"],
        libraries=["fftw3"],
        optional=True,
    )
    ext_modules = cythonize([kernel], language_level="3")

setup(ext_modules=ext_modules)
