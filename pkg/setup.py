"""Build hook for the optional compiled pair kernel.

The extension is generated from src/torusgg/_pairsc.pyx; the cythonized C file
is committed so only a C compiler is needed at install time.  Regenerate with

    cython src/torusgg/_pairsc.pyx

The extension is marked optional: if compilation fails the package installs
anyway and falls back to the pure-numpy kernel at import.
"""

from setuptools import setup
from setuptools.extension import Extension

ext = Extension(
    "torusgg._pairsc",
    sources=["src/torusgg/_pairsc.c"],
    extra_compile_args=["-O3"],
    optional=True,
)

setup(ext_modules=[ext])
