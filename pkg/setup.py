from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the numpy
# implementation in mflab._kernels_py when the extension is unavailable.
ext_modules = []
try:
    from Cython.Build import cythonize

    extensions = [
        Extension(
            "mflab._kernels_cy",
            ["src/mflab/_kernels_cy.pyx"],
            extra_compile_args=["-O3"],
        )
    ]
    ext_modules = cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover
    print(f"cython kernel skipped: {exc}")

setup(ext_modules=ext_modules)
