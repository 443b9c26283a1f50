import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("NTRADAR_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ntradar._accel._kernel",
                    ["src/ntradar/_accel/_kernel.pyx"],
                    include_dirs=[np.get_include()],
                    # -ffp-contract=off: keep mul/add rounding identical to the
                    # pure-python lane (no FMA contraction).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # no compiler / no cython: install pure-python lane
        print(f"ntradar: building without compiled kernel ({exc})")
        ext_modules = []

setup(ext_modules=ext_modules)
