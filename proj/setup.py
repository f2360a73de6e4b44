import glob
import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen = "/usr/include/eigen3" if os.path.isdir("/usr/include/eigen3") else None
include_dirs = ["include", "vendor"] + ([eigen] if eigen else [])

ext = Pybind11Extension(
    "pydepthlab._core",
    sorted(glob.glob("src/*.cpp")) + ["python/src/bindings.cpp"],
    include_dirs=include_dirs,
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
