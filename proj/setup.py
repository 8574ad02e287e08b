"""CMake-driven build of the memlane._core extension.

The C++ core, CLI and tests build with plain CMake; this wrapper only steers
the `_core` pybind11 target into the python package so `pip install .` works
(use --no-build-isolation if setuptools is already provisioned).
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        source_dir = Path(__file__).resolve().parent

        configure = [
            "cmake",
            "-S", str(source_dir),
            "-B", str(build_dir),
            f"-DMEMLANE_PYMODULE_DIR={out_dir}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        if "CMAKE_ARGS" in os.environ:
            configure += os.environ["CMAKE_ARGS"].split()
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core", "-j"],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("memlane._core")],
    cmdclass={"build_ext": CMakeBuild},
)
