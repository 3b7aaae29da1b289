"""Build shim: setuptools entry point that delegates the extension build to
the project's CMake tree (target `_cadro`) and ships the `cadro` package
from python/.  Install with `pip install -e . --no-build-isolation`."""

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
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_cadro", "--parallel"],
            check=True,
        )

        built = sorted(build_dir.glob("_cadro*.so")) + sorted(
            build_dir.glob("_cadro*.pyd"))
        if not built:
            raise RuntimeError("CMake did not produce the _cadro extension module")
        target = Path(self.get_ext_fullpath(ext.name)).resolve()
        target.parent.mkdir(parents=True, exist_ok=True)
        self.copy_file(str(built[0]), str(target))


setup(
    packages=["cadro"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("cadro._cadro")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
