"""Make the smoke tests work both against an installed wheel and a plain
CMake build tree (python/ package + build/_core*.so)."""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[2]

try:
    import lexiplan  # noqa: F401  (installed wheel)
except ImportError:
    for extra in (ROOT / "python", ROOT / "build"):
        if extra.exists() and str(extra) not in sys.path:
            sys.path.insert(0, str(extra))
