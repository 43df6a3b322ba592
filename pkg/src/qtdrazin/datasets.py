"""Bundled example: a 3x3x3 index-one tensor and a core perturbation of it."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .tensor import QTensor
from .tensorfile import read_tensor

_DATA = resources.files("qtdrazin") / "data"

# Published four-decimal values for the bundled pair.
EXAMPLE1_REPORTED = {
    "ADE": 0.4433,
    "AD": 0.3938,
    "BD": 0.5150,
    "BD_minus_AD": 0.1737,
    "lower": 0.2728,
    "upper": 0.7073,
    "rel_error": 0.4412,
    "rel_bound": 0.7964,
    "kappa_bound": 1.0047,
    "index": 1,
}


def example1_paths() -> tuple[Path, Path]:
    """Filesystem paths of the bundled ``A`` and ``E`` files."""
    return Path(str(_DATA / "example1_A.qt")), Path(str(_DATA / "example1_E.qt"))


def example1() -> tuple[QTensor, QTensor]:
    a_path, e_path = example1_paths()
    return read_tensor(a_path), read_tensor(e_path)
