"""``.qt`` tensor files.

A tensor file is a JSON document holding four real component arrays
``w, x, y, z`` (the tensor is ``w + x i + y j + z k``), each indexed
``[slice][row][col]``, next to ``dims = [n1, n2, n3]``::

    {
      "format": "qtensor",
      "version": 1,
      "dims": [2, 2, 1],
      "w": [[[1.0, 0.0], [0.0, 1.0]]],
      ...
    }

Floats are written in Python's shortest round-trip form, so reading back
a written tensor is bitwise exact.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import TensorFileError
from .qmatrix import QMat
from .tensor import QTensor

FORMAT = "qtensor"
VERSION = 1
COMPONENTS = ("w", "x", "y", "z")


def _number(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"cannot store non-finite value {v!r}")
    return repr(float(v))


def dumps_tensor(a: QTensor) -> str:
    n1, n2, n3 = a.shape
    parts = dict(zip(COMPONENTS, a.components()))
    lines = ["{", f'  "format": "{FORMAT}",', f'  "version": {VERSION},', f'  "dims": [{n1}, {n2}, {n3}],']
    for idx, name in enumerate(COMPONENTS):
        arr = parts[name]
        lines.append(f'  "{name}": [')
        for s in range(n3):
            lines.append("    [")
            rows = ["      [" + ", ".join(_number(v) for v in arr[s, r]) + "]" for r in range(n1)]
            lines.append(",\n".join(rows))
            lines.append("    ]" + ("," if s < n3 - 1 else ""))
        lines.append("  ]" + ("," if idx < len(COMPONENTS) - 1 else ""))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _reject_constant(name: str):
    raise ValueError(f"non-finite literal {name} is not allowed")


def loads_tensor(text: str) -> QTensor:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise TensorFileError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise TensorFileError(str(exc)) from None
    if not isinstance(doc, dict):
        raise TensorFileError("top level must be an object")
    if doc.get("format", FORMAT) != FORMAT:
        raise TensorFileError(f"unknown format {doc.get('format')!r}")
    if doc.get("version", VERSION) != VERSION:
        raise TensorFileError(f"unsupported version {doc.get('version')!r}")
    dims = doc.get("dims")
    if (
        not isinstance(dims, list)
        or len(dims) != 3
        or not all(isinstance(n, int) and not isinstance(n, bool) and n > 0 for n in dims)
    ):
        raise TensorFileError(f"'dims' must be three positive integers, got {dims!r}")
    n1, n2, n3 = dims
    expected = (n3, n1, n2)
    arrays = []
    for name in COMPONENTS:
        if name not in doc:
            raise TensorFileError(f"component '{name}' is missing")
        arrays.append(_component(name, doc[name], expected))
    return QTensor.from_components(*arrays)


def _component(name: str, raw, expected: tuple[int, int, int]) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=np.float64)
    except (ValueError, TypeError):
        raise TensorFileError(f"component '{name}' is ragged or holds non-numbers") from None
    if _has_bool(raw):
        raise TensorFileError(f"component '{name}' holds booleans")
    if arr.shape != expected:
        raise TensorFileError(
            f"component '{name}' has shape {list(arr.shape)}, dims require [n3, n1, n2] = {list(expected)}"
        )
    return arr


def _has_bool(raw) -> bool:
    if isinstance(raw, bool):
        return True
    if isinstance(raw, list):
        return any(_has_bool(v) for v in raw)
    return False


def read_tensor(path) -> QTensor:
    """Read a ``.qt`` file; ``"-"`` reads standard input."""
    if str(path) == "-":
        return loads_tensor(sys.stdin.read())
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise TensorFileError(f"{path}: not UTF-8 text ({exc.reason})") from None
    try:
        return loads_tensor(text)
    except TensorFileError as exc:
        exc.args = (f"{path}: {exc}",)
        raise


def write_tensor(a: QTensor, path) -> None:
    """Write ``a`` to ``path``; ``"-"`` writes standard output."""
    text = dumps_tensor(a)
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def matrix_as_tensor(m: QMat) -> QTensor:
    """A quaternion matrix viewed as an ``m x n x 1`` tensor."""
    return QTensor(m.d[None], m.c[None])
