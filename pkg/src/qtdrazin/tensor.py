"""Third-order quaternion tensors and the QT-product.

A tensor is kept slice-major: ``d[s]`` and ``c[s]`` are the complex parts
of frontal slice ``s`` (``A^(s) = d[s] + j c[s]``). The product of two
tensors is ``fold(bcirc_z(A) @ unfold(B))``, where

    bcirc_z(A) = bcirc(A_d) + j bcirc(A_c) (P ⊗ I)

and ``P`` fixes the first index and reverses the rest.
"""

from __future__ import annotations

import threading

import numpy as np

from . import _kernels
from .errors import DimensionError, NotZCirculantError
from .qmatrix import QMat, qmat_adjoint, qmat_norm2

DEFAULT_ATOL = 1e-10
DEFAULT_RTOL = 1e-8


class QTensor:
    """Immutable ``n1 x n2 x n3`` quaternion tensor.

    Parameters
    ----------
    d, c : array_like, shape (n3, n1, n2)
        Complex parts of the frontal slices, ``A^(s) = d[s] + j c[s]``.
    """

    __slots__ = ("d", "c", "_lock", "__dict__")

    def __init__(self, d, c):
        d = np.array(d, dtype=np.complex128, copy=True)
        c = np.array(c, dtype=np.complex128, copy=True)
        if d.ndim != 3 or d.shape != c.shape:
            raise DimensionError(f"parts must be 3-D of equal shape, got {d.shape} and {c.shape}")
        if min(d.shape) < 1:
            raise DimensionError(f"all dimensions must be positive, got {d.shape}")
        d.flags.writeable = False
        c.flags.writeable = False
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "_lock", threading.Lock())

    def __setattr__(self, name, value):
        raise AttributeError("QTensor is immutable")

    # constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, n1: int, n2: int, n3: int) -> QTensor:
        z = np.zeros((n3, n1, n2), dtype=np.complex128)
        return cls(z, z)

    @classmethod
    def from_slices(cls, slices: list[QMat]) -> QTensor:
        if not slices:
            raise DimensionError("a tensor needs at least one frontal slice")
        shape = slices[0].shape
        if any(s.shape != shape for s in slices):
            raise DimensionError("frontal slices must share one shape")
        return cls(np.stack([s.d for s in slices]), np.stack([s.c for s in slices]))

    @classmethod
    def from_components(cls, w, x, y, z) -> QTensor:
        """From real coefficient arrays indexed ``[slice][row][col]``."""
        w, x, y, z = (np.asarray(a, dtype=np.float64) for a in (w, x, y, z))
        return cls(w + 1j * x, y - 1j * z)

    @classmethod
    def from_complex(cls, d) -> QTensor:
        d = np.asarray(d, dtype=np.complex128)
        return cls(d, np.zeros_like(d))

    def components(self):
        return self.d.real.copy(), self.d.imag.copy(), self.c.real.copy(), 0.0 - self.c.imag

    # shape ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int, int]:
        n3, n1, n2 = self.d.shape
        return n1, n2, n3

    @property
    def n1(self) -> int:
        return self.d.shape[1]

    @property
    def n2(self) -> int:
        return self.d.shape[2]

    @property
    def n3(self) -> int:
        return self.d.shape[0]

    @property
    def slices(self) -> list[QMat]:
        return [QMat(self.d[s], self.c[s]) for s in range(self.n3)]

    def frontal(self, s: int) -> QMat:
        return QMat(self.d[s], self.c[s])

    # cached circulant -------------------------------------------------
    @property
    def bcirc_z(self) -> QMat:
        cached = self.__dict__.get("_bcirc_z")
        if cached is None:
            with self._lock:
                cached = self.__dict__.get("_bcirc_z")
                if cached is None:
                    md, mc = _kernels.bcirc_z_parts(self.d, self.c)
                    cached = self.__dict__["_bcirc_z"] = QMat(md, mc)
        return cached

    # arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, QTensor):
            return NotImplemented
        self._check_same(other)
        return QTensor(self.d + other.d, self.c + other.c)

    def __sub__(self, other):
        if not isinstance(other, QTensor):
            return NotImplemented
        self._check_same(other)
        return QTensor(self.d - other.d, self.c - other.c)

    def __neg__(self):
        return QTensor(-self.d, -self.c)

    def __mul__(self, s):
        if isinstance(s, (int, float, np.floating, np.integer)):
            return QTensor(self.d * s, self.c * s)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, QTensor):
            return NotImplemented
        return qt_product(self, other)

    @property
    def H(self) -> QTensor:
        return qt_transpose(self)

    def norm_fro(self) -> float:
        return float(np.sqrt(np.linalg.norm(self.d) ** 2 + np.linalg.norm(self.c) ** 2))

    def __repr__(self):
        return "QTensor(n1={}, n2={}, n3={})".format(*self.shape)


class PermP:
    """The ``n3 x n3`` permutation fixing index 0 and reversing 1..n3-1."""

    def __init__(self, n3: int):
        if n3 < 1:
            raise DimensionError("n3 must be positive")
        self.n3 = n3

    @property
    def perm(self) -> np.ndarray:
        return (-np.arange(self.n3)) % self.n3

    def matrix(self) -> np.ndarray:
        return np.eye(self.n3)[self.perm]


def unfold(a: QTensor) -> QMat:
    return QMat(a.d.reshape(a.n3 * a.n1, a.n2), a.c.reshape(a.n3 * a.n1, a.n2))


def fold(m: QMat, n1: int, n3: int) -> QTensor:
    if m.rows != n1 * n3:
        raise DimensionError(f"cannot fold {m.shape} into n1={n1}, n3={n3}")
    return QTensor(m.d.reshape(n3, n1, m.cols), m.c.reshape(n3, n1, m.cols))


def bcirc_z(a: QTensor) -> QMat:
    return a.bcirc_z


def tensor_from_bcirc_z(m: QMat, n1: int, n3: int, verify: bool = False, tol: float = 1e-9) -> QTensor:
    """Read the tensor off the first block column of ``m``.

    With ``verify=True`` the circulant is rebuilt from the result and
    compared against ``m``; a mismatch beyond ``tol * ||m||_F`` raises
    :class:`NotZCirculantError`.
    """
    if m.rows != n1 * n3 or m.cols % n3:
        raise DimensionError(f"{m.shape} is not a block matrix of {n3}x{n3} blocks with {n1} rows each")
    n2 = m.cols // n3
    out = fold(QMat(m.d[:, :n2], m.c[:, :n2]), n1, n3)
    if verify:
        diff = (out.bcirc_z - m).norm_fro()
        if diff > tol * m.norm_fro():
            raise NotZCirculantError(f"matrix is not z-block circulant (defect {diff:.3e})")
    return out


def qt_product(a: QTensor, b: QTensor) -> QTensor:
    if a.n2 != b.n1 or a.n3 != b.n3:
        raise DimensionError(f"cannot form the QT-product of {a.shape} and {b.shape}")
    od, oc = _kernels.qt_product_parts(a.d, a.c, b.d, b.c)
    return QTensor(od, oc)


def qt_transpose(a: QTensor) -> QTensor:
    """Conjugate transpose: slice ``k`` becomes ``d[-k]^H - j c[k]^T``."""
    rev = (-np.arange(a.n3)) % a.n3
    d = a.d[rev].conj().transpose(0, 2, 1)
    c = -a.c.transpose(0, 2, 1)
    return QTensor(d, c)


def identity_tensor(n: int, n3: int) -> QTensor:
    d = np.zeros((n3, n, n), dtype=np.complex128)
    d[0] = np.eye(n)
    return QTensor(d, np.zeros_like(d))


def qt_power(a: QTensor, k: int) -> QTensor:
    if a.n1 != a.n2:
        raise DimensionError(f"powers need square slices, got {a.shape}")
    if k < 0:
        raise ValueError("negative powers are not supported; use qt_inverse")
    out = identity_tensor(a.n1, a.n3)
    for _ in range(k):
        out = qt_product(out, a)
    return out


def spectral_distance(x: QTensor, y: QTensor) -> float:
    """``||X - Y||_s``."""
    return qmat_norm2((x - y).bcirc_z)


def tensor_allclose(x: QTensor, y: QTensor, atol: float = DEFAULT_ATOL, rtol: float = DEFAULT_RTOL) -> bool:
    if x.shape != y.shape:
        return False
    return spectral_distance(x, y) <= atol + rtol * qmat_norm2(y.bcirc_z)


def bcirc_z_adjoint_defect(a: QTensor) -> float:
    return (qt_transpose(a).bcirc_z - qmat_adjoint(a.bcirc_z)).norm_fro()
