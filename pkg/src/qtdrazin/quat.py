"""Quaternion scalars and the complex-pair split ``a = c1 + j c2``.

With ``a = w + x i + y j + z k`` the split is ``c1 = w + x i`` and
``c2 = y - z i``; the sign on ``z`` follows from ``j i = -k``. Everything
above this module stores quaternions as such complex pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class Quat:
    """Quaternion ``w + x i + y j + z k`` with float64 components."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __mul__(self, other):
        if isinstance(other, Quat):
            return qmul(self, other)
        if isinstance(other, (int, float)):
            return Quat(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Quat):
            return NotImplemented
        return Quat(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        if not isinstance(other, Quat):
            return NotImplemented
        return Quat(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return Quat(-self.w, -self.x, -self.y, -self.z)

    def __abs__(self):
        return qabs(self)

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    @classmethod
    def from_complex(cls, c: complex) -> Quat:
        c = complex(c)
        return cls(c.real, c.imag, 0.0, 0.0)


ONE = Quat(1.0)
I = Quat(0.0, 1.0)
J = Quat(0.0, 0.0, 1.0)
K = Quat(0.0, 0.0, 0.0, 1.0)


class ComplexPair(NamedTuple):
    c1: complex
    c2: complex


def qmul(a: Quat, b: Quat) -> Quat:
    """Hamilton product."""
    return Quat(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def qconj(a: Quat) -> Quat:
    return Quat(a.w, -a.x, -a.y, -a.z)


def qabs(a: Quat) -> float:
    return math.sqrt(a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z)


def split(a: Quat) -> ComplexPair:
    return ComplexPair(complex(a.w, a.x), complex(a.y, -a.z))


def merge(p: ComplexPair | tuple[complex, complex]) -> Quat:
    c1, c2 = complex(p[0]), complex(p[1])
    return Quat(c1.real, c1.imag, c2.real, -c2.imag)
