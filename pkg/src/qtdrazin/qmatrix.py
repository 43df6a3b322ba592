"""Dense quaternion matrices stored as complex pairs ``Q = D + j C``.

Moving a complex matrix across ``j`` conjugates it (``j c = conj(c) j``),
which fixes both the product formula in :func:`qmat_mul` and the adjoint
embedding

    chi(Q) = [[D, conj(C)], [-C, conj(D)]]

used for every spectral computation here. ``chi`` is an injective ring
homomorphism with ``chi(Q^*) = chi(Q)^H``, so ranks, norms, singular
values and Drazin/Moore-Penrose inverses transfer through it; the complex
results are mapped back with :func:`chi_inverse`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, StructureError
from .quat import Quat

EPS = 2.0**-52


@dataclass(frozen=True, eq=False)
class QMat:
    """Quaternion matrix ``D + j C`` with complex ``D``, ``C`` of equal shape."""

    d: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=np.complex128, copy=True)
        c = np.array(self.c, dtype=np.complex128, copy=True)
        if d.ndim != 2 or d.shape != c.shape:
            raise DimensionError(f"D and C must be 2-D of equal shape, got {d.shape} and {c.shape}")
        d.flags.writeable = False
        c.flags.writeable = False
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", c)

    # constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMat:
        z = np.zeros((rows, cols), dtype=np.complex128)
        return cls(z, z)

    @classmethod
    def eye(cls, n: int) -> QMat:
        return cls(np.eye(n, dtype=np.complex128), np.zeros((n, n), dtype=np.complex128))

    @classmethod
    def from_complex(cls, m) -> QMat:
        m = np.asarray(m, dtype=np.complex128)
        return cls(m, np.zeros_like(m))

    @classmethod
    def from_components(cls, w, x, y, z) -> QMat:
        """Build from the real coefficient matrices of ``1, i, j, k``."""
        w, x, y, z = (np.asarray(a, dtype=np.float64) for a in (w, x, y, z))
        return cls(w + 1j * x, y - 1j * z)

    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.d.real.copy(), self.d.imag.copy(), self.c.real.copy(), 0.0 - self.c.imag

    # basic protocol ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.d.shape

    @property
    def rows(self) -> int:
        return self.d.shape[0]

    @property
    def cols(self) -> int:
        return self.d.shape[1]

    @property
    def H(self) -> QMat:
        return qmat_adjoint(self)

    def entry(self, i: int, k: int) -> Quat:
        dv, cv = self.d[i, k], self.c[i, k]
        return Quat(dv.real, dv.imag, cv.real, -cv.imag)

    def __matmul__(self, other):
        if not isinstance(other, QMat):
            return NotImplemented
        return qmat_mul(self, other)

    def __add__(self, other):
        if not isinstance(other, QMat):
            return NotImplemented
        _same_shape(self, other)
        return QMat(self.d + other.d, self.c + other.c)

    def __sub__(self, other):
        if not isinstance(other, QMat):
            return NotImplemented
        _same_shape(self, other)
        return QMat(self.d - other.d, self.c - other.c)

    def __neg__(self):
        return QMat(-self.d, -self.c)

    def __mul__(self, s):
        # real scalars only: a complex scalar would not commute with j
        if isinstance(s, (int, float, np.floating, np.integer)):
            return QMat(self.d * s, self.c * s)
        return NotImplemented

    __rmul__ = __mul__

    def norm_fro(self) -> float:
        return float(np.sqrt(np.linalg.norm(self.d) ** 2 + np.linalg.norm(self.c) ** 2))

    def allclose(self, other: QMat, atol: float = 1e-10, rtol: float = 1e-8) -> bool:
        if self.shape != other.shape:
            return False
        return (self - other).norm_fro() <= atol + rtol * other.norm_fro()

    def __repr__(self):
        return f"QMat(shape={self.shape})"


class RightSpectrum(NamedTuple):
    """Standard right eigenvalues (imaginary part >= 0), one per eigenvalue of Q."""

    values: np.ndarray


def _same_shape(a: QMat, b: QMat) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def _require_square(a: QMat, what: str) -> None:
    if a.rows != a.cols:
        raise DimensionError(f"{what} needs a square matrix, got {a.shape}")


def qmat_mul(a: QMat, b: QMat) -> QMat:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    d = a.d @ b.d - a.c.conj() @ b.c
    c = a.d.conj() @ b.c + a.c @ b.d
    return QMat(d, c)


def qmat_adjoint(a: QMat) -> QMat:
    return QMat(a.d.conj().T, -a.c.T)


def qmat_power(a: QMat, k: int) -> QMat:
    _require_square(a, "matrix power")
    if k < 0:
        raise ValueError("negative powers are not supported")
    out = QMat.eye(a.rows)
    for _ in range(k):
        out = qmat_mul(out, a)
    return out


# complex adjoint ------------------------------------------------------------

def chi(a: QMat) -> np.ndarray:
    return np.block([[a.d, a.c.conj()], [-a.c, a.d.conj()]])


def symplectic_j(n: int) -> np.ndarray:
    z = np.zeros((n, n))
    e = np.eye(n)
    return np.block([[z, e], [-e, z]])


def structure_defect(m: np.ndarray) -> float:
    """``||M - J conj(M) J^T||_F``; zero exactly on the image of :func:`chi`."""
    rows, cols = m.shape[0] // 2, m.shape[1] // 2
    mirrored = symplectic_j(rows) @ m.conj() @ symplectic_j(cols).T
    return float(np.linalg.norm(m - mirrored))


def chi_inverse(m: np.ndarray, tol: float = 1e-8) -> QMat:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] % 2 or m.shape[1] % 2:
        raise DimensionError(f"adjoint matrix must have even dimensions, got {m.shape}")
    rows, cols = m.shape[0] // 2, m.shape[1] // 2
    a, b = m[:rows, :cols], m[:rows, cols:]
    c, d = m[rows:, :cols], m[rows:, cols:]
    # projection onto the structured subspace: average of M and J conj(M) J^T
    defect = np.sqrt(np.linalg.norm(a - d.conj()) ** 2 + np.linalg.norm(b + c.conj()) ** 2)
    scale = np.linalg.norm(m)
    if defect > tol * scale:
        raise StructureError(f"matrix is not quaternionic: defect {defect:.3e} vs norm {scale:.3e}")
    return QMat((a + d.conj()) / 2, (b.conj() - c) / 2)


# decompositions -------------------------------------------------------------

def _partner(w: np.ndarray, n: int) -> np.ndarray:
    return np.concatenate([w[n:].conj(), -w[:n].conj()])


def _pick_symplectic(cands: np.ndarray, n: int, count: int, basis: np.ndarray) -> tuple[list, np.ndarray]:
    """Choose ``count`` unit vectors from span(cands), each orthogonal to
    ``basis`` and to every earlier pick and its partner ``J conj(w)``.

    Greedy with pivoting on the residual norm, so near-degenerate clusters
    never force a division by a tiny residual.
    """
    picked = []
    for _ in range(count):
        resid = cands - basis @ (basis.conj().T @ cands) if basis.shape[1] else cands.copy()
        norms = np.linalg.norm(resid, axis=0)
        best = int(np.argmax(norms))
        v = resid[:, best] / norms[best]
        if basis.shape[1]:
            v = v - basis @ (basis.conj().T @ v)
            v /= np.linalg.norm(v)
        picked.append(v)
        basis = np.column_stack([basis, v, _partner(v, n)])
    return picked, basis


def _column_qmat(vectors: list, n: int) -> QMat:
    # chi-image vector (v1; v2) is the first chi column of the quaternion column v1 - j v2
    if not vectors:
        z = np.zeros((n, 0), dtype=np.complex128)
        return QMat(z, z)
    v = np.column_stack(vectors)
    return QMat(v[:n], -v[n:])


def _cluster_bounds(sigma: np.ndarray, gap: float) -> list[tuple[int, int]]:
    bounds = []
    start = 0
    for t in range(1, len(sigma) + 1):
        if t == len(sigma) or sigma[t - 1] - sigma[t] > gap:
            bounds.append((start, t))
            start = t
    return bounds


def qmat_svd(a: QMat) -> tuple[QMat, np.ndarray, QMat]:
    """Quaternion SVD ``A = U diag(S) V^*`` with unitary ``U`` (m x m), ``V`` (n x n).

    ``S`` holds the ``min(m, n)`` singular values in nonincreasing order;
    they are the singular values of ``chi(A)`` with their (even)
    multiplicity halved.
    """
    m, n = a.shape
    p = min(m, n)
    mc = chi(a)
    uc, s, vh = np.linalg.svd(mc, full_matrices=True)
    vc = vh.conj().T
    sigma = s[0::2][:p]
    smax = float(s[0]) if s.size else 0.0
    tol = max(2 * m, 2 * n) * EPS * smax

    right: list = []
    basis = np.zeros((2 * n, 0), dtype=np.complex128)
    for lo, hi in _cluster_bounds(sigma, 1e-8 * smax):
        picked, basis = _pick_symplectic(vc[:, 2 * lo:2 * hi], n, hi - lo, basis)
        right.extend(picked)
    values = np.array([np.linalg.norm(mc @ v) for v in right])
    order = np.argsort(-values, kind="stable")
    right = [right[i] for i in order]
    values = values[order]
    if n > p:
        extra, basis = _pick_symplectic(vc[:, 2 * p:], n, n - p, basis)
        right.extend(extra)

    left: list = []
    lbasis = np.zeros((2 * m, 0), dtype=np.complex128)
    for v, sv in zip(right[:p], values):
        if sv > tol:
            u = mc @ v / sv
            if lbasis.shape[1]:
                u = u - lbasis @ (lbasis.conj().T @ u)
                u /= np.linalg.norm(u)
            left.append(u)
            lbasis = np.column_stack([lbasis, u, _partner(u, m)])
    rest, lbasis = _pick_symplectic(uc, m, m - len(left), lbasis)
    left.extend(rest)
    return _column_qmat(left, m), values, _column_qmat(right, n)


def svd_reconstruct(u: QMat, s: np.ndarray, v: QMat) -> QMat:
    p = len(s)
    up = QMat(u.d[:, :p] * s, u.c[:, :p] * s)
    vp = QMat(v.d[:, :p], v.c[:, :p])
    return qmat_mul(up, qmat_adjoint(vp))


def _complex_pinv(m: np.ndarray, ref: float = 0.0) -> np.ndarray:
    if m.size == 0:
        return np.zeros(m.shape[::-1], dtype=np.complex128)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    cutoff = max(m.shape) * EPS * max(s[0] if s.size else 0.0, ref)
    keep = s > cutoff
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (vh.conj().T * inv) @ u.conj().T


def qmat_pinv(a: QMat, ref: float = 0.0) -> QMat:
    """Moore-Penrose inverse through the adjoint embedding.

    Singular values below ``max(2m, 2n) * eps * max(sigma_max, ref)`` are
    treated as zero. ``ref`` lets callers that build ``A`` as a product
    (a matrix power, say) anchor the cutoff to the size of the factors, so
    a product that vanishes in exact arithmetic is not inverted as noise.
    """
    return chi_inverse(_complex_pinv(chi(a), ref))


def singular_values(a: QMat) -> np.ndarray:
    """Singular values of ``chi(A)``: each quaternion singular value twice."""
    if a.d.size == 0:
        return np.zeros(0)
    return np.linalg.svd(chi(a), compute_uv=False)


def qmat_rank(a: QMat, ref: float = 0.0) -> int:
    """Numerical rank with tolerance ``max(2m, 2n) * eps * max(sigma_max, ref)``."""
    m, n = a.shape
    s = singular_values(a)
    if s.size == 0 or max(s[0], ref) == 0.0:
        return 0
    tol = max(2 * m, 2 * n) * EPS * max(s[0], ref)
    # one representative per pair; a pair straddling tol counts once
    return int(np.count_nonzero(s[0::2] > tol))


def qmat_index(a: QMat, norm: float | None = None, tol_scale: float = 1.0) -> int:
    """Smallest ``k >= 0`` with ``rank(A^(k+1)) == rank(A^k)``.

    The rank of ``A^(k+1)`` uses ``ref = tol_scale * norm ** (k + 1)``
    (``norm`` defaults to ``||A||_2``): a nilpotent part leaves rounding
    noise of that size, not of the size of the power itself. Callers whose
    ``A`` is a piece of a larger matrix pass that matrix's norm.
    """
    _require_square(a, "index")
    norm = qmat_norm2(a) if norm is None else max(norm, qmat_norm2(a))
    power = QMat.eye(a.rows)
    rank = a.rows
    for k in range(a.rows + 1):
        power = qmat_mul(power, a)
        nxt = qmat_rank(power, ref=tol_scale * norm ** (k + 1))
        if nxt == rank:
            return k
        rank = nxt
    return a.rows  # unreachable: ranks stabilise within n steps


def qmat_drazin(a: QMat, index: int | None = None, norm: float | None = None, tol_scale: float = 1.0) -> QMat:
    """Drazin inverse ``A^l (A^(2l+1))^+ A^l`` with ``l`` the index of ``A``.

    ``norm`` and ``tol_scale`` anchor the rank decisions as in :func:`qmat_index`.
    """
    _require_square(a, "Drazin inverse")
    norm = qmat_norm2(a) if norm is None else max(norm, qmat_norm2(a))
    l = qmat_index(a, norm, tol_scale) if index is None else index
    al = qmat_power(a, l)
    mid = qmat_pinv(qmat_power(a, 2 * l + 1), ref=tol_scale * norm ** (2 * l + 1))
    return qmat_mul(qmat_mul(al, mid), al)


def drazin_scale(norm_a: float, l: int) -> float:
    return max(1.0, norm_a ** max(1, 2 * l + 1))


def qmat_drazin_residuals(a: QMat, x: QMat, k: int) -> tuple[float, float, float]:
    """Scaled residuals of ``A^k X A = A^k``, ``X A X = X``, ``A X = X A``."""
    ak = qmat_power(a, k)
    scale = drazin_scale(qmat_norm2(a), k)
    r1 = qmat_norm2(ak @ x @ a - ak)
    r2 = qmat_norm2(x @ a @ x - x)
    r3 = qmat_norm2(a @ x - x @ a)
    return r1 / scale, r2 / scale, r3 / scale


def qmat_pinv_residuals(a: QMat, x: QMat) -> tuple[float, float, float, float]:
    """Residuals of the four Penrose equations, divided by ``max(1, ||A||_2)``."""
    scale = max(1.0, qmat_norm2(a))
    ax = a @ x
    xa = x @ a
    return (
        qmat_norm2(ax @ a - a) / scale,
        qmat_norm2(xa @ x - x) / scale,
        qmat_norm2(ax.H - ax) / scale,
        qmat_norm2(xa.H - xa) / scale,
    )


# spectrum and norms ---------------------------------------------------------

def chi_eigenvalues(a: QMat) -> np.ndarray:
    _require_square(a, "eigenvalues")
    if a.rows == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.linalg.eigvals(chi(a))


def right_spectrum(a: QMat) -> RightSpectrum:
    ev = chi_eigenvalues(a)
    upper = np.where(ev.imag < 0, ev.conj(), ev)
    upper = upper[np.lexsort((upper.imag, upper.real))]
    # chi doubles every right eigenvalue as (lambda, conj(lambda))
    return RightSpectrum(upper[0::2])


def qmat_right_spectral_radius(a: QMat) -> float:
    ev = chi_eigenvalues(a)
    return float(np.max(np.abs(ev))) if ev.size else 0.0


def qmat_norm2(a: QMat) -> float:
    if a.d.size == 0:
        return 0.0
    return float(np.linalg.norm(chi(a), 2))
