"""Spectral operations on quaternion tensors through DFT block diagonalization.

Conjugating ``bcirc_z(A)`` by ``F ⊗ I`` (``F`` the unitary DFT matrix) in
quaternion arithmetic gives a block diagonal matrix with ``n3`` blocks.
Because ``j`` conjugates whatever complex matrix it passes, the ``C`` part
picks up ``conj(F)`` on the left:

    D-part:  (F ⊗ I) M_D (F ⊗ I)^H
    C-part:  conj(F ⊗ I) M_C (F ⊗ I)^H

Every tensor-level operation here (SVD, Moore-Penrose and Drazin inverses,
rank, index, norms) is done block by block and reassembled. With paranoid
mode on (see :mod:`qtdrazin.config`) the results are cross-checked against
a route that never leaves the tensor / whole-matrix picture, and a
disagreement raises :class:`InconsistencyError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import config
from .errors import DimensionError, InconsistencyError, PreconditionError, SingularError
from .qmatrix import (
    EPS,
    QMat,
    chi,
    chi_inverse,
    drazin_scale,
    qmat_drazin,
    qmat_index,
    qmat_norm2,
    qmat_pinv,
    qmat_rank,
    qmat_right_spectral_radius,
    qmat_svd,
)
from .tensor import QTensor, identity_tensor, qt_power, qt_product, qt_transpose, tensor_from_bcirc_z

LEAK_TOL = 1e-9


def dft_matrix(n3: int) -> np.ndarray:
    idx = np.arange(n3)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / n3) / np.sqrt(n3)


@dataclass(frozen=True)
class BlockDiag:
    """The ``n3`` diagonal blocks of a block-diagonalized ``bcirc_z``."""

    blocks: tuple[QMat, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise DimensionError("need at least one block")
        if any(b.shape != blocks[0].shape for b in blocks):
            raise DimensionError("all blocks must share one shape")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n3(self) -> int:
        return len(self.blocks)

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocks[0].shape

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def map(self, fn: Callable[[QMat], QMat]) -> BlockDiag:
        # merge order fixed by block index
        return BlockDiag(tuple(fn(b) for b in self.blocks))


def _kron_dft(n3: int, n: int) -> np.ndarray:
    return np.kron(dft_matrix(n3), np.eye(n))


def block_diagonalize(a: QTensor, leak_tol: float = LEAK_TOL) -> BlockDiag:
    n1, n2, n3 = a.shape
    m = a.bcirc_z
    f1 = _kron_dft(n3, n1)
    f2h = _kron_dft(n3, n2).conj().T
    xd = f1 @ m.d @ f2h
    xc = f1.conj() @ m.c @ f2h
    blocks = []
    leak_d = xd.copy()
    leak_c = xc.copy()
    for s in range(n3):
        rows = slice(s * n1, (s + 1) * n1)
        cols = slice(s * n2, (s + 1) * n2)
        blocks.append(QMat(xd[rows, cols], xc[rows, cols]))
        leak_d[rows, cols] = 0
        leak_c[rows, cols] = 0
    leak = np.sqrt(np.linalg.norm(leak_d) ** 2 + np.linalg.norm(leak_c) ** 2)
    if leak > leak_tol * m.norm_fro():
        raise InconsistencyError(f"off-diagonal leakage {leak:.3e} after DFT conjugation")
    return BlockDiag(tuple(blocks))


def block_reassemble(b: BlockDiag) -> QTensor:
    n1, n2 = b.shape
    n3 = b.n3
    xd = np.zeros((n1 * n3, n2 * n3), dtype=np.complex128)
    xc = np.zeros_like(xd)
    for s, blk in enumerate(b):
        xd[s * n1:(s + 1) * n1, s * n2:(s + 1) * n2] = blk.d
        xc[s * n1:(s + 1) * n1, s * n2:(s + 1) * n2] = blk.c
    f1h = _kron_dft(n3, n1).conj().T
    f2 = _kron_dft(n3, n2)
    md = f1h @ xd @ f2
    mc = f1h.conj() @ xc @ f2
    return tensor_from_bcirc_z(QMat(md, mc), n1, n3, verify=True)


# decompositions ---------------------------------------------------------------

def qt_svd(a: QTensor) -> tuple[QTensor, QTensor, QTensor]:
    """QT-SVD ``A = U *_Q S *_Q V^*`` with unitary ``U``, ``V`` and f-diagonal ``S``.

    Each DFT block is factorized on its own with singular values sorted in
    decreasing order; no re-pairing across blocks is attempted.
    """
    n1, n2, _ = a.shape
    us, ss, vs = [], [], []
    for blk in block_diagonalize(a):
        u, s, v = qmat_svd(blk)
        sd = np.zeros((n1, n2), dtype=np.complex128)
        sd[np.arange(len(s)), np.arange(len(s))] = s
        us.append(u)
        ss.append(QMat.from_complex(sd))
        vs.append(v)
    return (
        block_reassemble(BlockDiag(tuple(us))),
        block_reassemble(BlockDiag(tuple(ss))),
        block_reassemble(BlockDiag(tuple(vs))),
    )


def tube_norms(s: QTensor) -> np.ndarray:
    """``sigma_i = ||S(i, i, :)||_F`` for ``i < min(n1, n2)``."""
    p = min(s.n1, s.n2)
    idx = np.arange(p)
    tubes_d = s.d[:, idx, idx]
    tubes_c = s.c[:, idx, idx]
    return np.sqrt((np.abs(tubes_d) ** 2 + np.abs(tubes_c) ** 2).sum(axis=0))


def _block_ref(a: QTensor, ref: float = 0.0) -> float:
    # Blocks carry rounding noise at the scale of the whole bcirc_z, so every
    # per-block cutoff uses the whole-matrix tolerance max(2 n1 n3, 2 n2 n3) eps ||A||_s.
    return a.n3 * max(norm_s(a), ref)


def qt_pinv(a: QTensor, paranoid: bool | None = None, ref: float = 0.0) -> QTensor:
    """QT-Moore-Penrose inverse, block by block.

    ``ref`` anchors the singular-value cutoff as in :func:`qmat_pinv`.
    """
    block_ref = _block_ref(a, ref)
    x = block_reassemble(block_diagonalize(a).map(lambda b: qmat_pinv(b, block_ref)))
    if config.resolve(paranoid):
        whole = tensor_from_bcirc_z(qmat_pinv(a.bcirc_z, ref), a.n2, a.n3)
        diff = qmat_norm2((x - whole).bcirc_z)
        if diff > 1e-9 * max(1.0, qmat_norm2(x.bcirc_z)):
            raise InconsistencyError(f"block and whole-matrix Moore-Penrose inverses differ by {diff:.3e}")
    return x


class QTRank(NamedTuple):
    bcirc_rank: int
    tubal_rank: int


def qt_rank(a: QTensor, paranoid: bool | None = None) -> QTRank:
    blocks = block_diagonalize(a)
    ref = _block_ref(a)
    bcirc_rank = sum(qmat_rank(b, ref) for b in blocks)
    if config.resolve(paranoid):
        whole = qmat_rank(a.bcirc_z)
        if whole != bcirc_rank:
            raise InconsistencyError(f"block rank sum {bcirc_rank} != rank of bcirc_z {whole}")
    _, s, _ = qt_svd(a)
    sigma = tube_norms(s)
    if sigma.size == 0 or sigma.max() == 0.0:
        return QTRank(bcirc_rank, 0)
    tol = max(a.n1, a.n2) * a.n3 * EPS * sigma.max()
    return QTRank(bcirc_rank, int(np.count_nonzero(sigma > tol)))


def _require_square(a: QTensor, what: str) -> None:
    if a.n1 != a.n2:
        raise DimensionError(f"{what} needs square frontal slices, got {a.shape}")


def qt_index_by_rank(a: QTensor) -> int:
    """Index from rank stabilisation of ``bcirc_z(A^k)``, never leaving the tensor picture."""
    _require_square(a, "QT-index")
    norm = qmat_norm2(a.bcirc_z)
    power = identity_tensor(a.n1, a.n3)
    rank = a.n1 * a.n3
    for k in range(a.n1 * a.n3 + 1):
        power = qt_product(power, a)
        nxt = qmat_rank(power.bcirc_z, ref=norm ** (k + 1))
        if nxt == rank:
            return k
        rank = nxt
    return a.n1 * a.n3


def qt_index(a: QTensor, paranoid: bool | None = None) -> int:
    """QT-index as the largest index among the DFT blocks."""
    _require_square(a, "QT-index")
    norm = norm_s(a)
    k = max(qmat_index(b, norm, a.n3) for b in block_diagonalize(a))
    if config.resolve(paranoid):
        k_rank = qt_index_by_rank(a)
        if k_rank != k:
            raise InconsistencyError(f"QT-index routes disagree: blocks give {k}, rank stabilisation gives {k_rank}")
    return k


def qt_drazin(a: QTensor, l: int | None = None, paranoid: bool | None = None) -> QTensor:
    """QT-Drazin inverse ``A^l *_Q (A^(2l+1))^+ *_Q A^l`` for any ``l >= Ind(A)``."""
    _require_square(a, "QT-Drazin inverse")
    check = config.resolve(paranoid)
    k = qt_index(a, paranoid=check)
    if l is None:
        l = k
    elif l < k:
        raise PreconditionError(f"l = {l} is below the QT-index {k}")
    al = qt_power(a, l)
    ref = norm_s(a) ** (2 * l + 1)
    x = qt_product(qt_product(al, qt_pinv(qt_power(a, 2 * l + 1), paranoid=check, ref=ref)), al)
    if check:
        norm = norm_s(a)
        per_block = block_reassemble(block_diagonalize(a).map(lambda b: qmat_drazin(b, None, norm, a.n3)))
        diff = qmat_norm2((x - per_block).bcirc_z)
        if diff > 1e-7 * max(1.0, qmat_norm2(x.bcirc_z)):
            raise InconsistencyError(f"Drazin routes disagree by {diff:.3e}")
    return x


def _block_inverse(b: QMat, ref: float) -> QMat:
    if qmat_rank(b, ref) < b.rows:
        raise SingularError("tensor is singular: a DFT block is rank deficient")
    return chi_inverse(np.linalg.inv(chi(b)))


def qt_inverse(a: QTensor, paranoid: bool | None = None) -> QTensor:
    _require_square(a, "inverse")
    ref = _block_ref(a)
    x = block_reassemble(block_diagonalize(a).map(lambda b: _block_inverse(b, ref)))
    if config.resolve(paranoid):
        eye = identity_tensor(a.n1, a.n3)
        resid = max(qmat_norm2((qt_product(a, x) - eye).bcirc_z), qmat_norm2((qt_product(x, a) - eye).bcirc_z))
        cond = qt_spectral_norm(a, paranoid=False) * qt_spectral_norm(x, paranoid=False)
        if resid > 1e-9 * max(1.0, cond):
            raise InconsistencyError(f"inverse check failed, residual {resid:.3e}")
    return x


# norms -------------------------------------------------------------------------

def qt_spectral_norm(a: QTensor, paranoid: bool | None = None) -> float:
    value = max(qmat_norm2(b) for b in block_diagonalize(a))
    if config.resolve(paranoid):
        whole = qmat_norm2(a.bcirc_z)
        if abs(whole - value) > 1e-9 * max(whole, value):
            raise InconsistencyError(f"spectral norm routes disagree: {value!r} vs {whole!r}")
    return value


def qt_spectral_radius(a: QTensor, paranoid: bool | None = None) -> float:
    _require_square(a, "spectral radius")
    value = max(qmat_right_spectral_radius(b) for b in block_diagonalize(a))
    if config.resolve(paranoid):
        whole = qmat_right_spectral_radius(a.bcirc_z)
        # defective eigenvalues are only determined to about eps**(1/n) relative
        slack = EPS ** (1.0 / max(1, 2 * a.n1)) * qt_spectral_norm(a, paranoid=False)
        if abs(whole - value) > 1e-9 * max(whole, value) + slack:
            raise InconsistencyError(f"spectral radius routes disagree: {value!r} vs {whole!r}")
    return value


def norm_s(a: QTensor) -> float:
    """Shorthand for :func:`qt_spectral_norm` without cross-checks."""
    return qt_spectral_norm(a, paranoid=False)


# residuals of the defining equations ----------------------------------------------

def pinv_residuals(a: QTensor, x: QTensor) -> dict[str, float]:
    scale = max(1.0, norm_s(a))
    ax = qt_product(a, x)
    xa = qt_product(x, a)
    return {
        "AXA=A": norm_s(qt_product(ax, a) - a) / scale,
        "XAX=X": norm_s(qt_product(xa, x) - x) / scale,
        "(AX)*=AX": norm_s(qt_transpose(ax) - ax) / scale,
        "(XA)*=XA": norm_s(qt_transpose(xa) - xa) / scale,
    }


def drazin_residuals(a: QTensor, x: QTensor, k: int | None = None) -> dict[str, float]:
    """Scaled residuals of the three QT-Drazin equations.

    Each is divided by ``max(1, ||A||_s ** max(1, 2k+1))``.
    """
    if k is None:
        k = qt_index(a, paranoid=False)
    ak = qt_power(a, k)
    scale = drazin_scale(norm_s(a), k)
    return {
        "A^k X A=A^k": norm_s(qt_product(qt_product(ak, x), a) - ak) / scale,
        "XAX=X": norm_s(qt_product(qt_product(x, a), x) - x) / scale,
        "AX=XA": norm_s(qt_product(a, x) - qt_product(x, a)) / scale,
    }
