"""Random quaternion matrices/tensors and constructions with a known index."""

from __future__ import annotations

import numpy as np

from .qmatrix import QMat, qmat_adjoint, qmat_svd
from .spectral import BlockDiag, block_reassemble
from .tensor import QTensor


def random_qmat(rng: np.random.Generator, m: int, n: int, scale: float = 1.0) -> QMat:
    parts = rng.standard_normal((4, m, n)) * scale
    return QMat.from_components(*parts)


def random_tensor(rng: np.random.Generator, n1: int, n2: int, n3: int, scale: float = 1.0) -> QTensor:
    parts = rng.standard_normal((4, n3, n1, n2)) * scale
    return QTensor.from_components(*parts)


def random_unitary(rng: np.random.Generator, n: int) -> QMat:
    u, _, _ = qmat_svd(random_qmat(rng, n, n))
    return u


def random_invertible(rng: np.random.Generator, n: int, lo: float = 0.5, hi: float = 2.0) -> QMat:
    """Unitary-sandwiched diagonal with singular values in ``[lo, hi]``."""
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    s = rng.uniform(lo, hi, size=n)
    return QMat(u.d * s, u.c * s) @ v.H


def _jordan_nilpotent(rng: np.random.Generator, size: int, chain: int) -> QMat:
    d = np.zeros((size, size), dtype=np.complex128)
    for i in range(chain - 1):
        d[i, i + 1] = rng.uniform(0.5, 1.5)
    return QMat.from_complex(d)


def planted_block(rng: np.random.Generator, n: int, index: int) -> QMat:
    """``n x n`` quaternion matrix of exactly the given index.

    Built as ``P diag(M, N) P^*`` with ``P`` unitary, ``M`` well conditioned
    and ``N`` nilpotent with one Jordan chain of length ``index``.
    """
    if not 0 <= index <= n:
        raise ValueError(f"index {index} impossible for size {n}")
    nil = index
    if index == 1 and n > 1 and rng.random() < 0.5:
        nil = int(rng.integers(1, n))  # a zero block wider than one column
    core = n - nil
    d = np.zeros((n, n), dtype=np.complex128)
    c = np.zeros((n, n), dtype=np.complex128)
    if core:
        m = random_invertible(rng, core)
        d[:core, :core] = m.d
        c[:core, :core] = m.c
    if nil:
        nmat = _jordan_nilpotent(rng, nil, index)
        d[core:, core:] = nmat.d
    p = random_unitary(rng, n)
    return p @ QMat(d, c) @ qmat_adjoint(p)


def planted_tensor(rng: np.random.Generator, n: int, indices) -> QTensor:
    """Tensor whose DFT blocks have the given indices (one per block)."""
    return block_reassemble(BlockDiag(tuple(planted_block(rng, n, int(k)) for k in indices)))


def core_perturbation(rng: np.random.Generator, a: QTensor, ad: QTensor, target_radius: float) -> QTensor:
    """Random ``E = (A A^D) R (A A^D)`` rescaled so ``rho_QT(A^D E) = target_radius``."""
    from .spectral import qt_spectral_radius
    from .tensor import qt_product

    proj = qt_product(a, ad)
    e = qt_product(qt_product(proj, random_tensor(rng, a.n1, a.n2, a.n3)), proj)
    rho = qt_spectral_radius(qt_product(ad, e), paranoid=False)
    if rho == 0.0:
        return e
    return e * (target_radius / rho)
