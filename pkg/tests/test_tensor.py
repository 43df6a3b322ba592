import threading

import numpy as np
import pytest

from qtdrazin.errors import DimensionError, NotZCirculantError, SingularError
from qtdrazin.qmatrix import QMat, qmat_mul, qmat_norm2, qmat_power, qmat_rank
from qtdrazin.spectral import BlockDiag, block_reassemble, norm_s, qt_inverse, qt_svd
from qtdrazin.tensor import (
    PermP,
    QTensor,
    bcirc_z,
    bcirc_z_adjoint_defect,
    fold,
    identity_tensor,
    qt_power,
    qt_product,
    qt_transpose,
    tensor_allclose,
    tensor_from_bcirc_z,
    unfold,
)
from qtdrazin.testing import planted_block, random_invertible, random_qmat, random_tensor, random_unitary


def block_circulant(x: np.ndarray) -> np.ndarray:
    n3, n1, n2 = x.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=complex)
    for s in range(n3):
        for t in range(n3):
            out[s * n1:(s + 1) * n1, t * n2:(t + 1) * n2] = x[(s - t) % n3]
    return out


def kron_formula(a: QTensor) -> QMat:
    # bcirc(A_d) + j bcirc(A_c) (P kron I), with the permutation multiplied out
    p = np.kron(PermP(a.n3).matrix(), np.eye(a.n2))
    return QMat(block_circulant(a.d), block_circulant(a.c) @ p)


def test_perm_p():
    p3 = PermP(3).matrix()
    assert np.array_equal(p3, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    for n in range(1, 7):
        p = PermP(n).matrix()
        assert np.array_equal(p @ p, np.eye(n)) and np.array_equal(p, p.T)


def test_fold_unfold(rng):
    a = random_tensor(rng, 2, 2, 1)
    u = unfold(a)
    assert np.array_equal(u.d, a.d[0]) and np.array_equal(u.c, a.c[0])
    b = random_tensor(rng, 3, 2, 4)
    assert tensor_allclose(fold(unfold(b), 3, 4), b, atol=0, rtol=0)
    eye = unfold(identity_tensor(2, 3))
    assert np.array_equal(eye.d, np.vstack([np.eye(2), np.zeros((4, 2))])) and not eye.c.any()
    with pytest.raises(DimensionError):
        fold(random_qmat(rng, 5, 2), 2, 3)


def test_bcirc_z_matches_kronecker_formula(rng):
    for _ in range(30):
        n1, n2, n3 = rng.integers(1, 5, size=3)
        a = random_tensor(rng, n1, n2, n3)
        assert bcirc_z(a).allclose(kron_formula(a), atol=0, rtol=0)


def test_bcirc_z_examples(rng):
    a = random_tensor(rng, 3, 2, 1)
    assert bcirc_z(a).allclose(a.frontal(0), atol=0, rtol=0)
    assert bcirc_z(identity_tensor(3, 4)).allclose(QMat.eye(12), atol=0, rtol=0)


def test_tensor_from_bcirc_z(rng):
    a = random_tensor(rng, 2, 3, 4)
    assert tensor_allclose(tensor_from_bcirc_z(bcirc_z(a), 2, 4, verify=True), a, atol=0, rtol=0)
    assert tensor_allclose(tensor_from_bcirc_z(QMat.eye(6), 2, 3, verify=True), identity_tensor(2, 3), atol=0, rtol=0)
    m = bcirc_z(a)
    d = m.d.copy()
    d[3, 5] += 0.1
    with pytest.raises(NotZCirculantError):
        tensor_from_bcirc_z(QMat(d, m.c), 2, 4, verify=True)
    with pytest.raises(DimensionError):
        tensor_from_bcirc_z(m, 3, 4)


def test_product_examples(rng):
    b = random_tensor(rng, 3, 2, 4)
    assert tensor_allclose(qt_product(identity_tensor(3, 4), b), b, atol=1e-15)
    a1, b1 = random_tensor(rng, 2, 3, 1), random_tensor(rng, 3, 2, 1)
    assert qt_product(a1, b1).frontal(0).allclose(qmat_mul(a1.frontal(0), b1.frontal(0)), atol=1e-14)
    a, b = random_tensor(rng, 2, 2, 3), random_tensor(rng, 2, 2, 3)
    via_matrix = tensor_from_bcirc_z(bcirc_z(a) @ bcirc_z(b), 2, 3)
    assert norm_s(qt_product(a, b) - via_matrix) <= 1e-11
    with pytest.raises(DimensionError):
        qt_product(random_tensor(rng, 2, 3, 2), random_tensor(rng, 2, 3, 2))
    with pytest.raises(DimensionError):
        qt_product(random_tensor(rng, 2, 2, 2), random_tensor(rng, 2, 2, 3))


def test_homomorphism_and_algebra(rng):
    for _ in range(50):
        n1, n2, n4, n3 = rng.integers(1, 5, size=4)
        a, b = random_tensor(rng, n1, n2, n3), random_tensor(rng, n2, n4, n3)
        c, b2 = random_tensor(rng, n4, 2, n3), random_tensor(rng, n2, n4, n3)
        ab = qt_product(a, b)
        assert qmat_norm2(bcirc_z(ab) - bcirc_z(a) @ bcirc_z(b)) <= 1e-10 * norm_s(a) * norm_s(b)
        assert norm_s(qt_product(ab, c) - qt_product(a, qt_product(b, c))) <= 1e-9
        assert norm_s(qt_product(a, b + b2) - (ab + qt_product(a, b2))) <= 1e-9


def test_transpose(rng):
    for _ in range(30):
        n1, n2, n3 = rng.integers(1, 5, size=3)
        a, b = random_tensor(rng, n1, n2, n3), random_tensor(rng, n2, 3, n3)
        assert bcirc_z_adjoint_defect(a) <= 1e-12
        assert tensor_allclose(qt_transpose(qt_transpose(a)), a, atol=0, rtol=0)
        lhs = qt_transpose(qt_product(a, b))
        assert norm_s(lhs - qt_product(qt_transpose(b), qt_transpose(a))) < 1e-10
    assert tensor_allclose(qt_transpose(identity_tensor(3, 4)), identity_tensor(3, 4), atol=0, rtol=0)


def test_hermitian_fixed_point(rng):
    x = random_tensor(rng, 3, 3, 4)
    m = bcirc_z(x) + bcirc_z(x).H
    h = tensor_from_bcirc_z(m, 3, 4, verify=True)
    assert norm_s(qt_transpose(h) - h) <= 1e-14


def test_identity_and_powers(rng):
    a = random_tensor(rng, 3, 3, 4)
    eye = identity_tensor(3, 4)
    assert tensor_allclose(qt_product(eye, a), a, atol=0, rtol=0)
    assert tensor_allclose(qt_product(a, eye), a, atol=1e-15)
    assert tensor_allclose(qt_power(a, 0), eye, atol=0, rtol=0)
    assert tensor_allclose(qt_power(a, 1), a, atol=0, rtol=0)
    via_matrix = tensor_from_bcirc_z(qmat_power(bcirc_z(a), 2), 3, 4)
    assert norm_s(qt_power(a, 2) - via_matrix) <= 1e-10 * norm_s(a) ** 2
    with pytest.raises(DimensionError):
        qt_power(random_tensor(rng, 2, 3, 2), 2)


def test_unitary_transfer(rng):
    # unitary blocks reassemble to a unitary tensor, whose bcirc_z is unitary
    u = block_reassemble(BlockDiag(tuple(random_unitary(rng, 3) for _ in range(4))))
    eye = identity_tensor(3, 4)
    assert norm_s(qt_product(qt_transpose(u), u) - eye) < 1e-12
    m = bcirc_z(u)
    assert (m.H @ m).allclose(QMat.eye(12), atol=1e-12)
    # and the converse: a tensor with unitary bcirc_z is unitary
    w, _, _ = qt_svd(random_tensor(rng, 3, 3, 4))
    assert (bcirc_z(w).H @ bcirc_z(w)).allclose(QMat.eye(12), atol=1e-12)
    assert norm_s(qt_product(qt_transpose(w), w) - eye) < 1e-12
    # a generic tensor is neither
    g = random_tensor(rng, 3, 3, 4)
    assert norm_s(qt_product(qt_transpose(g), g) - eye) > 1e-3
    assert not (bcirc_z(g).H @ bcirc_z(g)).allclose(QMat.eye(12), atol=1e-6)


def test_invertibility_transfer(rng):
    p = block_reassemble(BlockDiag(tuple(random_invertible(rng, 3) for _ in range(3))))
    assert qmat_rank(bcirc_z(p)) == 9
    pinv = qt_inverse(p)
    assert norm_s(qt_product(p, pinv) - identity_tensor(3, 3)) < 1e-10
    singular = block_reassemble(BlockDiag((random_invertible(rng, 3), planted_block(rng, 3, 1), random_invertible(rng, 3))))
    assert qmat_rank(bcirc_z(singular)) < 9
    with pytest.raises(SingularError):
        qt_inverse(singular)


def test_immutable(rng):
    a = random_tensor(rng, 2, 2, 2)
    with pytest.raises(AttributeError):
        a.d = a.c
    with pytest.raises(ValueError):
        a.d[0, 0, 0] = 1.0
    with pytest.raises(DimensionError):
        QTensor(np.zeros((2, 2)), np.zeros((2, 2)))


def test_bcirc_cache_is_shared_across_threads(rng):
    a = random_tensor(rng, 4, 4, 5)
    seen = []
    threads = [threading.Thread(target=lambda: seen.append(a.bcirc_z)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(m is seen[0] for m in seen)
