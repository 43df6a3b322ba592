"""Hot loops behind the tensor layer, in a numba and a pure-numpy flavour.

The z-block circulant of a tensor with complex parts ``d``, ``c`` (shape
``(n3, n1, n2)``, slice-major) has block ``(s, t)`` equal to

    d[(s - t) % n3] + j c[(s + t) % n3]

(the ``+`` comes from the column permutation that fixes the first block and
reverses the others). Both flavours use that index rule directly, so the
permutation is never multiplied out.

Set ``QTDRAZIN_DISABLE_NUMBA=1`` to force the numpy path. With numba
available, small inputs go to the compiled loops and large ones to numpy,
whose BLAS matmul wins there. ``BACKEND`` says whether numba is in play.
The ``*_numpy`` and ``*_numba`` functions stay importable for benchmarking
and cross-checks (the numba ones are ``None`` when numba is missing or
disabled).
"""

from __future__ import annotations

import os

import numpy as np

DISABLED = os.environ.get("QTDRAZIN_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if DISABLED:
        raise ImportError("numba disabled by QTDRAZIN_DISABLE_NUMBA")
    from numba import njit
except ImportError:
    njit = None


def bcirc_z_parts_numpy(d: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n3, n1, n2 = d.shape
    s = np.arange(n3)[:, None]
    t = np.arange(n3)[None, :]
    md = d[(s - t) % n3].transpose(0, 2, 1, 3).reshape(n3 * n1, n3 * n2)
    mc = c[(s + t) % n3].transpose(0, 2, 1, 3).reshape(n3 * n1, n3 * n2)
    return md, mc


def qt_product_parts_numpy(ad, ac, bd, bc):
    """``fold(bcirc_z(A) @ unfold(B))`` on complex parts."""
    n3, n1, r = ad.shape
    n2 = bd.shape[2]
    md, mc = bcirc_z_parts_numpy(ad, ac)
    ud = bd.reshape(n3 * r, n2)
    uc = bc.reshape(n3 * r, n2)
    od = md @ ud - mc.conj() @ uc
    oc = md.conj() @ uc + mc @ ud
    return od.reshape(n3, n1, n2), oc.reshape(n3, n1, n2)


if njit is not None:

    @njit(cache=True)
    def bcirc_z_parts_numba(d, c):
        n3, n1, n2 = d.shape
        md = np.empty((n3 * n1, n3 * n2), dtype=np.complex128)
        mc = np.empty((n3 * n1, n3 * n2), dtype=np.complex128)
        for s in range(n3):
            for t in range(n3):
                kd = (s - t) % n3
                kc = (s + t) % n3
                for i in range(n1):
                    for k in range(n2):
                        md[s * n1 + i, t * n2 + k] = d[kd, i, k]
                        mc[s * n1 + i, t * n2 + k] = c[kc, i, k]
        return md, mc

    @njit(cache=True)
    def qt_product_parts_numba(ad, ac, bd, bc):
        n3, n1, r = ad.shape
        n2 = bd.shape[2]
        od = np.zeros((n3, n1, n2), dtype=np.complex128)
        oc = np.zeros((n3, n1, n2), dtype=np.complex128)
        for s in range(n3):
            for t in range(n3):
                kd = (s - t) % n3
                kc = (s + t) % n3
                for i in range(n1):
                    for q in range(r):
                        zd = ad[kd, i, q]
                        zc = ac[kc, i, q]
                        zdc = zd.conjugate()
                        zcc = zc.conjugate()
                        for k in range(n2):
                            xd = bd[t, q, k]
                            xc = bc[t, q, k]
                            od[s, i, k] += zd * xd - zcc * xc
                            oc[s, i, k] += zdc * xc + zc * xd
        return od, oc

    BACKEND = "numba"
else:
    bcirc_z_parts_numba = None
    qt_product_parts_numba = None
    BACKEND = "numpy"

# Above these sizes the BLAS-backed numpy path is faster (see benchmarks/).
NUMBA_MAX_PRODUCT_WORK = 6000
NUMBA_MAX_BCIRC_ENTRIES = 1 << 18


def bcirc_z_parts(d: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n3, n1, n2 = d.shape
    if bcirc_z_parts_numba is not None and n3 * n3 * n1 * n2 <= NUMBA_MAX_BCIRC_ENTRIES:
        return bcirc_z_parts_numba(d, c)
    return bcirc_z_parts_numpy(d, c)


def qt_product_parts(ad, ac, bd, bc):
    n3, n1, r = ad.shape
    if qt_product_parts_numba is not None and n3 * n3 * n1 * r * bd.shape[2] <= NUMBA_MAX_PRODUCT_WORK:
        return qt_product_parts_numba(ad, ac, bd, bc)
    return qt_product_parts_numpy(ad, ac, bd, bc)
