"""Quaternion tensors under the QT-product.

Quaternion matrices are stored as a complex pair ``D + j C``; tensors are
stacks of such slices. On top of the product the package provides the
QT-SVD, Moore-Penrose, Drazin and plain inverses, rank and index, the
spectral norm and radius, and certification of Drazin perturbation bounds.
"""

from ._version import __version__
from .config import paranoid, paranoid_enabled, set_paranoid
from .errors import (
    BoundInapplicableError,
    DimensionError,
    HypothesisError,
    InconsistencyError,
    NotZCirculantError,
    PreconditionError,
    QTError,
    SingularError,
    StructureError,
    TensorFileError,
)
from .perturb import PerturbReport, check_core_perturbation, compute_bounds, perturb_report, verify_identities
from .qmatrix import (
    QMat,
    chi,
    chi_inverse,
    qmat_adjoint,
    qmat_drazin,
    qmat_index,
    qmat_mul,
    qmat_norm2,
    qmat_pinv,
    qmat_power,
    qmat_rank,
    qmat_right_spectral_radius,
    qmat_svd,
    right_spectrum,
)
from .quat import Quat, merge, qabs, qconj, qmul, split
from .spectral import (
    BlockDiag,
    block_diagonalize,
    block_reassemble,
    drazin_residuals,
    norm_s,
    pinv_residuals,
    qt_drazin,
    qt_index,
    qt_inverse,
    qt_pinv,
    qt_rank,
    qt_spectral_norm,
    qt_spectral_radius,
    qt_svd,
)
from .tensor import (
    PermP,
    QTensor,
    bcirc_z,
    fold,
    identity_tensor,
    qt_power,
    qt_product,
    qt_transpose,
    tensor_from_bcirc_z,
    unfold,
)
from .tensorfile import read_tensor, write_tensor

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
