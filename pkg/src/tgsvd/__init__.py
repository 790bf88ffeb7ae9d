"""Tubal-product tensor algebra and the generalized tensor SVD (GTSVD)."""

from .bench import (
    BenchReport,
    BenchSpec,
    emit_report,
    gen_cubic_root,
    gen_inverse_distance,
    gen_low_tubal_rank,
    run_benchmark,
)
from .error_bounds import (
    ErrorBoundReport,
    EtaFactors,
    eta_factors,
    projection_error,
    theorem1_bound,
    theorem2_bound,
)
from .errors import *  # noqa: F401,F403
from .factorizations import TLuFactors, TQrFactors, TSvdFactors, tinv, tlu, tpinv, tqr, tsvd, tubal_rank
from .gsvd_matrix import (
    CsPair,
    GsvdFactors,
    GsvdPartition,
    cs_decomposition,
    gsvd,
    gsvd_reconstruct,
    partition_factors,
    randomized_gsvd,
)
from .gtsvd import GtsvdFactors, gtsvd, power_iterate_sketch, relative_error, rgtsvd_projection, rgtsvd_slicewise
from .sketch import SketchConfig
from .t3f import read_t3f, write_t3f
from .tensor_core import (
    FourierTensor3,
    dft_mode3,
    frobenius_norm,
    identity_tensor,
    idft_mode3,
    is_f_diagonal,
    is_orthogonal,
    tprod,
    tprod_circulant,
    ttranspose,
)

__version__ = "0.1.0"
