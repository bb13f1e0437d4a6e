"""Low-tubal-rank tensor completion under tubal sampling.

Three solvers over a shared tensor-algebra substrate (t-product, t-SVD):
spectral-shrinkage ADMM with a convex (``tnn``) or difference-of-norms
(``tl12``) penalty, and a fast cross-approximation method (``tccur``) that
completes each Fourier slice from a few rows and columns.
"""

from .admm import (
    AdmmConfig,
    AdmmState,
    prox_l1_minus_l2,
    solve_admm,
    spectral_shrink,
    tl12,
    tnn,
    write_history_csv,
)
from .benchmark import (
    ExperimentSpec,
    MetricRow,
    read_rows,
    run_sweep,
    write_rows,
)
from .cur import (
    CurComponents,
    IcurcConfig,
    TccurResult,
    default_core_count,
    icurc_r,
    tccur,
    truncate_rank,
    write_slice_history_csv,
)
from .errors import (
    CompletionError,
    DimensionMismatch,
    EmptyMask,
    IoFailure,
    NumericalFailure,
    RankTooLarge,
    SymmetryViolation,
    UnsupportedFormat,
    ZeroTruth,
)
from .metrics import psnr, relative_error, synth_low_tubal_rank
from .sampling import (
    TubalMask,
    impose,
    load_mask,
    project,
    random_tubal_mask,
    save_mask,
)
from .tensor_io import load_image, load_tensor, save_image, save_tensor
from .tensor_ops import (
    TSvd,
    fft_mode3,
    identity_tensor,
    ifft_mode3,
    spectral_singular_values,
    t_pinv,
    t_product,
    t_svd,
    t_transpose,
    tubal_rank,
)

__all__ = [
    "AdmmConfig",
    "AdmmState",
    "CompletionError",
    "CurComponents",
    "DimensionMismatch",
    "EmptyMask",
    "ExperimentSpec",
    "IcurcConfig",
    "IoFailure",
    "MetricRow",
    "NumericalFailure",
    "RankTooLarge",
    "SymmetryViolation",
    "TSvd",
    "TccurResult",
    "TubalMask",
    "UnsupportedFormat",
    "ZeroTruth",
    "default_core_count",
    "fft_mode3",
    "icurc_r",
    "identity_tensor",
    "ifft_mode3",
    "impose",
    "load_image",
    "load_mask",
    "load_tensor",
    "project",
    "prox_l1_minus_l2",
    "psnr",
    "random_tubal_mask",
    "read_rows",
    "relative_error",
    "run_sweep",
    "save_image",
    "save_mask",
    "save_tensor",
    "solve_admm",
    "spectral_shrink",
    "spectral_singular_values",
    "synth_low_tubal_rank",
    "t_pinv",
    "t_product",
    "t_svd",
    "t_transpose",
    "tccur",
    "tl12",
    "tnn",
    "truncate_rank",
    "tubal_rank",
    "write_history_csv",
    "write_rows",
    "write_slice_history_csv",
]
