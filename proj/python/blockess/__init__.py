"""Effective sample sizes under full and block likelihoods."""

from ._blockess import (
    CorrelationModel,
    InvalidArgument,
    NotPositiveDefinite,
    PointGeometry,
    Unsupported,
    blocks,
    efficiency,
    ess,
    ess_block,
    ess_block_dense,
    ess_col_ar1,
    ess_full_ar1,
    ess_row_ar1,
    oracle_check,
    percent_gain,
    sweep,
)

__all__ = [
    "CorrelationModel",
    "InvalidArgument",
    "NotPositiveDefinite",
    "PointGeometry",
    "Unsupported",
    "blocks",
    "efficiency",
    "ess",
    "ess_block",
    "ess_block_dense",
    "ess_col_ar1",
    "ess_full_ar1",
    "ess_row_ar1",
    "oracle_check",
    "percent_gain",
    "sweep",
]
