"""Hankel determinants of the fixed point of 1 -> 101, 0 -> 1.

``eval_closed`` gives H_{m,n} from the parallelogram tiling; ``eval_oracle``
computes the same determinant directly from the word.
"""
from .closed_form import eval_closed, evaluate
from .oracle import ConfigurationError, det_bareiss, det_crt, eval_oracle, matrix
from .partition import CellClass, Parallelogram, PartitionError, Window, classify, family_upto, verify_partition
from .sequence import (
    FRep,
    InvalidRepresentationError,
    WidthOverflowError,
    decode,
    encode,
    f,
    f_mod4,
    phi,
    s_at,
    s_prefix,
)

__version__ = "0.1.0"

__all__ = [
    "CellClass",
    "ConfigurationError",
    "FRep",
    "InvalidRepresentationError",
    "Parallelogram",
    "PartitionError",
    "WidthOverflowError",
    "Window",
    "classify",
    "decode",
    "det_bareiss",
    "det_crt",
    "encode",
    "eval_closed",
    "eval_oracle",
    "evaluate",
    "f",
    "f_mod4",
    "family_upto",
    "matrix",
    "phi",
    "s_at",
    "s_prefix",
    "verify_partition",
]
