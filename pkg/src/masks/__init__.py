from .cyclotomic import Cyclotomic
from .mask_analysis import (
    BlockedSetResult,
    Mask,
    StepTable,
    blocked_set_find,
    check_mask_hypotheses,
    inverse_mask_values,
    is_blocked,
    mask_values,
    naive_mask_values,
    phi_hat,
    scaling_criteria_check,
    walsh_orthonormality,
)
from .mask_file import parse_mask_file, parse_mask_text

__all__ = [
    "BlockedSetResult",
    "Cyclotomic",
    "Mask",
    "StepTable",
    "blocked_set_find",
    "check_mask_hypotheses",
    "inverse_mask_values",
    "is_blocked",
    "mask_values",
    "naive_mask_values",
    "parse_mask_file",
    "parse_mask_text",
    "phi_hat",
    "scaling_criteria_check",
    "walsh_orthonormality",
]
