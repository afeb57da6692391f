"""Exact truncated-series and enumeration checks for coloured overpartition identities."""

from .colours import Colour, all_perms, identity
from .dilation import Alphabet, enumerate_dilated, minimal_difference
from .errors import (AlphabetError, DivergenceError, DomainError, QSchurError, TruncationError,
                     UsageError)
from .qdiff import build_family, check_main, run_pipeline
from .report import VerificationReport
from .series import MultiSeries, TruncationBox, pochhammer, pochhammer_inf, product_side, qbinomial
from .weighted import enumerate_D, enumerate_E, overpartitions

__all__ = [
    "Alphabet", "AlphabetError", "Colour", "DivergenceError", "DomainError", "MultiSeries", "QSchurError",
    "TruncationBox", "TruncationError", "UsageError", "VerificationReport", "all_perms", "build_family",
    "check_main", "enumerate_D", "enumerate_E", "enumerate_dilated", "identity", "minimal_difference",
    "overpartitions", "pochhammer", "pochhammer_inf", "product_side", "qbinomial", "run_pipeline",
]
