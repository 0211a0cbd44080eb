"""Exact truncated q-series engine.

Everything computes in a sparse, exact-rational series ring truncated
per variable, so identities among formal series become decidable finite
equalities; finite rational-function identities verify instead at exact
rational points.
"""

from .errors import (DomainError, InternalConsistencyError, NonInvertible,
                     PoleError, QBaileyError, TruncationMismatch,
                     TruncationOverflow)
from .report import IdentityReport
from .series import Monomial, TruncatedSeries, Truncation

__all__ = [
    "DomainError", "InternalConsistencyError", "NonInvertible", "PoleError",
    "QBaileyError", "TruncationMismatch", "TruncationOverflow",
    "IdentityReport", "Monomial", "TruncatedSeries", "Truncation",
]

__version__ = "0.1.0"
