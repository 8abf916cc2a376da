"""Resource bounds and default tolerances.

The exact layer works with widths up to `MAX_WIDTH`; the numeric layer
caps the ambient tensor-power dimension at `max_rep_dimension()`, which
can be raised through the MOTZKIN_MAX_DIM environment variable.
"""

from __future__ import annotations

import os

# Exact diagram calculus.
MAX_WIDTH = 6
MAX_TERMS = 10**6

# Numeric (matrix) layer.
DEFAULT_MAX_DIM = 4096
# Full n^k x n^k projection matrices are only materialised below this size.
FULL_MATRIX_DIM = 1024

# Tolerances.
TOL_CHECK = 1e-10       # pass/fail residual threshold for identities
TOL_CONSTRUCT = 1e-12   # internal construction consistency
TOL_RANK = 1e-8         # relative threshold for numerical rank / spans
TOL_TOEPLITZ = 1e-9     # Toeplitz relation suite
RANK_GAP = 1e3          # required spectral gap ratio at a rank cut


def max_rep_dimension() -> int:
    """Largest allowed dimension n**k for operators on the k-fold tensor power."""
    value = os.environ.get("MOTZKIN_MAX_DIM")
    if value is None:
        return DEFAULT_MAX_DIM
    try:
        return int(value)
    except ValueError:
        return DEFAULT_MAX_DIM
