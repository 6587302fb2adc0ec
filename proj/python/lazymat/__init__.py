"""Matrix-free simulation of translation-invariant random matrix ensembles.

The heavy lifting lives in the compiled extension; this package re-exports
the public pieces.
"""

from lazymat._core import (
    BudgetExhausted,
    GinibreOperator,
    HaarOperator,
    Reflector,
    ResourceCapExceeded,
    derive_seed,
    ista_curves,
    make_reflector,
    sample_dense_haar,
    spectral_summary,
    two_sample_ks,
)

__all__ = [
    "BudgetExhausted",
    "GinibreOperator",
    "HaarOperator",
    "Reflector",
    "ResourceCapExceeded",
    "derive_seed",
    "ista_curves",
    "make_reflector",
    "sample_dense_haar",
    "spectral_summary",
    "two_sample_ks",
]

__version__ = "0.1.0"
