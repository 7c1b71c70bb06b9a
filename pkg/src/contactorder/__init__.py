"""Exact order-of-contact invariants of holomorphic curves with polynomial
real hypersurfaces.

The public surface re-exports the main types and operations; see the module
docstrings for the mathematics each piece implements.
"""

from .rational import GaussianRational
from .poly import (
    ComplexPolynomial,
    HermitianPolynomial,
    abs2,
    hermitian_check,
    im_part,
    re_part,
    wirtinger_derive,
)
from .series import OrderBound, TraceSeries, series_min_order
from .curves import CurveJet
from .expansion import (
    ConstantComparison,
    DerivativeTerm,
    FormalExpansion,
    constant_comparison,
    evaluate_expansion,
    evaluate_term,
    expand,
    reduce_mod_mv,
)
from .contact import (
    ContactReport,
    TangencyTestResult,
    compose,
    contact_report,
    mixed_derivative,
    pseudoconvex_tangency_test,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "ComplexPolynomial",
    "HermitianPolynomial",
    "abs2",
    "hermitian_check",
    "im_part",
    "re_part",
    "wirtinger_derive",
    "OrderBound",
    "TraceSeries",
    "series_min_order",
    "CurveJet",
    "ConstantComparison",
    "DerivativeTerm",
    "FormalExpansion",
    "constant_comparison",
    "evaluate_expansion",
    "evaluate_term",
    "expand",
    "reduce_mod_mv",
    "ContactReport",
    "TangencyTestResult",
    "compose",
    "contact_report",
    "mixed_derivative",
    "pseudoconvex_tangency_test",
    "__version__",
]
