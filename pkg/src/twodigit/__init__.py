"""Two-digit self-affine attractors from integer expanding polynomials."""
from .errors import BudgetError, CriteriaDisagreement, ValidationError
from .intpoly import IntPolynomial

__all__ = ["IntPolynomial", "ValidationError", "BudgetError", "CriteriaDisagreement"]
__version__ = "0.1.0"
