"""Exact desk-scale computations with Frobenius-divided structures on the line."""

from .fields import FieldElement, FieldSpec, binom_mod_p, frobenius, multinomial_unit
from .laurent import LaurentMatrix, LaurentPoly, laurent_matrix_inverse, substitute_power

__all__ = [
    "FieldElement",
    "FieldSpec",
    "binom_mod_p",
    "frobenius",
    "multinomial_unit",
    "LaurentMatrix",
    "LaurentPoly",
    "laurent_matrix_inverse",
    "substitute_power",
]

__version__ = "0.1.0"
