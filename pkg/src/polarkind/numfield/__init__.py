"""Certified scalar arithmetic and exact number-field kernels."""

from .expr import DomainError, ParseError, parse_expr, expr_to_str
from .field import QQ, NFElem, NumberField, factor_over
from .poly import Poly2, parse_polys
from .scalar import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    LineageError,
    Scalar,
    UndecidedError,
    certify_sign,
    decide_sign,
    escalate,
    parse_scalar,
    tower_field,
)

__all__ = [
    "DomainError",
    "ParseError",
    "parse_expr",
    "expr_to_str",
    "QQ",
    "NFElem",
    "NumberField",
    "factor_over",
    "Poly2",
    "parse_polys",
    "DEFAULT_PRECISION",
    "MAX_PRECISION",
    "LineageError",
    "Scalar",
    "UndecidedError",
    "certify_sign",
    "decide_sign",
    "escalate",
    "parse_scalar",
    "tower_field",
]
