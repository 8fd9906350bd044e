"""floerkit: knot Floer complexes, surgery mapping cones and rank identities."""

from .fields import F2, Q, field_by_name, rational_functions
from .model import (
    CFKComplex,
    ParseError,
    SchemaError,
    ValidationError,
    load_complex,
    parse_complex,
    serialize_complex,
    validate_complex,
)

__version__ = "0.1.0"

__all__ = [
    "F2",
    "Q",
    "CFKComplex",
    "ParseError",
    "SchemaError",
    "ValidationError",
    "field_by_name",
    "load_complex",
    "parse_complex",
    "rational_functions",
    "serialize_complex",
    "validate_complex",
]
