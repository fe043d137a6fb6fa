"""Executable Content MathML: parsing, evaluation, units and dictionaries."""

from .ast import Apply, Constant, Identifier, Number, QuantifiedOp, Symbol, free_identifiers
from .context import Context, NativeFunction, register_function
from .dictionary import Dictionary, DictEntry, convert, default_dictionaries, load_dictionary
from .evaluate import evaluate
from .parse import parse_mathml, serialize_mathml, to_element, from_element
from .units import DIMENSIONLESS, Dimension
from .values import Bool, ObjectRef, Scalar, Seq

__all__ = [
    "Apply", "Bool", "Constant", "Context", "DIMENSIONLESS", "DictEntry", "Dictionary",
    "Dimension", "Identifier", "NativeFunction", "Number", "ObjectRef", "QuantifiedOp",
    "Scalar", "Seq", "Symbol", "convert", "default_dictionaries", "evaluate",
    "free_identifiers", "from_element", "load_dictionary", "parse_mathml",
    "register_function", "serialize_mathml", "to_element",
]
