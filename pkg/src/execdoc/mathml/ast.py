"""Content MathML abstract syntax."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

# operators grouped by how the evaluator treats their arguments
NARY_ARITH = ("plus", "times", "min", "max")
BINARY_ARITH = ("divide", "power")
UNARY_FUNCS = ("sin", "cos", "tan", "arccos", "exp", "ln", "abs")
RELATIONS = ("eq", "lt", "gt", "leq", "geq")
LOGIC = ("and", "or", "not")
OPERATORS = frozenset(
    NARY_ARITH + BINARY_ARITH + UNARY_FUNCS + RELATIONS + LOGIC + ("minus", "root")
)
QUANTIFIERS = frozenset({"sum", "product"})
CONSTANTS = frozenset({"pi", "exponentiale", "true", "false"})


@dataclass(frozen=True)
class Number:
    value: Union[int, float]
    units: Optional[str] = None


@dataclass(frozen=True)
class Identifier:
    name: str
    type: Optional[str] = None
    definition_url: Optional[str] = None


@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class Symbol:
    """A ``<csymbol>`` naming an externally supplied function.

    ``label`` is the displayed text when it differs from the dispatch name
    (``<csymbol func="getMass">w</csymbol>``).
    """

    name: str
    definition_url: Optional[str] = None
    label: Optional[str] = None


@dataclass(frozen=True)
class Apply:
    op: Union[str, Symbol]
    args: tuple
    degree: Optional["Expr"] = None


@dataclass(frozen=True)
class QuantifiedOp:
    op: str
    var: str
    domain: "Expr"
    body: "Expr"


Expr = Union[Number, Identifier, Constant, Apply, QuantifiedOp]


def walk(expr):
    """Yield every node of the tree, parents before children."""
    yield expr
    if isinstance(expr, Apply):
        if expr.degree is not None:
            yield from walk(expr.degree)
        for arg in expr.args:
            yield from walk(arg)
    elif isinstance(expr, QuantifiedOp):
        yield from walk(expr.domain)
        yield from walk(expr.body)


def free_identifiers(expr, bound=frozenset()):
    """Names referenced but not bound by an enclosing sum/product, in first-use order."""
    seen = {}

    def visit(e, bound):
        if isinstance(e, Identifier):
            if e.name not in bound:
                seen.setdefault(e.name, e)
        elif isinstance(e, Apply):
            if e.degree is not None:
                visit(e.degree, bound)
            for a in e.args:
                visit(a, bound)
        elif isinstance(e, QuantifiedOp):
            visit(e.domain, bound)
            visit(e.body, bound | {e.var})

    visit(expr, frozenset(bound))
    return seen


def symbols(expr):
    return [n.op for n in walk(expr) if isinstance(n, Apply) and isinstance(n.op, Symbol)]
