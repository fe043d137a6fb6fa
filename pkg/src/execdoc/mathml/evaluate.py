"""Evaluation of Content MathML expressions against a Context."""

from __future__ import annotations

import math

from ..errors import (
    DimensionError, ExecDocError, NumericDomainError, TypeMismatchError,
)
from .ast import Apply, Constant, Identifier, Number, QuantifiedOp, Symbol
from .dictionary import canonicalize, to_canonical
from .units import DIMENSIONLESS
from . import values as V
from .values import Bool, Scalar, Seq

_CONSTANTS = {
    "pi": Scalar(math.pi),
    "exponentiale": Scalar(math.e),
    "true": Bool(True),
    "false": Bool(False),
}

_UNARY = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "arccos": math.acos,
    "exp": math.exp,
    "ln": math.log,
}


def evaluate(expr, ctx):
    """Evaluate ``expr`` and return a Value. Pure: no state outside ``ctx`` is read."""
    if isinstance(expr, Number):
        if expr.units is None:
            return Scalar(expr.value)
        value, unit, dim = to_canonical(expr.value, expr.units, ctx.dictionaries)
        return Scalar(value, dim, unit)
    if isinstance(expr, Identifier):
        v = ctx.lookup(expr.name)
        if expr.type == "set" and not isinstance(v, Seq):
            raise TypeMismatchError(f"{expr.name!r} is declared a set but is bound to {V.kind(v)}")
        return canonicalize(v, ctx.dictionaries)
    if isinstance(expr, Constant):
        return _CONSTANTS[expr.name]
    if isinstance(expr, QuantifiedOp):
        return _quantified(expr, ctx)
    if isinstance(expr, Apply):
        if isinstance(expr.op, Symbol):
            return _call(expr, ctx)
        return _apply(expr, ctx)
    raise TypeError(f"not an expression: {expr!r}")


def _call(expr, ctx):
    fn = ctx.resolve(expr.op)
    args = [evaluate(a, ctx) for a in expr.args]
    if fn.arity is not None and len(args) != fn.arity:
        raise TypeMismatchError(
            f"{expr.op.name} takes {fn.arity} argument(s), got {len(args)}")
    return canonicalize(fn(*args), ctx.dictionaries)


def _apply(expr, ctx):
    op = expr.op
    args = [evaluate(a, ctx) for a in expr.args]
    if op == "plus":
        if len(args) == 1:
            return V._scalar(args[0], "plus")
        return _fold(V.add, args)
    if op == "minus":
        return V.neg(args[0]) if len(args) == 1 else V.sub(*args)
    if op == "times":
        if len(args) == 1:
            return V._scalar(args[0], "times")
        return _fold(V.mul, args)
    if op == "divide":
        return V.div(*args)
    if op == "power":
        return V.power(*args)
    if op == "root":
        degree = evaluate(expr.degree, ctx) if expr.degree is not None else Scalar(2)
        return V.root(args[0], degree)
    if op == "abs":
        a = V._scalar(args[0], "abs")
        return Scalar(abs(a.value), a.dim, a.unit)
    if op in _UNARY:
        return _unary(op, args[0])
    if op in ("min", "max"):
        best = V._scalar(args[0], op)
        for a in args[1:]:
            a = V._scalar(a, op)
            if a.dim != best.dim:
                raise DimensionError(f"dimension mismatch in {op}", best.dim, a.dim)
            if (a.value < best.value) if op == "min" else (a.value > best.value):
                best = a
        return best
    if op in ("eq", "lt", "gt", "leq", "geq"):
        return V.compare(op, *args)
    if op == "and":
        return Bool(all([V.as_bool(a, op) for a in args]))
    if op == "or":
        return Bool(any([V.as_bool(a, op) for a in args]))
    if op == "not":
        return Bool(not V.as_bool(args[0], op))
    raise TypeMismatchError(f"unknown operator {op!r}")


def _fold(fn, args):
    acc = args[0]
    for a in args[1:]:
        acc = fn(acc, a)
    return acc


def _unary(op, a):
    a = V._scalar(a, op)
    if not a.dim.is_dimensionless:
        raise DimensionError(f"{op} needs a dimensionless argument", a.dim, DIMENSIONLESS)
    x = a.value
    if op == "arccos" and not -1.0 <= x <= 1.0:
        raise NumericDomainError(f"arccos of {x} is outside [-1, 1]")
    if op == "ln" and x <= 0:
        raise NumericDomainError(f"ln of non-positive {x}")
    try:
        return Scalar(_UNARY[op](x))
    except OverflowError:
        return Scalar(math.inf)
    except ValueError as exc:
        raise NumericDomainError(f"{op}({x}): {exc}") from None


def _quantified(expr, ctx):
    domain = evaluate(expr.domain, ctx)
    if not isinstance(domain, Seq):
        raise TypeMismatchError(f"{expr.op} iterates over a set, got {V.kind(domain)}")
    combine = V.add if expr.op == "sum" else V.mul
    acc = None
    for item in domain:
        r = evaluate(expr.body, ctx.bind(expr.var, item))
        acc = V._scalar(r, expr.op) if acc is None else combine(acc, r)
    if acc is None:
        return _identity(expr, ctx)
    return acc


def _identity(expr, ctx):
    if expr.op == "product":
        return Scalar(1)
    from .analysis import infer_dimension
    try:
        dim = infer_dimension(expr.body, ctx, {expr.var: None})
    except ExecDocError:
        dim = None
    return Scalar(0, dim if hasattr(dim, "exponents") else DIMENSIONLESS)
