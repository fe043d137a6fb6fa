"""Static dimension inference over expressions.

Abstract results are a :class:`Dimension` for scalars, ``"bool"``, ``"seq"``,
``"object"``, or ``None`` when nothing can be said.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DimensionError, UnitLookupError
from .ast import Apply, Constant, Identifier, Number, QuantifiedOp, Symbol
from .dictionary import lookup
from .units import DIMENSIONLESS, Dimension
from .values import Bool, ObjectRef, Scalar, Seq


def abstract(value):
    if isinstance(value, Scalar):
        return value.dim
    if isinstance(value, Bool):
        return "bool"
    if isinstance(value, Seq):
        return "seq"
    if isinstance(value, ObjectRef):
        return "object"
    return None


def _literal(expr):
    if isinstance(expr, Number) and expr.units is None:
        return expr.value
    if (isinstance(expr, Apply) and expr.op == "minus" and len(expr.args) == 1):
        inner = _literal(expr.args[0])
        return None if inner is None else -inner
    return None


def _same(op, dims):
    known = [d for d in dims if isinstance(d, Dimension)]
    for d in known[1:]:
        if d != known[0]:
            raise DimensionError(f"dimension mismatch in {op}", known[0], d)
    if len(known) == len(dims) and known:
        return known[0]
    return known[0] if known else None


def infer_dimension(expr, ctx, env=None):
    """Infer the abstract type of ``expr``; raises DimensionError on a provable mismatch."""
    env = dict(env or {})

    def go(e, env):
        if isinstance(e, Number):
            if e.units is None:
                return DIMENSIONLESS
            try:
                return lookup(e.units, ctx.dictionaries).dimension
            except UnitLookupError:
                return None
        if isinstance(e, Constant):
            return "bool" if e.name in ("true", "false") else DIMENSIONLESS
        if isinstance(e, Identifier):
            if e.name in env:
                return env[e.name]
            if e.name in ctx.bindings:
                return abstract(ctx.bindings[e.name])
            return None
        if isinstance(e, QuantifiedOp):
            go(e.domain, env)
            body = go(e.body, {**env, e.var: None})
            if e.op == "sum":
                return body if isinstance(body, Dimension) else None
            return DIMENSIONLESS if body == DIMENSIONLESS else None
        if not isinstance(e, Apply):
            return None
        if isinstance(e.op, Symbol):
            for a in e.args:
                go(a, env)
            fn = ctx.functions.get(e.op.name) or (
                ctx.functions.get(e.op.definition_url) if e.op.definition_url else None)
            return fn.returns if fn is not None else None
        op = e.op
        args = [go(a, env) for a in e.args]
        if op in ("plus", "minus", "min", "max"):
            return _same(op, args)
        if op in ("eq", "lt", "gt", "leq", "geq"):
            _same(op, [a for a in args if a != "bool"])
            return "bool"
        if op in ("and", "or", "not"):
            return "bool"
        if op == "times":
            if all(isinstance(a, Dimension) for a in args):
                out = DIMENSIONLESS
                for a in args:
                    out = out * a
                return out
            return None
        if op == "divide":
            a, b = args
            return a / b if isinstance(a, Dimension) and isinstance(b, Dimension) else None
        if op == "power":
            base, exp = args
            if isinstance(exp, Dimension) and not exp.is_dimensionless:
                raise DimensionError("exponent must be dimensionless", exp, DIMENSIONLESS)
            if base == DIMENSIONLESS:
                return DIMENSIONLESS
            n = _literal(e.args[1])
            if isinstance(base, Dimension) and n is not None:
                return base ** Fraction(n).limit_denominator(64)
            return None
        if op == "root":
            base = args[0]
            if base == DIMENSIONLESS:
                return DIMENSIONLESS
            n = 2 if e.degree is None else _literal(e.degree)
            if isinstance(base, Dimension) and n:
                return base ** (Fraction(1) / Fraction(n).limit_denominator(64))
            return None
        if op == "abs":
            return args[0]
        # sin cos tan arccos exp ln
        if isinstance(args[0], Dimension) and not args[0].is_dimensionless:
            raise DimensionError(f"{op} needs a dimensionless argument", args[0], DIMENSIONLESS)
        return DIMENSIONLESS

    return go(expr, env)
