"""Typed evaluation results and the dimension-checked arithmetic on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from ..errors import DimensionError, NumericDomainError, TypeMismatchError
from .units import DIMENSIONLESS, Dimension


@dataclass(frozen=True)
class Scalar:
    """A number with a dimension.

    ``value`` is expressed in the canonical unit of its dimension unless
    ``unit`` names a non-canonical unit (only :func:`convert` produces those).
    """

    value: Union[int, float]
    dim: Dimension = DIMENSIONLESS
    unit: str | None = None

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class Bool:
    value: bool

    def __bool__(self):
        return self.value


@dataclass(frozen=True)
class Seq:
    items: tuple

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True)
class ObjectRef:
    obj: Any


Value = Union[Scalar, Bool, Seq, ObjectRef]


def wrap(x, dim: Dimension | None = None, unit: str | None = None):
    """Lift a plain Python result into a Value."""
    if isinstance(x, (Scalar, Bool, Seq, ObjectRef)):
        return x
    if isinstance(x, bool):
        return Bool(x)
    if isinstance(x, (int, float)):
        return Scalar(x, dim if dim is not None else DIMENSIONLESS, unit)
    if isinstance(x, (list, tuple)):
        return Seq(tuple(wrap(i) for i in x))
    return ObjectRef(x)


def kind(v) -> str:
    return type(v).__name__


def _scalar(v, op):
    if not isinstance(v, Scalar):
        raise TypeMismatchError(f"{op} expects a number, got {kind(v)}")
    return v


def _same_unit(a: Scalar, b: Scalar):
    return a.unit if a.unit == b.unit else None


def _check_same(op, a: Scalar, b: Scalar):
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch in {op}", a.dim, b.dim)


def _guard(fn, *args):
    try:
        return fn(*args)
    except ZeroDivisionError as exc:
        raise NumericDomainError("division by zero") from exc
    except OverflowError:
        return math.inf


def add(a, b):
    a, b = _scalar(a, "plus"), _scalar(b, "plus")
    _check_same("plus", a, b)
    return Scalar(a.value + b.value, a.dim, _same_unit(a, b))


def sub(a, b):
    a, b = _scalar(a, "minus"), _scalar(b, "minus")
    _check_same("minus", a, b)
    return Scalar(a.value - b.value, a.dim, _same_unit(a, b))


def neg(a):
    a = _scalar(a, "minus")
    return Scalar(-a.value, a.dim, a.unit)


def mul(a, b):
    a, b = _scalar(a, "times"), _scalar(b, "times")
    unit = a.unit if b.dim.is_dimensionless and b.unit is None else None
    if a.dim.is_dimensionless and a.unit is None:
        unit = b.unit
    return Scalar(_guard(lambda: a.value * b.value), a.dim * b.dim, unit)


def div(a, b):
    a, b = _scalar(a, "divide"), _scalar(b, "divide")
    if b.value == 0:
        raise NumericDomainError("division by zero")
    unit = a.unit if b.dim.is_dimensionless and b.unit is None else None
    return Scalar(_guard(lambda: a.value / b.value), a.dim / b.dim, unit)


def _rational_exponent(x) -> Fraction:
    frac = Fraction(x).limit_denominator(64)
    if abs(float(frac) - x) > 1e-12 * max(1.0, abs(x)):
        raise DimensionError(f"non-rational exponent {x} applied to a dimensioned quantity")
    return frac


def power(a, b):
    a, b = _scalar(a, "power"), _scalar(b, "power")
    if not b.dim.is_dimensionless:
        raise DimensionError("exponent must be dimensionless", b.dim, DIMENSIONLESS)
    dim = a.dim
    if not a.dim.is_dimensionless:
        dim = a.dim ** _rational_exponent(b.value)
    base, exp = a.value, b.value
    if base == 0 and exp < 0:
        raise NumericDomainError("zero raised to a negative power")
    if base < 0 and not float(exp).is_integer():
        raise NumericDomainError(f"negative base {base} raised to non-integer power {exp}")
    if isinstance(base, int) and isinstance(exp, int) and exp < 0:
        value = _guard(lambda: float(base) ** exp)
    else:
        value = _guard(lambda: base ** exp)
    return Scalar(value, dim, a.unit if exp == 1 else None)


def root(a, degree):
    a, degree = _scalar(a, "root"), _scalar(degree, "root")
    n = degree.value
    if n == 0:
        raise NumericDomainError("root of degree zero")
    dim = a.dim ** (Fraction(1) / _rational_exponent(n)) if not a.dim.is_dimensionless else a.dim
    x = a.value
    if x < 0:
        if float(n).is_integer() and int(n) % 2 == 1:
            return Scalar(-(_guard(lambda: (-x) ** (1.0 / n))), dim)
        raise NumericDomainError(f"even root of negative number {x}")
    if n == 2:
        return Scalar(math.sqrt(x), dim)
    return Scalar(_guard(lambda: x ** (1.0 / n)), dim)


def compare(op, a, b):
    if isinstance(a, Bool) and isinstance(b, Bool) and op == "eq":
        return Bool(a.value == b.value)
    a, b = _scalar(a, op), _scalar(b, op)
    _check_same(op, a, b)
    x, y = a.value, b.value
    result = {
        "eq": x == y, "lt": x < y, "gt": x > y, "leq": x <= y, "geq": x >= y,
    }[op]
    return Bool(result)


def as_bool(v, op):
    if not isinstance(v, Bool):
        raise TypeMismatchError(f"{op} expects a boolean, got {kind(v)}")
    return v.value
