"""Evaluation contexts: bound variables, native functions, and dictionaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Callable, Mapping, Optional, Union

from ..errors import FunctionConflictError, UnboundIdentifierError, UnregisteredFunctionError
from .units import Dimension
from .values import wrap

_EMPTY = MappingProxyType({})


@dataclass(frozen=True)
class NativeFunction:
    """A Python callable exposed to MathML through ``<csymbol>``.

    ``returns`` declares the result for static analysis: a :class:`Dimension`
    for scalars, or one of ``"bool"``, ``"seq"``, ``"object"``. Functions must
    be pure with respect to their arguments.
    """

    fn: Callable
    arity: Optional[int] = None
    returns: Union[Dimension, str, None] = None
    description: str = ""

    def __call__(self, *args):
        out = self.fn(*args)
        if isinstance(self.returns, Dimension):
            return wrap(out, self.returns)
        return wrap(out)


@dataclass(frozen=True)
class Context:
    bindings: Mapping[str, Any] = field(default=_EMPTY)
    functions: Mapping[str, NativeFunction] = field(default=_EMPTY)
    dictionaries: Mapping[str, Any] = field(default=_EMPTY)

    @classmethod
    def of(cls, values=None, **kwargs):
        """Build a context from plain Python values (numbers become dimensionless scalars)."""
        merged = dict(values or {}, **kwargs)
        return cls(MappingProxyType({k: wrap(v) for k, v in merged.items()}))

    def bind(self, name, value) -> Context:
        new = dict(self.bindings)
        new[name] = wrap(value)
        return Context(MappingProxyType(new), self.functions, self.dictionaries)

    def bind_all(self, mapping) -> Context:
        new = dict(self.bindings)
        new.update((k, wrap(v)) for k, v in mapping.items())
        return Context(MappingProxyType(new), self.functions, self.dictionaries)

    def lookup(self, name):
        try:
            return self.bindings[name]
        except KeyError:
            raise UnboundIdentifierError(name) from None

    def resolve(self, symbol) -> NativeFunction:
        """Find the function for a csymbol: exact name first, then its URI."""
        fn = self.functions.get(symbol.name)
        if fn is None and symbol.definition_url:
            fn = self.functions.get(symbol.definition_url)
        if fn is None:
            raise UnregisteredFunctionError(symbol.definition_url or symbol.name)
        return fn

    def register(self, name_or_uri, fn, *, arity=None, returns=None, description="") -> Context:
        return register_function(self, name_or_uri, fn, arity=arity, returns=returns,
                                 description=description)

    def with_dictionaries(self, dictionaries) -> Context:
        merged = dict(self.dictionaries)
        for d in (dictionaries.values() if isinstance(dictionaries, Mapping) else dictionaries):
            merged[d.prefix] = d.merged(merged[d.prefix]) if d.prefix in merged else d
        return Context(self.bindings, self.functions, MappingProxyType(merged))


def register_function(ctx, name_or_uri, fn, *, arity=None, returns=None, description=""):
    if not name_or_uri:
        raise ValueError("function name must be non-empty")
    if name_or_uri in ctx.functions:
        raise FunctionConflictError(f"function {name_or_uri!r} is already registered")
    if not isinstance(fn, NativeFunction):
        fn = NativeFunction(fn, arity, returns, description)
    functions = dict(ctx.functions)
    functions[name_or_uri] = fn
    return Context(ctx.bindings, MappingProxyType(functions), ctx.dictionaries)
