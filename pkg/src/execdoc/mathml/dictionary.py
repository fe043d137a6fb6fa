"""Standoff dictionaries: dictRef terms with dimensions, units and conversions."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Mapping, Optional

from ..errors import DictionaryError, DimensionError, ExecDocError, UnitLookupError
from ..namespaces import CML, split
from .ast import free_identifiers
from .units import Dimension
from .values import Scalar

CONVERSION_VARIABLE = "x"


@dataclass(frozen=True)
class DictEntry:
    term: str
    description: str
    dimension: Dimension
    unit: Optional[str]
    conversion: Optional[object] = None
    scale: float = 1.0
    offset: float = 0.0


@dataclass(frozen=True)
class Dictionary:
    prefix: str
    entries: Mapping[str, DictEntry] = field(default_factory=lambda: MappingProxyType({}))
    namespace: Optional[str] = None

    def __contains__(self, term):
        return term in self.entries

    def merged(self, base: "Dictionary") -> "Dictionary":
        entries = dict(base.entries)
        entries.update(self.entries)
        return Dictionary(self.prefix, MappingProxyType(entries), self.namespace or base.namespace)


def _qualify(dictionaries):
    if isinstance(dictionaries, Mapping):
        return dictionaries
    return {d.prefix: d for d in dictionaries}


def lookup(ref: str, dictionaries) -> DictEntry:
    """Find the entry for a prefixed reference such as ``units:angstrom``."""
    dicts = _qualify(dictionaries)
    prefix, sep, term = ref.partition(":")
    if not sep:
        raise UnitLookupError(f"dictionary reference {ref!r} has no prefix")
    d = dicts.get(prefix)
    if d is None or term not in d.entries:
        raise UnitLookupError(f"unknown dictionary term {ref!r}")
    return d.entries[term]


def is_canonical(ref: str, entry: DictEntry) -> bool:
    return entry.unit == ref


def to_canonical(x: float, ref: str, dictionaries):
    """Return (value in canonical unit, canonical unit ref, dimension)."""
    e = lookup(ref, dictionaries)
    if e.unit is None:
        raise UnitLookupError(f"{ref!r} is not a unit")
    if is_canonical(ref, e):
        return x, ref, e.dimension
    if e.conversion is None:
        raise UnitLookupError(f"{ref!r} has no conversion to {e.unit!r}")
    return e.scale * x + e.offset, e.unit, e.dimension


def convert(v: Scalar, target_unit: str, dictionaries) -> Scalar:
    """Express ``v`` in ``target_unit``.

    A scalar without a unit label is taken to be in the canonical unit of the
    target's dimension.
    """
    target = lookup(target_unit, dictionaries)
    if target.unit is None or not (is_canonical(target_unit, target) or target.conversion is not None):
        raise UnitLookupError(f"{target_unit!r} is not a unit")
    if v.unit is None:
        if v.dim != target.dimension:
            raise DimensionError("cannot convert", v.dim, target.dimension)
        canonical = float(v.value)
    else:
        src = lookup(v.unit, dictionaries)
        if src.dimension != target.dimension:
            raise DimensionError(f"cannot convert {v.unit} to {target_unit}",
                                 src.dimension, target.dimension)
        if src.unit != target.unit:
            raise UnitLookupError(f"no conversion from {v.unit!r} to {target_unit!r}")
        if v.unit == target_unit:
            return v
        canonical, _, _ = to_canonical(v.value, v.unit, dictionaries)
    if is_canonical(target_unit, target):
        value = canonical
    else:
        value = (canonical - target.offset) / target.scale
    return Scalar(value, target.dimension, target_unit)


def scalar_from_text(text: str, units: Optional[str], dict_ref: Optional[str], dictionaries) -> Scalar:
    """Read a dimensioned value as it appears in CML (``<scalar units=... dictRef=...>``).

    The value is normalized to the canonical unit. When both a unit and a
    dictRef are given their dimensions must agree.
    """
    try:
        x = float(text)
    except (TypeError, ValueError):
        raise DictionaryError(f"not a number: {text!r}") from None
    quantity = lookup(dict_ref, dictionaries) if dict_ref and _known(dict_ref, dictionaries) else None
    if units:
        value, unit, dim = to_canonical(x, units, dictionaries)
        if quantity is not None and quantity.dimension != dim:
            raise DimensionError(f"{units} does not fit {dict_ref}", dim, quantity.dimension)
        return Scalar(value, dim, unit)
    if quantity is not None and quantity.unit is not None:
        value, unit, dim = to_canonical(x, quantity.unit, dictionaries)
        return Scalar(value, dim, unit)
    return Scalar(x)


def _known(ref, dictionaries):
    try:
        lookup(ref, dictionaries)
    except UnitLookupError:
        return False
    return True


def canonicalize(v, dictionaries):
    """Rewrite a scalar carrying a non-canonical unit into its canonical unit."""
    if not isinstance(v, Scalar) or v.unit is None:
        return v
    try:
        e = lookup(v.unit, dictionaries)
    except UnitLookupError:
        return v
    if is_canonical(v.unit, e) or e.conversion is None:
        return v
    value, unit, dim = to_canonical(v.value, v.unit, dictionaries)
    return Scalar(value, dim, unit)


# --- loading ----------------------------------------------------------------

def _affine(expr, term):
    from .context import Context
    from .evaluate import evaluate

    free = set(free_identifiers(expr))
    if free - {CONVERSION_VARIABLE}:
        raise DictionaryError(f"conversion for {term!r} references {sorted(free)}")

    def f(x):
        try:
            r = evaluate(expr, Context.of({CONVERSION_VARIABLE: x}))
        except ExecDocError as exc:
            raise DictionaryError(f"conversion for {term!r} failed: {exc}") from exc
        if not isinstance(r, Scalar) or not r.dim.is_dimensionless:
            raise DictionaryError(f"conversion for {term!r} must yield a plain number")
        return float(r.value)

    offset = f(0.0)
    scale = f(1.0) - offset
    if scale == 0 or not math.isfinite(scale):
        raise DictionaryError(f"conversion for {term!r} is not invertible")
    for probe in (2.0, -3.5, 1000.0):
        expected = scale * probe + offset
        if not math.isclose(f(probe), expected, rel_tol=1e-12, abs_tol=1e-12):
            raise DictionaryError(f"conversion for {term!r} is not affine")
    return scale, offset


def _cml(el, local):
    return el.tag in (f"{{{CML}}}{local}", local)


def dictionary_from_element(root) -> Dictionary:
    from .parse import from_element

    if not _cml(root, "dictionary"):
        raise DictionaryError(f"expected <dictionary>, got <{split(root.tag)[1]}>")
    prefix = root.get("prefix")
    if not prefix:
        raise DictionaryError("dictionary has no prefix attribute")
    entries = {}
    for el in root:
        if not isinstance(el.tag, str) or not _cml(el, "entry"):
            continue
        term = el.get("term") or el.get("id")
        if not term:
            raise DictionaryError("dictionary entry without a term")
        if term in entries:
            raise DictionaryError(f"duplicate dictionary term {prefix}:{term}")
        desc_el = next((c for c in el if isinstance(c.tag, str) and _cml(c, "description")), None)
        description = " ".join((desc_el.text or "").split()) if desc_el is not None else ""
        try:
            dim = Dimension.parse(el.get("dimension", ""))
        except ValueError as exc:
            raise DictionaryError(f"{prefix}:{term}: {exc}") from None
        unit = el.get("unit")
        conv_el = next((c for c in el if isinstance(c.tag, str) and _cml(c, "conversion")), None)
        conversion, scale, offset = None, 1.0, 0.0
        if conv_el is not None:
            body = [c for c in conv_el if isinstance(c.tag, str)]
            if len(body) != 1:
                raise DictionaryError(f"{prefix}:{term}: conversion must hold one MathML expression")
            conversion = from_element(body[0])
            scale, offset = _affine(conversion, f"{prefix}:{term}")
            if unit is None or unit == f"{prefix}:{term}":
                raise DictionaryError(f"{prefix}:{term}: conversion needs a distinct target unit")
        entries[term] = DictEntry(term, description, dim, unit, conversion, scale, offset)
    return Dictionary(prefix, MappingProxyType(entries), root.get("namespace"))


def load_dictionary(xml_text) -> Dictionary:
    return dictionary_from_element(ET.fromstring(xml_text))


def validate(dictionaries):
    """Check cross-entry invariants: conversion targets exist, are canonical and share the dimension."""
    dicts = _qualify(dictionaries)
    for d in dicts.values():
        for term, e in d.entries.items():
            if e.conversion is None:
                continue
            target = lookup(e.unit, dicts)
            if not is_canonical(e.unit, target):
                raise DictionaryError(f"{d.prefix}:{term} converts to non-canonical {e.unit}")
            if target.dimension != e.dimension:
                raise DictionaryError(f"{d.prefix}:{term} and {e.unit} differ in dimension")


@lru_cache(maxsize=None)
def default_dictionaries() -> Mapping[str, Dictionary]:
    data = resources.files("execdoc") / "data"
    dicts = {}
    for name in ("units.xml", "ff-dictionary.xml"):
        d = load_dictionary(data.joinpath(name).read_bytes())
        dicts[d.prefix] = d
    validate(dicts)
    return MappingProxyType(dicts)
