"""Reading and writing the supported Content MathML subset."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from ..errors import MathMLParseError, StructureError, UnsupportedElementError
from ..namespaces import MATHML, split
from .ast import (
    CONSTANTS, OPERATORS, QUANTIFIERS, Apply, Constant, Identifier, Number,
    Expr, QuantifiedOp, Symbol,
)

_INT = re.compile(r"^[+-]?\d+$")


def parse_mathml(xml_text) -> Expr:
    """Parse a MathML fragment (optionally wrapped in ``<math>``) into an Expr.

    Elements may be in the MathML namespace or in no namespace at all.
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise MathMLParseError("malformed XML", line, col) from None
    return from_element(root)


def _local(el):
    ns, local = split(el.tag)
    if ns not in (None, MATHML):
        return None
    return local


def _children(el):
    """MathML children; foreign-namespace annotations are skipped."""
    return [c for c in el if isinstance(c.tag, str) and _local(c) is not None]


def _text(el):
    return (el.text or "").strip()


def from_element(el):
    local = _local(el)
    if local is None:
        raise UnsupportedElementError(el.tag)
    if local == "math":
        kids = _children(el)
        if len(kids) != 1:
            raise StructureError(f"<math> must contain exactly one expression, found {len(kids)}")
        return from_element(kids[0])
    if local == "cn":
        return _number(el)
    if local == "ci":
        name = _text(el)
        if not name:
            raise StructureError("empty <ci>")
        return Identifier(name, el.get("type"), el.get("definitionURL"))
    if local in CONSTANTS and not _children(el):
        return Constant(local)
    if local == "apply":
        return _apply(el)
    raise UnsupportedElementError(local)


def _number(el):
    text = _text(el)
    kind = el.get("type")
    try:
        if kind == "real":
            value = float(text)
        elif kind in (None, "integer") and _INT.match(text):
            value = int(text)
        elif kind in (None, "double", "real"):
            value = float(text)
        else:
            raise UnsupportedElementError(f"cn type={kind}")
    except ValueError:
        raise StructureError(f"not a number: {text!r}") from None
    return Number(value, el.get("units"))


def _symbol(el):
    text = _text(el)
    func = el.get("func")
    url = el.get("definitionURL")
    name = func or text or url
    if not name:
        raise StructureError("<csymbol> without a name or definitionURL")
    label = text if func and text and text != func else None
    return Symbol(name, url, label)


def _apply(el):
    kids = _children(el)
    if not kids:
        raise StructureError("empty <apply>")
    head, rest = kids[0], kids[1:]
    op = _local(head)
    if op == "csymbol":
        return Apply(_symbol(head), tuple(from_element(k) for k in rest))
    if op in QUANTIFIERS:
        return _quantified(op, rest)
    if op not in OPERATORS:
        raise UnsupportedElementError(op)
    if _children(head):
        raise StructureError(f"operator <{op}> must be empty")
    degree = None
    if op == "root" and rest and _local(rest[0]) == "degree":
        dk = _children(rest[0])
        if len(dk) != 1:
            raise StructureError("<degree> must contain one expression")
        degree = from_element(dk[0])
        rest = rest[1:]
    args = tuple(from_element(k) for k in rest)
    if not args:
        raise StructureError(f"<{op}> applied to no arguments")
    _check_arity(op, len(args))
    return Apply(op, args, degree)


def _check_arity(op, n):
    if op in ("divide", "power", "eq", "lt", "gt", "leq", "geq") and n != 2:
        raise StructureError(f"<{op}> takes two arguments, got {n}")
    if op in ("sin", "cos", "tan", "arccos", "exp", "ln", "abs", "not", "root") and n != 1:
        raise StructureError(f"<{op}> takes one argument, got {n}")
    if op == "minus" and n > 2:
        raise StructureError(f"<minus> takes one or two arguments, got {n}")


def _quantified(op, parts):
    bvar = cond = None
    body = []
    for p in parts:
        local = _local(p)
        if local == "bvar":
            bvar = p
        elif local == "condition":
            cond = p
        elif local in ("lowlimit", "uplimit", "domainofapplication", "interval"):
            raise UnsupportedElementError(local)
        else:
            body.append(p)
    if bvar is None:
        raise StructureError(f"<{op}> without <bvar>")
    bv = _children(bvar)
    if len(bv) != 1 or _local(bv[0]) != "ci" or not _text(bv[0]):
        raise StructureError("<bvar> must hold a single <ci>")
    var = _text(bv[0])
    if cond is None:
        raise StructureError(f"<{op}> without <condition>")
    domain = _membership(cond, var)
    if len(body) != 1:
        raise StructureError(f"<{op}> needs exactly one body expression, found {len(body)}")
    return QuantifiedOp(op, var, domain, from_element(body[0]))


def _membership(cond, var):
    ck = _children(cond)
    if len(ck) != 1 or _local(ck[0]) != "apply":
        raise StructureError("<condition> must hold an <apply><in/>...</apply>")
    parts = _children(ck[0])
    if not parts or _local(parts[0]) != "in":
        name = _local(parts[0]) if parts else "apply"
        raise UnsupportedElementError(f"condition {name}")
    if len(parts) != 3:
        raise StructureError("<in> takes an element and a set")
    member = from_element(parts[1])
    if not (isinstance(member, Identifier) and member.name == var):
        raise StructureError(f"<in> must test the bound variable {var!r}")
    return from_element(parts[2])


# --- serialization ----------------------------------------------------------

def to_element(expr, ns=None):
    """Build an ElementTree element for ``expr``; ``ns`` qualifies every tag."""

    def E(tag, text=None, **attrs):
        el = ET.Element(f"{{{ns}}}{tag}" if ns else tag, {k: v for k, v in attrs.items() if v is not None})
        if text is not None:
            el.text = text
        return el

    def build(e):
        if isinstance(e, Number):
            return E("cn", _format_number(e.value), units=e.units)
        if isinstance(e, Identifier):
            return E("ci", e.name, type=e.type, definitionURL=e.definition_url)
        if isinstance(e, Constant):
            return E(e.name)
        if isinstance(e, QuantifiedOp):
            el = E("apply")
            el.append(E(e.op))
            bvar = E("bvar")
            bvar.append(E("ci", e.var))
            el.append(bvar)
            cond = E("condition")
            member = E("apply")
            member.append(E("in"))
            member.append(E("ci", e.var))
            member.append(build(e.domain))
            cond.append(member)
            el.append(cond)
            el.append(build(e.body))
            return el
        if isinstance(e, Apply):
            el = E("apply")
            if isinstance(e.op, Symbol):
                s = e.op
                if s.label is not None:
                    el.append(E("csymbol", s.label, func=s.name, definitionURL=s.definition_url))
                elif s.name == s.definition_url:
                    el.append(E("csymbol", definitionURL=s.definition_url))
                else:
                    el.append(E("csymbol", s.name, definitionURL=s.definition_url))
            else:
                el.append(E(e.op))
            if e.degree is not None:
                deg = E("degree")
                deg.append(build(e.degree))
                el.append(deg)
            for a in e.args:
                el.append(build(a))
            return el
        raise TypeError(f"not an expression: {e!r}")

    return build(expr)


def _format_number(v):
    if isinstance(v, bool):
        raise TypeError("boolean is not a number")
    return str(v) if isinstance(v, int) else repr(float(v))


def serialize_mathml(expr, namespace=False) -> str:
    """Serialize to a compact string; with ``namespace`` every tag carries the
    ``m:`` MathML prefix, declared on the outermost element."""
    if namespace:
        # default_namespace cannot be used: ElementTree rejects the unqualified
        # attributes (type, units, definitionURL) that MathML needs
        return ET.tostring(to_element(expr, MATHML), encoding="unicode")
    return ET.tostring(to_element(expr), encoding="unicode")
