"""Document variables: ``<sem:variable name value/>`` defined once, used as ``${name}``."""

from __future__ import annotations

import re

from ..errors import DocumentError, SymbolCycleError, UndefinedVariableError
from .document import is_sem

REFERENCE = re.compile(r"\$\{([^}]*)\}")


def _definitions(doc):
    defs = {}
    for el in doc.elements("variable"):
        name = el.get("name")
        if not name:
            raise DocumentError(f"sem:variable without a name at {doc.locate(el)}")
        if name in defs:
            raise DocumentError(f"variable {name!r} defined twice (second at {doc.locate(el)})")
        defs[name] = el.get("value", "")
    return defs


def _check_cycles(defs):
    state = {}

    def visit(name, chain):
        if state.get(name) == "done":
            return
        if name in chain:
            raise SymbolCycleError(chain[chain.index(name):] + [name])
        for ref in REFERENCE.findall(defs[name]):
            if ref in defs:
                visit(ref, chain + [name])
        state[name] = "done"

    for name in defs:
        visit(name, [])


def substitute(text, table, location):
    if text is None or "${" not in text:
        return text

    def repl(m):
        name = m.group(1)
        if name not in table:
            raise UndefinedVariableError(name, location)
        return table[name]

    return REFERENCE.sub(repl, text)


def substitute_tree(root, table, locate):
    """Replace references in every attribute and text node under ``root``."""
    for el in root.iter():
        if not isinstance(el.tag, str):
            continue
        for k, v in list(el.attrib.items()):
            if "${" in v:
                el.set(k, substitute(v, table, locate(el)))
        if el.text and "${" in el.text:
            el.text = substitute(el.text, table, locate(el))
        if el.tail and "${" in el.tail:
            el.tail = substitute(el.tail, table, locate(el))


def resolve_symbols(doc):
    """Expand every ``${name}`` in document order.

    A reference must follow its definition; cycles are reported before
    anything is rewritten.
    """
    defs = _definitions(doc)
    _check_cycles(defs)
    parents = doc.parents()
    defined = dict(doc.symbols)
    for el in list(doc.root.iter()):
        if not isinstance(el.tag, str):
            continue
        if is_sem(el, "variable"):
            value = substitute(el.get("value", ""), defined, doc.locate(el, parents))
            el.set("value", value)
            defined[el.get("name")] = value
            continue
        for k, v in list(el.attrib.items()):
            if "${" in v:
                el.set(k, substitute(v, defined, doc.locate(el, parents)))
        if el.text and "${" in el.text:
            el.text = substitute(el.text, defined, doc.locate(el, parents))
        if el.tail and "${" in el.tail:
            el.tail = substitute(el.tail, defined, doc.locate(el, parents))
    doc.symbols = defined
    return doc
