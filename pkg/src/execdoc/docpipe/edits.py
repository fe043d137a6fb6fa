"""Self-modification: the copy, move, delete and transform children of ``sem:editor``."""

from __future__ import annotations

import copy

from ..errors import EditError, ExecDocError
from ..namespaces import split
from ..selector import Attribute
from .document import is_sem, sem

OPERATIONS = ("copy", "move", "delete", "transform")


def _qualify(doc, name):
    prefix, _, local = name.rpartition(":")
    if not prefix:
        return local
    if prefix not in doc.namespaces:
        raise EditError(f"unbound prefix {prefix!r} in {name!r}")
    return f"{{{doc.namespaces[prefix]}}}{local}"


def _select(doc, op, attr, where):
    path = op.get(attr)
    if not path:
        raise EditError(f"{where}: missing {attr!r} attribute")
    try:
        nodes = doc.select(path)
    except ExecDocError as exc:
        raise EditError(f"{where}: {exc}") from exc
    if not nodes:
        raise EditError(f"{where}: {attr}={path!r} matches nothing")
    if any(isinstance(n, Attribute) for n in nodes):
        raise EditError(f"{where}: {attr}={path!r} selects attributes, elements required")
    return nodes


def _destination(doc, op, where):
    found = _select(doc, op, "to", where)
    if len(found) > 1:
        raise EditError(f"{where}: to={op.get('to')!r} is ambiguous ({len(found)} matches)")
    return found[0]


def _copy(doc, op, where):
    sources = _select(doc, op, "select", where)
    dest = _destination(doc, op, where)
    for src in sources:
        dup = copy.deepcopy(src)
        dup.tail = None
        dup.set(sem("copiedFrom"), op.get("select"))
        dest.append(dup)


def _move(doc, op, where):
    sources = _select(doc, op, "select", where)
    dest = _destination(doc, op, where)
    parents = doc.parents()
    for src in sources:
        if src is doc.root:
            raise EditError(f"{where}: cannot move the document root")
        if any(n is src for n in dest.iter()):
            raise EditError(f"{where}: cannot move an element into itself")
        parents[src].remove(src)
        src.tail = None
        dest.append(src)


def _delete(doc, op, where):
    sources = _select(doc, op, "select", where)
    parents = doc.parents()
    for src in sources:
        if src is doc.root:
            raise EditError(f"{where}: cannot delete the document root")
        parent = parents.get(src)
        # an ancestor may already have gone
        if parent is not None and src in list(parent):
            parent.remove(src)


def _transform(doc, op, where):
    sources = _select(doc, op, "select", where)
    rename = op.get("rename")
    attribute = op.get("attribute")
    if (rename is None) == (attribute is None):
        raise EditError(f"{where}: transform needs exactly one of 'rename' or 'attribute'")
    for el in sources:
        el.set(sem("editedBy"), where)
    if rename is not None:
        tag = _qualify(doc, rename)
        for el in sources:
            el.tag = tag
    else:
        key = _qualify(doc, attribute)
        value = op.get("value")
        for el in sources:
            if value is None:
                el.attrib.pop(key, None)
            else:
                el.set(key, value)


_HANDLERS = {"copy": _copy, "move": _move, "delete": _delete, "transform": _transform}


def apply_edits(doc):
    """Run every editor once, in document order.

    An editor is marked ``status="applied"`` afterwards so a second pass is
    the identity.
    """
    for editor in doc.elements("editor"):
        if editor.get("status") == "applied":
            continue
        for i, op in enumerate(list(editor)):
            if not isinstance(op.tag, str):
                continue
            _, local = split(op.tag)
            if not is_sem(op, local) or local not in _HANDLERS:
                raise EditError(f"{doc.locate(editor)}: unknown editor operation <{op.tag}>")
            _HANDLERS[local](doc, op, f"{doc.locate(editor)}/sem:{local}[{i + 1}]")
        editor.set("status", "applied")
    return doc
