"""Decoration: parse CML molecules and forcefields into objects the library functions accept."""

from __future__ import annotations

from ..chem.molecule import molecule_from_element
from ..errors import DecorationError, ExecDocError
from ..forcefield import forcefield_from_element, is_forcefield_element
from ..mathml.dictionary import dictionary_from_element, validate
from ..namespaces import CML


def _is(el, local):
    return isinstance(el.tag, str) and el.tag == f"{{{CML}}}{local}"


def decorate(doc):
    """Register a handle for every dictionary, molecule and forcefield element.

    Dictionaries go first so the molecules and forcefields in the same
    document can use the units they define. Elements already decorated are
    parsed again, which keeps the map in step with any edits.
    """
    parents = doc.parents()
    doc.decorations.clear()
    for el in doc.root.iter():
        if _is(el, "dictionary"):
            try:
                d = dictionary_from_element(el)
            except ExecDocError as exc:
                raise DecorationError(f"{doc.locate(el, parents)}: {exc}") from exc
            doc.dictionaries[d.prefix] = d.merged(doc.dictionaries[d.prefix]) if d.prefix in doc.dictionaries else d
            doc.decorations[el] = d
    try:
        validate(doc.dictionaries)
    except ExecDocError as exc:
        raise DecorationError(f"document dictionaries: {exc}") from exc
    for el in doc.root.iter():
        try:
            if _is(el, "molecule"):
                doc.decorations[el] = molecule_from_element(el)
            elif is_forcefield_element(el):
                doc.decorations[el] = forcefield_from_element(el, doc.dictionaries)
        except ExecDocError as exc:
            raise DecorationError(f"{doc.locate(el, parents)}: {exc}") from exc
    return doc
