"""Molecule, atom and bond model with CML subset reading and writing."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

from ..errors import (
    CMLError, DanglingReferenceError, DuplicateAtomError, MissingCoordinatesError,
    UnknownElementError,
)
from ..namespaces import CML
from .elements import is_element

_ATOM_KNOWN = {"id", "elementType", "x3", "y3", "z3", "atomType", "partialCharge"}


@dataclass(frozen=True)
class Atom:
    id: str
    element: str
    position: tuple
    atom_type: Optional[str] = None
    charge: float = 0.0
    attributes: tuple = ()
    annotations: tuple = ()


@dataclass(frozen=True)
class Bond:
    atom_refs: tuple
    attributes: tuple = ()


@dataclass(frozen=True)
class Property:
    """A dimensioned scalar attached to a molecule, keyed by dictRef."""

    dict_ref: str
    value: float
    units: Optional[str] = None
    attributes: tuple = ()


@dataclass(frozen=True)
class Molecule:
    atoms: tuple = ()
    bonds: tuple = ()
    id: Optional[str] = None
    properties: tuple = ()
    attributes: tuple = ()
    annotations: tuple = ()

    def __post_init__(self):
        seen = set()
        for a in self.atoms:
            if a.id in seen:
                raise DuplicateAtomError(f"duplicate atom id {a.id!r}")
            seen.add(a.id)
            if not is_element(a.element):
                raise UnknownElementError(f"atom {a.id!r} has unknown element {a.element!r}")
            if len(a.position) != 3 or not all(math.isfinite(c) for c in a.position):
                raise MissingCoordinatesError(f"atom {a.id!r} has no finite 3D position")
        pairs = set()
        for b in self.bonds:
            i, j = b.atom_refs
            for ref in (i, j):
                if ref not in seen:
                    raise DanglingReferenceError(ref)
            if i == j:
                raise CMLError(f"bond from atom {i!r} to itself")
            key = frozenset((i, j))
            if key in pairs:
                raise CMLError(f"duplicate bond between {i!r} and {j!r}")
            pairs.add(key)

    @cached_property
    def index(self) -> dict:
        """Atom id -> position in document order."""
        return {a.id: n for n, a in enumerate(self.atoms)}

    @cached_property
    def neighbors(self) -> dict:
        adj = {a.id: [] for a in self.atoms}
        for b in self.bonds:
            i, j = b.atom_refs
            adj[i].append(j)
            adj[j].append(i)
        order = self.index
        return {k: tuple(sorted(v, key=order.__getitem__)) for k, v in adj.items()}

    def atom(self, atom_id) -> Atom:
        try:
            return self.atoms[self.index[atom_id]]
        except KeyError:
            raise CMLError(f"no atom {atom_id!r} in molecule {self.id!r}") from None

    @property
    def coordinates(self) -> list:
        """Flat [x0, y0, z0, x1, ...] list in atom order."""
        return [c for a in self.atoms for c in a.position]

    def with_coordinates(self, flat) -> "Molecule":
        """A copy with new positions; topology and annotations are shared."""
        flat = [float(c) for c in flat]
        if len(flat) != 3 * len(self.atoms):
            raise ValueError(f"expected {3 * len(self.atoms)} coordinates, got {len(flat)}")
        atoms = tuple(replace(a, position=tuple(flat[3 * n:3 * n + 3]))
                      for n, a in enumerate(self.atoms))
        return replace(self, atoms=atoms)


# --- CML reading --------------------------------------------------------------

def _is(el, local):
    return isinstance(el.tag, str) and el.tag in (f"{{{CML}}}{local}", local)


def _opaque(el) -> str:
    return ET.canonicalize(ET.tostring(el, encoding="unicode"))


def _extra(attrib, known):
    return tuple(sorted((k, v) for k, v in attrib.items() if k not in known))


def _float(value, what):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise CMLError(f"{what}: not a number {value!r}") from None


def _atom(el):
    atom_id = el.get("id")
    if not atom_id:
        raise CMLError("atom without id")
    element = el.get("elementType")
    if not element:
        raise CMLError(f"atom {atom_id!r} has no elementType")
    coords = [el.get(k) for k in ("x3", "y3", "z3")]
    if any(c is None for c in coords):
        raise MissingCoordinatesError(f"atom {atom_id!r} lacks x3/y3/z3")
    pos = tuple(_float(c, f"atom {atom_id}") for c in coords)
    charge = _float(el.get("partialCharge", "0"), f"atom {atom_id} partialCharge")
    return Atom(atom_id, element, pos, el.get("atomType"), charge,
                _extra(el.attrib, _ATOM_KNOWN), tuple(_opaque(c) for c in el if isinstance(c.tag, str)))


def _property(el):
    kids = [c for c in el if isinstance(c.tag, str)]
    if len(kids) != 1 or not _is(kids[0], "scalar") or list(kids[0]):
        return None
    scalar = kids[0]
    dict_ref = el.get("dictRef") or scalar.get("dictRef")
    if not dict_ref:
        return None
    try:
        value = float((scalar.text or "").strip())
    except ValueError:
        return None
    return Property(dict_ref, value, scalar.get("units"), _extra(el.attrib, {"dictRef"}))


def molecule_from_element(el) -> Molecule:
    if not _is(el, "molecule"):
        mols = [c for c in el.iter() if _is(c, "molecule")]
        if len(mols) != 1:
            raise CMLError(f"expected one <molecule>, found {len(mols)}")
        el = mols[0]
    atoms, bonds, props, notes = [], [], [], []
    for child in el:
        if not isinstance(child.tag, str):
            continue
        if _is(child, "atomArray"):
            atoms.extend(_atom(a) for a in child if _is(a, "atom"))
        elif _is(child, "bondArray"):
            for b in child:
                if not _is(b, "bond"):
                    continue
                refs = (b.get("atomRefs2") or "").split()
                if len(refs) != 2:
                    raise CMLError(f"bond needs two atomRefs2, got {b.get('atomRefs2')!r}")
                bonds.append(Bond(tuple(refs), _extra(b.attrib, {"atomRefs2"})))
        elif _is(child, "property") and _property(child) is not None:
            props.append(_property(child))
        else:
            notes.append(_opaque(child))
    return Molecule(tuple(atoms), tuple(bonds), el.get("id"), tuple(props),
                    _extra(el.attrib, {"id"}), tuple(notes))


def parse_cml(xml_text) -> Molecule:
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise CMLError(f"malformed CML: {exc}") from None
    return molecule_from_element(root)


# --- CML writing --------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _c(local):
    return f"{{{CML}}}{local}"


def property_element(prop: Property):
    el = ET.Element(_c("property"), {"dictRef": prop.dict_ref, **dict(prop.attributes)})
    attrs = {"dataType": "xsd:double"}
    if prop.units:
        attrs["units"] = prop.units
    scalar = ET.SubElement(el, _c("scalar"), attrs)
    scalar.text = _fmt(prop.value)
    return el


def molecule_element(m: Molecule):
    attrs = dict(m.attributes)
    if m.id is not None:
        attrs["id"] = m.id
    el = ET.Element(_c("molecule"), attrs)
    if m.atoms:
        arr = ET.SubElement(el, _c("atomArray"))
        for a in m.atoms:
            at = {"id": a.id, "elementType": a.element,
                  "x3": _fmt(a.position[0]), "y3": _fmt(a.position[1]), "z3": _fmt(a.position[2])}
            if a.atom_type is not None:
                at["atomType"] = a.atom_type
            if a.charge:
                at["partialCharge"] = _fmt(a.charge)
            at.update(a.attributes)
            atom_el = ET.SubElement(arr, _c("atom"), at)
            for note in a.annotations:
                atom_el.append(ET.fromstring(note))
    if m.bonds:
        arr = ET.SubElement(el, _c("bondArray"))
        for b in m.bonds:
            ET.SubElement(arr, _c("bond"), {"atomRefs2": " ".join(b.atom_refs), **dict(b.attributes)})
    for p in m.properties:
        el.append(property_element(p))
    for note in m.annotations:
        el.append(ET.fromstring(note))
    return el


def serialize_cml(m: Molecule) -> str:
    el = molecule_element(m)
    try:
        return ET.tostring(el, encoding="unicode", default_namespace=CML)
    except ValueError:
        # annotations in no namespace cannot sit under a default namespace
        return ET.tostring(el, encoding="unicode")
