"""Native functions that let MathML query chemistry and forcefield objects.

Every function is registered under a bare name (``getMass``) and a URI
(``urn:execdoc:chem#getMass``) so documents may use either form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .chem import atom_mass, interaction_sets, molecular_mass
from .chem.geometry import angle_between, dihedral_between, distance_between
from .chem.molecule import Atom, Molecule
from .errors import MissingParameterError, TypeMismatchError
from .forcefield import (
    FourierTerm, ForcefieldParams, lookup_angle, lookup_bond, lookup_dihedral, lookup_vdw,
)
from .mathml.context import Context, NativeFunction
from .mathml.dictionary import default_dictionaries
from .mathml.units import CHARGE, DIMENSIONLESS, LENGTH, MASS, Dimension
from .mathml.values import ObjectRef, Seq

CHEM_URI = "urn:execdoc:chem#"
FF_URI = "urn:execdoc:ff#"

FORCE_CONSTANT = Dimension.parse("mass time^-2 amount^-1")
MOLAR_ENERGY = Dimension.parse("mass length^2 time^-2 amount^-1")
VDW_A = Dimension.parse("mass length^14 time^-2 amount^-1")
VDW_B = Dimension.parse("mass length^8 time^-2 amount^-1")

KINDS = ("bonds", "angles", "dihedrals", "pairs")


@dataclass(frozen=True, eq=False)
class Interaction:
    """One member of an interaction set, able to look up its own parameters."""

    kind: str
    atoms: tuple
    molecule: Molecule
    forcefield: Optional[ForcefieldParams] = None
    is14: bool = False

    @property
    def positions(self):
        m = self.molecule
        return [m.atoms[m.index[i]].position for i in self.atoms]

    @property
    def types(self):
        m = self.molecule
        return tuple(m.atoms[m.index[i]].atom_type for i in self.atoms)

    def params(self, lookup):
        if self.forcefield is None:
            raise TypeMismatchError(f"{self.kind} {'-'.join(self.atoms)} has no forcefield attached")
        try:
            return lookup(self.forcefield, *self.types)
        except MissingParameterError as exc:
            raise MissingParameterError(
                exc.kind, exc.types,
                f"molecule {self.molecule.id!r}, {self.kind[:-1]} {'-'.join(self.atoms)}") from None


def interactions(molecule, forcefield=None, kind="bonds", sets=None) -> Seq:
    """The interaction set ``kind`` of ``molecule`` as a sequence of object refs."""
    if kind not in KINDS:
        raise ValueError(f"unknown interaction set {kind!r}")
    sets = sets or interaction_sets(molecule)
    members = sets.nonbonded if kind == "pairs" else getattr(sets, kind)
    return Seq(tuple(
        ObjectRef(Interaction(kind, ids, molecule, forcefield,
                              kind == "pairs" and ids in sets.pairs14))
        for ids in members))


def _obj(v, types, fname):
    obj = v.obj if isinstance(v, ObjectRef) else None
    if not isinstance(obj, types):
        raise TypeMismatchError(f"{fname} cannot be applied to {type(obj or v).__name__}")
    return obj


def _inter(v, kinds, fname):
    obj = _obj(v, Interaction, fname)
    if obj.kind not in kinds:
        raise TypeMismatchError(f"{fname} expects one of {kinds}, got a member of {obj.kind}")
    return obj


def get_mass(v):
    obj = _obj(v, (Atom, Molecule), "getMass")
    return atom_mass(obj) if isinstance(obj, Atom) else molecular_mass(obj)


def get_atoms(v):
    m = _obj(v, Molecule, "getAtoms")
    return Seq(tuple(ObjectRef(a) for a in m.atoms))


def get_length(v):
    b = _inter(v, ("bonds", "pairs"), "getLength")
    return distance_between(*b.positions)


def get_angle(v):
    return angle_between(*_inter(v, ("angles",), "getAngle").positions)


def get_torsion(v):
    return dihedral_between(*_inter(v, ("dihedrals",), "getTorsion").positions)


def get_partial_charge(v):
    return _obj(v, Atom, "getPartialCharge").charge


def _end(index):
    def fn(v):
        i = _obj(v, Interaction, "firstAtom" if index == 0 else "lastAtom")
        m = i.molecule
        return m.atoms[m.index[i.atoms[index]]]
    return fn


def _set_of(kind):
    def fn(v):
        return interactions(_obj(v, Molecule, kind), None, kind)
    return fn


def _term(attr, fname):
    def fn(v):
        return getattr(_obj(v, FourierTerm, fname), attr)
    return fn


def _scale(which):
    def fn(v):
        p = _inter(v, ("pairs",), f"{which}Scale")
        if not p.is14 or p.forcefield is None:
            return 1.0
        return p.forcefield.scale14_vdw if which == "vdw" else p.forcefield.scale14_elec
    return fn


CHEMISTRY = {
    "getMass": (get_mass, 1, MASS),
    "getAtoms": (get_atoms, 1, "seq"),
    "getBonds": (_set_of("bonds"), 1, "seq"),
    "getAngles": (_set_of("angles"), 1, "seq"),
    "getDihedrals": (_set_of("dihedrals"), 1, "seq"),
    "getPairs": (_set_of("pairs"), 1, "seq"),
    "getLength": (get_length, 1, LENGTH),
    "getAngle": (get_angle, 1, DIMENSIONLESS),
    "getTorsion": (get_torsion, 1, DIMENSIONLESS),
    "getPartialCharge": (get_partial_charge, 1, CHARGE),
    "firstAtom": (_end(0), 1, "object"),
    "lastAtom": (_end(-1), 1, "object"),
}

FORCEFIELD = {
    "bondForceConstant": (lambda v: _inter(v, ("bonds",), "bondForceConstant").params(lookup_bond).k,
                          1, FORCE_CONSTANT),
    "bondEquilibriumLength": (lambda v: _inter(v, ("bonds",), "bondEquilibriumLength").params(lookup_bond).r0,
                              1, LENGTH),
    "angleForceConstant": (lambda v: _inter(v, ("angles",), "angleForceConstant").params(lookup_angle).k,
                           1, MOLAR_ENERGY),
    "angleEquilibrium": (lambda v: _inter(v, ("angles",), "angleEquilibrium").params(lookup_angle).theta0,
                         1, DIMENSIONLESS),
    "torsionTerms": (lambda v: Seq(tuple(ObjectRef(t) for t in
                                         _inter(v, ("dihedrals",), "torsionTerms").params(lookup_dihedral))),
                     1, "seq"),
    "barrierHeight": (_term("vn", "barrierHeight"), 1, MOLAR_ENERGY),
    "periodicity": (_term("n", "periodicity"), 1, DIMENSIONLESS),
    "phase": (_term("gamma", "phase"), 1, DIMENSIONLESS),
    "vdwA": (lambda v: _inter(v, ("pairs",), "vdwA").params(lookup_vdw).a, 1, VDW_A),
    "vdwB": (lambda v: _inter(v, ("pairs",), "vdwB").params(lookup_vdw).b, 1, VDW_B),
    "vdwScale": (_scale("vdw"), 1, DIMENSIONLESS),
    "elecScale": (_scale("elec"), 1, DIMENSIONLESS),
}


def register_library(ctx: Context) -> Context:
    for prefix, table in ((CHEM_URI, CHEMISTRY), (FF_URI, FORCEFIELD)):
        for name, (fn, arity, returns) in table.items():
            native = NativeFunction(fn, arity, returns)
            ctx = ctx.register(name, native).register(prefix + name, native)
    return ctx


def library_context(dictionaries=None) -> Context:
    """A context with default dictionaries and every chemistry/forcefield function."""
    ctx = Context().with_dictionaries(dictionaries or default_dictionaries())
    return register_library(ctx)
