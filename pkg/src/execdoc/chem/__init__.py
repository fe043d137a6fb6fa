"""Chemistry blackbox: molecules, CML I/O, geometry, masses, interaction sets."""

from ..mathml.units import MASS
from ..mathml.values import Scalar
from .elements import atomic_weight, table_source
from .geometry import angle, dihedral, distance
from .interactions import InteractionSets, interaction_sets
from .molecule import (
    Atom, Bond, Molecule, Property, molecule_element, molecule_from_element, parse_cml,
    serialize_cml,
)


def atom_mass(atom: Atom) -> Scalar:
    return Scalar(atomic_weight(atom.element), MASS, "units:dalton")


def molecular_mass(m: Molecule) -> Scalar:
    total = 0.0
    for a in m.atoms:
        total += atomic_weight(a.element)
    return Scalar(total, MASS, "units:dalton")


__all__ = [
    "Atom", "Bond", "InteractionSets", "Molecule", "Property", "angle", "atom_mass",
    "atomic_weight", "dihedral", "distance", "interaction_sets", "molecular_mass",
    "molecule_element", "molecule_from_element", "parse_cml", "serialize_cml", "table_source",
]
