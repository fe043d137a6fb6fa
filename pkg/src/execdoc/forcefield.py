"""Forcefield parameters and the analytic energy of an AMBER-style functional form.

Energy terms (all in kcal/mol, lengths in angstrom, angles in radians)::

    E = sum_bonds     K_r (r - r_eq)^2
      + sum_angles    K_theta (theta - theta_eq)^2
      + sum_dihedrals sum_n V_n/2 (1 + cos(n phi - gamma_n))
      + sum_pairs     s_vdw (A_ij / R^12 - B_ij / R^6) + s_elec k_e q_i q_j / (eps R)

Each torsion may carry several Fourier terms, and the Coulomb constant
k_e = 1/(4 pi eps_0) is a parameter rather than folded into the charges. ``s_vdw``/``s_elec``
are the 1-4 scale factors for pairs separated by three bonds, 1 otherwise.
This module is the hand-written oracle that MathML-driven evaluation is
checked against, so it never goes through the MathML engine.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

from .chem.geometry import angle_between, dihedral_between, distance_between
from .chem.interactions import interaction_sets
from .errors import (
    DegenerateGeometryError, DimensionError, ExecDocError, ForcefieldError,
    MissingParameterError,
)
from .mathml.dictionary import default_dictionaries, scalar_from_text
from .mathml.values import Scalar
from .namespaces import CML

WILDCARD = "X"
DEFAULT_COULOMB = 332.0637

_EMPTY = MappingProxyType({})


@dataclass(frozen=True)
class BondParams:
    k: float
    r0: float


@dataclass(frozen=True)
class AngleParams:
    k: float
    theta0: float


@dataclass(frozen=True)
class FourierTerm:
    vn: float
    n: int
    gamma: float


@dataclass(frozen=True)
class VdwParams:
    a: float
    b: float


@dataclass(frozen=True)
class ForcefieldParams:
    bonds: Mapping = field(default=_EMPTY)
    angles: Mapping = field(default=_EMPTY)
    dihedrals: Mapping = field(default=_EMPTY)
    vdw: Mapping = field(default=_EMPTY)
    vdw_pairs: Mapping = field(default=_EMPTY)
    coulomb_constant: float = DEFAULT_COULOMB
    relative_permittivity: float = 1.0
    scale14_vdw: float = 1.0
    scale14_elec: float = 1.0
    id: Optional[str] = None


@dataclass(frozen=True)
class EnergyBreakdown:
    bond: float = 0.0
    angle: float = 0.0
    dihedral: float = 0.0
    vdw: float = 0.0
    electrostatic: float = 0.0

    @property
    def total(self) -> float:
        return self.bond + self.angle + self.dihedral + self.vdw + self.electrostatic

    def as_dict(self):
        return {"bond": self.bond, "angle": self.angle, "dihedral": self.dihedral,
                "vdw": self.vdw, "electrostatic": self.electrostatic, "total": self.total}


# --- keys and lookups ---------------------------------------------------------

def _pair_key(a, b):
    return (a, b) if a <= b else (b, a)


def _chain_key(types):
    t = tuple(types)
    return min(t, t[::-1])


def lookup_bond(params, ta, tb) -> BondParams:
    try:
        return params.bonds[_pair_key(ta, tb)]
    except (KeyError, TypeError):
        raise MissingParameterError("bond", (ta, tb)) from None


def lookup_angle(params, t1, t2, t3) -> AngleParams:
    try:
        return params.angles[_chain_key((t1, t2, t3))]
    except (KeyError, TypeError):
        raise MissingParameterError("angle", (t1, t2, t3)) from None


def lookup_dihedral(params, t1, t2, t3, t4) -> tuple:
    """Fourier terms for a torsion; exact types beat end wildcards ``X``."""
    X = WILDCARD
    for pattern in ((t1, t2, t3, t4), (X, t2, t3, t4), (t1, t2, t3, X), (X, t2, t3, X)):
        try:
            terms = params.dihedrals.get(_chain_key(pattern))
        except TypeError:
            terms = None
        if terms is not None:
            return terms
    raise MissingParameterError("dihedral", (t1, t2, t3, t4))


def lookup_vdw(params, ti, tj) -> VdwParams:
    """Pair coefficients; an explicit pair entry overrides the geometric mean rule."""
    try:
        pair = params.vdw_pairs.get(_pair_key(ti, tj))
    except TypeError:
        pair = None
    if pair is not None:
        return pair
    try:
        pi, pj = params.vdw[ti], params.vdw[tj]
    except KeyError:
        raise MissingParameterError("vdw", (ti, tj)) from None
    return VdwParams(math.sqrt(pi.a * pj.a), math.sqrt(pi.b * pj.b))


# --- energy terms -------------------------------------------------------------

def _plain(x, dim_text, name):
    if isinstance(x, Scalar):
        from .mathml.units import Dimension

        want = Dimension.parse(dim_text)
        if x.dim != want:
            raise DimensionError(f"{name} has the wrong dimension", x.dim, want)
        return x.value
    return x


_FC = "mass time^-2 amount^-1"
_E = "mass length^2 time^-2 amount^-1"


def bond_energy(k, r0, r) -> float:
    k, r0, r = _plain(k, _FC, "K_r"), _plain(r0, "length", "r_eq"), _plain(r, "length", "r")
    return k * (r - r0) ** 2


def angle_energy(k, theta0, theta) -> float:
    k = _plain(k, _E, "K_theta")
    theta0, theta = _plain(theta0, "", "theta_eq"), _plain(theta, "", "theta")
    return k * (theta - theta0) ** 2


def dihedral_energy(terms, phi) -> float:
    phi = _plain(phi, "", "phi")
    total = 0.0
    for t in terms:
        total += (t.vn / 2) * (1 + math.cos(t.n * phi - t.gamma))
    return total


def nonbonded_energy(a, b, qi, qj, r, ke=DEFAULT_COULOMB, epsilon=1.0,
                     scale_vdw=1.0, scale_elec=1.0):
    """Return (vdw, electrostatic) for one pair, scale factors already applied."""
    r = _plain(r, "length", "R")
    if not r > 0:
        raise DegenerateGeometryError(f"nonbonded distance {r} is not positive")
    vdw = a / r ** 12 - b / r ** 6
    elec = ke * qi * qj / (epsilon * r)
    return scale_vdw * vdw, scale_elec * elec


def total_energy(m, params, sets=None) -> EnergyBreakdown:
    sets = sets or interaction_sets(m)
    pos = {a.id: a.position for a in m.atoms}
    atoms = {a.id: a for a in m.atoms}
    types = lambda ids: tuple(atoms[i].atom_type for i in ids)  # noqa: E731

    def where(kind, ids, exc):
        return MissingParameterError(exc.kind, exc.types,
                                     f"molecule {m.id!r}, {kind} {'-'.join(ids)}")

    e_bond = e_angle = e_dihedral = e_vdw = e_elec = 0.0
    for ids in sets.bonds:
        try:
            p = lookup_bond(params, *types(ids))
        except MissingParameterError as exc:
            raise where("bond", ids, exc) from None
        e_bond += bond_energy(p.k, p.r0, distance_between(*(pos[i] for i in ids)))
    for ids in sets.angles:
        try:
            p = lookup_angle(params, *types(ids))
        except MissingParameterError as exc:
            raise where("angle", ids, exc) from None
        e_angle += angle_energy(p.k, p.theta0, angle_between(*(pos[i] for i in ids)))
    for ids in sets.dihedrals:
        try:
            terms = lookup_dihedral(params, *types(ids))
        except MissingParameterError as exc:
            raise where("dihedral", ids, exc) from None
        e_dihedral += dihedral_energy(terms, dihedral_between(*(pos[i] for i in ids)))
    for i, j in sets.nonbonded:
        try:
            p = lookup_vdw(params, *types((i, j)))
        except MissingParameterError as exc:
            raise where("nonbonded pair", (i, j), exc) from None
        is14 = (i, j) in sets.pairs14
        vdw, elec = nonbonded_energy(
            p.a, p.b, atoms[i].charge, atoms[j].charge, distance_between(pos[i], pos[j]),
            params.coulomb_constant, params.relative_permittivity,
            params.scale14_vdw if is14 else 1.0, params.scale14_elec if is14 else 1.0)
        e_vdw += vdw
        e_elec += elec
    return EnergyBreakdown(e_bond, e_angle, e_dihedral, e_vdw, e_elec)


# --- reading parameter files ----------------------------------------------------

_REQUIRED = {
    "ff:bond": ("ff:k", "ff:r0"),
    "ff:angle": ("ff:ktheta", "ff:theta0"),
    "ff:term": ("ff:vn", "ff:n", "ff:gamma"),
    "ff:vdw": ("ff:A", "ff:B"),
    "ff:vdwPair": ("ff:A", "ff:B"),
}
_NTYPES = {"ff:bond": 2, "ff:angle": 3, "ff:dihedral": 4, "ff:vdw": 1, "ff:vdwPair": 2}
_CONSTANTS = {
    "ff:ke": "coulomb_constant", "ff:epsilon": "relative_permittivity",
    "ff:scale14vdw": "scale14_vdw", "ff:scale14elec": "scale14_elec",
}


def _is(el, local):
    return isinstance(el.tag, str) and el.tag in (f"{{{CML}}}{local}", local)


def is_forcefield_element(el) -> bool:
    return _is(el, "propertyList") and el.get("dictRef") == "ff:forcefield"


def _scalars(el, dicts, where):
    out = {}
    for s in el:
        if not _is(s, "scalar"):
            continue
        ref = s.get("dictRef")
        if ref in out:
            raise ForcefieldError(f"{where}: {ref} given twice")
        try:
            out[ref] = scalar_from_text((s.text or "").strip(), s.get("units"), ref, dicts)
        except ExecDocError as exc:
            raise ForcefieldError(f"{where}: {ref}: {exc}") from exc
    return out


def _fields(el, kind, dicts, where):
    values = _scalars(el, dicts, where)
    missing = [r for r in _REQUIRED[kind] if r not in values]
    if missing:
        raise ForcefieldError(f"{where}: missing {', '.join(missing)}")
    return {r: values[r].value for r in _REQUIRED[kind]}


def _nonnegative(value, name, where):
    if value < 0:
        raise ForcefieldError(f"{where}: negative force constant {name}={value}")
    return value


def forcefield_from_element(root, dictionaries=None) -> ForcefieldParams:
    dicts = dictionaries or default_dictionaries()
    if not is_forcefield_element(root):
        found = [e for e in root.iter() if is_forcefield_element(e)]
        if len(found) > 1:
            raise ForcefieldError(f"expected one forcefield, found {len(found)}")
        if not found:
            return ForcefieldParams()
        root = found[0]
    tables = {k: {} for k in _NTYPES}
    constants = {}
    for entry in root:
        if not _is(entry, "propertyList"):
            continue
        kind = entry.get("dictRef")
        types = tuple((entry.get("atomTypes") or "").split())
        where = f"{kind} {' '.join(types)}".strip()
        if kind == "ff:constants":
            for ref, v in _scalars(entry, dicts, where).items():
                if ref not in _CONSTANTS:
                    raise ForcefieldError(f"{where}: unknown constant {ref}")
                constants[_CONSTANTS[ref]] = v.value
            continue
        if kind not in _NTYPES:
            raise ForcefieldError(f"unknown forcefield entry kind {kind!r}")
        if len(types) != _NTYPES[kind]:
            raise ForcefieldError(f"{where}: needs {_NTYPES[kind]} atom types")
        if kind == "ff:bond":
            f = _fields(entry, kind, dicts, where)
            key, value = _pair_key(*types), BondParams(_nonnegative(f["ff:k"], "K_r", where), f["ff:r0"])
        elif kind == "ff:angle":
            f = _fields(entry, kind, dicts, where)
            key = _chain_key(types)
            value = AngleParams(_nonnegative(f["ff:ktheta"], "K_theta", where), f["ff:theta0"])
        elif kind == "ff:dihedral":
            terms = []
            for t in entry:
                if _is(t, "propertyList") and t.get("dictRef") == "ff:term":
                    f = _fields(t, "ff:term", dicts, where)
                    n = f["ff:n"]
                    if n < 1 or not float(n).is_integer():
                        raise ForcefieldError(f"{where}: periodicity must be a positive integer, got {n}")
                    terms.append(FourierTerm(f["ff:vn"], int(n), f["ff:gamma"]))
            if not terms:
                raise ForcefieldError(f"{where}: dihedral without Fourier terms")
            key, value = _chain_key(types), tuple(terms)
        else:
            f = _fields(entry, kind, dicts, where)
            value = VdwParams(f["ff:A"], f["ff:B"])
            key = types[0] if kind == "ff:vdw" else _pair_key(*types)
        if key in tables[kind]:
            raise ForcefieldError(f"{where}: duplicate entry")
        tables[kind][key] = value
    return ForcefieldParams(
        bonds=MappingProxyType(tables["ff:bond"]),
        angles=MappingProxyType(tables["ff:angle"]),
        dihedrals=MappingProxyType(tables["ff:dihedral"]),
        vdw=MappingProxyType(tables["ff:vdw"]),
        vdw_pairs=MappingProxyType(tables["ff:vdwPair"]),
        id=root.get("id"),
        **constants,
    )


def parse_forcefield(cml_text, dictionaries=None) -> ForcefieldParams:
    if isinstance(cml_text, str) and not cml_text.strip():
        return ForcefieldParams()
    try:
        root = ET.fromstring(cml_text)
    except ET.ParseError as exc:
        raise ForcefieldError(f"malformed forcefield file: {exc}") from None
    return forcefield_from_element(root, dictionaries)
