"""Geometric measurements on molecules.

The ``*_between`` helpers work on raw coordinate triples and return floats;
the molecule-level functions return dimensioned scalars.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import CMLError, DegenerateGeometryError
from ..mathml.units import LENGTH, DIMENSIONLESS
from ..mathml.values import Scalar

_EPS = 1e-12


def distance_between(p, q) -> float:
    return math.dist(p, q)


def angle_between(p, q, r) -> float:
    """Angle p-q-r at q, in radians, via atan2 of the cross and dot products."""
    u = np.subtract(p, q)
    v = np.subtract(r, q)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu < _EPS or nv < _EPS:
        raise DegenerateGeometryError("angle arm of zero length")
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))


def dihedral_between(p0, p1, p2, p3) -> float:
    """Signed torsion p0-p1-p2-p3 in (-pi, pi]."""
    b1 = np.subtract(p1, p0)
    b2 = np.subtract(p2, p1)
    b3 = np.subtract(p3, p2)
    nb2 = np.linalg.norm(b2)
    if nb2 < _EPS:
        raise DegenerateGeometryError("central bond of zero length")
    n1 = np.cross(b1, b2)
    n2 = np.cross(b2, b3)
    scale = nb2 * max(np.linalg.norm(b1), np.linalg.norm(b3), 1.0)
    if np.linalg.norm(n1) < 1e-10 * scale or np.linalg.norm(n2) < 1e-10 * scale:
        raise DegenerateGeometryError("collinear atoms leave the torsion undefined")
    y = float(nb2 * np.dot(b1, n2))
    x = float(np.dot(n1, n2))
    phi = math.atan2(y, x)
    return math.pi if phi == -math.pi else phi


def _positions(m, ids):
    try:
        return [m.atoms[m.index[i]].position for i in ids]
    except KeyError as exc:
        raise CMLError(f"no atom {exc.args[0]!r} in molecule {m.id!r}") from None


def distance(m, a, b) -> Scalar:
    p, q = _positions(m, (a, b))
    return Scalar(distance_between(p, q), LENGTH, "units:angstrom")


def angle(m, a, b, c) -> Scalar:
    if len({a, b, c}) < 3:
        raise DegenerateGeometryError(f"angle needs three distinct atoms, got {a}, {b}, {c}")
    return Scalar(angle_between(*_positions(m, (a, b, c))), DIMENSIONLESS, "units:radian")


def dihedral(m, a, b, c, d) -> Scalar:
    if len({a, b, c, d}) < 4:
        raise DegenerateGeometryError(f"dihedral needs four distinct atoms, got {a}, {b}, {c}, {d}")
    return Scalar(dihedral_between(*_positions(m, (a, b, c, d))), DIMENSIONLESS, "units:radian")
