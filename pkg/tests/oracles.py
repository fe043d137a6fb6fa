"""Independent reference computations used by several test files.

These are deliberately naive: they enumerate atom tuples with itertools and
check adjacency directly, sharing no code with the package.
"""

import math
from itertools import combinations, permutations

import numpy as np


def adjacency(m):
    adj = {a.id: set() for a in m.atoms}
    for b in m.bonds:
        i, j = b.atom_refs
        adj[i].add(j)
        adj[j].add(i)
    return adj


def brute_sets(m):
    """Return (bonds, angles, dihedrals, nonbonded) as sets of canonical tuples."""
    ids = [a.id for a in m.atoms]
    pos = {a: n for n, a in enumerate(ids)}
    adj = adjacency(m)
    canon = lambda t: t if pos[t[0]] < pos[t[-1]] else t[::-1]  # noqa: E731
    bonds = {canon((i, j)) for i, j in permutations(ids, 2) if j in adj[i]}
    angles = {canon((i, j, k)) for i, j, k in permutations(ids, 3) if i in adj[j] and k in adj[j]}
    dihedrals = {canon(t) for t in permutations(ids, 4)
                 if t[1] in adj[t[0]] and t[2] in adj[t[1]] and t[3] in adj[t[2]]}
    close = {frozenset(b) for b in bonds} | {frozenset((a[0], a[2])) for a in angles}
    nonbonded = {(i, j) for i, j in combinations(ids, 2) if frozenset((i, j)) not in close}
    return bonds, angles, dihedrals, nonbonded


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def moved(m, rot, shift):
    xyz = np.array(m.coordinates).reshape(-1, 3)
    return m.with_coordinates((xyz @ rot.T + shift).ravel().tolist())


def hand_dihedral(p0, p1, p2, p3):
    """Praxeolitic formula, written out independently of the package."""
    b0 = np.subtract(p0, p1)
    b1 = np.subtract(p2, p1)
    b2 = np.subtract(p3, p2)
    b1 = b1 / np.linalg.norm(b1)
    v = b0 - np.dot(b0, b1) * b1
    w = b2 - np.dot(b2, b1) * b1
    return math.atan2(np.dot(np.cross(b1, v), w), np.dot(v, w))
