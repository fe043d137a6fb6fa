"""Enumeration of the bonded and nonbonded interaction sets of a molecule."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class InteractionSets:
    """Atom-id tuples in canonical orientation, sorted by atom document order.

    ``pairs14`` is the subset of ``nonbonded`` whose atoms are the ends of a
    dihedral.
    """

    bonds: tuple = ()
    angles: tuple = ()
    dihedrals: tuple = ()
    nonbonded: tuple = ()
    pairs14: frozenset = frozenset()


def interaction_sets(m) -> InteractionSets:
    order = m.index
    key = lambda t: tuple(order[i] for i in t)  # noqa: E731
    nbrs = m.neighbors

    bonds = sorted((tuple(sorted(b.atom_refs, key=order.__getitem__)) for b in m.bonds), key=key)

    angles = []
    for j, ns in nbrs.items():
        for i, k in combinations(ns, 2):
            angles.append((i, j, k))
    angles.sort(key=key)

    dihedrals = set()
    for j, k in bonds:
        for jj, kk in ((j, k), (k, j)):
            for i in nbrs[jj]:
                if i == kk:
                    continue
                for l in nbrs[kk]:
                    if l in (jj, i):
                        continue
                    path = (i, jj, kk, l)
                    if order[i] > order[l]:
                        path = path[::-1]
                    dihedrals.add(path)
    dihedrals = sorted(dihedrals, key=key)

    excluded = {frozenset(b) for b in bonds} | {frozenset((i, k)) for i, _, k in angles}
    ends14 = {frozenset((d[0], d[3])) for d in dihedrals}
    ids = [a.id for a in m.atoms]
    nonbonded = [(a, b) for a, b in combinations(ids, 2) if frozenset((a, b)) not in excluded]
    pairs14 = frozenset(p for p in nonbonded if frozenset(p) in ends14)
    return InteractionSets(tuple(bonds), tuple(angles), tuple(dihedrals), tuple(nonbonded), pairs14)
