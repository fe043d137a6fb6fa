"""Relax a stretched diatomic with the pattern search and print the trace.

The energy is the harmonic bond term evaluated through the MathML form of
the worked example, so this exercises the same path as a document run.
"""

import argparse
import xml.etree.ElementTree as ET
from pathlib import Path

from execdoc.chem.interactions import interaction_sets
from execdoc.chem.geometry import distance_between
from execdoc.chem.molecule import parse_cml
from execdoc.docpipe.compute import form_expression
from execdoc.forcefield import lookup_bond, parse_forcefield
from execdoc.library import interactions, library_context
from execdoc.mathml.evaluate import evaluate
from execdoc.optimizer import OptConfig, optimize

CASE = Path(__file__).resolve().parent.parent / "casestudy"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--stretch", type=float, default=0.5, help="distortion from r_eq in angstrom")
    ap.add_argument("--min-step", type=float, default=1e-5)
    args = ap.parse_args()

    ff = parse_forcefield((CASE / "forcefield.xml").read_bytes())
    m = parse_cml((CASE / "molecules/diatomic.xml").read_bytes())
    r_eq = lookup_bond(ff, "C1", "O1").r0
    m = m.with_coordinates([0, 0, 0, r_eq + args.stretch, 0, 0])

    root = ET.parse(CASE / "formulae.xml").getroot()
    form = next(el for el in root.iter() if el.get("id") == "bond-energy")
    expr = form_expression(form)
    ctx = library_context()
    sets = interaction_sets(m)

    def energy(coords):
        moved = m.with_coordinates(coords)
        return float(evaluate(expr, ctx.bind("bonds", interactions(moved, ff, "bonds", sets))).value)

    trace = optimize(energy, m.coordinates, OptConfig(min_step=args.min_step))
    for rec in trace.records:
        print(f"{rec.evaluations:6d}  E={rec.best_energy:.12g}  step={rec.step:g}")
    c = trace.coords
    r = distance_between(c[0:3], c[3:6])
    print(f"\n{trace.reason}: r={r:.8f} (r_eq={r_eq}), |r-r_eq|={abs(r - r_eq):.2e}, "
          f"E={trace.energy:.3e}, evaluations={trace.evaluations}")


if __name__ == "__main__":
    main()
