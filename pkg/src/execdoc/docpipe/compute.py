"""Execution of ``sem:computation`` elements.

A computation names a functional form (a MathML expression), a selector for
its targets and a list of bindings. Each target gets its own context; the
result is appended to the target as a ``cml:property`` marked with the
computation's id. In optimize mode the form is treated as an energy over
the target molecule's coordinates and a relaxed copy of the molecule is
added after the original.
"""

from __future__ import annotations

import copy
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Optional

from ..chem.interactions import interaction_sets
from ..chem.molecule import Molecule, _fmt, molecule_from_element
from ..errors import ComputationError, ExecDocError
from ..forcefield import ForcefieldParams
from ..library import KINDS, interactions, register_library
from ..mathml.context import Context
from ..mathml.dictionary import convert, lookup, scalar_from_text
from ..mathml.evaluate import evaluate
from ..mathml.parse import from_element
from ..mathml.values import ObjectRef, Scalar, Seq
from ..namespaces import CML, MATHML
from ..optimizer import OptConfig, optimize
from ..selector import Attribute
from .document import is_sem, sem

MODES = ("singlePoint", "optimize")
OBJECT_KINDS = (*KINDS, "atoms", "molecule")

_OPT_ATTRS = {
    "initialStep": ("initial_step", float),
    "stepShrink": ("step_shrink", float),
    "minStep": ("min_step", float),
    "maxEvaluations": ("max_evaluations", int),
    "convergence": ("convergence", float),
}


@dataclass
class BindingSpec:
    name: str
    element: ET.Element
    value: Optional[str] = None
    select: Optional[str] = None
    objects: Optional[str] = None
    as_set: bool = False


@dataclass
class ComputationSpec:
    element: ET.Element
    id: str
    mode: str
    form: object
    form_element: ET.Element
    targets: Optional[str]
    bindings: list = field(default_factory=list)
    result_ref: Optional[str] = None
    result_units: Optional[str] = None
    forcefield: Optional[str] = None
    opt: OptConfig = OptConfig()


def _c(local):
    return f"{{{CML}}}{local}"


def find_form(doc, comp):
    """The sem:functionalForm a computation uses: a child, or one referenced by id."""
    children = [c for c in comp if is_sem(c, "functionalForm")]
    ref = comp.get("functionalForm")
    if children and ref:
        raise ExecDocError("both a functionalForm child and a functionalForm attribute")
    if children:
        if len(children) > 1:
            raise ExecDocError("more than one functionalForm child")
        return children[0]
    if not ref:
        raise ExecDocError("no functional form")
    found = [el for el in doc.elements("functionalForm") if el.get("id") == ref]
    if not found:
        raise ExecDocError(f"functional form {ref!r} not found")
    if len(found) > 1:
        raise ExecDocError(f"functional form id {ref!r} is not unique")
    return found[0]


def form_expression(form_el):
    maths = [c for c in form_el if c.tag == f"{{{MATHML}}}math"]
    if len(maths) != 1:
        raise ExecDocError("a functional form must contain exactly one m:math element")
    return from_element(maths[0])


def read_spec(doc, comp) -> ComputationSpec:
    """Parse a computation element."""
    try:
        ident = comp.get("id") or doc.locate(comp)
        mode = comp.get("mode", "singlePoint")
        if mode not in MODES:
            raise ExecDocError(f"unknown mode {mode!r}")
        form_el = find_form(doc, comp)
        form = form_expression(form_el)
        bindings = []
        for b in comp:
            if not is_sem(b, "binding"):
                continue
            spec = BindingSpec(b.get("name"), b, b.get("value"), b.get("select"), b.get("objects"),
                               b.get("as") == "set")
            if not spec.name:
                raise ExecDocError("binding without a name")
            if sum(x is not None for x in (spec.value, spec.select, spec.objects)) != 1:
                raise ExecDocError(f"binding {spec.name!r} needs exactly one of value, select, objects")
            if spec.objects is not None and spec.objects not in OBJECT_KINDS:
                raise ExecDocError(f"binding {spec.name!r}: unknown object kind {spec.objects!r}")
            if any(s.name == spec.name for s in bindings):
                raise ExecDocError(f"binding {spec.name!r} given twice")
            bindings.append(spec)
        settings = {}
        for attr, (key, conv) in _OPT_ATTRS.items():
            if comp.get(attr) is not None:
                settings[key] = conv(comp.get(attr))
        return ComputationSpec(comp, ident, mode, form, form_el, comp.get("targets"), bindings,
                               comp.get("resultDictRef"), comp.get("resultUnits"),
                               comp.get("forcefield"), OptConfig(**settings))
    except ValueError as exc:
        raise ExecDocError(f"bad computation setting: {exc}") from exc


def select_targets(doc, spec):
    if spec.targets is None:
        return [spec.element]
    found = doc.select(spec.targets, spec.element)
    if any(isinstance(t, Attribute) for t in found):
        raise ExecDocError(f"targets={spec.targets!r} selects attributes")
    return found


def forcefield_for(doc, spec, target) -> Optional[ForcefieldParams]:
    if spec.forcefield is not None:
        found = doc.select(spec.forcefield, target)
        if len(found) != 1 or not isinstance(doc.decorations.get(found[0]), ForcefieldParams):
            raise ExecDocError(f"forcefield={spec.forcefield!r} must select exactly one forcefield")
        return doc.decorations[found[0]]
    fields = [v for v in doc.decorations.values() if isinstance(v, ForcefieldParams)]
    if len(fields) > 1:
        raise ExecDocError("several forcefields in the document; say which with forcefield=")
    return fields[0] if fields else None


def _node_value(doc, node):
    if isinstance(node, Attribute):
        return scalar_from_text(node.value, None, None, doc.dictionaries)
    if node in doc.decorations:
        return ObjectRef(doc.decorations[node])
    if node.tag in (_c("scalar"), "scalar"):
        return scalar_from_text((node.text or "").strip(), node.get("units"), node.get("dictRef"),
                                doc.dictionaries)
    if node.tag == _c("property"):
        inner = [c for c in node if c.tag == _c("scalar")]
        if len(inner) == 1:
            ref = inner[0].get("dictRef") or node.get("dictRef")
            return scalar_from_text((inner[0].text or "").strip(), inner[0].get("units"), ref,
                                    doc.dictionaries)
    return scalar_from_text((node.text or "").strip(), None, None, doc.dictionaries)


class Binder:
    """Builds binding values for one target; molecule-dependent ones can be rebuilt."""

    def __init__(self, doc, spec, target):
        self.doc, self.spec, self.target = doc, spec, target
        self.molecule = doc.decorations.get(target)
        self.forcefield = forcefield_for(doc, spec, target)
        self._sets = None
        self._fixed = {}
        for b in spec.bindings:
            if b.objects is None:
                self._fixed[b.name] = self._static(b)

    def _static(self, b):
        doc = self.doc
        if b.value is not None:
            return scalar_from_text(b.value, b.element.get("units"), b.element.get("dictRef"),
                                    doc.dictionaries)
        nodes = doc.select(b.select, self.target)
        if not nodes and not b.as_set:
            raise ExecDocError(f"binding {b.name!r}: select={b.select!r} matches nothing")
        values = [_node_value(doc, n) for n in nodes]
        if b.as_set or len(values) > 1:
            return Seq(tuple(values))
        return values[0]

    def require_molecule(self):
        if not isinstance(self.molecule, Molecule):
            raise ExecDocError(f"target {self.doc.locate(self.target)} is not a molecule")
        return self.molecule

    def bindings(self, molecule=None):
        out = {}
        for b in self.spec.bindings:
            if b.objects is None:
                value = self._fixed[b.name]
                if (molecule is not None and isinstance(value, ObjectRef)
                        and value.obj is self.molecule):
                    value = ObjectRef(molecule)
                out[b.name] = value
                continue
            m = molecule if molecule is not None else self.require_molecule()
            if b.objects == "molecule":
                out[b.name] = ObjectRef(m)
            elif b.objects == "atoms":
                out[b.name] = Seq(tuple(ObjectRef(a) for a in m.atoms))
            else:
                if self._sets is None:
                    self._sets = interaction_sets(m)
                out[b.name] = interactions(m, self.forcefield, b.objects, self._sets)
        return out


def computation_context(doc, bindings) -> Context:
    ctx = register_library(Context().with_dictionaries(doc.dictionaries))
    return ctx.bind_all(bindings)


def _canonical_unit(doc, dim):
    for prefix in sorted(doc.dictionaries):
        d = doc.dictionaries[prefix]
        for term in sorted(d.entries):
            e = d.entries[term]
            if e.unit == f"{prefix}:{term}" and e.dimension == dim:
                return e.unit
    return None


def present(doc, spec, value):
    """Return (number, unit label) for a result, converted to resultUnits if given."""
    if not isinstance(value, Scalar):
        raise ExecDocError(f"result is a {type(value).__name__}, a scalar is required")
    if not math.isfinite(float(value.value)):
        raise ExecDocError(f"result is not finite ({value.value})")
    if spec.result_ref:
        entry = lookup(spec.result_ref, doc.dictionaries)
        if entry.dimension != value.dim:
            raise ExecDocError(f"result has dimension {value.dim} but {spec.result_ref} "
                               f"expects {entry.dimension}")
    if spec.result_units:
        value = convert(value, spec.result_units, doc.dictionaries)
        return float(value.value), spec.result_units
    if value.unit is not None:
        return float(value.value), value.unit
    if value.dim.is_dimensionless:
        return float(value.value), None
    if spec.result_ref:
        entry = lookup(spec.result_ref, doc.dictionaries)
        if entry.unit is not None and lookup(entry.unit, doc.dictionaries).dimension == value.dim:
            return float(value.value), entry.unit
    unit = _canonical_unit(doc, value.dim)
    if unit is None:
        raise ExecDocError(f"no unit known for dimension {value.dim}")
    return float(value.value), unit


def result_element(spec, number, unit):
    attrs = {sem("computedBy"): spec.id, sem("status"): "complete"}
    if spec.result_ref:
        attrs["dictRef"] = spec.result_ref
    prop = ET.Element(_c("property"), attrs)
    sattrs = {"dataType": "xsd:double"}
    if unit:
        sattrs["units"] = unit
    ET.SubElement(prop, _c("scalar"), sattrs).text = _fmt(number)
    return prop


def _energy_function(doc, spec, binder, base):
    def energy(coords):
        m = base.with_coordinates(coords)
        value = evaluate(spec.form, computation_context(doc, binder.bindings(m)))
        if not isinstance(value, Scalar):
            raise ExecDocError("energy form must produce a scalar")
        return float(value.value)
    return energy


def optimized_copy(target, molecule, spec, trace, number, unit):
    dup = copy.deepcopy(target)
    dup.tail = None
    base = target.get("id") or "molecule"
    dup.set("id", f"{base}-opt")
    dup.set(sem("computedBy"), spec.id)
    dup.set(sem("derivedFrom"), base)
    dup.set(sem("converged"), "true" if trace.converged else "false")
    dup.set(sem("stopReason"), trace.reason)
    dup.set(sem("evaluations"), str(trace.evaluations))
    positions = {a.id: a.position for a in molecule.atoms}
    for arr in dup:
        if arr.tag != _c("atomArray"):
            continue
        for at in arr:
            if at.get("id") in positions:
                x, y, z = positions[at.get("id")]
                at.set("x3", _fmt(x))
                at.set("y3", _fmt(y))
                at.set("z3", _fmt(z))
    dup.append(result_element(spec, number, unit))
    return dup


def _run_one(doc, spec):
    targets = select_targets(doc, spec)
    pending = []
    for target in targets:
        binder = Binder(doc, spec, target)
        if spec.mode == "singlePoint":
            value = evaluate(spec.form, computation_context(doc, binder.bindings()))
            pending.append(("append", target, result_element(spec, *present(doc, spec, value))))
            continue
        base = binder.require_molecule()
        trace = optimize(_energy_function(doc, spec, binder, base), base.coordinates, spec.opt)
        relaxed = base.with_coordinates(trace.coords)
        value = evaluate(spec.form, computation_context(doc, binder.bindings(relaxed)))
        number, unit = present(doc, spec, value)
        dup = optimized_copy(target, relaxed, spec, trace, number, unit)
        record = {"computation": spec.id, "target": target.get("id"), **trace.as_dict()}
        pending.append(("after", target, dup, relaxed, record))
    # attach only once every target has succeeded
    parents = doc.parents()
    for item in pending:
        if item[0] == "append":
            item[1].append(item[2])
            continue
        _, target, dup, relaxed, record = item
        parent = parents[target]
        siblings = list(parent)
        parent.insert(siblings.index(target) + 1, dup)
        doc.decorations[dup] = molecule_from_element(dup)
        doc.traces.append(record)


def run_computations(doc):
    """Run every pending computation in document order, stopping at the first failure."""
    for comp in doc.elements("computation"):
        if comp.get(sem("status")) == "complete" or comp.get("status") == "complete":
            continue
        where = doc.locate(comp)
        try:
            _run_one(doc, read_spec(doc, comp))
        except ExecDocError as exc:
            comp.set("status", "failed")
            comp.set("error", str(exc))
            raise ComputationError(str(exc), where, exc) from exc
        comp.set("status", "complete")
    return doc
