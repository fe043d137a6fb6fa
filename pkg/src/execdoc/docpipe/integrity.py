"""Static checks run before anything executes."""

from __future__ import annotations

from dataclasses import dataclass

from ..chem.molecule import Molecule
from ..errors import DimensionError, ExecDocError, UnitLookupError
from ..library import FORCEFIELD, FF_URI, library_context
from ..mathml.analysis import abstract, infer_dimension
from ..mathml.ast import Identifier, free_identifiers, symbols, walk
from ..mathml.dictionary import lookup
from ..mathml.units import Dimension
from .compute import Binder, computation_context, read_spec, select_targets
from .symbols import REFERENCE


@dataclass(frozen=True)
class Finding:
    kind: str
    location: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.location}: {self.message}"


def _known(ref, dicts):
    try:
        lookup(ref, dicts)
    except UnitLookupError:
        return False
    return True


def _uses_forcefield(expr):
    return any(s.name in FORCEFIELD or (s.definition_url or "").startswith(FF_URI) for s in symbols(expr))


def _check_computation(doc, comp, out):
    where = doc.locate(comp)

    def report(kind, message):
        out.append(Finding(kind, where, message))

    try:
        spec = read_spec(doc, comp)
    except ExecDocError as exc:
        report("bad-computation", str(exc))
        return
    form = spec.form
    lib = library_context(doc.dictionaries)

    for sym in symbols(form):
        if sym.name not in lib.functions and (sym.definition_url or "") not in lib.functions:
            report("unregistered", f"function {sym.definition_url or sym.name!r} is not registered")

    bound = {b.name for b in spec.bindings}
    free = free_identifiers(form)
    for name in free:
        if name not in bound:
            report("unbound", f"identifier {name!r} has no binding")

    # dictRefs the form and the bindings lean on
    declared = {}
    for node in walk(form):
        if isinstance(node, Identifier) and node.definition_url and ":" in node.definition_url:
            if not _known(node.definition_url, doc.dictionaries):
                report("missing-dictref", f"identifier {node.name!r} refers to unknown {node.definition_url!r}")
            else:
                declared.setdefault(node.name, lookup(node.definition_url, doc.dictionaries).dimension)
    for b in spec.bindings:
        for attr in ("dictRef", "units"):
            ref = b.element.get(attr)
            if ref and not _known(ref, doc.dictionaries):
                report("missing-dictref", f"binding {b.name!r} {attr}={ref!r} is not in any dictionary")
    if spec.result_ref and not _known(spec.result_ref, doc.dictionaries):
        report("missing-dictref", f"resultDictRef {spec.result_ref!r} is not in any dictionary")
        result_dim = None
    else:
        result_dim = lookup(spec.result_ref, doc.dictionaries).dimension if spec.result_ref else None

    try:
        targets = select_targets(doc, spec)
    except ExecDocError as exc:
        report("bad-selector", str(exc))
        return
    if not targets:
        report("no-targets", f"targets={spec.targets!r} matches nothing")
        return

    for target in targets:
        needs_molecule = spec.mode == "optimize" or any(b.objects for b in spec.bindings)
        if needs_molecule and not isinstance(doc.decorations.get(target), Molecule):
            report("undecorated", f"target {doc.locate(target)} is not a decorated molecule")
            continue
        try:
            binder = Binder(doc, spec, target)
        except ExecDocError as exc:
            report("binding-empty" if "matches nothing" in str(exc) else "binding", str(exc))
            continue
        if _uses_forcefield(form) and binder.forcefield is None:
            report("no-forcefield", "the form looks up forcefield parameters but no forcefield is available")
            continue
        try:
            values = binder.bindings()
        except ExecDocError as exc:
            report("binding", str(exc))
            continue
        for name, dim in declared.items():
            got = abstract(values.get(name))
            if isinstance(got, Dimension) and got != dim:
                report("dimension", f"{name!r} expects {dim} but is bound to a value of {got}")
        try:
            ctx = computation_context(doc, {k: v for k, v in values.items() if k in free})
            dim = infer_dimension(form, ctx)
        except DimensionError as exc:
            report("dimension", str(exc))
            continue
        if result_dim is not None and isinstance(dim, Dimension) and dim != result_dim:
            report("dimension", f"the form yields {dim} but {spec.result_ref} is {result_dim}")
        # one target is enough for static checks on a homogeneous target set
        break


def check_integrity(doc) -> list:
    """Findings that would stop the document from executing; empty means executable."""
    out = []
    parents = doc.parents()
    for el in doc.root.iter():
        if not isinstance(el.tag, str):
            continue
        if el.get("href") is not None:
            out.append(Finding("unresolved-href", doc.locate(el, parents), f"href {el.get('href')!r} not transcluded"))
        texts = [*el.attrib.values(), el.text or ""]
        for t in texts:
            for name in REFERENCE.findall(t):
                out.append(Finding("unresolved-variable", doc.locate(el, parents), f"${{{name}}} is undefined"))
    for comp in doc.elements("computation"):
        if comp.get("status") == "complete":
            continue
        _check_computation(doc, comp, out)
    return out
