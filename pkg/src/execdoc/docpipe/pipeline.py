"""The stages in order, and the provenance audit of a finished document."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .asserts import run_asserts
from .compute import run_computations
from .decorate import decorate
from .document import is_sem, load_document, sem
from .edits import apply_edits
from .integrity import check_integrity
from .symbols import resolve_symbols
from .transclude import FileResolver, transclude
from .writers import write_outputs


@dataclass
class RunReport:
    findings: list = field(default_factory=list)
    asserts: list = field(default_factory=list)
    written: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    executed: bool = False

    @property
    def asserts_passed(self):
        return all(a.passed for a in self.asserts)


def prepare(doc, allow_remote=False):
    """Symbols, transclusion, edits and decoration: everything before the integrity check."""
    resolve_symbols(doc)
    transclude(doc, FileResolver(doc.base_dir, allow_remote=allow_remote))
    apply_edits(doc)
    decorate(doc)
    return doc


def run(doc, allow_remote=False, stop_on_findings=False, validate_only=False,
        out_dir: Optional[Path] = None) -> RunReport:
    report = RunReport()
    prepare(doc, allow_remote)
    report.findings = check_integrity(doc)
    if validate_only or (stop_on_findings and report.findings):
        return report
    run_computations(doc)
    report.asserts = run_asserts(doc)
    report.written = write_outputs(doc, out_dir)
    report.warnings = list(doc.warnings)
    report.executed = True
    return report


def run_file(path, **kwargs):
    doc = load_document(path)
    return doc, run(doc, **kwargs)


# attributes the pipeline itself writes onto existing elements
_BOOKKEEPING = {"status", "error", "outcome", "observed"}


def _key(el):
    attrs = tuple(sorted((k, v) for k, v in el.attrib.items() if k not in _BOOKKEEPING))
    return el.tag, attrs


def _marked(el):
    return (any(is_sem(c, "provenance") for c in el)
            or el.get(sem("computedBy")) is not None
            or el.get(sem("copiedFrom")) is not None
            or el.get(sem("editedBy")) is not None)


def audit_provenance(root, original=None) -> list:
    """Problems with the provenance of ``root``; an empty list means complete.

    Every transclusion record must carry a source, location, digest and
    retrieval time. With ``original`` (the document as loaded, variables
    expanded) every element not found there must sit inside a transcluded
    subtree, a computed result or an edited copy.
    """
    problems = []
    nested = {id(c) for el in root.iter() if is_sem(el, "provenance") for c in el}
    for el in root.iter():
        # records nested inside another came with the fetched data and are kept as found
        if is_sem(el, "provenance") and id(el) not in nested:
            for attr in ("source", "location", "sha256", "retrieved"):
                if not el.get(attr):
                    problems.append(f"provenance record without {attr}")
    if original is None:
        return problems
    seen = {_key(el) for el in original.iter()}

    def walk(el, covered):
        covered = covered or _marked(el)
        if not covered and _key(el) not in seen:
            problems.append(f"<{el.tag}> {dict(el.attrib)} has no provenance")
        for c in el:
            if isinstance(c.tag, str):
                walk(c, covered)

    walk(root, False)
    return problems
