"""Document pipeline: transclusion, edits, decoration, computation, asserts, output."""

from .asserts import AssertOutcome, run_asserts
from .compute import run_computations
from .decorate import decorate
from .document import (
    ComputationalDocument, canonical_bytes, load_document, load_document_text, structurally_equal,
)
from .edits import apply_edits
from .integrity import Finding, check_integrity
from .pipeline import RunReport, audit_provenance, prepare, run, run_file
from .symbols import resolve_symbols
from .transclude import FileResolver, provenance_records, transclude
from .writers import write_outputs

__all__ = [
    "AssertOutcome", "ComputationalDocument", "FileResolver", "Finding", "RunReport",
    "apply_edits", "audit_provenance", "canonical_bytes", "check_integrity", "decorate",
    "load_document", "load_document_text", "prepare", "provenance_records", "resolve_symbols",
    "run", "run_asserts", "run_computations", "run_file", "structurally_equal", "transclude",
    "write_outputs",
]
