"""``sem:assert``: checks of computed values against expected scalars or files."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Optional

from ..errors import ExecDocError
from ..mathml.dictionary import convert, scalar_from_text
from ..mathml.values import Scalar
from ..selector import Attribute
from .compute import _node_value
from .document import structurally_equal

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class AssertOutcome:
    location: str
    select: str
    passed: bool
    expected: Optional[str] = None
    observed: Optional[str] = None
    message: str = ""

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        if self.message:
            detail = self.message
        elif self.observed is None:
            detail = f"matches {self.expected}"
        else:
            detail = f"expected {self.expected}, observed {self.observed}"
        return f"{status} {self.select} ({detail})"


def _observed(doc, node, units):
    value = _node_value(doc, node)
    if not isinstance(value, Scalar):
        raise ExecDocError(f"selected node holds a {type(value).__name__}, not a number")
    if units:
        value = convert(value, units, doc.dictionaries)
    return value


def _scalar_check(doc, el, node):
    units = el.get("units")
    expected = scalar_from_text(el.get("value"), units, None, doc.dictionaries)
    observed = _observed(doc, node, units)
    if units:
        expected = convert(expected, units, doc.dictionaries)
    if expected.dim != observed.dim:
        return False, str(expected.value), str(observed.value), \
            f"dimension {observed.dim} does not match expected {expected.dim}"
    rel = float(el.get("tolerance", DEFAULT_TOLERANCE))
    abs_tol = float(el.get("absTolerance", 0.0))
    ok = math.isclose(float(observed.value), float(expected.value), rel_tol=rel, abs_tol=abs_tol)
    return ok, repr(float(expected.value)), repr(float(observed.value)), ""


def _file_check(doc, el, node):
    path = doc.base_dir / el.get("file")
    try:
        golden = ET.parse(path).getroot()
    except (OSError, ET.ParseError) as exc:
        raise ExecDocError(f"cannot read expected file {el.get('file')!r}: {exc}") from None
    if isinstance(node, Attribute):
        raise ExecDocError("a file comparison needs an element, not an attribute")
    ok = structurally_equal(node, golden)
    return ok, el.get("file"), None, "" if ok else f"subtree differs from {el.get('file')}"


def run_asserts(doc) -> list:
    """Evaluate every assert; each records ``outcome`` on its element and in the report."""
    report = []
    parents = doc.parents()
    for el in doc.elements("assert"):
        where = doc.locate(el, parents)
        path = el.get("select", "")
        try:
            if (el.get("value") is None) == (el.get("file") is None):
                raise ExecDocError("an assert needs exactly one of value or file")
            nodes = doc.select(path, el)
            if len(nodes) != 1:
                raise ExecDocError(f"select={path!r} matched {len(nodes)} nodes, expected exactly one")
            check = _scalar_check if el.get("value") is not None else _file_check
            ok, expected, observed, message = check(doc, el, nodes[0])
        except ExecDocError as exc:
            ok, expected, observed, message = False, el.get("value") or el.get("file"), None, str(exc)
        el.set("outcome", "pass" if ok else "fail")
        if observed is not None:
            el.set("observed", observed)
        report.append(AssertOutcome(where, path, ok, expected, observed, message))
    return report
