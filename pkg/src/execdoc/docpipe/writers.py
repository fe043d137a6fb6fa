"""``sem:writer``: serialize parts of the document to files."""

from __future__ import annotations

import copy
from pathlib import Path
import xml.etree.ElementTree as ET

from ..errors import DocumentError
from ..selector import Attribute
from .document import canonical_bytes, sem


def write_outputs(doc, out_dir=None) -> list:
    """Write each writer's selection; returns the paths written.

    A writer whose selector matches nothing adds a warning to
    ``doc.warnings`` and writes no file.
    """
    written = []
    base = Path(out_dir) if out_dir is not None else doc.base_dir
    for el in doc.elements("writer"):
        path = el.get("path")
        sel = el.get("select")
        if not path or not sel:
            raise DocumentError(f"{doc.locate(el)}: a writer needs select and path")
        nodes = [n for n in doc.select(sel, el) if not isinstance(n, Attribute)]
        if not nodes:
            doc.warnings.append(f"writer {doc.locate(el)}: select={sel!r} matches nothing; {path} not written")
            continue
        if len(nodes) == 1:
            out = nodes[0]
        else:
            out = ET.Element(sem("selection"), {"select": sel})
            out.extend(copy.deepcopy(n) for n in nodes)
        target = base / path
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(canonical_bytes(out))
        except OSError as exc:
            raise DocumentError(f"cannot write {target}: {exc.strerror}") from None
        written.append(target)
    return written
