"""The computational document: an XML tree plus what the pipeline learns about it."""

from __future__ import annotations

import copy
import io
import xml.etree.ElementTree as ET
from pathlib import Path

from ..errors import DocumentError
from ..mathml.dictionary import default_dictionaries
from ..namespaces import DEFAULT_PREFIXES, DEXML, split
from ..selector import compile_selector, select

SEM = f"{{{DEXML}}}"


def sem(local):
    return SEM + local


def is_sem(el, local):
    return isinstance(el.tag, str) and el.tag == SEM + local


class ComputationalDocument:
    """Single-owner, mutable document state threaded through the pipeline stages."""

    def __init__(self, root, path=None, namespaces=None):
        if not is_sem(root, "computationalDocument"):
            raise DocumentError(f"document root must be sem:computationalDocument, got {root.tag}")
        self.root = root
        self.path = Path(path).resolve() if path is not None else None
        self.base_dir = self.path.parent if self.path is not None else Path.cwd()
        self.namespaces = dict(DEFAULT_PREFIXES)
        self.namespaces.update(namespaces or {})
        self.symbols = {}
        self.decorations = {}
        self.dictionaries = dict(default_dictionaries())
        self.traces = []
        self.warnings = []
        self._selectors = {}

    def compile(self, path):
        sel = self._selectors.get(path)
        if sel is None:
            sel = self._selectors[path] = compile_selector(path, self.namespaces)
        return sel

    def select(self, path, node=None):
        """Absolute paths search the whole document; relative ones start at ``node``."""
        sel = self.compile(path)
        if sel.absolute or node is None:
            return select(sel, self.root)
        return select(sel, node)

    def parents(self):
        return {c: p for p in self.root.iter() for c in p}

    def locate(self, el, parents=None):
        parents = parents if parents is not None else self.parents()
        prefixes = {uri: p for p, uri in self.namespaces.items()}
        parts = []
        node = el
        while node is not None:
            ns, local = split(node.tag) if isinstance(node.tag, str) else (None, "?")
            name = f"{prefixes[ns]}:{local}" if ns in prefixes else local
            parent = parents.get(node)
            if parent is not None:
                same = [c for c in parent if c.tag == node.tag]
                if len(same) > 1:
                    name += f"[{same.index(node) + 1}]"
            parts.append(name)
            node = parent
        return "/" + "/".join(reversed(parts))

    def by_id(self, ident):
        for el in self.root.iter():
            if el.get("id") == ident:
                return el
        return None

    def elements(self, local):
        return [el for el in self.root.iter() if is_sem(el, local)]

    def to_bytes(self) -> bytes:
        return canonical_bytes(self.root)


def _register(namespaces):
    for prefix, uri in namespaces.items():
        if prefix and not prefix.startswith("ns"):
            try:
                ET.register_namespace(prefix, uri)
            except ValueError:
                pass


def parse_with_namespaces(data: bytes):
    """Parse XML bytes returning (root, {prefix: uri}) for every declaration seen."""
    namespaces = {}
    events = ET.iterparse(io.BytesIO(data), events=("start-ns",))
    for _, (prefix, uri) in events:
        namespaces.setdefault(prefix, uri)
    root = events.root
    _register(namespaces)
    return root, namespaces


def load_document(path) -> ComputationalDocument:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    try:
        root, namespaces = parse_with_namespaces(data)
    except ET.ParseError as exc:
        raise DocumentError(f"{path}: malformed XML: {exc}") from None
    return ComputationalDocument(root, path, namespaces)


def load_document_text(text, base_dir=None, name="document.xml") -> ComputationalDocument:
    data = text.encode() if isinstance(text, str) else text
    try:
        root, namespaces = parse_with_namespaces(data)
    except ET.ParseError as exc:
        raise DocumentError(f"malformed XML: {exc}") from None
    path = Path(base_dir or Path.cwd()) / name
    return ComputationalDocument(root, path, namespaces)


def _normalize(el):
    for node in el.iter():
        if node.text is not None and not node.text.strip():
            node.text = None
        if node.tail is not None and not node.tail.strip():
            node.tail = None
        if len(node.attrib) > 1:
            items = sorted(node.attrib.items())
            node.attrib.clear()
            node.attrib.update(items)


def canonical_bytes(el) -> bytes:
    """UTF-8, attributes sorted by name, two-space indentation, trailing newline."""
    el = copy.deepcopy(el)
    el.tail = None
    _normalize(el)
    ET.indent(el, space="  ")
    return ET.tostring(el, encoding="utf-8", xml_declaration=True) + b"\n"


def structurally_equal(a, b) -> bool:
    """Tag, attributes, trimmed text and children equal, ignoring insignificant whitespace."""
    if a.tag != b.tag or dict(a.attrib) != dict(b.attrib):
        return False
    if (a.text or "").strip() != (b.text or "").strip():
        return False
    if (a.tail or "").strip() != (b.tail or "").strip():
        return False
    ka = [c for c in a if isinstance(c.tag, str)]
    kb = [c for c in b if isinstance(c.tag, str)]
    return len(ka) == len(kb) and all(structurally_equal(x, y) for x, y in zip(ka, kb))
