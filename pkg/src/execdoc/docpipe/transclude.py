"""Transclusion: ``href`` attributes replaced by the content they point to.

Each transcluded subtree receives a ``sem:provenance`` record as its first
child holding the href as written, the location it was read from, a SHA-256
digest and a retrieval time (the file's modification time for local files,
so repeated runs stay byte-identical). Provenance already attached to the
fetched root is nested inside the new record.
"""

from __future__ import annotations

import hashlib
import os
import urllib.parse
import urllib.request
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ..errors import DepthLimitError, ExecDocError, InclusionCycleError, TransclusionError
from .document import is_sem, parse_with_namespaces, sem
from .symbols import substitute_tree

MAX_DEPTH = 16


@dataclass(frozen=True)
class Fetched:
    key: str        # canonical identity of the source, used for cycle detection
    base: str       # what nested relative hrefs resolve against
    data: bytes
    location: str   # how the source is reported in provenance
    retrieved: str


def _iso(ts):
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _is_remote(s):
    return urllib.parse.urlparse(s).scheme in ("http", "https")


class FileResolver:
    """Reads local files relative to the including file; http(s) only when allowed."""

    def __init__(self, root_dir, allow_remote=False):
        self.root_dir = Path(root_dir).resolve()
        self.allow_remote = allow_remote

    def __call__(self, href, base) -> Fetched:
        if _is_remote(href) or _is_remote(str(base)):
            return self._remote(urllib.parse.urljoin(str(base) + ("" if str(base).endswith("/") else "/"), href)
                                if not _is_remote(href) else href)
        path = (Path(base) / href).resolve()
        try:
            data = path.read_bytes()
            mtime = path.stat().st_mtime
        except OSError as exc:
            raise TransclusionError(f"cannot read {href!r} ({path}): {exc.strerror}") from None
        try:
            location = path.relative_to(self.root_dir).as_posix()
        except ValueError:
            location = Path(os.path.relpath(path, self.root_dir)).as_posix()
        return Fetched(str(path), str(path.parent), data, location, _iso(mtime))

    def _remote(self, url):
        if not self.allow_remote:
            raise TransclusionError(f"remote href {url!r} refused (remote fetching is disabled)")
        try:
            with urllib.request.urlopen(url, timeout=30) as resp:
                data = resp.read()
        except OSError as exc:
            raise TransclusionError(f"cannot fetch {url!r}: {exc}") from None
        now = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        return Fetched(url, url.rsplit("/", 1)[0], data, url, now)


def _href_elements(root):
    """Outermost elements carrying ``href``; provenance records are not includes."""
    found = []

    def walk(el):
        for child in el:
            if not isinstance(child.tag, str):
                continue
            if child.get("href") is not None and not is_sem(child, "provenance"):
                found.append((el, child))
            else:
                walk(child)

    walk(root)
    return found


def _fragment(root, ident, href):
    if root.get("id") == ident:
        return root
    for el in root.iter():
        if el.get("id") == ident:
            return el
    raise TransclusionError(f"no element with id {ident!r} in {href!r}")


def transclude(doc, resolver=None, max_depth=MAX_DEPTH):
    """Replace every href element by the referenced content, recursively."""
    resolver = resolver or FileResolver(doc.base_dir)
    top = [str(doc.path)] if doc.path is not None and doc.path.exists() else []
    _expand(doc, doc.root, str(doc.base_dir), top, resolver, max_depth)
    return doc


def _expand(doc, root, base, chain, resolver, max_depth):
    for parent, el in _href_elements(root):
        href = el.get("href")
        target, _, frag = href.partition("#")
        if not target:
            raise TransclusionError(f"href {href!r} has no file part")
        fetched = resolver(target, base)
        if fetched.key in chain:
            raise InclusionCycleError([*chain, fetched.key])
        if len(chain) >= max_depth:
            raise DepthLimitError(f"inclusion deeper than {max_depth} levels at {href!r}")
        try:
            included, namespaces = parse_with_namespaces(fetched.data)
        except ET.ParseError as exc:
            raise TransclusionError(f"{fetched.location}: malformed XML: {exc}") from None
        for prefix, uri in namespaces.items():
            doc.namespaces.setdefault(prefix, uri)
        if frag:
            included = _fragment(included, frag, href)
        try:
            substitute_tree(included, doc.symbols, lambda e: f"{fetched.location}: <{e.tag}>")
        except ExecDocError as exc:
            raise TransclusionError(str(exc)) from exc
        _expand(doc, included, fetched.base, [*chain, fetched.key], resolver, max_depth)

        upstream = [c for c in included if is_sem(c, "provenance")]
        for c in upstream:
            included.remove(c)
        record = ET.Element(sem("provenance"), {
            "source": href,
            "location": fetched.location,
            "sha256": hashlib.sha256(fetched.data).hexdigest(),
            "retrieved": fetched.retrieved,
        })
        record.extend(upstream)
        included.insert(0, record)
        included.tail = el.tail
        idx = list(parent).index(el)
        parent.remove(el)
        parent.insert(idx, included)


def provenance_records(root):
    """Every transclusion record in the tree, outermost first."""
    return [dict(el.attrib) for el in root.iter() if is_sem(el, "provenance")]
