"""A small XPath subset for selecting nodes and values in document trees.

Grammar::

    path      := ('.' | '/' | '//')? step (('/' | '//') step)*
    step      := '.' | '*' | qname predicate* | '@' qname
    predicate := '[' expr ']'
    expr      := term ('and' term)*
    term      := '@' qname ('=' literal)? | relpath

Paths starting with ``/`` or ``//`` resolve from the document containing the
node passed to :func:`select`; others resolve relative to that node. ``@attr``
is allowed only as the last step and yields :class:`Attribute` records.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import SelectorSyntaxError, UnboundPrefixError
from .namespaces import DEFAULT_PREFIXES


class Attribute(NamedTuple):
    owner: object
    name: str
    value: str


@dataclass(frozen=True)
class NameTest:
    ns: Optional[str]
    local: str  # "*" matches any element

    def matches(self, tag) -> bool:
        if not isinstance(tag, str):
            return False
        if self.local == "*":
            return True
        return tag == (f"{{{self.ns}}}{self.local}" if self.ns else self.local)

    @property
    def key(self):
        return f"{{{self.ns}}}{self.local}" if self.ns else self.local


@dataclass(frozen=True)
class AttrTest:
    name: NameTest
    value: Optional[str] = None


@dataclass(frozen=True)
class PathTest:
    steps: tuple


@dataclass(frozen=True)
class Conjunction:
    terms: tuple


@dataclass(frozen=True)
class Step:
    axis: str  # child | descendant-or-self | self | attribute
    test: Optional[NameTest]
    predicates: tuple = ()


@dataclass(frozen=True)
class Selector:
    source: str
    absolute: bool
    steps: tuple

    def __call__(self, root):
        return select(self, root)


_TOKEN = re.compile(
    r"\s*(?:(?P<dslash>//)|(?P<slash>/)|(?P<dot>\.)|(?P<lbr>\[)|(?P<rbr>\])|(?P<at>@)"
    r"|(?P<eq>=)|(?P<star>\*)|(?P<str>'[^']*'|\"[^\"]*\")"
    r"|(?P<name>[A-Za-z_][\w.\-]*(?::[A-Za-z_][\w.\-]*)?))"
)


def _tokenize(path):
    pos, tokens = 0, []
    while pos < len(path):
        if path[pos:].strip() == "":
            break
        m = _TOKEN.match(path, pos)
        if not m or m.end() == pos:
            raise SelectorSyntaxError("unexpected character", path, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(path)))
    return tokens


class _Parser:
    def __init__(self, path, ns):
        self.path = path
        self.ns = ns
        self.tokens = _tokenize(path)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise SelectorSyntaxError(f"expected {kind}, found {tok[1] or 'end'}", self.path, tok[2])
        self.i += 1
        return tok

    def qname(self, text, pos, attribute=False):
        if ":" in text:
            prefix, local = text.split(":", 1)
            if prefix not in self.ns:
                raise UnboundPrefixError(prefix)
            return NameTest(self.ns[prefix], local)
        return NameTest(None, text)

    def parse(self):
        absolute = False
        steps = []
        kind = self.peek()[0]
        if kind == "dslash":
            self.take()
            absolute = True
            steps.append(Step("descendant-or-self", None))
        elif kind == "slash":
            self.take()
            absolute = True
        steps.extend(self.relative())
        tok = self.peek()
        if tok[0] != "end":
            raise SelectorSyntaxError(f"unexpected {tok[1]!r}", self.path, tok[2])
        return Selector(self.path, absolute, tuple(steps))

    def relative(self, stop=()):
        steps = [self.step()]
        while self.peek()[0] in ("slash", "dslash"):
            kind = self.take()[0]
            if steps[-1].axis == "attribute":
                raise SelectorSyntaxError("attribute step must be last", self.path, self.peek()[2])
            if kind == "dslash":
                steps.append(Step("descendant-or-self", None))
            steps.append(self.step())
        return steps

    def step(self):
        kind, text, pos = self.peek()
        if kind == "dot":
            self.take()
            return Step("self", None, self.predicates())
        if kind == "at":
            self.take()
            _, name, npos = self.take("name")
            return Step("attribute", self.qname(name, npos, attribute=True))
        if kind == "star":
            self.take()
            return Step("child", NameTest(None, "*"), self.predicates())
        if kind == "name":
            self.take()
            return Step("child", self.qname(text, pos), self.predicates())
        raise SelectorSyntaxError(f"expected a step, found {text or 'end'}", self.path, pos)

    def predicates(self):
        preds = []
        while self.peek()[0] == "lbr":
            _, _, open_pos = self.take()
            expr = self.conjunction()
            if self.peek()[0] != "rbr":
                if self.peek()[0] == "end":
                    raise SelectorSyntaxError("unterminated predicate", self.path, open_pos)
                tok = self.peek()
                raise SelectorSyntaxError(f"unexpected {tok[1]!r} in predicate", self.path, tok[2])
            self.take()
            preds.append(expr)
        return tuple(preds)

    def conjunction(self):
        terms = [self.term()]
        while self.peek()[0] == "name" and self.peek()[1] == "and":
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Conjunction(tuple(terms))

    def term(self):
        kind, text, pos = self.peek()
        if kind == "end":
            # an empty predicate at end of input is an unterminated bracket
            return None
        if kind == "at":
            self.take()
            _, name, npos = self.take("name")
            test = self.qname(name, npos, attribute=True)
            if self.peek()[0] == "eq":
                self.take()
                _, lit, _ = self.take("str")
                return AttrTest(test, lit[1:-1])
            return AttrTest(test)
        return PathTest(tuple(self.relative()))


def compile_selector(path: str, ns=None) -> Selector:
    """Compile ``path`` with prefixes from ``ns`` (merged over cml/m/sem defaults)."""
    prefixes = dict(DEFAULT_PREFIXES)
    prefixes.update(ns or {})
    return _Parser(path, prefixes).parse()


# --- evaluation -------------------------------------------------------------

class _DocumentNode:
    """Stand-in for the document node above the root element."""

    tag = None

    def __init__(self, root):
        self.root = root

    def __iter__(self):
        return iter((self.root,))

    def iter(self):
        yield self
        yield from self.root.iter()

    attrib = {}


def _attr_key(test: NameTest):
    return test.key


def _pred_ok(pred, node):
    if pred is None:
        return True
    if isinstance(pred, Conjunction):
        return all(_pred_ok(t, node) for t in pred.terms)
    if isinstance(pred, AttrTest):
        value = node.attrib.get(_attr_key(pred.name))
        if pred.value is None:
            return value is not None
        return value == pred.value
    if isinstance(pred, PathTest):
        return bool(_run(pred.steps, [node]))
    raise TypeError(pred)


def _apply_step(step, nodes):
    out = []
    if step.axis == "attribute":
        for n in nodes:
            key = _attr_key(step.test)
            if key in n.attrib:
                out.append(Attribute(n, key, n.attrib[key]))
        return out
    for n in nodes:
        if step.axis == "self":
            cands = [n]
        elif step.axis == "child":
            cands = [c for c in n if step.test.matches(c.tag)]
        else:  # descendant-or-self
            cands = list(n.iter())
        out.extend(c for c in cands if all(_pred_ok(p, c) for p in step.predicates))
    return out


def _run(steps, nodes):
    for step in steps:
        nodes = _apply_step(step, nodes)
        if not nodes:
            break
    return nodes


def select(selector: Selector, root) -> list:
    """Nodes matched by ``selector`` from ``root``, in document order without duplicates.

    For absolute selectors ``root`` should be the document element.
    """
    start = _DocumentNode(root) if selector.absolute else root
    found = _run(selector.steps, [start])
    order = {}
    for i, el in enumerate(root.iter()):
        order[id(el)] = i
    seen = set()
    unique = []
    for item in found:
        key = (id(item.owner), item.name) if isinstance(item, Attribute) else id(item)
        if key in seen or isinstance(item, _DocumentNode):
            continue
        seen.add(key)
        unique.append(item)

    def position(item):
        el = item.owner if isinstance(item, Attribute) else item
        return (order.get(id(el), -1), item.name if isinstance(item, Attribute) else "")

    unique.sort(key=position)
    return unique
