import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, strategies as st

from execdoc.errors import SelectorSyntaxError, UnboundPrefixError
from execdoc.namespaces import CML, MATHML
from execdoc.selector import Attribute, compile_selector, select

FF_K = "./cml:property/cml:list/cml:scalar[@dictRef='ff:k']"


def test_documented_paths_compile():
    compile_selector(FF_K)
    compile_selector("//m:apply[m:log and m:apply[m:sin]]")


def test_unterminated_predicate_offset():
    with pytest.raises(SelectorSyntaxError) as info:
        compile_selector("./bad[")
    assert info.value.position == 5


def test_unbound_prefix():
    with pytest.raises(UnboundPrefixError):
        compile_selector("//zz:thing")


def test_spring_constant_selected():
    c = f"{{{CML}}}"
    root = ET.Element(c + "molecule")
    prop = ET.SubElement(root, c + "property")
    lst = ET.SubElement(prop, c + "list")
    k = ET.SubElement(lst, c + "scalar", dictRef="ff:k")
    ET.SubElement(lst, c + "scalar", dictRef="ff:r0")
    assert select(compile_selector(FF_K), root) == [k]


def test_empty_tree():
    assert select(compile_selector("//cml:atom"), ET.Element("empty")) == []


def test_nested_sin_applications_in_order():
    m = f"{{{MATHML}}}"
    text = (f'<math xmlns="{MATHML}"><apply><plus/><apply><sin/><apply><sin/><ci>x</ci></apply></apply>'
            f'<cn>1</cn></apply></math>')
    root = ET.fromstring(text)
    hits = select(compile_selector("//m:apply[m:sin]"), root)
    outer = root.find(f"{m}apply/{m}apply")
    inner = outer.find(f"{m}apply")
    assert hits == [outer, inner]


def test_attribute_terminal_step():
    root = ET.fromstring('<a><b x="1"/><b x="2"/><b/></a>')
    out = select(compile_selector("./b/@x"), root)
    assert [a.value for a in out] == ["1", "2"]
    assert all(isinstance(a, Attribute) for a in out)


def test_conjunction_and_self():
    root = ET.fromstring('<r><s a="1"><t/></s><s a="1"/><s a="2"><t/></s></r>')
    out = select(compile_selector(".//s[@a='1' and t]"), root)
    assert out == [root[0]]


# random trees checked against direct scans

tags = st.sampled_from(["a", "b", "c"])


@st.composite
def trees(draw, depth=0):
    el = ET.Element(draw(tags))
    if draw(st.booleans()):
        el.set("k", draw(st.sampled_from(["1", "2"])))
    if depth < 4:
        for _ in range(draw(st.integers(0, 3))):
            el.append(draw(trees(depth + 1)))
    return el


@given(trees(), tags, st.sampled_from([None, "1", "2"]))
def test_descendant_query_matches_scan(root, tag, k):
    path = f"//{tag}" + (f"[@k='{k}']" if k else "")
    expected = [n for n in root.iter() if n.tag == tag and (k is None or n.get("k") == k)]
    assert select(compile_selector(path), root) == expected


@given(trees(), tags, tags)
def test_child_path_matches_scan(root, t1, t2):
    expected = [g for c in root if c.tag == t1 for g in c if g.tag == t2]
    assert select(compile_selector(f"./{t1}/{t2}"), root) == expected


@given(trees(), tags, tags)
def test_child_existence_predicate_matches_scan(root, t1, t2):
    expected = [n for n in root.iter() if n.tag == t1 and any(c.tag == t2 for c in n)]
    sel = compile_selector(f"//{t1}[{t2}]")
    assert select(sel, root) == expected
    assert select(sel, root) == select(sel, root)


@given(trees(), tags, tags)
def test_descendant_then_child_matches_scan(root, t1, t2):
    # //t1/t2 with duplicates removed and document order kept
    seen = []
    for n in root.iter():
        if n.tag == t1:
            for c in n:
                if c.tag == t2 and c not in seen:
                    seen.append(c)
    order = {id(n): i for i, n in enumerate(root.iter())}
    seen.sort(key=lambda n: order[id(n)])
    assert select(compile_selector(f"//{t1}/{t2}"), root) == seen
