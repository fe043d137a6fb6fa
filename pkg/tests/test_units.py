import math
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from execdoc.errors import DictionaryError, DimensionError, UnitLookupError
from execdoc.mathml.dictionary import (
    convert, default_dictionaries, is_canonical, load_dictionary, lookup, scalar_from_text,
)
from execdoc.mathml.units import DIMENSIONLESS, ENERGY, LENGTH, Dimension
from execdoc.mathml.values import Scalar

DICTS = default_dictionaries()


def units_by_canonical_unit():
    groups = {}
    for prefix, d in DICTS.items():
        for term, e in d.entries.items():
            ref = f"{prefix}:{term}"
            if e.unit is not None and (is_canonical(ref, e) or e.conversion is not None):
                if prefix == "units":
                    groups.setdefault(e.unit, []).append(ref)
    return groups


UNIT_PAIRS = [(a, b) for refs in units_by_canonical_unit().values() for a, b in permutations(refs, 2)]


def test_degree_to_radian():
    out = convert(Scalar(180.0, DIMENSIONLESS, "units:degree"), "units:radian", DICTS)
    assert out.unit == "units:radian"
    assert math.isclose(out.value, math.pi, rel_tol=1e-15)


def test_nm_to_angstrom():
    out = convert(Scalar(1.0, LENGTH, "units:nm"), "units:angstrom", DICTS)
    assert math.isclose(out.value, 10.0, rel_tol=1e-15)


def test_same_unit_is_identity():
    v = Scalar(3.25, LENGTH, "units:nm")
    assert convert(v, "units:nm", DICTS) == v


def test_unknown_unit():
    with pytest.raises(UnitLookupError):
        convert(Scalar(1.0, LENGTH, "units:angstrom"), "units:furlong", DICTS)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        convert(Scalar(1.0, LENGTH, "units:angstrom"), "units:kcal_per_mol", DICTS)


def test_no_conversion_between_distinct_canonical_units():
    # radian and "none" are both dimensionless, yet not interchangeable
    with pytest.raises(UnitLookupError):
        convert(Scalar(1.0, DIMENSIONLESS, "units:degree"), "units:none", DICTS)


def test_pairs_exist():
    assert ("units:kj_per_mol", "units:kcal_per_mol") in UNIT_PAIRS
    assert lookup("units:kcal_per_mol", DICTS).dimension == ENERGY


@pytest.mark.parametrize("pair", UNIT_PAIRS, ids="->".join)
@given(x=st.floats(-1e6, 1e6, allow_nan=False))
def test_conversion_round_trip(pair, x):
    u1, u2 = pair
    dim = lookup(u1, DICTS).dimension
    there = convert(Scalar(x, dim, u1), u2, DICTS)
    back = convert(there, u1, DICTS)
    assert math.isclose(back.value, x, rel_tol=1e-12, abs_tol=1e-12 * max(1.0, abs(x)))


def test_scalar_from_text_uses_dictref_unit():
    s = scalar_from_text("109.5", "units:degree", "ff:theta0", DICTS)
    assert math.isclose(s.value, 1.9111355, rel_tol=1e-7)
    k = scalar_from_text("100", None, "ff:k", DICTS)
    assert k.unit == "units:kcal_per_mol_per_angstrom2"


def test_scalar_from_text_rejects_unit_of_wrong_dimension():
    with pytest.raises(DimensionError):
        scalar_from_text("1.0", "units:angstrom", "ff:k", DICTS)


DICT = """<dictionary xmlns="http://www.xml-cml.org/schema" xmlns:m="http://www.w3.org/1998/Math/MathML" prefix="t">
  <entry term="a" dimension="length" unit="t:a"/>
  <entry term="b" dimension="length" unit="t:a">
    <conversion><m:math>{body}</m:math></conversion>
  </entry>
</dictionary>"""


def test_affine_conversion_accepted():
    body = "<m:apply><m:plus/><m:apply><m:times/><m:cn>3</m:cn><m:ci>x</m:ci></m:apply><m:cn>1</m:cn></m:apply>"
    d = load_dictionary(DICT.format(body=body))
    assert (d.entries["b"].scale, d.entries["b"].offset) == (3.0, 1.0)


def test_non_affine_conversion_rejected():
    body = "<m:apply><m:power/><m:ci>x</m:ci><m:cn>2</m:cn></m:apply>"
    with pytest.raises(DictionaryError, match="affine"):
        load_dictionary(DICT.format(body=body))


@given(st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_dimension_text_round_trip(exps):
    d = Dimension(*exps)
    assert Dimension.parse(d.to_text()) == d
    assert d / d == DIMENSIONLESS
    assert (d * d) == d ** 2
