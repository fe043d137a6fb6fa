import xml.etree.ElementTree as ET

import pytest

from conftest import CASE, molecule
from execdoc.chem import Atom
from execdoc.docpipe.compute import form_expression
from execdoc.errors import (
    FunctionConflictError, MissingParameterError, TypeMismatchError, UnregisteredFunctionError,
)
from execdoc.forcefield import parse_forcefield, total_energy
from execdoc.library import interactions, library_context, register_library
from execdoc.mathml import Context, ObjectRef, evaluate, parse_mathml
from execdoc.mathml.dictionary import default_dictionaries, scalar_from_text
from execdoc.mathml.dictionary import lookup
from execdoc.mathml.units import LENGTH
from execdoc.namespaces import DEXML

FORMS = {f.get("id"): f for f in ET.parse(CASE / "formulae.xml").getroot().iter(f"{{{DEXML}}}functionalForm")}


def call(name, arg, uri=None):
    attr = f' definitionURL="{uri}"' if uri else ""
    return parse_mathml(f"<apply><csymbol{attr}>{name}</csymbol><ci>x</ci></apply>")


def form_value(form_id, m, ff):
    dicts = default_dictionaries()
    ctx = library_context().bind_all({
        kind: interactions(m, ff, kind) for kind in ("bonds", "angles", "dihedrals", "pairs")})
    ctx = ctx.bind("ke", scalar_from_text(str(ff.coulomb_constant), "units:kcal_angstrom_per_mol_e2", "ff:ke", dicts))
    ctx = ctx.bind("epsilon", ff.relative_permittivity)
    return evaluate(form_expression(FORMS[form_id]), ctx)


def test_mass_by_name_and_uri():
    ctx = library_context().bind("x", ObjectRef(molecule("water")))
    by_name = evaluate(call("getMass", "x"), ctx)
    by_uri = evaluate(call("w", "x", "urn:execdoc:chem#getMass"), ctx)
    assert by_name == by_uri
    assert by_name.value == pytest.approx(18.015, abs=1e-9)
    assert by_name.unit == "units:dalton"


def test_library_twice_conflicts():
    with pytest.raises(FunctionConflictError):
        register_library(library_context())


def test_unregistered_without_library():
    with pytest.raises(UnregisteredFunctionError):
        evaluate(call("getMass", "x"), Context().bind("x", ObjectRef(molecule("water"))))


def test_wrong_object_kind():
    ctx = library_context().bind("x", ObjectRef(Atom("a", "H", (0.0, 0.0, 0.0))))
    with pytest.raises(TypeMismatchError):
        evaluate(call("getLength", "x"), ctx)
    with pytest.raises(TypeMismatchError):
        evaluate(call("getMass", "x"), library_context().bind("x", 3.0))


def test_parameters_need_a_forcefield():
    bond = interactions(molecule("diatomic"), None, "bonds").items[0]
    with pytest.raises(TypeMismatchError, match="forcefield"):
        evaluate(call("bondForceConstant", "x"), library_context().bind("x", bond))


def test_missing_parameter_names_interaction():
    bond = interactions(molecule("diatomic"), parse_forcefield(""), "bonds").items[0]
    with pytest.raises(MissingParameterError) as info:
        evaluate(call("bondForceConstant", "x"), library_context().bind("x", bond))
    assert info.value.types == ("C1", "O1")
    assert "a1-a2" in str(info.value)


def test_length_is_dimensioned(forcefield):
    bond = interactions(molecule("diatomic"), forcefield, "bonds").items[0]
    v = evaluate(call("getLength", "x"), library_context().bind("x", bond))
    assert v.value == 1.6 and v.dim == LENGTH


def test_scale_factors_only_on_14_pairs(forcefield):
    pairs = interactions(molecule("chain4"), forcefield, "pairs").items
    assert len(pairs) == 1
    ctx = library_context().bind("x", pairs[0])
    assert evaluate(call("vdwScale", "x"), ctx).value == 0.5
    far = [p for p in interactions(molecule("acetic-acid"), forcefield, "pairs").items if not p.obj.is14]
    if far:
        assert evaluate(call("vdwScale", "x"), library_context().bind("x", far[0])).value == 1.0


def test_unknown_interaction_kind():
    with pytest.raises(ValueError):
        interactions(molecule("water"), None, "impropers")


@pytest.mark.parametrize("name", ["diatomic", "chain4", "branched6", "acetic-acid", "ethane"])
def test_forms_match_oracle(name, forcefield):
    m = molecule(name)
    oracle = total_energy(m, forcefield)
    pairs = [("bond-energy", oracle.bond), ("angle-energy", oracle.angle),
             ("dihedral-energy", oracle.dihedral), ("vdw-energy", oracle.vdw),
             ("elec-energy", oracle.electrostatic), ("total-energy", oracle.total)]
    for form_id, want in pairs:
        got = form_value(form_id, m, forcefield)
        assert got.value == pytest.approx(want, rel=1e-9, abs=1e-12), form_id
        assert got.dim == lookup("ff:energy", default_dictionaries()).dimension
