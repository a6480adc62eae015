import itertools

import pytest

from trirep.algebra import identity_hom, zero_hom, zero_module
from trirep.io import fixture_path, load_manifest
from trirep.stable import (
    StableCategory,
    corrupted,
    e_adjunctions,
    e_functors,
    e_recollement,
    m_adjunctions,
    m_functors,
    verify_adjoint_pair,
    verify_recollement,
    verify_triangulated_functor,
)
from trirep.subcat import ModuleCategory, SubcategorySpec
from trirep.verdict import FAIL, PASS, REFUSED


@pytest.fixture(scope="module")
def frob():
    return load_manifest(fixture_path("frob"))


@pytest.fixture(scope="module")
def st_d2(d2_modules, d2):
    spec = SubcategorySpec(d2, [d2_modules["S"], d2_modules["D2"]], 4, "all-up-to-cap", "modD2")
    return StableCategory(ModuleCategory(spec))


def find(check, name):
    if check.name == name:
        return check
    for p in check.parts:
        hit = find(p, name)
        if hit is not None:
            return hit
    return None


def test_stable_homs_over_dual_numbers(st_d2, d2_modules):
    s, reg = d2_modules["S"], d2_modules["D2"]
    assert st_d2.dim(s, s) == 1
    assert st_d2.dim(reg, s) == 0 and st_d2.dim(s, reg) == 0
    assert st_d2.is_zero_object(reg) and not st_d2.is_zero_object(s)
    assert st_d2.is_zero_map(zero_hom(s, s))
    assert not st_d2.is_zero_map(identity_hom(s))


def test_projective_ideal_routes_agree(st_d2):
    for u, v in itertools.product(st_d2.objects, repeat=2):
        assert st_d2.routes_agree(u, v)


def test_suspension_of_simple_is_simple(st_d2, d2_modules, d2):
    s = d2_modules["S"]
    ts, seq = st_d2.suspension(s)
    assert ts.dim == 1 and st_d2.find_stable_iso(ts, s) is not None
    assert seq.f.is_mono() and seq.g.is_epi()
    assert st_d2.suspension_check(s).status == PASS
    tz, _ = st_d2.suspension(zero_module(d2))
    assert st_d2.is_zero_object(tz)


def test_functor_identities_on_frob(frob):
    e = frob.categories["E"]
    fs = e_functors(e)
    assert fs["q"].obj(zero_module(e.ycat.algebra)).dim == 0
    for x in e.xcat.objects:
        assert fs["Qk"].obj(fs["p"].obj(x)).dim == 0
    for y in e.ycat.objects:
        assert fs["P"].obj(fs["q"].obj(y)).dim == 0


@pytest.mark.parametrize("name", ["ut2", "frob", "dual"])
def test_e_adjunctions_abelian(name):
    e = load_manifest(fixture_path(name)).categories["E"]
    for label, adj in e_adjunctions(e).items():
        assert verify_adjoint_pair(adj, stable=False).status == PASS, label


def test_adjunctions_descend_to_stable_categories(frob):
    cache = {}
    for cat, adjs in ((frob.categories["E"], e_adjunctions), (frob.categories["Mc"], m_adjunctions)):
        for label, adj in adjs(cat).items():
            assert verify_adjoint_pair(adj, cache=cache).status == PASS, label


def test_corrupted_functor_breaks_the_adjunction(frob):
    e = frob.categories["E"]
    fs = e_functors(e)
    fs["q"] = corrupted(fs["q"])
    adj = e_adjunctions(e, fs)["Q-q"]
    assert verify_adjoint_pair(adj, stable=False).status == FAIL


def test_functors_are_triangulated(frob):
    cache = {}
    for f in list(e_functors(frob.categories["E"]).values()) + list(m_functors(frob.categories["Mc"]).values()):
        assert verify_triangulated_functor(f, cache).status == PASS, f.name


def test_recollement_on_frobenius_fixture(frob):
    rec = verify_recollement(frob.categories["E"])
    assert rec.status == PASS
    for clause in ("(a) fully faithful", "(b) image = kernel", "(c) torsion pairs", "(d) quotient hom audit"):
        assert find(rec, clause).status == PASS, clause


def test_literal_ideal_quotient_differs_from_quotient_homs(frob):
    # the plain ideal quotient by maps through the image of i is not the quotient hom
    audit = find(verify_recollement(frob.categories["E"]), "(d) quotient hom audit")
    assert audit.details["ideal_quotient_mismatches"] == 10
    assert audit.notes


def test_recollement_shape(frob):
    data = e_recollement(frob.categories["E"])
    assert data.j_side == "right" and data.j.name == "P" and data.j_section.name == "p"
    assert data.i.name == "q"


def test_recollement_refused_without_frobenius():
    e = load_manifest(fixture_path("ut2-nonfrobenius")).categories["E"]
    rec = verify_recollement(e)
    assert rec.status == REFUSED and rec.witness == {"missing hypothesis": "Frobenius"}
