import numpy as np
import pytest

from trirep import linalg as la
from trirep.algebra import ModuleHom, identity_hom, is_indecomposable, is_injective, is_projective, validate_algebra, zero_hom
from trirep.bimodule import Bimodule, regular_bimodule
from trirep.io import fixture_path, load_manifest
from trirep.rep import (
    TripleHom,
    TripleRep,
    build_lambda,
    classify_injective_reph,
    classify_projective_rep,
    enumerate_rephs,
    enumerate_reps,
    extension_oracle,
    lifting_oracle,
    rep_to_reph,
    reph_to_rep,
    triple_kernel_cokernel,
    zero_triple,
)


@pytest.fixture(scope="module")
def ut2m():
    return load_manifest(fixture_path("ut2"))


@pytest.fixture(scope="module")
def dualm():
    return load_manifest(fixture_path("dual"))


def small_triples(m, xs, ys):
    ctx = m.contexts["M"]
    mods = m.modules
    return enumerate_reps(ctx, [mods[k] for k in xs], [mods[k] for k in ys])


def test_lambda_of_ground_field_is_upper_triangular(f2, ut2):
    lam = build_lambda(f2, regular_bimodule(f2), f2)
    assert lam.dim == 3 and validate_algebra(lam).valid
    # basis order A, M, B matches e11, e12, e22
    assert np.array_equal(lam.mul, ut2.mul)
    assert np.array_equal(lam.unit, ut2.unit)


def test_lambda_of_zero_bimodule_is_a_product(f2, d2):
    zero = Bimodule(d2, f2, np.zeros((2, 0, 0)), np.zeros((1, 0, 0)))
    lam = build_lambda(d2, zero, f2)
    assert lam.dim == 3 and validate_algebra(lam).valid
    # the A-unit is central
    e = np.array([1, 0, 0])
    for i in range(3):
        basis = la.identity(3)[i]
        assert np.array_equal(lam.product(e, basis), lam.product(basis, e))


def test_frobenius_fixture_lambda_has_dimension_six():
    m = load_manifest(fixture_path("frob"))
    lam = m.contexts["M"].Lambda
    assert lam.dim == 6 and validate_algebra(lam).valid


def test_zero_triple_gives_zero_module(ut2m):
    ctx = ut2m.contexts["M"]
    assert zero_triple(ctx, "rep").lam.dim == 0
    assert rep_to_reph(zero_triple(ctx, "rep")).lam.dim == 0


def test_identity_triple_is_the_indecomposable_projective(ut2m):
    t = ut2m.triples["[k;k]_1"]
    lam = t.lam
    assert lam.dim == 2
    assert is_projective(lam) and is_indecomposable(lam)


def test_lambda_round_trip_on_ut2_triples(ut2m):
    ctx = ut2m.contexts["M"]
    triples = small_triples(ut2m, ["0A", "kA"], ["0B", "kB"])
    assert len(triples) == 5  # zero, [k;0], [0;k], [k;k]_0, [k;k]_1
    for t in triples:
        back = ctx.rep_from_lambda(t.lam)
        assert back.dims == t.dims and np.array_equal(back.phi, t.phi)
        backh = ctx.reph_from_lambda(t.to_reph().lam)
        assert np.array_equal(backh.varphi, t.to_reph().varphi)


def test_rep_reph_round_trip_on_dual_triples(dualm):
    ctx = dualm.contexts["M"]
    xs = [dualm.modules[k] for k in ("0A", "S", "D2", "S+S")]
    ys = [dualm.modules[k] for k in ("0B", "k", "k2")]
    reps = enumerate_reps(ctx, xs, ys)
    assert reps
    for t in reps:
        assert np.array_equal(reph_to_rep(rep_to_reph(t)).phi, t.phi)
        # both descriptions give the same Lambda-module on the nose
        assert np.array_equal(t.lam.action, t.to_reph().lam.action)
    for t in enumerate_rephs(ctx, xs, ys):
        assert np.array_equal(rep_to_reph(reph_to_rep(t)).varphi, t.varphi)


def test_invertible_structure_maps_stay_invertible(ut2m):
    t = ut2m.triples["[k;k]_1"]
    assert la.is_invertible(t.phi, 2) and la.is_invertible(t.to_reph().varphi, 2)


def test_classifiers_on_named_triples(ut2m):
    tr = ut2m.triples
    proj = classify_projective_rep(tr["[k;k]_1"])
    assert proj.verdict and all(proj.clauses.values())
    bad = classify_projective_rep(tr["[k;k]_0"])
    assert not bad.verdict
    assert classify_injective_reph(tr["(k,k)_1"]).verdict
    assert not classify_injective_reph(tr["(k,0)"]).verdict


def test_classifiers_agree_with_oracles_and_lambda_projectivity(ut2m):
    for t in small_triples(ut2m, ["0A", "kA"], ["0B", "kB"]):
        lam = t.lam
        assert classify_projective_rep(t).verdict == lifting_oracle(lam) == bool(is_projective(lam))
        assert classify_injective_reph(t.to_reph()).verdict == extension_oracle(lam) == is_injective(lam)


def test_kernel_cokernel_of_identity_and_zero(ut2m):
    t = ut2m.triples["[k;k]_0"]
    h = TripleHom(t, t, identity_hom(t.x), identity_hom(t.y))
    kinc, cproj = triple_kernel_cokernel(h)
    assert kinc.source.dims == (0, 0) and cproj.target.dims == (0, 0)
    z = TripleHom(t, t, zero_hom(t.x, t.x), zero_hom(t.y, t.y))
    kinc, cproj = triple_kernel_cokernel(z)
    assert kinc.source.dims == t.dims and cproj.target.dims == t.dims


def test_kernel_of_projection_onto_top(ut2m):
    tr, mods = ut2m.triples, ut2m.modules
    src, tgt = tr["[k;k]_0"], tr["[k;0]"]
    h = TripleHom(src, tgt, identity_hom(mods["kA"]), zero_hom(mods["kB"], mods["0B"]))
    kinc, cproj = triple_kernel_cokernel(h)
    ker = kinc.source
    assert ker.dims == (0, 1) and ker.phi.size == 0
    assert cproj.target.dims == (0, 0)
    # componentwise exactness matches exactness of Lambda-modules
    assert kinc.lam.is_mono() and ModuleHom(src.lam, tgt.lam, h.lam.matrix).is_epi()


def test_reph_kernel_cokernel(ut2m):
    tr, mods = ut2m.triples, ut2m.modules
    src, tgt = tr["(k,k)_1"], tr["(0,k)"]
    h = TripleHom(src, tgt, zero_hom(mods["kA"], mods["0A"]), identity_hom(mods["kB"]))
    kinc, cproj = triple_kernel_cokernel(h)
    assert kinc.source.dims == (1, 0)
    assert cproj.target.dims == (0, 0)


def test_non_commuting_triple_morphism_rejected(ut2m):
    from trirep.errors import ValidationError

    tr, mods = ut2m.triples, ut2m.modules
    with pytest.raises(ValidationError):
        TripleHom(tr["[k;k]_1"], tr["[k;k]_1"], identity_hom(mods["kA"]), zero_hom(mods["kB"], mods["kB"]))


def test_structure_map_must_be_a_module_map(dualm):
    from trirep.errors import ValidationError

    ctx = dualm.contexts["M"]
    with pytest.raises(ValidationError):
        # M (x) k = D2 -> S sending 1 to 0 and x to the generator is not D2-linear
        TripleRep(ctx, dualm.modules["S"], dualm.modules["k"], [[0, 1]])
