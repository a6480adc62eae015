import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from trirep import linalg as la
from trirep.algebra import (
    Algebra,
    Module,
    ModuleHom,
    decompose,
    direct_sum,
    dual,
    enumerate_summands,
    ext_group,
    ext1,
    free_cover,
    free_module,
    hom_dim,
    hom_space,
    identity_hom,
    injective_embedding,
    is_injective,
    is_isomorphic,
    is_projective,
    kernel_cokernel,
    regular_module,
    validate_algebra,
    zero_hom,
    zero_module,
)
from trirep.diagrams import random_module
from trirep.errors import BudgetExceeded, MalformedInputError, ValidationError
from trirep.rep import lifting_oracle


def test_ground_field_and_dual_numbers_validate(f2, d2):
    assert validate_algebra(f2).valid
    assert validate_algebra(d2).valid


def test_unit_axiom_violation_is_reported():
    # basis {1, x} with x.x = 1 but unit declared as x
    mul = np.zeros((2, 2, 2), dtype=np.int64)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 1] = mul[1, 1, 0] = 1
    rep = validate_algebra(Algebra(2, mul, [0, 1]))
    assert not rep.valid and "unit" in rep.reason


def test_associativity_violation_names_a_basis_triple():
    # basis 1, x, y with x.y = x and every other product of x, y zero
    mul = np.zeros((3, 3, 3), dtype=np.int64)
    for i in range(3):
        mul[0, i, i] = mul[i, 0, i] = 1
    mul[1, 2, 1] = 1
    rep = validate_algebra(Algebra(2, mul, [1, 0, 0]))
    assert not rep.valid and rep.reason == "associativity"
    assert rep.witness == (1, 2, 2)  # (x.y).y = x but x.(y.y) = 0


def test_structure_constant_shape_is_checked():
    with pytest.raises(MalformedInputError):
        Algebra(2, np.zeros((2, 2, 1)), [1, 0])


def test_module_axioms_are_enforced(d2):
    with pytest.raises(ValidationError):
        Module(d2, [[[1]], [[1]]])  # x acting invertibly contradicts x.x = 0


def test_hom_dimensions_against_enumeration(f2, d2_modules):
    s, reg = d2_modules["S"], d2_modules["D2"]
    assert hom_dim(regular_module(f2), regular_module(f2)) == 1
    assert hom_dim(s, s) == 1
    assert hom_dim(s, reg) == 1
    for x in d2_modules.values():
        for y in d2_modules.values():
            assert hom_dim(x, y) == oracles.hom_dim(x.action, y.action, 2), (x.name, y.name)


def test_kernel_cokernel_of_identity_and_zero(d2_modules):
    reg = d2_modules["D2"]
    kc = kernel_cokernel(identity_hom(reg))
    assert kc.kernel.dim == 0 and kc.cokernel.dim == 0
    kc = kernel_cokernel(zero_hom(d2_modules["S"], reg))
    assert kc.kernel.dim == 1 and kc.cokernel.dim == 2


def test_multiplication_by_x(d2_modules):
    reg, s = d2_modules["D2"], d2_modules["S"]
    times_x = ModuleHom(reg, reg, reg.action[1])
    kc = kernel_cokernel(times_x)
    assert is_isomorphic(kc.kernel, s)
    assert is_isomorphic(kc.cokernel, s)


def test_free_covers(d2, d2_modules):
    reg, s = d2_modules["D2"], d2_modules["S"]
    assert free_cover(zero_module(d2)).middle.dim == 0
    cov = free_cover(reg, reduced=True)
    assert cov.left.dim == 0 and cov.g.is_iso()
    cov = free_cover(s, reduced=True)
    assert cov.middle.dim == 2 and is_isomorphic(cov.left, s)
    canonical = free_cover(d2_modules["S+S"])
    assert canonical.middle.dim == 4


def test_projectivity_and_injectivity(f2, d2_modules):
    s = d2_modules["S"]
    assert is_projective(d2_modules["D2"])
    assert not is_projective(s)
    assert is_projective(Module(f2, [[[1]]]))
    assert is_injective(d2_modules["D2"])
    assert not is_injective(s)
    assert is_injective(regular_module(f2))


def test_projectivity_matches_lifting_oracle(ut2):
    e11 = Module(ut2, [[[1]], [[0]], [[0]]], "S1")
    e22 = Module(ut2, [[[0]], [[0]], [[1]]], "S2")
    p2 = Module(ut2, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]], "P2")
    pool = [e11, e22, p2, regular_module(ut2)]
    for x in pool:
        assert bool(is_projective(x)) == lifting_oracle(x, pool), x.name
    # S1 is projective (a summand of the regular module), S2 is not
    assert is_projective(e11) and not is_projective(e22)


def test_injective_embedding_is_mono_into_injective(d2_modules):
    for x in d2_modules.values():
        emb = injective_embedding(x)
        assert emb.is_mono()
        assert is_injective(emb.target)


def test_ext_over_dual_numbers(d2_modules):
    s = d2_modules["S"]
    assert ext_group(s, s, 1) == 1
    assert ext_group(s, s, 0) == hom_dim(s, s) == 1
    assert ext_group(s, s, 3) == 1
    assert ext_group(d2_modules["D2"], s, 1) == 0


def test_ext_vanishes_over_a_field(f2):
    k = regular_module(f2)
    assert ext_group(k, direct_sum(k, k), 1) == 0


def test_ext1_matches_cocycle_enumeration(d2, d2_modules, ut2):
    mods = list(d2_modules.values())
    for x in mods:
        for y in mods:
            assert ext_group(x, y, 1) == oracles.ext1_dim(d2.mul, x.action, y.action, 2), (x.name, y.name)
            assert ext1(x, y).dim == ext_group(x, y, 1)
    e22 = Module(ut2, [[[0]], [[0]], [[1]]])
    e11 = Module(ut2, [[[1]], [[0]], [[0]]])
    assert ext_group(e22, e11, 1) == oracles.ext1_dim(ut2.mul, e22.action, e11.action, 2) == 1
    assert ext_group(e11, e22, 1) == 0


def test_summands(f2, d2_modules):
    s = d2_modules["S"]
    assert [m.dim for m in enumerate_summands(s)] == [0, 1]
    k = regular_module(f2)
    assert [m.dim for m in enumerate_summands(direct_sum(k, k))] == [0, 1, 2]
    assert sorted(m.dim for m in decompose(direct_sum(s, d2_modules["D2"]))) == [1, 2]


def test_summand_budget_guard(d2_modules):
    s, reg = d2_modules["S"], d2_modules["D2"]
    big = direct_sum(s, s, reg, reg)
    assert hom_dim(big, big) == 20
    with pytest.raises(BudgetExceeded):
        enumerate_summands(big, budget=2**16)


def test_isomorphism_tests(d2_modules):
    s, reg = d2_modules["S"], d2_modules["D2"]
    assert is_isomorphic(s, s)
    assert is_isomorphic(s, reg) is False
    x = direct_sum(reg, s)
    perm = la.identity(3)[[2, 0, 1]]
    inv = perm.T
    permuted = Module(x.algebra, np.stack([perm @ a @ inv for a in x.action]))
    assert is_isomorphic(x, permuted)
    assert oracles.is_iso_brute(x.action, permuted.action, 2)
    assert is_isomorphic(direct_sum(s, s), reg) is False


def test_positive_iso_needs_no_exhaustive_budget(d2_modules):
    s = d2_modules["S"]
    x = direct_sum(*([s] * 4))
    y = Module(x.algebra, x.action)
    assert is_isomorphic(x, y, budget=2) is True


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_random_modules_double_dual_and_exactness(seed, p):
    from trirep.algebra import truncated_polynomial

    alg = truncated_polynomial(p, 2)
    rng = np.random.default_rng(seed)
    x = random_module(alg, int(rng.integers(0, 4)), rng)
    y = random_module(alg, int(rng.integers(1, 4)), rng)
    assert is_isomorphic(dual(dual(x)), x)
    hs = hom_space(x, y)
    for f in hs:
        kc = kernel_cokernel(f)
        if x.dim and kc.kernel.dim:
            assert la.kernel(f.matrix, p) == la.image(kc.inclusion.matrix, p)
        if y.dim and f.rank():
            assert la.kernel(kc.projection.matrix, p) == la.image(f.matrix, p)


def test_free_module_rank(d2):
    assert free_module(d2, 3).dim == 6
    assert free_module(d2, 0).dim == 0


def test_hom_across_algebras_rejected(f2, d2_modules):
    with pytest.raises(MalformedInputError):
        hom_space(regular_module(f2), d2_modules["S"])
    with pytest.raises(ValidationError):
        ModuleHom(d2_modules["S"], d2_modules["D2"], [[1], [0]])
