import numpy as np
import pytest

import oracles
from trirep import linalg as la
from trirep.algebra import Module, direct_sum, hom_dim, hom_space, is_isomorphic, regular_module, zero_module
from trirep.bimodule import (
    Bimodule,
    curry,
    hom_map,
    hom_MX,
    perp_inventory,
    regular_bimodule,
    tau,
    tensor_map,
    tensor_MY,
    tor_dim,
    uncurry,
)
from trirep.errors import MalformedInputError, ValidationError


def left_bimodule(x: Module, scalars) -> Bimodule:
    """A left module made into an (A, F_p)-bimodule."""
    return Bimodule(x.algebra, scalars, x.action, np.eye(x.dim, dtype=np.int64)[None], x.name)


def right_bimodule(scalars, y: Module) -> Bimodule:
    """A left module over B^op read as an (F_p, B)-bimodule."""
    return Bimodule(scalars, y.algebra, np.eye(y.dim, dtype=np.int64)[None], y.action, y.name)


@pytest.fixture(scope="module")
def dual_bimodule(d2, f2):
    return left_bimodule(regular_module(d2), f2)


def tensor_dim_oracle(m: Bimodule, y: Module) -> int:
    # Hom_k(M (x)_B Y, k) = Hom_B(Y, D M) with (b f)(u) = f(u b)
    dm = np.transpose(m.right_action, (0, 2, 1))
    return oracles.hom_dim(y.action, dm, m.p)


def test_tensor_with_zero_is_zero(f2):
    m = regular_bimodule(f2)
    assert tensor_MY(m, zero_module(f2)).module.dim == 0


def test_tensor_over_ground_field(f2):
    m = regular_bimodule(f2)
    assert tensor_MY(m, regular_module(f2)).module.dim == 1


def test_tensor_of_dual_numbers_over_field(dual_bimodule, f2, d2):
    ten = tensor_MY(dual_bimodule, regular_module(f2))
    assert is_isomorphic(ten.module, regular_module(d2))


def test_tensor_dimensions_against_duality_oracle(d2, d2_modules, f2):
    s = d2_modules["S"]
    for m in (regular_bimodule(d2), right_bimodule(f2, s), right_bimodule(f2, regular_module(d2))):
        for y in d2_modules.values():
            assert tensor_MY(m, y).module.dim == tensor_dim_oracle(m, y), (m.name, y.name)


def test_hom_from_bimodule(dual_bimodule, d2_modules, f2, d2):
    assert hom_MX(dual_bimodule, zero_module(d2)).module.dim == 0
    assert hom_MX(dual_bimodule, d2_modules["S"]).module.dim == 1
    assert hom_MX(regular_bimodule(f2), regular_module(f2)).module.dim == 1


def test_hom_of_free_bimodule_has_rank_times_dim(dual_bimodule, d2_modules):
    for x in d2_modules.values():
        assert hom_MX(dual_bimodule, x).module.dim == x.dim


def test_tau_is_invertible_with_matching_dimensions(d2, f2, d2_modules, dual_bimodule):
    k = regular_module(f2)
    for m, ys in ((dual_bimodule, [zero_module(f2), k, direct_sum(k, k)]), (regular_bimodule(d2), list(d2_modules.values()))):
        for x in d2_modules.values():
            for y in ys:
                adj = tau(m, x, y)
                assert adj.source.dim == adj.target.dim
                assert la.is_invertible(adj.matrix, 2) or adj.source.dim == 0


def test_tau_on_ground_field(f2):
    k = regular_module(f2)
    adj = tau(regular_bimodule(f2), k, k)
    assert adj.matrix.tolist() == [[1]]


def test_tau_dimensions_for_dual_fixture(dual_bimodule, d2_modules, f2):
    adj = tau(dual_bimodule, d2_modules["D2"], regular_module(f2))
    assert adj.source.dim == adj.target.dim == 2


def test_curry_uncurry_round_trip(d2, d2_modules):
    m = regular_bimodule(d2)
    for x in d2_modules.values():
        for y in d2_modules.values():
            ten, hm = tensor_MY(m, y), hom_MX(m, x)
            for phi in hom_space(ten.module, x):
                back = uncurry(m, ten, hm, curry(m, ten, hm, phi.matrix))
                assert np.array_equal(back % 2, phi.matrix)


def test_tau_naturality(d2, d2_modules):
    """tau(phi . (M (x) beta)) = Hom(M, id) . tau(phi) . beta, and similarly in x."""
    m = regular_bimodule(d2)
    mods = list(d2_modules.values())
    for x in mods:
        hm = hom_MX(m, x)
        for y1 in mods:
            for y0 in mods:
                t1, t0 = tensor_MY(m, y1), tensor_MY(m, y0)
                for beta in hom_space(y0, y1):
                    mb = tensor_map(m, beta, t0, t1)
                    for phi in hom_space(t1.module, x):
                        lhs = curry(m, t0, hm, (phi @ mb).matrix)
                        rhs = curry(m, t1, hm, phi.matrix) @ beta.matrix % 2
                        assert np.array_equal(lhs, rhs)
        for x1 in mods:
            hm1 = hom_MX(m, x1)
            for alpha in hom_space(x, x1):
                ha = hom_map(m, alpha, hm, hm1)
                for y in mods:
                    ten = tensor_MY(m, y)
                    for phi in hom_space(ten.module, x):
                        lhs = curry(m, ten, hm1, (alpha @ phi).matrix)
                        rhs = ha.matrix @ curry(m, ten, hm, phi.matrix) % 2
                        assert np.array_equal(lhs, rhs)


def test_tor(f2, d2_modules, dual_bimodule):
    s = d2_modules["S"]
    m = right_bimodule(f2, s)
    assert tor_dim(m, s, 0) == tensor_MY(m, s).module.dim
    assert tor_dim(m, s, 1) == 1
    k = regular_module(f2)
    assert tor_dim(dual_bimodule, direct_sum(k, k), 1) == 0


def test_perp_inventory_examples(f2, d2, d2_modules, dual_bimodule):
    pool = [m for m in d2_modules.values() if m.dim]
    inv = perp_inventory(dual_bimodule, pool, "X")
    assert len(inv.members) == len(pool) and not inv.rejected
    s_bimodule = left_bimodule(d2_modules["S"], f2)
    inv = perp_inventory(s_bimodule, [d2_modules["S"], d2_modules["D2"]], "X")
    assert [x.name for x in inv.members] == ["D2"]
    assert [(x.name, i) for x, i in inv.rejected] == [("S", 1)]
    assert inv.imax == d2.dim + 2


def test_bimodule_validation(d2, f2):
    with pytest.raises(ValidationError):
        # x acting on the left and right by different nilpotents does not commute
        Bimodule(d2, d2, [np.eye(2), [[0, 0], [1, 0]]], [np.eye(2), [[0, 1], [0, 0]]])
    with pytest.raises(MalformedInputError):
        tensor_MY(regular_bimodule(d2), regular_module(f2))
    with pytest.raises(MalformedInputError):
        perp_inventory(regular_bimodule(d2), [], "Z")


def test_hom_dim_adjunction_identity(d2, d2_modules):
    m = regular_bimodule(d2)
    for x in d2_modules.values():
        for y in d2_modules.values():
            assert hom_dim(tensor_MY(m, y).module, x) == hom_dim(y, hom_MX(m, x).module)
