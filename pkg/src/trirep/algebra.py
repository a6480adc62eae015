"""Finite-dimensional algebras over F_p and their left modules.

An algebra of dimension ``d`` is given by structure constants ``mul`` with
``e_i e_j = sum_k mul[i, j, k] e_k`` and a unit vector.  A left module of
dimension ``n`` is an array ``action`` of shape ``(d, n, n)`` holding the
matrix of each basis element.  Homomorphisms are ``target x source``
matrices commuting with the actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import linalg as la
from .errors import BudgetExceeded, MalformedInputError, ValidationError

DEFAULT_BUDGET = 2**16


@dataclass(frozen=True, eq=False)
class Algebra:
    p: int
    mul: np.ndarray
    unit: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        la.check_prime(self.p)
        mul = np.array(self.mul, dtype=np.int64)
        unit = np.array(self.unit, dtype=np.int64).reshape(-1)
        d = unit.shape[0]
        if mul.shape != (d, d, d):
            raise MalformedInputError(f"structure constants must have shape {(d, d, d)}, got {mul.shape}")
        mul %= self.p
        unit %= self.p
        mul.setflags(write=False)
        unit.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "unit", unit)

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Algebra)
            and self.p == other.p
            and np.array_equal(self.unit, other.unit)
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.mul.tobytes(), self.unit.tobytes()))

    def __repr__(self) -> str:
        return f"Algebra({self.name or '?'}, p={self.p}, dim={self.dim})"

    def product(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.mul) % self.p

    @cached_property
    def left_regular(self) -> np.ndarray:
        """``L[i]`` is the matrix of left multiplication by ``e_i``."""
        # (e_i e_j) = sum_k mul[i,j,k] e_k, so column j of L[i] is mul[i, j, :]
        return np.ascontiguousarray(np.transpose(self.mul, (0, 2, 1)))

    @cached_property
    def opposite(self) -> "Algebra":
        name = self.name[:-3] if self.name.endswith("^op") else f"{self.name}^op"
        op = Algebra(self.p, np.transpose(self.mul, (1, 0, 2)), self.unit, name)
        object.__setattr__(op, "opposite", self)
        return op

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra (greedy, leftmost first)."""
        d, p = self.dim, self.p
        eye = la.identity(d)
        chosen: list[int] = []
        span = la.Subspace.span(self.unit.reshape(1, -1), d, p)
        for i in range(d):
            if span.dim == d:
                break
            if span.contains(eye[:, i]):
                continue
            chosen.append(i)
            span = _close_subalgebra(self, span + la.Subspace.span(eye[i : i + 1], d, p))
        return tuple(chosen)


def _close_subalgebra(a: Algebra, span: la.Subspace) -> la.Subspace:
    while True:
        b = span.basis
        prods = np.einsum("ai,bj,ijk->abk", b, b, a.mul).reshape(-1, a.dim) % a.p
        grown = la.Subspace.span(np.vstack([b, prods]), a.dim, a.p)
        if grown.dim == span.dim:
            return span
        span = grown


@dataclass(frozen=True)
class AlgebraReport:
    valid: bool
    reason: str = ""
    witness: tuple = ()


def validate_algebra(a: Algebra) -> AlgebraReport:
    """Check associativity on all basis triples and the two unit laws."""
    p, d = a.p, a.dim
    c = a.mul
    left = np.einsum("ijm,mkl->ijkl", c, c) % p  # (e_i e_j) e_k
    right = np.einsum("jkm,iml->ijkl", c, c) % p  # e_i (e_j e_k)
    bad = np.argwhere((left != right).any(axis=3))
    if bad.size:
        i, j, k = (int(v) for v in bad[0])
        return AlgebraReport(False, "associativity", (i, j, k))
    eye = la.identity(d)
    lu = np.einsum("i,ijk->jk", a.unit, c) % p
    ru = np.einsum("j,ijk->ik", a.unit, c) % p
    for j in range(d):
        if not np.array_equal(lu[j], eye[j]):
            return AlgebraReport(False, "left unit", (j,))
        if not np.array_equal(ru[j], eye[j]):
            return AlgebraReport(False, "right unit", (j,))
    return AlgebraReport(True)


def field_algebra(p: int, name: str = "") -> Algebra:
    return Algebra(p, np.ones((1, 1, 1), dtype=np.int64), np.ones(1, dtype=np.int64), name or f"F{p}")


def truncated_polynomial(p: int, n: int, name: str = "") -> Algebra:
    """F_p[x]/(x^n) on the basis 1, x, ..., x^(n-1)."""
    mul = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mul[i, j, i + j] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return Algebra(p, mul, unit, name or f"F{p}[x]/x^{n}")


# --------------------------------------------------------------------------
# modules


@dataclass(frozen=True, eq=False)
class Module:
    algebra: Algebra
    action: np.ndarray
    name: str = ""
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        act = np.array(self.action, dtype=np.int64)
        d = self.algebra.dim
        if act.ndim != 3 or act.shape[0] != d or act.shape[1] != act.shape[2]:
            raise MalformedInputError(f"module action must have shape (d={d}, n, n), got {act.shape}")
        act %= self.algebra.p
        act.setflags(write=False)
        object.__setattr__(self, "action", act)
        if self.check:
            problem = _module_violation(self.algebra, act)
            if problem is not None:
                raise ValidationError(f"module axioms fail: {problem[0]}", problem[1])

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def p(self) -> int:
        return self.algebra.p

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Module)
            and self.algebra == other.algebra
            and np.array_equal(self.action, other.action)
        )

    def __hash__(self) -> int:
        return hash((hash(self.algebra), self.action.tobytes()))

    def __repr__(self) -> str:
        label = self.name or "?"
        return f"Module({label}, dim={self.dim}, over {self.algebra.name or '?'})"

    @cached_property
    def gen_actions(self) -> np.ndarray:
        return self.action[list(self.algebra.generators)]

    def act(self, element: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->jk", element, self.action) % self.p

    def renamed(self, name: str) -> "Module":
        return Module(self.algebra, self.action, name, check=False)


def _module_violation(a: Algebra, act: np.ndarray):
    p = a.p
    n = act.shape[1]
    prod = np.einsum("iab,jbc->ijac", act, act) % p
    expect = np.einsum("ijk,kac->ijac", a.mul, act) % p
    bad = np.argwhere((prod != expect).reshape(a.dim, a.dim, -1).any(axis=2))
    if bad.size:
        return "multiplicativity", tuple(int(v) for v in bad[0])
    if not np.array_equal(np.einsum("i,iab->ab", a.unit, act) % p, la.identity(n)):
        return "unit acts as identity", ()
    return None


def zero_module(a: Algebra) -> Module:
    return Module(a, np.zeros((a.dim, 0, 0), dtype=np.int64), "0", check=False)


def regular_module(a: Algebra) -> Module:
    return Module(a, a.left_regular, a.name or "A")


def free_module(a: Algebra, rank: int) -> Module:
    if rank == 0:
        return zero_module(a)
    act = np.stack([la.block_diag(*([a.left_regular[i]] * rank)) for i in range(a.dim)])
    return Module(a, act, f"{a.name or 'A'}^{rank}", check=False)


def direct_sum(*mods: Module, name: str = "") -> Module:
    if not mods:
        raise MalformedInputError("direct sum of nothing")
    a = mods[0].algebra
    for m in mods[1:]:
        if m.algebra != a:
            raise MalformedInputError("direct sum over different algebras")
    act = np.stack([la.block_diag(*(m.action[i] for m in mods)) for i in range(a.dim)]) if mods else None
    label = name or "+".join(m.name or "?" for m in mods)
    return Module(a, act, label, check=False)


def dual(x: Module) -> Module:
    """The F_p-dual, a left module over the opposite algebra."""
    act = np.transpose(x.action, (0, 2, 1))
    return Module(x.algebra.opposite, act, f"D({x.name})" if x.name else "", check=False)


# --------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class ModuleHom:
    source: Module
    target: Module
    matrix: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self.source.algebra != self.target.algebra:
            raise MalformedInputError("homomorphism between modules over different algebras")
        mat = np.array(self.matrix, dtype=np.int64).reshape(self.target.dim, self.source.dim) % self.source.p
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        if self.check and not is_intertwiner(self.source, self.target, mat):
            raise ValidationError("matrix does not commute with the module actions")

    @property
    def p(self) -> int:
        return self.source.p

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        if other.target.dim != self.source.dim:
            raise MalformedInputError("composition of incompatible maps")
        return ModuleHom(other.source, self.target, la.mul(self.p, self.matrix, other.matrix), check=False)

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, (self.matrix + other.matrix) % self.p, check=False)

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, (self.matrix - other.matrix) % self.p, check=False)

    def __neg__(self) -> "ModuleHom":
        return ModuleHom(self.source, self.target, (-self.matrix) % self.p, check=False)

    def scaled(self, c: int) -> "ModuleHom":
        return ModuleHom(self.source, self.target, (c * self.matrix) % self.p, check=False)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def rank(self) -> int:
        return la.rank(self.matrix, self.p) if self.matrix.size else 0

    def is_mono(self) -> bool:
        return self.rank() == self.source.dim

    def is_epi(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_mono()

    def equals(self, other: "ModuleHom") -> bool:
        return np.array_equal(self.matrix, other.matrix)


def is_intertwiner(x: Module, y: Module, mat: np.ndarray) -> bool:
    p = x.p
    lhs = np.einsum("ab,gbc->gac", mat, x.gen_actions) % p
    rhs = np.einsum("gab,bc->gac", y.gen_actions, mat) % p
    return bool(np.array_equal(lhs, rhs))


def identity_hom(x: Module) -> ModuleHom:
    return ModuleHom(x, x, la.identity(x.dim), check=False)


def zero_hom(x: Module, y: Module) -> ModuleHom:
    return ModuleHom(x, y, la.zeros(y.dim, x.dim), check=False)


@dataclass(frozen=True, eq=False)
class HomSpace:
    """Basis of ``Hom_A(source, target)``, rows are row-major flattened maps."""

    source: Module
    target: Module
    basis: np.ndarray
    free: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def p(self) -> int:
        return self.source.p

    def matrices(self) -> np.ndarray:
        return self.basis.reshape(self.dim, self.target.dim, self.source.dim)


    def hom(self, i: int) -> ModuleHom:
        return ModuleHom(self.source, self.target, self.matrices()[i], check=False)

    def __iter__(self) -> Iterator[ModuleHom]:
        return (self.hom(i) for i in range(self.dim))

    def element(self, coeffs) -> ModuleHom:
        c = np.asarray(coeffs, dtype=np.int64).reshape(-1)
        flat = (c @ self.basis) % self.p if self.dim else np.zeros(self.target.dim * self.source.dim, dtype=np.int64)
        return ModuleHom(self.source, self.target, flat.reshape(self.target.dim, self.source.dim), check=False)

    def coords(self, mat) -> np.ndarray:
        """Coordinates of a homomorphism (a matrix or ModuleHom) in this basis."""
        m = mat.matrix if isinstance(mat, ModuleHom) else np.asarray(mat)
        return np.asarray(m, dtype=np.int64).reshape(-1)[list(self.free)] % self.p

    def all_elements(self, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """Every homomorphism as a stack ``(p^dim, ny, nx)``."""
        if self.p**self.dim > budget:
            raise BudgetExceeded(f"hom space of size {self.p}^{self.dim} exceeds budget {budget}")
        coeffs = la.all_vectors(self.p, self.dim)
        flat = (coeffs @ self.basis) % self.p if self.dim else np.zeros((1, self.target.dim * self.source.dim), dtype=np.int64)
        return flat.reshape(coeffs.shape[0], self.target.dim, self.source.dim)


@lru_cache(maxsize=8192)
def hom_space(x: Module, y: Module) -> HomSpace:
    if x.algebra != y.algebra:
        raise MalformedInputError("hom space between modules over different algebras")
    p = x.p
    nx, ny = x.dim, y.dim
    if nx == 0 or ny == 0:
        return HomSpace(x, y, la.zeros(0, nx * ny), ())
    eqs = [
        np.kron(la.identity(ny), gx.T) - np.kron(gy, la.identity(nx))
        for gx, gy in zip(x.gen_actions, y.gen_actions)
    ]
    if not eqs:
        basis, free = la.identity(nx * ny), list(range(nx * ny))
    else:
        basis, free = la.nullspace(np.vstack(eqs) % p, p)
    basis.setflags(write=False)
    return HomSpace(x, y, basis, tuple(free))


def hom_dim(x: Module, y: Module) -> int:
    return hom_space(x, y).dim


def random_hom(x: Module, y: Module, rng: np.random.Generator) -> ModuleHom:
    hs = hom_space(x, y)
    return hs.element(rng.integers(0, x.p, size=hs.dim))


# --------------------------------------------------------------------------
# submodules, quotients, kernels, cokernels


def restrict_action(x: Module, sub: la.Subspace) -> np.ndarray:
    cols = sub.columns()
    moved = np.einsum("iab,bk->iak", x.action, cols) % x.p
    return moved[:, list(sub.pivots), :] if sub.dim else np.zeros((x.algebra.dim, 0, 0), dtype=np.int64)


def is_submodule(x: Module, sub: la.Subspace) -> bool:
    if sub.dim == 0:
        return True
    moved = np.einsum("gab,kb->gak", x.gen_actions, sub.basis) % x.p
    return all(sub.contains(moved[g]) for g in range(moved.shape[0]))


def submodule(x: Module, sub: la.Subspace, name: str = "") -> tuple[Module, ModuleHom]:
    """The submodule on an invariant subspace together with its inclusion."""
    if not is_submodule(x, sub):
        raise ValidationError("subspace is not invariant under the action")
    m = Module(x.algebra, restrict_action(x, sub), name)
    return m, ModuleHom(m, x, sub.columns(), check=False)


def generated_submodule(x: Module, vectors: np.ndarray) -> la.Subspace:
    vecs = np.asarray(vectors, dtype=np.int64).reshape(-1, x.dim) if np.size(vectors) else la.zeros(0, x.dim)
    span = la.Subspace.span(vecs, x.dim, x.p)
    while True:
        if span.dim == 0:
            return span
        moved = np.einsum("gab,kb->gka", x.gen_actions, span.basis).reshape(-1, x.dim) % x.p
        grown = la.Subspace.span(np.vstack([span.basis, moved]), x.dim, x.p)
        if grown.dim == span.dim:
            return span
        span = grown


@dataclass(frozen=True, eq=False)
class QuotientModule:
    module: Module
    projection: ModuleHom
    section: np.ndarray  # linear (not module) section of the projection


def quotient_module(x: Module, sub: la.Subspace, name: str = "") -> QuotientModule:
    q = la.quotient(x.dim, sub)
    act = np.einsum("ab,ibc,cd->iad", q.projection, x.action, q.section) % x.p
    m = Module(x.algebra, act, name)
    return QuotientModule(m, ModuleHom(x, m, q.projection, check=False), q.section)


@dataclass(frozen=True, eq=False)
class KerCoker:
    kernel: Module
    inclusion: ModuleHom
    cokernel: Module
    projection: ModuleHom
    coker_section: np.ndarray


def kernel_cokernel(f: ModuleHom) -> KerCoker:
    p = f.p
    ker_sub = la.kernel(f.matrix, p) if f.source.dim else la.Subspace.zero(0, p)
    k, inc = submodule(f.source, ker_sub, "Ker")
    im_sub = la.image(f.matrix, p) if f.target.dim else la.Subspace.zero(0, p)
    q = quotient_module(f.target, im_sub, "Coker")
    return KerCoker(k, inc, q.module, q.projection, q.section)


def image_subspace(f: ModuleHom) -> la.Subspace:
    if f.target.dim == 0:
        return la.Subspace.zero(0, f.p)
    return la.image(f.matrix, f.p)


def kernel_subspace(f: ModuleHom) -> la.Subspace:
    if f.source.dim == 0:
        return la.Subspace.zero(0, f.p)
    return la.kernel(f.matrix, f.p)


def factor_through_mono(h: ModuleHom, mono: ModuleHom) -> ModuleHom | None:
    """``k`` with ``mono @ k == h`` if it exists."""
    sol = la.solve(mono.matrix, h.matrix, h.p)
    if sol is None:
        return None
    return ModuleHom(h.source, mono.source, sol, check=False)


def factor_through_epi(h: ModuleHom, epi: ModuleHom) -> ModuleHom | None:
    """``k`` with ``k @ epi == h`` if it exists (``h`` must kill ``Ker epi``)."""
    sol = la.solve(epi.matrix.T, h.matrix.T, h.p)
    if sol is None:
        return None
    k = ModuleHom(epi.target, h.target, sol.T, check=False)
    return k


# --------------------------------------------------------------------------
# exact sequences and covers


@dataclass(frozen=True, eq=False)
class ShortExactSeq:
    """``0 -> f.source --f--> middle --g--> g.target -> 0``."""

    f: ModuleHom
    g: ModuleHom
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self.f.target.dim != self.g.source.dim:
            raise MalformedInputError("short exact sequence terms do not match")
        if self.check and not is_short_exact(self.f, self.g):
            raise ValidationError("sequence is not short exact")

    @property
    def left(self) -> Module:
        return self.f.source

    @property
    def middle(self) -> Module:
        return self.f.target

    @property
    def right(self) -> Module:
        return self.g.target


def is_exact_at(f: ModuleHom, g: ModuleHom) -> bool:
    """Image of ``f`` equals kernel of ``g``."""
    if (g @ f).matrix.any():
        return False
    return f.rank() == f.target.dim - g.rank()


def is_short_exact(f: ModuleHom, g: ModuleHom) -> bool:
    return f.is_mono() and g.is_epi() and is_exact_at(f, g)


def module_generators(x: Module) -> list[int]:
    """Greedy generating set: basis vectors not in the span generated so far."""
    gens: list[int] = []
    span = la.Subspace.zero(x.dim, x.p)
    eye = la.identity(x.dim)
    for i in range(x.dim):
        if span.dim == x.dim:
            break
        if span.contains(eye[:, i]):
            continue
        gens.append(i)
        span = generated_submodule(x, np.vstack([span.basis, eye[i : i + 1]]))
    return gens


def _cover_matrix(x: Module, vectors: np.ndarray) -> np.ndarray:
    # generator j of A^r goes to vectors[:, j]; e_b in copy j goes to rho(e_b) v_j
    cols = np.einsum("bik,kj->jbi", x.action, vectors) % x.p  # (r, d, n)
    return cols.reshape(-1, x.dim).T.copy()


def free_cover(x: Module, reduced: bool = False) -> ShortExactSeq:
    """``0 -> K -> A^r -> x -> 0``.

    With ``reduced=False`` this is the canonical cover with ``r = dim x`` and
    generator ``i`` sent to basis vector ``i``.  ``reduced=True`` uses the
    greedy generating set of :func:`module_generators` instead.
    """
    a = x.algebra
    idx = module_generators(x) if reduced else list(range(x.dim))
    free = free_module(a, len(idx))
    vecs = la.identity(x.dim)[:, idx]
    pi = ModuleHom(free, x, _cover_matrix(x, vecs) if idx else la.zeros(x.dim, 0), check=False)
    kc = kernel_cokernel(pi)
    return ShortExactSeq(kc.inclusion, pi, check=False)


def syzygy(x: Module) -> Module:
    return free_cover(x, reduced=True).left


@dataclass(frozen=True)
class ProjectivityVerdict:
    projective: bool
    section: ModuleHom | None = None

    def __bool__(self) -> bool:
        return self.projective


def is_projective(x: Module) -> ProjectivityVerdict:
    """Decide projectivity by splitting a free cover ``A^r -> x``.

    The cover is split iff its kernel inclusion ``K -> A^r`` has a
    retraction; homs out of a free module are determined by the images of
    the generators, so the test is one small linear system.
    """
    if x.dim == 0:
        return ProjectivityVerdict(True, zero_hom(x, x))
    ses = free_cover(x, reduced=True)
    iota, pi = ses.f, ses.g
    k = iota.source
    if k.dim == 0:
        return ProjectivityVerdict(True, ModuleHom(x, pi.source, la.inverse(pi.matrix, x.p), check=False))
    p = x.p
    r = pi.source.dim // x.algebra.dim
    # unknown retraction: generator j -> sum_l c[j,l] k_l; as matrix on A^r it is
    # sum_{j,l} c[j,l] * R_{j,l} with R_{j,l}[:, (j,b)] = rho_K(e_b) k_l
    cols = []
    for j in range(r):
        for l in range(k.dim):
            vec = la.zeros(k.dim, 1)
            vec[l, 0] = 1
            block = np.einsum("bik,kj->bi", k.action, vec) % p  # (d, dimK)
            full = la.zeros(k.dim, pi.source.dim)
            d = x.algebra.dim
            full[:, j * d : (j + 1) * d] = block.T
            cols.append(la.mul(p, full, iota.matrix).reshape(-1))
    system = np.array(cols, dtype=np.int64).T
    sol = la.solve(system, la.identity(k.dim).reshape(-1), p)
    if sol is None:
        return ProjectivityVerdict(False)
    retraction = la.zeros(k.dim, pi.source.dim)
    idx = 0
    d = x.algebra.dim
    for j in range(r):
        for l in range(k.dim):
            if sol[idx]:
                vec = la.zeros(k.dim, 1)
                vec[l, 0] = 1
                block = np.einsum("bik,kj->bi", k.action, vec) % p
                retraction[:, j * d : (j + 1) * d] = (retraction[:, j * d : (j + 1) * d] + sol[idx] * block.T) % p
            idx += 1
    lin_section = la.solve(pi.matrix, la.identity(x.dim), p)
    proj = (la.identity(pi.source.dim) - iota.matrix @ retraction) % p
    s = ModuleHom(x, pi.source, la.mul(p, proj, lin_section))
    return ProjectivityVerdict(True, s)


def is_injective(x: Module) -> bool:
    return bool(is_projective(dual(x)))


def injective_embedding(x: Module) -> ModuleHom:
    """Mono ``x -> I`` into an injective module: the dual of a free cover of ``D x``."""
    cover = free_cover(dual(x), reduced=True).g
    target = dual(cover.source)
    return ModuleHom(x, target, cover.matrix.T, check=False)


def projective_cover_map(x: Module) -> ModuleHom:
    return free_cover(x, reduced=True).g


# --------------------------------------------------------------------------
# Ext


def ext_group(x: Module, y: Module, i: int) -> int:
    """``dim Ext^i_A(x, y)`` from iterated syzygies of free covers."""
    if i < 0:
        raise MalformedInputError("Ext degree must be nonnegative")
    if i == 0:
        return hom_dim(x, y)
    cur = x
    for _ in range(i - 1):
        if cur.dim == 0 or is_projective(cur):
            return 0
        cur = syzygy(cur)
    if cur.dim == 0:
        return 0
    ses = free_cover(cur, reduced=True)
    r = ses.middle.dim // cur.algebra.dim
    return hom_dim(ses.left, y) - r * y.dim + hom_dim(cur, y)


def pushout_of(a: ModuleHom, f: ModuleHom) -> tuple[Module, ModuleHom, ModuleHom, np.ndarray]:
    """Pushout of ``C <-a- A -f-> B``: returns ``D``, ``g: C -> D``, ``b: B -> D``, section."""
    p = a.p
    rel = np.vstack([a.matrix, (-f.matrix) % p])
    summ = direct_sum(a.target, f.target)
    sub = la.image(rel, p) if summ.dim else la.Subspace.zero(0, p)
    q = quotient_module(summ, sub, "pushout")
    nc = a.target.dim
    g = ModuleHom(a.target, q.module, q.projection.matrix[:, :nc], check=False)
    b = ModuleHom(f.target, q.module, q.projection.matrix[:, nc:], check=False)
    return q.module, g, b, q.section


@dataclass(frozen=True, eq=False)
class Ext1:
    """``Ext^1_A(right, left)`` presented as ``Hom(K, left)`` modulo restrictions."""

    right: Module
    left: Module
    cover: ShortExactSeq
    hom_k: HomSpace
    reps: np.ndarray  # (e, dim hom_k) coordinates of class representatives

    @property
    def dim(self) -> int:
        return self.reps.shape[0]

    @property
    def p(self) -> int:
        return self.right.p

    def cocycle(self, coeffs) -> ModuleHom:
        c = np.asarray(coeffs, dtype=np.int64).reshape(-1)
        return self.hom_k.element((c @ self.reps) % self.p if self.dim else np.zeros(self.hom_k.dim, dtype=np.int64))

    def realize(self, coeffs) -> ShortExactSeq:
        psi = self.cocycle(coeffs)
        d, g, b, sec = pushout_of(psi, self.cover.f)
        n1 = self.left.dim
        cols = np.hstack([la.zeros(self.right.dim, n1), self.cover.g.matrix])
        to_right = ModuleHom(d, self.right, la.mul(self.p, cols, sec), check=False)
        return ShortExactSeq(g, to_right, check=False)

    def classes(self, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        if self.p**self.dim > budget:
            raise BudgetExceeded(f"Ext^1 has {self.p}^{self.dim} classes, budget {budget}")
        return la.all_vectors(self.p, self.dim)

    def basis_classes(self) -> np.ndarray:
        return la.identity(self.dim)

    def class_of(self, cocycle: ModuleHom) -> np.ndarray:
        """Class coordinates of a cocycle ``K -> left``."""
        coords = self.hom_k.coords(cocycle)
        restr = _restriction_space(self)
        q = la.quotient(self.hom_k.dim, restr)
        full = (q.projection @ coords) % self.p
        rep_q = (q.projection @ self.reps.T) % self.p if self.dim else la.zeros(q.dim, 0)
        sol = la.solve(rep_q, full, self.p)
        return sol if sol is not None else full


def _restriction_space(e: Ext1) -> la.Subspace:
    hp = hom_space(e.cover.middle, e.left)
    if not e.hom_k.dim:
        return la.Subspace.zero(0, e.p)
    vecs = [e.hom_k.coords(h @ e.cover.f) for h in hp]
    return la.Subspace.span(np.array(vecs, dtype=np.int64).reshape(-1, e.hom_k.dim), e.hom_k.dim, e.p)


def ext1(right: Module, left: Module) -> Ext1:
    """Extensions ``0 -> left -> E -> right -> 0``."""
    if right.algebra != left.algebra:
        raise MalformedInputError("Ext between modules over different algebras")
    cover = free_cover(right, reduced=True)
    hk = hom_space(cover.left, left)
    tmp = Ext1(right, left, cover, hk, la.zeros(0, hk.dim))
    restr = _restriction_space(tmp)
    q = la.quotient(hk.dim, restr)
    reps = q.section.T.copy()
    return Ext1(right, left, cover, hk, reps)


# --------------------------------------------------------------------------
# isomorphism, summands


def fingerprint(x: Module) -> tuple:
    """Cheap isomorphism invariant."""
    p = x.p
    ranks = tuple(la.rank(g, p) if x.dim else 0 for g in x.gen_actions)
    sq = tuple(la.rank(la.mul(p, g, g), p) if x.dim else 0 for g in x.gen_actions)
    return (x.dim, ranks, sq, hom_dim(x, x))


def _iso_rng(x: Module, y: Module) -> np.random.Generator:
    seed = (hash(x.action.tobytes()) ^ (3 * hash(y.action.tobytes()))) & 0xFFFFFFFF
    return np.random.default_rng(seed)


def find_isomorphism(
    x: Module,
    y: Module,
    budget: int = DEFAULT_BUDGET,
    trials: int = 64,
    rng: np.random.Generator | None = None,
) -> ModuleHom | None:
    """An isomorphism ``x -> y``, or None when none exists.

    Random elements of ``Hom(x, y)`` are tried first, then the whole space
    is enumerated.  Raises :class:`BudgetExceeded` when the enumeration
    would be needed to certify a negative and is too large.
    """
    if x.algebra != y.algebra:
        raise MalformedInputError("isomorphism test across algebras")
    if x.dim != y.dim:
        return None
    if x.dim == 0:
        return zero_hom(x, y)
    if fingerprint(x) != fingerprint(y):
        return None
    hs = hom_space(x, y)
    if hs.dim != hom_dim(x, x) or hs.dim != hom_dim(y, x):
        return None
    p = x.p
    rng = rng or _iso_rng(x, y)
    mats = hs.matrices()
    for _ in range(trials):
        c = rng.integers(0, p, size=hs.dim)
        m = np.einsum("k,kab->ab", c, mats) % p
        if la.is_invertible(m, p):
            return ModuleHom(x, y, m, check=False)
    if p**hs.dim > budget:
        raise BudgetExceeded(f"cannot certify non-isomorphism: hom space {p}^{hs.dim} over budget {budget}")
    chunk = 4096
    coeffs = la.all_vectors(p, hs.dim)
    for start in range(0, coeffs.shape[0], chunk):
        block = np.einsum("nk,kab->nab", coeffs[start : start + chunk], mats) % p
        ok = la.batch_invertible(block, p)
        if ok.any():
            return ModuleHom(x, y, block[int(np.argmax(ok))], check=False)
    return None


def is_isomorphic(x: Module, y: Module, budget: int = DEFAULT_BUDGET) -> bool | None:
    """True/False, or None when the budget prevents a certified negative."""
    try:
        return find_isomorphism(x, y, budget) is not None
    except BudgetExceeded:
        return None


def _idempotents(x: Module, budget: int) -> np.ndarray:
    hs = hom_space(x, x)
    p = x.p
    if p**hs.dim > budget:
        raise BudgetExceeded(f"End has {p}^{hs.dim} elements, budget {budget}")
    mats = hs.matrices()
    coeffs = la.all_vectors(p, hs.dim)
    out = []
    for start in range(0, coeffs.shape[0], 4096):
        block = np.einsum("nk,kab->nab", coeffs[start : start + 4096], mats) % p
        sq = np.einsum("nab,nbc->nac", block, block) % p
        keep = (sq == block).all(axis=(1, 2))
        out.append(block[keep])
    return np.concatenate(out) if out else np.zeros((0, x.dim, x.dim), dtype=np.int64)


def idempotent_image(x: Module, e: np.ndarray) -> tuple[Module, ModuleHom]:
    sub = la.image(e, x.p)
    return submodule(x, sub)


def enumerate_summands(x: Module, budget: int = DEFAULT_BUDGET) -> list[Module]:
    """Images of all idempotent endomorphisms, one per isomorphism class."""
    if x.dim == 0:
        return [x]
    reps: list[Module] = []
    seen: dict[tuple, list[Module]] = {}
    for e in _idempotents(x, budget):
        m, _ = idempotent_image(x, e)
        key = fingerprint(m)
        bucket = seen.setdefault(key, [])
        if any(is_isomorphic(m, r, budget) for r in bucket):
            continue
        bucket.append(m)
        reps.append(m)
    reps.sort(key=lambda m: m.dim)
    return reps


def is_indecomposable(x: Module, budget: int = DEFAULT_BUDGET) -> bool:
    """Nonzero with no idempotent endomorphisms besides 0 and 1."""
    if x.dim == 0:
        return False
    return _idempotents(x, budget).shape[0] == 2


def decompose(x: Module, budget: int = DEFAULT_BUDGET) -> list[Module]:
    """Split ``x`` into indecomposable summands (idempotent search)."""
    if x.dim == 0:
        return []
    n = x.dim
    for e in _idempotents(x, budget):
        r = la.rank(e, x.p)
        if 0 < r < n:
            m1, _ = idempotent_image(x, e)
            comp = (la.identity(n) - e) % x.p
            m2, _ = idempotent_image(x, comp)
            return decompose(m1, budget) + decompose(m2, budget)
    return [x]


def direct_sum_of(mods: Sequence[Module], algebra: Algebra, name: str = "") -> Module:
    mods = [m for m in mods if m.dim]
    if not mods:
        return zero_module(algebra)
    if len(mods) == 1:
        return mods[0].renamed(name) if name else mods[0]
    return direct_sum(*mods, name=name)
