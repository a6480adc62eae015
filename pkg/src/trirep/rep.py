"""Triples over a triangular matrix ring.

``Lambda = [[A, M], [0, B]]`` has basis A-block, then M-block, then B-block.
A triple ``[X;Y]_phi`` (``phi: M (x) Y -> X``) or ``(X,Y)_varphi``
(``varphi: Y -> Hom_A(M, X)``) becomes the Lambda-module ``X + Y`` where
``A`` and ``B`` act diagonally and ``m`` sends ``y`` to ``phi(m (x) y)``.
Lambda-modules in this block layout are called *aligned*; homomorphisms
between aligned modules are block diagonal ``(f, g)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import (
    Algebra,
    Module,
    ModuleHom,
    dual,
    free_cover,
    hom_space,
    is_injective,
    is_projective,
    kernel_cokernel,
)
from .bimodule import Bimodule, HomM, Tensor, curry, hom_MX, hom_map, tensor_MY, tensor_map, uncurry
from .errors import MalformedInputError, ValidationError


def build_lambda(a: Algebra, m: Bimodule, b: Algebra, name: str = "") -> Algebra:
    if m.left != a or m.right != b:
        raise MalformedInputError("bimodule is not over the given algebras")
    da, dm, db = a.dim, m.dim, b.dim
    n = da + dm + db
    mul = np.zeros((n, n, n), dtype=np.int64)
    sa, sm, sb = slice(0, da), slice(da, da + dm), slice(da + dm, n)
    mul[sa, sa, sa] = a.mul
    mul[sb, sb, sb] = b.mul
    # e_i^A e_j^M = L_i e_j ; e_i^M e_j^B = R_j e_i
    mul[sa, sm, sm] = np.transpose(m.left_action, (0, 2, 1))
    mul[sm, sb, sm] = np.transpose(m.right_action, (2, 0, 1))
    unit = np.concatenate([a.unit, np.zeros(dm, dtype=np.int64), b.unit])
    return Algebra(a.p, mul, unit, name or f"Lambda({a.name},{m.name},{b.name})")


class TriangularContext:
    """Bundles ``A``, ``M``, ``B`` and ``Lambda`` with tensor/hom caches."""

    def __init__(self, m: Bimodule, name: str = ""):
        self.bimodule = m
        self.A = m.left
        self.B = m.right
        self.p = m.p
        self.name = name
        self.Lambda = build_lambda(self.A, m, self.B)
        self._tensors: dict[Module, Tensor] = {}
        self._homs: dict[Module, HomM] = {}

    def __repr__(self) -> str:
        return f"TriangularContext({self.name or self.bimodule.name})"

    def tensor(self, y: Module) -> Tensor:
        t = self._tensors.get(y)
        if t is None:
            t = self._tensors[y] = tensor_MY(self.bimodule, y)
        return t

    def hom(self, x: Module) -> HomM:
        h = self._homs.get(x)
        if h is None:
            h = self._homs[x] = hom_MX(self.bimodule, x)
        return h

    def tensor_map(self, g: ModuleHom) -> ModuleHom:
        return tensor_map(self.bimodule, g, self.tensor(g.source), self.tensor(g.target))

    def hom_map(self, f: ModuleHom) -> ModuleHom:
        return hom_map(self.bimodule, f, self.hom(f.source), self.hom(f.target))

    # -- Lambda-modules ------------------------------------------------------

    def _assemble(self, x: Module, y: Module, blocks: np.ndarray, name: str) -> Module:
        """Aligned Lambda-module from ``blocks[i] : Y -> X`` (action of ``m_i``)."""
        nx, ny = x.dim, y.dim
        da, dm, db = self.A.dim, self.bimodule.dim, self.B.dim
        n = nx + ny
        act = np.zeros((da + dm + db, n, n), dtype=np.int64)
        act[:da, :nx, :nx] = x.action
        act[da : da + dm, :nx, nx:] = blocks
        act[da + dm :, nx:, nx:] = y.action
        return Module(self.Lambda, act, name)

    def split(self, v: Module) -> tuple[int, int]:
        """``(dim X, dim Y)`` of an aligned Lambda-module (raises if not aligned)."""
        da = self.A.dim
        e_a = np.einsum("i,iab->ab", self.A.unit, v.action[:da]) % self.p
        nx = la.rank(e_a, self.p) if v.dim else 0
        expect = la.block_diag(la.identity(nx), la.zeros(v.dim - nx, v.dim - nx))
        if not np.array_equal(e_a, expect):
            raise ValidationError("Lambda-module is not in aligned block form")
        return nx, v.dim - nx

    def align(self, v: Module) -> tuple[Module, ModuleHom]:
        """An aligned module isomorphic to ``v`` and the isomorphism ``v -> aligned``."""
        if v.algebra != self.Lambda:
            raise MalformedInputError("module is not over Lambda")
        da, p = self.A.dim, self.p
        e_a = np.einsum("i,iab->ab", self.A.unit, v.action[:da]) % p
        e_b = (la.identity(v.dim) - e_a) % p
        cols = []
        for e in (e_a, e_b):
            if v.dim and e.any():
                cols.append(la.image(e, p).columns())
        basis = np.hstack(cols) if cols else la.zeros(v.dim, 0)
        inv = la.inverse(basis, p) if v.dim else basis
        act = np.einsum("ab,ibc,cd->iad", inv, v.action, basis) % p
        w = Module(self.Lambda, act, v.name, check=False)
        return w, ModuleHom(v, w, inv, check=False)

    def components(self, v: Module) -> tuple[Module, Module, np.ndarray]:
        """``X``, ``Y`` and the ``m_i`` blocks of an aligned Lambda-module."""
        nx, ny = self.split(v)
        da, dm = self.A.dim, self.bimodule.dim
        x = Module(self.A, v.action[:da, :nx, :nx], check=False)
        y = Module(self.B, v.action[da + dm :, nx:, nx:], check=False)
        return x, y, v.action[da : da + dm, :nx, nx:]

    def rep_from_lambda(self, v: Module) -> "TripleRep":
        x, y, blocks = self.components(v)
        ten = self.tensor(y)
        big = np.concatenate(list(blocks), axis=1) if blocks.shape[0] else la.zeros(x.dim, 0)
        phi = la.mul(self.p, big, ten.section) if ten.module.dim else la.zeros(x.dim, 0)
        return TripleRep(self, x, y, phi, v.name)

    def reph_from_lambda(self, v: Module) -> "TripleRepH":
        x, y, blocks = self.components(v)
        hm = self.hom(x)
        varphi = la.zeros(hm.module.dim, y.dim)
        for j in range(y.dim):
            img = blocks[:, :, j].T  # column i = m_i . y_j
            varphi[:, j] = hm.coords(img)
        return TripleRepH(self, x, y, varphi, v.name)

    def block_hom(self, src: Module, tgt: Module, f: np.ndarray, g: np.ndarray) -> ModuleHom:
        return ModuleHom(src, tgt, la.block_diag(np.asarray(f), np.asarray(g)))

    def hom_parts(self, h: ModuleHom) -> tuple[np.ndarray, np.ndarray]:
        nx, _ = self.split(h.source)
        mx, _ = self.split(h.target)
        return h.matrix[:mx, :nx], h.matrix[mx:, nx:]


@dataclass(frozen=True, eq=False)
class TripleRep:
    """``[X;Y]_phi`` with ``phi: M (x)_B Y -> X``."""

    ctx: TriangularContext
    x: Module
    y: Module
    phi: np.ndarray
    name: str = ""
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        ten = self.ctx.tensor(self.y)
        mat = np.asarray(self.phi, dtype=np.int64).reshape(self.x.dim, ten.module.dim) % self.ctx.p
        object.__setattr__(self, "phi", mat)
        if self.check:
            ModuleHom(ten.module, self.x, mat)

    @property
    def structure_map(self) -> ModuleHom:
        return ModuleHom(self.ctx.tensor(self.y).module, self.x, self.phi, check=False)

    @cached_property
    def lam(self) -> Module:
        ten = self.ctx.tensor(self.y)
        big = la.mul(self.ctx.p, self.phi, ten.projection) if ten.module.dim else la.zeros(self.x.dim, self.ctx.bimodule.dim * self.y.dim)
        ny = self.y.dim
        blocks = np.stack([big[:, i * ny : (i + 1) * ny] for i in range(self.ctx.bimodule.dim)]) if self.ctx.bimodule.dim else np.zeros((0, self.x.dim, ny), dtype=np.int64)
        return self.ctx._assemble(self.x, self.y, blocks, self.name)

    def to_reph(self) -> "TripleRepH":
        ctx = self.ctx
        varphi = curry(ctx.bimodule, ctx.tensor(self.y), ctx.hom(self.x), self.phi)
        return TripleRepH(ctx, self.x, self.y, varphi, self.name)

    @property
    def dims(self) -> tuple[int, int]:
        return self.x.dim, self.y.dim


@dataclass(frozen=True, eq=False)
class TripleRepH:
    """``(X,Y)_varphi`` with ``varphi: Y -> Hom_A(M, X)``."""

    ctx: TriangularContext
    x: Module
    y: Module
    varphi: np.ndarray
    name: str = ""
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        hm = self.ctx.hom(self.x)
        mat = np.asarray(self.varphi, dtype=np.int64).reshape(hm.module.dim, self.y.dim) % self.ctx.p
        object.__setattr__(self, "varphi", mat)
        if self.check:
            ModuleHom(self.y, hm.module, mat)

    @property
    def structure_map(self) -> ModuleHom:
        return ModuleHom(self.y, self.ctx.hom(self.x).module, self.varphi, check=False)

    @cached_property
    def lam(self) -> Module:
        hm = self.ctx.hom(self.x)
        dm = self.ctx.bimodule.dim
        blocks = np.zeros((dm, self.x.dim, self.y.dim), dtype=np.int64)
        for i in range(dm):
            blocks[i] = la.mul(self.ctx.p, hm.columns(i), self.varphi) if hm.module.dim else 0
        return self.ctx._assemble(self.x, self.y, blocks, self.name)

    def to_rep(self) -> TripleRep:
        ctx = self.ctx
        phi = uncurry(ctx.bimodule, ctx.tensor(self.y), ctx.hom(self.x), self.varphi)
        return TripleRep(ctx, self.x, self.y, phi, self.name)

    @property
    def dims(self) -> tuple[int, int]:
        return self.x.dim, self.y.dim


def rep_to_reph(t: TripleRep) -> TripleRepH:
    return t.to_reph()


def reph_to_rep(t: TripleRepH) -> TripleRep:
    return t.to_rep()


@dataclass(frozen=True, eq=False)
class TripleHom:
    """A pair ``(f, g)`` between triples of the same kind, square checked."""

    source: TripleRep | TripleRepH
    target: TripleRep | TripleRepH
    f: ModuleHom
    g: ModuleHom

    def __post_init__(self) -> None:
        if type(self.source) is not type(self.target):
            raise MalformedInputError("triple morphism between different triple kinds")
        ctx = self.source.ctx
        p = ctx.p
        if isinstance(self.source, TripleRep):
            lhs = la.mul(p, self.f.matrix, self.source.phi) if self.source.phi.size else la.zeros(self.target.x.dim, self.source.phi.shape[1])
            rhs = ctx.tensor_map(self.g).matrix
            rhs = la.mul(p, self.target.phi, rhs) if rhs.size and self.target.phi.size else la.zeros(*lhs.shape)
        else:
            hf = ctx.hom_map(self.f).matrix
            lhs = la.mul(p, hf, self.source.varphi) if hf.size and self.source.varphi.size else la.zeros(self.target.varphi.shape[0], self.source.y.dim)
            rhs = la.mul(p, self.target.varphi, self.g.matrix) if self.target.varphi.size and self.g.matrix.size else la.zeros(*lhs.shape)
        if not np.array_equal(lhs % p, rhs % p):
            raise ValidationError("triple morphism square does not commute")

    @property
    def lam(self) -> ModuleHom:
        return ModuleHom(self.source.lam, self.target.lam, la.block_diag(self.f.matrix, self.g.matrix), check=False)


def zero_triple(ctx: TriangularContext, kind: str = "reph"):
    from .algebra import zero_module

    x, y = zero_module(ctx.A), zero_module(ctx.B)
    if kind == "rep":
        return TripleRep(ctx, x, y, la.zeros(0, 0), "0")
    return TripleRepH(ctx, x, y, la.zeros(0, 0), "0")


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClauseReport:
    verdict: bool
    clauses: dict

    def __bool__(self) -> bool:
        return self.verdict


def classify_projective_rep(t: TripleRep) -> ClauseReport:
    """Projective iff ``Y`` projective, ``phi`` injective, ``Coker phi`` projective."""
    phi = t.structure_map
    kc = kernel_cokernel(phi)
    clauses = {
        "Y projective": bool(is_projective(t.y)),
        "phi injective": phi.is_mono(),
        "Coker(phi) projective": bool(is_projective(kc.cokernel)),
    }
    return ClauseReport(all(clauses.values()), clauses)


def classify_injective_reph(t: TripleRepH) -> ClauseReport:
    """Injective iff ``X`` injective, ``varphi`` surjective, ``Ker varphi`` injective."""
    vphi = t.structure_map
    kc = kernel_cokernel(vphi)
    clauses = {
        "X injective": is_injective(t.x),
        "varphi surjective": vphi.is_epi(),
        "Ker(varphi) injective": is_injective(kc.kernel),
    }
    return ClauseReport(all(clauses.values()), clauses)


def classify_injective_rep(t: TripleRep) -> ClauseReport:
    return classify_injective_reph(t.to_reph())


def classify_projective_reph(t: TripleRepH) -> ClauseReport:
    return classify_projective_rep(t.to_rep())


# --------------------------------------------------------------------------
# kernels and cokernels of triple morphisms


def _induced(ctx_p: int, outer: ModuleHom, inc_src: np.ndarray, inc_tgt: np.ndarray) -> np.ndarray:
    sol = la.solve(inc_tgt, la.mul(ctx_p, outer.matrix, inc_src), ctx_p)
    if sol is None:
        raise ValidationError("induced map does not exist")
    return sol


def triple_kernel_cokernel(h: TripleHom):
    """Componentwise kernel and cokernel triples with induced structure maps."""
    src, tgt = h.source, h.target
    ctx = src.ctx
    p = ctx.p
    kf, kg = kernel_cokernel(h.f), kernel_cokernel(h.g)
    if isinstance(src, TripleRep):
        # kernel: M (x) Ker g -> M (x) Y -> X lands in Ker f
        tk = ctx.tensor_map(kg.inclusion)
        outer = ModuleHom(tk.source, src.x, la.mul(p, src.phi, tk.matrix) if tk.matrix.size and src.phi.size else la.zeros(src.x.dim, tk.source.dim), check=False)
        phi_k = _induced(p, outer, la.identity(tk.source.dim), kf.inclusion.matrix)
        ker = TripleRep(ctx, kf.kernel, kg.kernel, phi_k)
        # cokernel: M (x) Coker g <- M (x) Y' ; phi' then project
        tc = ctx.tensor_map(kg.projection)
        comp = la.mul(p, kf.projection.matrix, tgt.phi) if tgt.phi.size and kf.projection.matrix.size else la.zeros(kf.cokernel.dim, tgt.phi.shape[1])
        sol = la.solve(tc.matrix.T, comp.T, p) if tc.matrix.size else la.zeros(tc.target.dim, kf.cokernel.dim)
        if sol is None:
            raise ValidationError("cokernel structure map does not exist")
        coker = TripleRep(ctx, kf.cokernel, kg.cokernel, sol.T)
        kinc = TripleHom(ker, src, kf.inclusion, kg.inclusion)
        cproj = TripleHom(tgt, coker, kf.projection, kg.projection)
        return kinc, cproj
    # Rep_h: kernel structure: Ker g -> Y -> Hom(M,X), lands in Hom(M, Ker f)
    hk = ctx.hom_map(kf.inclusion)
    outer = la.mul(p, src.varphi, kg.inclusion.matrix) if src.varphi.size and kg.inclusion.matrix.size else la.zeros(src.varphi.shape[0], kg.kernel.dim)
    sol = la.solve(hk.matrix, outer, p) if hk.matrix.size else la.zeros(hk.source.dim, kg.kernel.dim)
    if sol is None:
        raise ValidationError("kernel structure map does not exist")
    ker = TripleRepH(ctx, kf.kernel, kg.kernel, sol)
    hc = ctx.hom_map(kf.projection)
    comp = la.mul(p, hc.matrix, tgt.varphi) if hc.matrix.size and tgt.varphi.size else la.zeros(hc.target.dim, tgt.y.dim)
    sol2 = la.solve(kg.projection.matrix.T, comp.T, p) if kg.projection.matrix.size else la.zeros(kg.cokernel.dim, hc.target.dim)
    if sol2 is None:
        raise ValidationError("cokernel structure map does not exist")
    coker = TripleRepH(ctx, kf.cokernel, kg.cokernel, sol2.T)
    return TripleHom(ker, src, kf.inclusion, kg.inclusion), TripleHom(tgt, coker, kf.projection, kg.projection)


# --------------------------------------------------------------------------
# brute-force oracles in Lambda-Mod


def lifting_oracle(v: Module, pool=()) -> bool:
    """Projectivity by lifting through canonical (unreduced) free covers.

    Every epi in the family must make ``Hom(v, -)`` surjective; the family
    contains the canonical cover of ``v`` itself, which makes the test exact.
    """
    epis = [free_cover(v).g] + [free_cover(u).g for u in pool]
    return all(_postcompose_surjective(v, g) for g in epis)


def extension_oracle(v: Module, pool=()) -> bool:
    """Injectivity by extending along canonical embeddings into duals of free modules."""
    monos = [_canonical_coembedding(v)] + [_canonical_coembedding(u) for u in pool]
    return all(_precompose_surjective(v, f) for f in monos)


def _canonical_coembedding(v: Module) -> ModuleHom:
    cover = free_cover(dual(v)).g
    return ModuleHom(v, dual(cover.source), cover.matrix.T, check=False)


def _postcompose_surjective(v: Module, g: ModuleHom) -> bool:
    src = hom_space(v, g.source)
    tgt = hom_space(v, g.target)
    if tgt.dim == 0:
        return True
    rows = [tgt.coords(la.mul(v.p, g.matrix, h)) for h in src.matrices()]
    return bool(rows) and la.rank(np.array(rows), v.p) == tgt.dim


def _precompose_surjective(v: Module, f: ModuleHom) -> bool:
    src = hom_space(f.target, v)
    tgt = hom_space(f.source, v)
    if tgt.dim == 0:
        return True
    rows = [tgt.coords(la.mul(v.p, h, f.matrix)) for h in src.matrices()]
    return bool(rows) and la.rank(np.array(rows), v.p) == tgt.dim


def enumerate_reps(ctx: TriangularContext, xs, ys, budget: int = 2**12):
    """Every ``[X;Y]_phi`` with ``X`` in ``xs``, ``Y`` in ``ys``."""
    out = []
    for x in xs:
        for y in ys:
            hs = hom_space(ctx.tensor(y).module, x)
            for mat in hs.all_elements(budget):
                out.append(TripleRep(ctx, x, y, mat, check=False))
    return out


def enumerate_rephs(ctx: TriangularContext, xs, ys, budget: int = 2**12):
    out = []
    for x in xs:
        for y in ys:
            hs = hom_space(y, ctx.hom(x).module)
            for mat in hs.all_elements(budget):
                out.append(TripleRepH(ctx, x, y, mat, check=False))
    return out
