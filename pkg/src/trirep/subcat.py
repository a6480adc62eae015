"""Finite subcategory inventories and the exact categories built from them.

A :class:`SubcategorySpec` lists modules up to a dimension cap.  In
``all-up-to-cap`` mode the listed modules are the indecomposables and the
subcategory is the whole module category; objects are their direct sums up
to the cap.  In ``explicit-list`` mode the listed modules (plus zero) are
the objects themselves.

:class:`ModuleCategory`, :class:`ECategory` (triples ``(X,Y)_varphi`` with
``varphi`` onto and kernel in the second subcategory) and
:class:`MCategory` (triples ``[X;Y]_phi`` with ``phi`` injective and
cokernel in the first subcategory) share the :class:`ExactCategory`
interface: conflations, relative projectivity/injectivity by lifting,
approximation covers and hulls.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import (
    DEFAULT_BUDGET,
    Algebra,
    Module,
    ModuleHom,
    ShortExactSeq,
    direct_sum,
    dual,
    enumerate_summands,
    ext1,
    ext_group,
    fingerprint,
    hom_space,
    identity_hom,
    is_indecomposable,
    is_isomorphic,
    kernel_cokernel,
    regular_module,
    zero_module,
)
from .bimodule import tor_dim
from .diagrams import pullback, pushout
from .errors import BudgetExceeded, MalformedInputError, OutOfCap
from .rep import TriangularContext, TripleRep, TripleRepH
from .verdict import FAIL, OUT_OF_CAP, PASS, REFUSED, Check, combine, from_bool

MODES = ("explicit-list", "all-up-to-cap")


# --------------------------------------------------------------------------
# inventories


class SubcategorySpec:
    def __init__(self, algebra: Algebra, members, dim_cap: int, mode: str = "explicit-list", name: str = ""):
        if mode not in MODES:
            raise MalformedInputError(f"unknown subcategory mode {mode!r}")
        for m in members:
            if m.algebra != algebra:
                raise MalformedInputError(f"member {m.name!r} is over a different algebra")
        self.algebra = algebra
        self.members = tuple(m for m in members if m.dim)
        self.dim_cap = dim_cap
        self.mode = mode
        self.name = name

    def __repr__(self) -> str:
        return f"SubcategorySpec({self.name or '?'}, {self.mode}, cap={self.dim_cap}, {len(self.members)} members)"

    @property
    def is_all(self) -> bool:
        return self.mode == "all-up-to-cap"

    @cached_property
    def objects(self) -> tuple[Module, ...]:
        zero = zero_module(self.algebra)
        if not self.is_all:
            return (zero,) + tuple(m for m in self.members if m.dim <= self.dim_cap)
        out = [zero]
        inds = sorted(self.members, key=lambda m: m.dim)
        for size in range(1, self.dim_cap + 1):
            for combo in itertools.combinations_with_replacement(range(len(inds)), size):
                total = sum(inds[i].dim for i in combo)
                if total > self.dim_cap:
                    continue
                parts = [inds[i] for i in combo]
                out.append(parts[0] if len(parts) == 1 else direct_sum(*parts, name="+".join(p.name or "?" for p in parts)))
        out.sort(key=lambda m: m.dim)
        return tuple(out)

    def contains(self, x: Module, budget: int = DEFAULT_BUDGET) -> bool | None:
        """Membership; None when ``x`` exceeds the cap of an explicit list."""
        if x.algebra != self.algebra:
            raise MalformedInputError("membership test across algebras")
        if x.dim == 0 or self.is_all:
            return True
        if x.dim > self.dim_cap:
            return None
        fp = fingerprint(x)
        for m in self.objects:
            if m.dim == x.dim and fingerprint(m) == fp and is_isomorphic(x, m, budget):
                return True
        return False


def indecomposable_projectives(a: Algebra, budget: int = DEFAULT_BUDGET) -> list[Module]:
    return [m for m in enumerate_summands(regular_module(a), budget) if m.dim and is_indecomposable(m, budget)]


def indecomposable_injectives(a: Algebra, budget: int = DEFAULT_BUDGET) -> list[Module]:
    return [dual(m) for m in indecomposable_projectives(a.opposite, budget)]


def _hom_elements(u: Module, v: Module, budget: int):
    hs = hom_space(u, v)
    if u.p**hs.dim > budget:
        raise BudgetExceeded(f"Hom({u.name},{v.name}) has {u.p}^{hs.dim} elements")
    return hs.all_elements(budget)


def check_closure(spec: SubcategorySpec, kind: str, budget: int = DEFAULT_BUDGET) -> Check:
    """One closure property of an inventory, with a witness on failure."""
    name = f"closure:{kind}"
    a = spec.algebra
    if spec.is_all and kind != "contains-injectives" and kind != "contains-projectives":
        return Check(name, PASS, notes=[f"{spec.name}: every module is a member"])
    notes: list[str] = []

    def verdict(obj: Module, what: str):
        got = spec.contains(obj, budget)
        if got is None:
            notes.append(f"{what} has dim {obj.dim} > cap {spec.dim_cap}")
        return got

    try:
        if kind == "contains-injectives" or kind == "contains-projectives":
            mods = indecomposable_injectives(a, budget) if kind == "contains-injectives" else indecomposable_projectives(a, budget)
            for m in mods:
                if verdict(m, f"indecomposable {kind[9:-1]} of dim {m.dim}") is False:
                    return Check(name, FAIL, {"missing": f"{kind[9:-1]} module of dim {m.dim}"}, notes)
        elif kind == "extensions":
            objs = spec.objects
            for z, x in itertools.product(objs, objs):
                if not z.dim or not x.dim:
                    continue
                e = ext1(z, x)
                for c in e.classes(budget):
                    mid = e.realize(c).middle
                    if verdict(mid, "extension middle") is False:
                        return Check(name, FAIL, {"left": x.name, "right": z.name, "class": c.tolist(), "middle_dim": mid.dim}, notes)
        elif kind == "summands":
            for x in spec.objects:
                for s in enumerate_summands(x, budget):
                    if verdict(s, "summand") is False:
                        return Check(name, FAIL, {"object": x.name, "summand_dim": s.dim}, notes)
        elif kind in ("coker-of-mono", "ker-of-epi"):
            objs = spec.objects
            for u, v in itertools.product(objs, objs):
                if not u.dim or not v.dim or u.dim == v.dim:
                    continue
                if kind == "coker-of-mono" and u.dim > v.dim or kind == "ker-of-epi" and u.dim < v.dim:
                    continue
                for mat in _hom_elements(u, v, budget):
                    h = ModuleHom(u, v, mat, check=False)
                    if kind == "coker-of-mono" and h.is_mono():
                        res = kernel_cokernel(h).cokernel
                    elif kind == "ker-of-epi" and h.is_epi():
                        res = kernel_cokernel(h).kernel
                    else:
                        continue
                    if verdict(res, kind.split("-")[0]) is False:
                        return Check(name, FAIL, {"source": u.name, "target": v.name, "map": mat.tolist(), "result_dim": res.dim}, notes)
        else:
            raise MalformedInputError(f"unknown closure kind {kind!r}")
    except BudgetExceeded as exc:
        return Check(name, OUT_OF_CAP, notes=notes + [f"budget: {exc}"])
    return Check(name, PASS, notes=notes)


def is_coresolving(spec: SubcategorySpec, budget: int = DEFAULT_BUDGET) -> Check:
    kinds = ["contains-injectives", "extensions", "summands", "coker-of-mono"]
    return combine(f"co-resolving:{spec.name}", [check_closure(spec, k, budget) for k in kinds])


def is_resolving(spec: SubcategorySpec, budget: int = DEFAULT_BUDGET) -> Check:
    kinds = ["contains-projectives", "extensions", "summands", "ker-of-epi"]
    return combine(f"resolving:{spec.name}", [check_closure(spec, k, budget) for k in kinds])


# --------------------------------------------------------------------------
# exact categories


def _postcompose_surjective(v: Module, g: ModuleHom) -> bool:
    tgt = hom_space(v, g.target)
    if tgt.dim == 0:
        return True
    src = hom_space(v, g.source)
    if src.dim == 0:
        return False
    rows = (np.einsum("ab,kbc->kac", g.matrix, src.matrices()) % v.p).reshape(src.dim, -1)[:, list(tgt.free)]
    return la.rank(rows, v.p) == tgt.dim


def _precompose_surjective(v: Module, f: ModuleHom) -> bool:
    tgt = hom_space(f.source, v)
    if tgt.dim == 0:
        return True
    src = hom_space(f.target, v)
    if src.dim == 0:
        return False
    rows = (np.einsum("kab,bc->kac", src.matrices(), f.matrix) % v.p).reshape(src.dim, -1)[:, list(tgt.free)]
    return la.rank(rows, v.p) == tgt.dim


class ExactCategory:
    """Shared machinery; subclasses provide ``objects`` and ``contains``."""

    name = ""
    algebra: Algebra
    budget = DEFAULT_BUDGET

    objects: tuple[Module, ...]

    def contains(self, v: Module) -> bool | None:  # pragma: no cover - abstract
        raise NotImplementedError

    def normalize(self, v: Module) -> tuple[Module, ModuleHom]:
        return v, identity_hom(v)

    def label(self, v: Module) -> str:
        return v.name or f"<dim {v.dim}>"

    def normalize_ses(self, s: ShortExactSeq) -> ShortExactSeq:
        """Same sequence with its middle term normalized."""
        mid, iso = self.normalize(s.middle)
        if mid is s.middle:
            return s
        p = self.algebra.p
        inv = la.inverse(iso.matrix, p) if mid.dim else iso.matrix
        f = ModuleHom(s.left, mid, la.mul(p, iso.matrix, s.f.matrix) if mid.dim else s.f.matrix, check=False)
        g = ModuleHom(mid, s.right, la.mul(p, s.g.matrix, inv) if mid.dim else s.g.matrix, check=False)
        return ShortExactSeq(f, g, check=False)

    @cached_property
    def indecomposables(self) -> tuple[Module, ...]:
        return tuple(v for v in self.objects if is_indecomposable(v, self.budget))

    def basis_only(self) -> bool:
        return True

    @cached_property
    def extension_scan(self) -> list[tuple[ShortExactSeq, bool | None]]:
        """Every extension class between indecomposables with middle membership."""
        out = []
        inds = self.indecomposables
        for z, x in itertools.product(inds, inds):
            e = ext1(z, x)
            for c in e.classes(self.budget):
                if not c.any():
                    continue
                ses = self.normalize_ses(e.realize(c))
                out.append((ses, self.contains(ses.middle)))
        return out

    @cached_property
    def extension_closed(self) -> bool | None:
        flags = [ok for _, ok in self.extension_scan]
        if False in flags:
            return False
        return None if None in flags else True

    @cached_property
    def conflations(self) -> tuple[ShortExactSeq, ...]:
        """Non-split conflations used by the lifting tests.

        Basis extension classes between indecomposables suffice when the
        category is closed under extensions; otherwise every class whose
        middle is a member is used.
        """
        if self.basis_only() and self.extension_closed is not False:
            out = []
            inds = self.indecomposables
            for z, x in itertools.product(inds, inds):
                e = ext1(z, x)
                for i in range(e.dim):
                    out.append(self.normalize_ses(e.realize(np.eye(e.dim, dtype=np.int64)[i])))
            return tuple(out)
        return tuple(ses for ses, ok in self.extension_scan if ok)

    def projective_witness(self, v: Module) -> ShortExactSeq | None:
        for ses in self.conflations:
            if not _postcompose_surjective(v, ses.g):
                return ses
        return None

    def injective_witness(self, v: Module) -> ShortExactSeq | None:
        for ses in self.conflations:
            if not _precompose_surjective(v, ses.f):
                return ses
        return None

    def is_projective(self, v: Module) -> bool:
        """Relative projectivity: ``Hom(v, -)`` is exact on every conflation."""
        return self.projective_witness(v) is None

    def is_injective(self, v: Module) -> bool:
        return self.injective_witness(v) is None

    @cached_property
    def projectives(self) -> tuple[Module, ...]:
        return tuple(v for v in self.indecomposables if self.is_projective(v))

    @cached_property
    def injectives(self) -> tuple[Module, ...]:
        return tuple(v for v in self.indecomposables if self.is_injective(v))

    def direct_sum(self, mods) -> tuple[Module, list[np.ndarray], list[np.ndarray]]:
        """Sum with inclusion and projection matrices (normalized)."""
        mods = list(mods)
        if not mods:
            return zero_module(self.algebra), [], []
        s = direct_sum(*mods) if len(mods) > 1 else mods[0]
        s2, iso = self.normalize(s)
        incs, projs = [], []
        off = 0
        n = s.dim
        inv = la.inverse(iso.matrix, self.algebra.p) if n else iso.matrix
        for m in mods:
            e = np.zeros((n, m.dim), dtype=np.int64)
            e[off : off + m.dim] = np.eye(m.dim, dtype=np.int64)
            incs.append(la.mul(self.algebra.p, iso.matrix, e) if n else e)
            projs.append(la.mul(self.algebra.p, e.T, inv) if n else e.T)
            off += m.dim
        return s2, incs, projs

    def _approximation(self, v: Module, pool, towards: bool) -> ModuleHom | None:
        """Greedy map from (towards) sums of ``pool`` objects onto (into) ``v``."""
        p = self.algebra.p
        chosen: list[tuple[Module, np.ndarray]] = []
        current = la.zeros(v.dim, 0) if towards else la.zeros(0, v.dim)
        target_rank = v.dim
        for z in pool:
            hs = hom_space(z, v) if towards else hom_space(v, z)
            for mat in hs.matrices():
                trial = np.hstack([current, mat]) if towards else np.vstack([current, mat])
                if la.rank(trial, p) > (la.rank(current, p) if current.size else 0):
                    chosen.append((z, mat))
                    current = trial
                    if la.rank(current, p) == target_rank:
                        break
            if current.size and la.rank(current, p) == target_rank:
                break
        if v.dim and (not current.size or la.rank(current, p) < target_rank):
            return None
        s, incs, projs = self.direct_sum([z for z, _ in chosen])
        if towards:
            mat = sum((la.mul(p, m, pr) for (_, m), pr in zip(chosen, projs)), la.zeros(v.dim, s.dim)) % p
            return ModuleHom(s, v, mat)
        mat = sum((la.mul(p, inc, m) for (_, m), inc in zip(chosen, incs)), la.zeros(s.dim, v.dim)) % p
        return ModuleHom(v, s, mat)

    def deflation_cover(self, v: Module) -> ModuleHom | None:
        """Epi onto ``v`` from a sum of indecomposable projectives (greedy)."""
        return self._approximation(v, self.projectives, True)

    def inflation_hull(self, v: Module) -> ModuleHom | None:
        """Mono from ``v`` into a sum of indecomposable injectives (greedy)."""
        return self._approximation(v, self.injectives, False)

    def full_inflation(self, v: Module) -> ModuleHom | None:
        """Mono into the sum of ``z^{dim Hom(v,z)}`` over all injectives (every basis map)."""
        p = self.algebra.p
        pieces = [(z, mat) for z in self.injectives for mat in hom_space(v, z).matrices()]
        s, incs, _ = self.direct_sum([z for z, _ in pieces])
        mat = sum((la.mul(p, inc, m) for (_, m), inc in zip(pieces, incs)), la.zeros(s.dim, v.dim)) % p
        h = ModuleHom(v, s, mat)
        return h if h.is_mono() else None

    def frobenius(self) -> Check:
        """Enough projectives and injectives, and the two classes agree."""
        parts = []
        missing_p = [self.label(v) for v in self.indecomposables if self.deflation_cover(v) is None]
        parts.append(from_bool("enough projectives", not missing_p, {"no cover": missing_p}))
        missing_i = [self.label(v) for v in self.indecomposables if self.inflation_hull(v) is None]
        parts.append(from_bool("enough injectives", not missing_i, {"no hull": missing_i}))
        pi = {self.label(v) for v in self.projectives}
        ii = {self.label(v) for v in self.injectives}
        parts.append(from_bool("projectives = injectives", pi == ii, {"projective only": sorted(pi - ii), "injective only": sorted(ii - pi)}))
        return combine(f"frobenius:{self.name}", parts, projectives=sorted(pi), injectives=sorted(ii))


class ModuleCategory(ExactCategory):
    def __init__(self, spec: SubcategorySpec, budget: int = DEFAULT_BUDGET):
        self.spec = spec
        self.algebra = spec.algebra
        self.name = spec.name
        self.budget = budget

    def __repr__(self) -> str:
        return f"ModuleCategory({self.name})"

    @cached_property
    def objects(self) -> tuple[Module, ...]:
        return self.spec.objects

    @cached_property
    def indecomposables(self) -> tuple[Module, ...]:
        if self.spec.is_all:
            return self.spec.members
        return super().indecomposables

    def contains(self, v: Module) -> bool | None:
        return self.spec.contains(v, self.budget)

    def basis_only(self) -> bool:
        return self.spec.is_all

    @cached_property
    def extension_scan(self):
        if self.spec.is_all:
            return []
        return super().extension_scan


# --------------------------------------------------------------------------
# triples


def _dedupe(mods: list[Module], budget: int) -> list[int]:
    keep: list[int] = []
    buckets: dict[tuple, list[int]] = {}
    for i, v in enumerate(mods):
        key = fingerprint(v)
        bucket = buckets.setdefault(key, [])
        if any(is_isomorphic(v, mods[j], budget) for j in bucket):
            continue
        bucket.append(i)
        keep.append(i)
    return keep


def _class_code(c: np.ndarray) -> str:
    return "".join(str(int(v)) for v in c) or "-"


class TripleCategory(ExactCategory):
    ctx: TriangularContext
    xcat: ModuleCategory
    ycat: ModuleCategory
    cap: int

    def normalize(self, v: Module) -> tuple[Module, ModuleHom]:
        return self.ctx.align(v)

    def label(self, v: Module) -> str:
        return v.name or f"<{self.ctx.split(v)}>"

    @cached_property
    def ext_vanishing(self) -> Check:
        """``Ext^1_A(M, X) = 0`` for every object of the first inventory."""
        mm = self.ctx.bimodule.as_left_module
        bad = [x.name for x in self.xcat.objects if x.dim and ext_group(mm, x, 1)]
        return from_bool("Ext^1_A(M,X)=0", not bad, {"nonvanishing": bad})

    @cached_property
    def tor_vanishing(self) -> Check:
        bad = [y.name for y in self.ycat.objects if y.dim and tor_dim(self.ctx.bimodule, y, 1)]
        return from_bool("Tor_1^B(M,Y)=0", not bad, {"nonvanishing": bad})

    def extension_check(self) -> Check:
        """Every enumerated extension of members has a member middle."""
        bad = [(self.label(s.left), self.label(s.right)) for s, ok in self.extension_scan if ok is False]
        unknown = sum(1 for _, ok in self.extension_scan if ok is None)
        c = from_bool("closed under extensions", not bad, {"left": bad[0][0], "right": bad[0][1]} if bad else None, checked=len(self.extension_scan))
        if unknown:
            c.notes.append(f"{unknown} middles beyond the cap")
        return c


class ECategory(TripleCategory):
    """Triples ``(X,Y)_varphi`` with ``X`` in ``xcat``, ``varphi`` onto, ``Ker varphi`` in ``ycat``."""

    def __init__(self, ctx: TriangularContext, xcat: ModuleCategory, ycat: ModuleCategory, cap: int, name: str = "E", budget: int = DEFAULT_BUDGET):
        self.ctx, self.xcat, self.ycat, self.cap = ctx, xcat, ycat, cap
        self.algebra = ctx.Lambda
        self.name = name
        self.budget = budget

    def __repr__(self) -> str:
        return f"ECategory({self.name}, cap={self.cap})"

    def triple(self, v: Module) -> TripleRepH:
        return self.ctx.reph_from_lambda(v)

    def membership(self, t: TripleRepH) -> Check:
        vphi = t.structure_map
        clauses = [
            from_bool("X in X-inventory", self.xcat.contains(t.x)),
            from_bool("varphi surjective", vphi.is_epi()),
            from_bool("Ker(varphi) in Y-inventory", self.ycat.contains(kernel_cokernel(vphi).kernel)),
        ]
        return combine("E-membership", clauses)

    def contains(self, v: Module) -> bool | None:
        w, _ = self.normalize(v)
        c = self.membership(self.triple(w))
        return None if c.status == OUT_OF_CAP else c.passed

    @cached_property
    def objects(self) -> tuple[Module, ...]:
        ctx = self.ctx
        mods: list[Module] = []
        for x in self.xcat.objects:
            h = ctx.hom(x).module
            for k in self.ycat.objects:
                if x.dim + h.dim + k.dim > self.cap:
                    continue
                e = ext1(h, k)
                for c in e.classes(self.budget):
                    ses = e.realize(c)
                    t = TripleRepH(ctx, x, ses.middle, ses.g.matrix, f"({x.name or 0},{k.name or 0};{_class_code(c)})")
                    mods.append(t.lam)
        keep = _dedupe(mods, self.budget)
        return tuple(mods[i] for i in keep)

    # -- functors ---------------------------------------------------------

    def p_obj(self, x: Module) -> Module:
        hm = self.ctx.hom(x).module
        return TripleRepH(self.ctx, x, hm, la.identity(hm.dim), f"p({x.name})", check=False).lam

    def p_mor(self, f: ModuleHom) -> ModuleHom:
        return ModuleHom(self.p_obj(f.source), self.p_obj(f.target), la.block_diag(f.matrix, self.ctx.hom_map(f).matrix), check=False)

    def q_obj(self, y: Module) -> Module:
        return TripleRepH(self.ctx, zero_module(self.ctx.A), y, la.zeros(0, y.dim), f"q({y.name})", check=False).lam

    def q_mor(self, g: ModuleHom) -> ModuleHom:
        return ModuleHom(self.q_obj(g.source), self.q_obj(g.target), g.matrix, check=False)

    def P_obj(self, v: Module) -> Module:
        return self.ctx.components(v)[0]

    def P_mor(self, h: ModuleHom) -> ModuleHom:
        f, _ = self.ctx.hom_parts(h)
        return ModuleHom(self.P_obj(h.source), self.P_obj(h.target), f, check=False)

    def Q_obj(self, v: Module) -> Module:
        return self.ctx.components(v)[1]

    def Q_mor(self, h: ModuleHom) -> ModuleHom:
        _, g = self.ctx.hom_parts(h)
        return ModuleHom(self.Q_obj(h.source), self.Q_obj(h.target), g, check=False)

    def kernel_part(self, v: Module):
        return kernel_cokernel(self.triple(v).structure_map)

    def Qk_obj(self, v: Module) -> Module:
        return self.kernel_part(v).kernel

    def Qk_mor(self, h: ModuleHom) -> ModuleHom:
        ks, kt = self.kernel_part(h.source), self.kernel_part(h.target)
        _, g = self.ctx.hom_parts(h)
        sol = la.solve(kt.inclusion.matrix, la.mul(h.p, g, ks.inclusion.matrix), h.p)
        return ModuleHom(ks.kernel, kt.kernel, sol, check=False)


class MCategory(TripleCategory):
    """Triples ``[X;Y]_phi`` with ``Y`` in ``ycat``, ``phi`` injective, ``Coker phi`` in ``xcat``."""

    def __init__(self, ctx: TriangularContext, xcat: ModuleCategory, ycat: ModuleCategory, cap: int, name: str = "M", budget: int = DEFAULT_BUDGET):
        self.ctx, self.xcat, self.ycat, self.cap = ctx, xcat, ycat, cap
        self.algebra = ctx.Lambda
        self.name = name
        self.budget = budget

    def __repr__(self) -> str:
        return f"MCategory({self.name}, cap={self.cap})"

    def triple(self, v: Module) -> TripleRep:
        return self.ctx.rep_from_lambda(v)

    def membership(self, t: TripleRep) -> Check:
        phi = t.structure_map
        clauses = [
            from_bool("Y in Y-inventory", self.ycat.contains(t.y)),
            from_bool("phi injective", phi.is_mono()),
            from_bool("Coker(phi) in X-inventory", self.xcat.contains(kernel_cokernel(phi).cokernel)),
        ]
        return combine("M-membership", clauses)

    def contains(self, v: Module) -> bool | None:
        w, _ = self.normalize(v)
        c = self.membership(self.triple(w))
        return None if c.status == OUT_OF_CAP else c.passed

    @cached_property
    def objects(self) -> tuple[Module, ...]:
        ctx = self.ctx
        mods: list[Module] = []
        for y in self.ycat.objects:
            t = ctx.tensor(y).module
            for c in self.xcat.objects:
                if t.dim + c.dim + y.dim > self.cap:
                    continue
                e = ext1(c, t)
                for cl in e.classes(self.budget):
                    ses = e.realize(cl)
                    tr = TripleRep(ctx, ses.middle, y, ses.f.matrix, f"[{c.name or 0};{y.name or 0};{_class_code(cl)}]")
                    mods.append(tr.lam)
        keep = _dedupe(mods, self.budget)
        return tuple(mods[i] for i in keep)

    # -- functors ---------------------------------------------------------

    def pM_obj(self, x: Module) -> Module:
        return TripleRep(self.ctx, x, zero_module(self.ctx.B), la.zeros(x.dim, 0), f"pM({x.name})", check=False).lam

    def pM_mor(self, f: ModuleHom) -> ModuleHom:
        return ModuleHom(self.pM_obj(f.source), self.pM_obj(f.target), f.matrix, check=False)

    def qM_obj(self, y: Module) -> Module:
        t = self.ctx.tensor(y).module
        return TripleRep(self.ctx, t, y, la.identity(t.dim), f"qM({y.name})", check=False).lam

    def qM_mor(self, g: ModuleHom) -> ModuleHom:
        return ModuleHom(self.qM_obj(g.source), self.qM_obj(g.target), la.block_diag(self.ctx.tensor_map(g).matrix, g.matrix), check=False)

    def P_obj(self, v: Module) -> Module:
        return self.ctx.components(v)[0]

    def P_mor(self, h: ModuleHom) -> ModuleHom:
        f, _ = self.ctx.hom_parts(h)
        return ModuleHom(self.P_obj(h.source), self.P_obj(h.target), f, check=False)

    def Q_obj(self, v: Module) -> Module:
        return self.ctx.components(v)[1]

    def Q_mor(self, h: ModuleHom) -> ModuleHom:
        _, g = self.ctx.hom_parts(h)
        return ModuleHom(self.Q_obj(h.source), self.Q_obj(h.target), g, check=False)

    def coker_part(self, v: Module):
        return kernel_cokernel(self.triple(v).structure_map)

    def Pc_obj(self, v: Module) -> Module:
        return self.coker_part(v).cokernel

    def Pc_mor(self, h: ModuleHom) -> ModuleHom:
        cs, ct = self.coker_part(h.source), self.coker_part(h.target)
        f, _ = self.ctx.hom_parts(h)
        mat = la.mul(h.p, ct.projection.matrix, f, cs.coker_section) if cs.cokernel.dim and ct.cokernel.dim else la.zeros(ct.cokernel.dim, cs.cokernel.dim)
        return ModuleHom(cs.cokernel, ct.cokernel, mat, check=False)


# --------------------------------------------------------------------------
# criteria on triple categories


def hom_inclusion(ecat: ECategory) -> Check:
    """``Hom_A(M, X)`` lies in the second inventory for every first-inventory object."""
    res = [ecat.ycat.contains(ecat.ctx.hom(x).module) for x in ecat.xcat.objects]
    bad = [x.name for x, r in zip(ecat.xcat.objects, res) if r is False]
    c = from_bool("Hom_A(M,X) in Y", None if (not bad and None in res) else not bad, {"object": bad[0]} if bad else None)
    return c


def tensor_inclusion(mcat: MCategory) -> Check:
    res = [mcat.xcat.contains(mcat.ctx.tensor(y).module) for y in mcat.ycat.objects]
    bad = [y.name for y, r in zip(mcat.ycat.objects, res) if r is False]
    return from_bool("M(x)Y in X", None if (not bad and None in res) else not bad, {"object": bad[0]} if bad else None)


def enough_injectives(cat: ExactCategory) -> bool:
    return all(cat.inflation_hull(v) is not None for v in cat.indecomposables)


def enough_projectives(cat: ExactCategory) -> bool:
    return all(cat.deflation_cover(v) is not None for v in cat.indecomposables)


def coresolving_report(ecat: ECategory) -> Check:
    """Both inventories co-resolving and ``Ext^1_A(M, X) = 0``."""
    parts = [is_coresolving(ecat.xcat.spec, ecat.budget), is_coresolving(ecat.ycat.spec, ecat.budget), ecat.ext_vanishing]
    return combine("co-resolving criterion", parts)


def resolving_report(mcat: MCategory) -> Check:
    parts = [is_resolving(mcat.xcat.spec, mcat.budget), is_resolving(mcat.ycat.spec, mcat.budget), mcat.tor_vanishing]
    return combine("resolving criterion", parts)


def _closure_on_triples(cat: TripleCategory, cokernels: bool) -> Check:
    """Cokernels of monos (kernels of epis) between inventory objects stay inside."""
    name = "cokernels of monos" if cokernels else "kernels of epis"
    objs = cat.objects
    notes: list[str] = []
    for u, v in itertools.product(objs, objs):
        if not u.dim or not v.dim or u.dim == v.dim:
            continue
        if (u.dim > v.dim) == cokernels:
            continue
        try:
            mats = _hom_elements(u, v, cat.budget)
        except BudgetExceeded as exc:
            notes.append(str(exc))
            continue
        for mat in mats:
            h = ModuleHom(u, v, mat, check=False)
            if cokernels and h.is_mono():
                res = kernel_cokernel(h).cokernel
            elif not cokernels and h.is_epi():
                res = kernel_cokernel(h).kernel
            else:
                continue
            ok = cat.contains(res)
            if ok is False:
                return Check(name, FAIL, {"source": cat.label(u), "target": cat.label(v), "map": mat.tolist()}, notes)
    return Check(name, PASS, notes=notes)


def _contains_all(cat: TripleCategory, mods, what: str) -> Check:
    bad = []
    for m in mods:
        w, _ = cat.normalize(m)
        if cat.contains(w) is False:
            bad.append(cat.ctx.split(w))
    return from_bool(f"contains all {what}", not bad, {"missing dims": [list(b) for b in bad]} if bad else None)


def direct_coresolving(ecat: ECategory) -> Check:
    """Co-resolving tested on the triple side (injectives, extensions, cokernels of monos)."""
    inj = indecomposable_injectives(ecat.ctx.Lambda, ecat.budget)
    parts = [
        _contains_all(ecat, inj, "injective triples"),
        ecat.extension_check(),
        _closure_on_triples(ecat, cokernels=True),
    ]
    return combine("co-resolving on triples", parts)


def direct_resolving(mcat: MCategory) -> Check:
    proj = indecomposable_projectives(mcat.ctx.Lambda, mcat.budget)
    parts = [
        _contains_all(mcat, proj, "projective triples"),
        mcat.extension_check(),
        _closure_on_triples(mcat, cokernels=False),
    ]
    return combine("resolving on triples", parts)


def check_condition_star(ecat: ECategory) -> Check:
    """Short exact sequences of the first inventory stay exact after ``Hom_A(M, -)``."""
    automatic = ecat.ext_vanishing.passed
    ctx = ecat.ctx
    checked = 0
    for ses in ecat.xcat.conflations:
        checked += 1
        hg = ctx.hom_map(ses.g)
        if not hg.is_epi():
            return Check("condition (*)", FAIL, {"left": ses.left.name, "middle_dim": ses.middle.dim, "right": ses.right.name}, details={"automatic": automatic, "checked": checked})
    return Check("condition (*)", PASS, notes=["holds automatically: Ext^1_A(M,X)=0"] if automatic else [], details={"automatic": automatic, "checked": checked})


def e_classify_projective(ecat: ECategory, v: Module) -> Check:
    """Projectivity in E from its components, compared with direct lifting in E."""
    t = ecat.triple(v)
    hyp = [ecat.ext_vanishing, ecat.extension_check()]
    alt = hom_inclusion(ecat)
    if not alt.passed and enough_injectives(ecat.ycat):
        alt = Check("Y has enough injectives", PASS)
    hyp.append(alt)
    oracle = ecat.is_projective(v)
    if not all(h.passed for h in hyp):
        missing = [h.name for h in hyp if not h.passed]
        return Check("E-projective", REFUSED, {"missing hypothesis": missing}, details={"oracle": oracle})
    x_proj = ecat.xcat.is_projective(t.x)
    y_proj = ecat.ycat.is_projective(t.y)
    verdict = x_proj and y_proj
    status = PASS if verdict == oracle else FAIL
    return Check("E-projective", status, None if status == PASS else {"criterion": verdict, "oracle": oracle},
                 details={"verdict": verdict, "X projective in X-inventory": x_proj, "Y relatively projective": y_proj, "oracle": oracle})


def m_classify_injective(mcat: MCategory, v: Module) -> Check:
    t = mcat.triple(v)
    hyp = [mcat.tor_vanishing, mcat.extension_check()]
    alt = tensor_inclusion(mcat)
    if not alt.passed and enough_projectives(mcat.xcat):
        alt = Check("X has enough projectives", PASS)
    hyp.append(alt)
    oracle = mcat.is_injective(v)
    if not all(h.passed for h in hyp):
        missing = [h.name for h in hyp if not h.passed]
        return Check("M-injective", REFUSED, {"missing hypothesis": missing}, details={"oracle": oracle})
    x_inj = mcat.xcat.is_injective(t.x)
    y_inj = mcat.ycat.is_injective(t.y)
    verdict = x_inj and y_inj
    status = PASS if verdict == oracle else FAIL
    return Check("M-injective", status, None if status == PASS else {"criterion": verdict, "oracle": oracle},
                 details={"verdict": verdict, "X injective in X-inventory": x_inj, "Y relatively injective": y_inj, "oracle": oracle})


@dataclass
class CoverResult:
    inflation: ModuleHom  # kernel -> middle
    deflation: ModuleHom  # middle -> object
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def enough_projectives_cover(ecat: ECategory, v: Module) -> CoverResult:
    """Projective cover of an E-object via a pullback along ``Hom_A(M, alpha)``."""
    ctx, p = ecat.ctx, ecat.ctx.p
    v, _ = ecat.normalize(v)
    t = ecat.triple(v)
    alpha = ecat.xcat.deflation_cover(t.x)
    if alpha is None:
        raise OutOfCap(f"no projective cover of {t.x.name} in the first inventory")
    h_alpha = ctx.hom_map(alpha)
    sq = pullback(h_alpha, t.structure_map)  # apex T with a: T -> Y, f: T -> Hom(M,P)
    e = ecat.ycat.deflation_cover(sq.a.source)
    if e is None:
        raise OutOfCap("no projective cover of the pullback in the second inventory")
    top = TripleRepH(ctx, alpha.source, e.source, (sq.f @ e).matrix, f"cover({v.name})")
    mid = top.lam
    defl = ModuleHom(mid, v, la.block_diag(alpha.matrix, (sq.a @ e).matrix))
    kc = kernel_cokernel(defl)
    kmod, iso = ecat.normalize(kc.kernel)
    infl = ModuleHom(kmod, mid, la.mul(p, kc.inclusion.matrix, la.inverse(iso.matrix, p)) if kmod.dim else la.zeros(mid.dim, 0), check=False)
    checks = [
        from_bool("pullback lies in Y-inventory", ecat.ycat.contains(sq.a.source)),
        from_bool("deflation surjective", defl.is_epi()),
        from_bool("middle in E", ecat.contains(mid)),
        from_bool("middle projective in E", ecat.is_projective(mid)),
        from_bool("kernel in E", ecat.contains(kmod)),
    ]
    return CoverResult(infl, defl, checks)


def enough_injectives_hull(mcat: MCategory, v: Module) -> CoverResult:
    """Injective hull of an M-object via a pushout along ``M (x) iota``."""
    ctx, p = mcat.ctx, mcat.ctx.p
    v, _ = mcat.normalize(v)
    t = mcat.triple(v)
    iota = mcat.ycat.inflation_hull(t.y)
    if iota is None:
        raise OutOfCap(f"no injective hull of {t.y.name} in the second inventory")
    m_iota = ctx.tensor_map(iota)
    sq = pushout(t.structure_map, m_iota)  # g: X -> D, b: M(x)I -> D
    j = mcat.xcat.inflation_hull(sq.corner)
    if j is None:
        raise OutOfCap("no injective hull of the pushout in the first inventory")
    top = TripleRep(ctx, j.target, iota.target, (j @ sq.b).matrix, f"hull({v.name})")
    mid = top.lam
    infl = ModuleHom(v, mid, la.block_diag((j @ sq.g).matrix, iota.matrix))
    kc = kernel_cokernel(infl)
    cmod, iso = mcat.normalize(kc.cokernel)
    defl = ModuleHom(mid, cmod, la.mul(p, iso.matrix, kc.projection.matrix) if cmod.dim else la.zeros(0, mid.dim), check=False)
    checks = [
        from_bool("pushout lies in X-inventory", mcat.xcat.contains(sq.corner)),
        from_bool("inflation injective", infl.is_mono()),
        from_bool("middle in M", mcat.contains(mid)),
        from_bool("middle injective in M", mcat.is_injective(mid)),
        from_bool("cokernel in M", mcat.contains(cmod)),
    ]
    return CoverResult(infl, defl, checks)


def frobenius_check(ecat: ECategory) -> Check:
    """Three equivalent Frobenius statements for E, each evaluated directly."""
    hyp = [hom_inclusion(ecat), coresolving_report(ecat)]
    if not all(h.passed for h in hyp):
        return Check("frobenius (E)", REFUSED, {"missing hypothesis": [h.name for h in hyp if not h.passed]})
    xf, yf, ef = ecat.xcat.frobenius(), ecat.ycat.frobenius(), ecat.frobenius()
    hom = ecat.ctx.hom
    inj_ok = all(ecat.ycat.is_injective(hom(x).module) for x in ecat.xcat.injectives)
    proj_ok = all(ecat.ycat.is_projective(hom(x).module) for x in ecat.xcat.projectives)
    s1 = ef.passed
    s2 = xf.passed and yf.passed and inj_ok
    s3 = xf.passed and yf.passed and proj_ok
    agree = s1 == s2 == s3
    details = {"(1)": s1, "(2)": s2, "(3)": s3, "X": xf.to_json(), "Y": yf.to_json(), "E": ef.to_json(),
               "Hom(M,I(X)) in I(Y)": inj_ok, "Hom(M,P(X)) in P(Y)": proj_ok}
    if not agree:
        return Check("frobenius (E)", FAIL, {"statements disagree": [s1, s2, s3]}, details=details)
    return Check("frobenius (E)", PASS, details=details)


def frobenius_check_m(mcat: MCategory) -> Check:
    hyp = [tensor_inclusion(mcat), resolving_report(mcat)]
    if not all(h.passed for h in hyp):
        return Check("frobenius (M)", REFUSED, {"missing hypothesis": [h.name for h in hyp if not h.passed]})
    xf, yf, mf = mcat.xcat.frobenius(), mcat.ycat.frobenius(), mcat.frobenius()
    ten = mcat.ctx.tensor
    inj_ok = all(mcat.xcat.is_injective(ten(y).module) for y in mcat.ycat.injectives)
    proj_ok = all(mcat.xcat.is_projective(ten(y).module) for y in mcat.ycat.projectives)
    s1 = mf.passed
    s2 = xf.passed and yf.passed and inj_ok
    s3 = xf.passed and yf.passed and proj_ok
    details = {"(1)": s1, "(2)": s2, "(3)": s3, "X": xf.to_json(), "Y": yf.to_json(), "M": mf.to_json(),
               "M(x)I(Y) in I(X)": inj_ok, "M(x)P(Y) in P(X)": proj_ok}
    if not s1 == s2 == s3:
        return Check("frobenius (M)", FAIL, {"statements disagree": [s1, s2, s3]}, details=details)
    return Check("frobenius (M)", PASS, details=details)


def is_frobenius(report: Check) -> bool | None:
    """Read the common verdict off a passing Frobenius report."""
    if report.status != PASS:
        return None
    return bool(report.details["(1)"])
