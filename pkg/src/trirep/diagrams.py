"""Pushouts, pullbacks, the snake lemma, split tests and standard triangles.

Squares are written

    A --f--> B
    |a       |b
    v        v
    C --g--> D

with ``b f = g a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg as la
from .algebra import (
    Module,
    ModuleHom,
    ShortExactSeq,
    direct_sum,
    factor_through_epi,
    hom_space,
    identity_hom,
    is_exact_at,
    is_injective,
    kernel_cokernel,
    pushout_of,
    submodule,
    zero_hom,
)
from .errors import MalformedInputError, ValidationError


@dataclass(frozen=True, eq=False)
class CommSquare:
    a: ModuleHom  # A -> C
    f: ModuleHom  # A -> B
    b: ModuleHom  # B -> D
    g: ModuleHom  # C -> D

    def __post_init__(self) -> None:
        if not (self.a.source.dim == self.f.source.dim and self.b.source.dim == self.f.target.dim
                and self.g.source.dim == self.a.target.dim and self.b.target.dim == self.g.target.dim):
            raise MalformedInputError("square maps do not fit together")
        if not (self.b @ self.f).equals(self.g @ self.a):
            raise ValidationError("square does not commute")

    @property
    def corner(self) -> Module:
        return self.b.target


def pushout(a: ModuleHom, f: ModuleHom) -> CommSquare:
    if a.source.dim != f.source.dim:
        raise MalformedInputError("pushout needs a common source")
    _, g, b, _ = pushout_of(a, f)
    return CommSquare(a, f, b, g)


def pullback(b: ModuleHom, g: ModuleHom) -> CommSquare:
    if b.target.dim != g.target.dim:
        raise MalformedInputError("pullback needs a common target")
    p = b.p
    c, bb = g.source, b.source
    summ = direct_sum(c, bb) if c.dim + bb.dim else c
    diff = np.hstack([g.matrix, (-b.matrix) % p])
    sub = la.kernel(diff, p) if summ.dim else la.Subspace.zero(0, p)
    apex, inc = submodule(summ, sub, "pullback")
    a = ModuleHom(apex, c, inc.matrix[: c.dim], check=False)
    f = ModuleHom(apex, bb, inc.matrix[c.dim :], check=False)
    return CommSquare(a, f, b, g)


def _pair_map(sq: CommSquare) -> tuple[ModuleHom, ModuleHom]:
    """``A -> C + B`` by ``(a, -f)`` and ``C + B -> D`` by ``[g, b]``."""
    p = sq.a.p
    mid = direct_sum(sq.a.target, sq.f.target)
    left = ModuleHom(sq.a.source, mid, np.vstack([sq.a.matrix, (-sq.f.matrix) % p]), check=False)
    right = ModuleHom(mid, sq.g.target, np.hstack([sq.g.matrix, sq.b.matrix]), check=False)
    return left, right


def is_pushout(sq: CommSquare) -> bool:
    left, right = _pair_map(sq)
    return right.is_epi() and is_exact_at(left, right)


def is_pullback(sq: CommSquare) -> bool:
    left, right = _pair_map(sq)
    return left.is_mono() and is_exact_at(left, right)


# --------------------------------------------------------------------------
# induced maps on kernels and cokernels


def _ker_map(src_map: ModuleHom, tgt_map: ModuleHom, along: ModuleHom) -> ModuleHom:
    """``Ker src_map -> Ker tgt_map`` induced by ``along``."""
    ks, kt = kernel_cokernel(src_map), kernel_cokernel(tgt_map)
    img = (along @ ks.inclusion).matrix
    sol = la.solve(kt.inclusion.matrix, img, along.p)
    if sol is None:
        raise ValidationError("map does not restrict to the kernels")
    return ModuleHom(ks.kernel, kt.kernel, sol, check=False)


def _coker_map(src_map: ModuleHom, tgt_map: ModuleHom, along: ModuleHom) -> ModuleHom:
    """``Coker src_map -> Coker tgt_map`` induced by ``along``."""
    cs, ct = kernel_cokernel(src_map), kernel_cokernel(tgt_map)
    mat = la.mul(along.p, ct.projection.matrix, along.matrix, cs.coker_section) if cs.cokernel.dim and ct.cokernel.dim else la.zeros(ct.cokernel.dim, cs.cokernel.dim)
    return ModuleHom(cs.cokernel, ct.cokernel, mat, check=False)


@dataclass(frozen=True)
class InducedMaps:
    f_tilde: ModuleHom  # Ker a -> Ker b
    a_tilde: ModuleHom  # Ker f -> Ker g
    g_tilde: ModuleHom  # Coker a -> Coker b
    b_tilde: ModuleHom  # Coker f -> Coker g


def induced_maps(sq: CommSquare) -> InducedMaps:
    return InducedMaps(
        _ker_map(sq.a, sq.b, sq.f),
        _ker_map(sq.f, sq.g, sq.a),
        _coker_map(sq.a, sq.b, sq.g),
        _coker_map(sq.f, sq.g, sq.b),
    )


@dataclass
class SquareReport:
    pushout: bool
    pullback: bool
    lemma_checks: dict = field(default_factory=dict)
    row_shape: str = "none"  # "kernel-row", "cokernel-row" or "none"
    pushout_pullback_confirmed: bool | None = None

    @property
    def ok(self) -> bool:
        return all(self.lemma_checks.values()) and self.pushout_pullback_confirmed is not False


def lemma_checks(sq: CommSquare, ind: InducedMaps | None = None, push: bool | None = None, pull: bool | None = None) -> dict:
    """Every applicable kernel/cokernel conclusion for a pushout or pullback square."""
    ind = ind or induced_maps(sq)
    push = is_pushout(sq) if push is None else push
    pull = is_pullback(sq) if pull is None else pull
    out: dict[str, bool] = {}
    if pull:
        out["pullback: Ker a ~ Ker b"] = ind.f_tilde.is_iso()
        out["pullback: Ker f ~ Ker g"] = ind.a_tilde.is_iso()
        out["pullback: Coker a -> Coker b injective"] = ind.g_tilde.is_mono()
        out["pullback: Coker f -> Coker g injective"] = ind.b_tilde.is_mono()
        out["pullback: also pushout iff a cokernel map is iso"] = push == (ind.g_tilde.is_iso() or ind.b_tilde.is_iso())
    if push:
        out["pushout: Coker a ~ Coker b"] = ind.g_tilde.is_iso()
        out["pushout: Coker f ~ Coker g"] = ind.b_tilde.is_iso()
        out["pushout: Ker a -> Ker b surjective"] = ind.f_tilde.is_epi()
        out["pushout: Ker f -> Ker g surjective"] = ind.a_tilde.is_epi()
        out["pushout: also pullback iff a kernel map is iso"] = pull == (ind.f_tilde.is_iso() or ind.a_tilde.is_iso())
    return out


def verify_pushout_pullback(sq: CommSquare) -> SquareReport:
    """Decide pushout/pullback, run the kernel/cokernel conclusions, and test
    the two exact-row shapes that force a square to be both at once.

    Shape "kernel-row": ``f`` and ``g`` epi with ``Ker f -> Ker g`` iso.
    Shape "cokernel-row": ``f`` and ``g`` mono with ``Coker f -> Coker g`` iso.
    """
    ind = induced_maps(sq)
    push, pull = is_pushout(sq), is_pullback(sq)
    rep = SquareReport(push, pull, lemma_checks(sq, ind, push, pull))
    if sq.f.is_epi() and sq.g.is_epi() and ind.a_tilde.is_iso():
        rep.row_shape = "kernel-row"
    elif sq.f.is_mono() and sq.g.is_mono() and ind.b_tilde.is_iso():
        rep.row_shape = "cokernel-row"
    if rep.row_shape != "none":
        rep.pushout_pullback_confirmed = push and pull
    return rep


def universal_factorization(sq: CommSquare, g2: ModuleHom, b2: ModuleHom) -> ModuleHom | None:
    """For a pushout square, the unique ``u: D -> E`` with ``u g = g2`` and ``u b = b2``."""
    p = sq.a.p
    rhs = np.hstack([g2.matrix, b2.matrix])
    lhs = np.hstack([sq.g.matrix, sq.b.matrix])
    sol = la.solve(lhs.T, rhs.T, p)
    if sol is None:
        return None
    return ModuleHom(sq.corner, g2.target, sol.T)


def universal_lift(sq: CommSquare, a2: ModuleHom, f2: ModuleHom) -> ModuleHom | None:
    """For a pullback square, the unique ``u: E -> A`` with ``a u = a2`` and ``f u = f2``."""
    p = sq.a.p
    lhs = np.vstack([sq.a.matrix, sq.f.matrix])
    rhs = np.vstack([a2.matrix, f2.matrix])
    sol = la.solve(lhs, rhs, p)
    if sol is None:
        return None
    return ModuleHom(a2.source, sq.a.source, sol)


# --------------------------------------------------------------------------
# snake lemma


@dataclass
class SnakeResult:
    delta: ModuleHom
    maps: list  # the five maps Ker a -> Ker b -> Ker c -> Coker a -> Coker b -> Coker c
    exactness: dict

    @property
    def ok(self) -> bool:
        return all(self.exactness.values())


def snake(top: ShortExactSeq, bottom: ShortExactSeq, alpha: ModuleHom, beta: ModuleHom, gamma: ModuleHom) -> SnakeResult:
    """Connecting map ``Ker gamma -> Coker alpha`` and exactness of the six-term sequence."""
    p = alpha.p
    problems = []
    if not (beta @ top.f).equals(bottom.f @ alpha):
        problems.append("left square does not commute")
    if not (gamma @ top.g).equals(bottom.g @ beta):
        problems.append("right square does not commute")
    if problems:
        raise ValidationError("; ".join(problems))
    ka, kc = kernel_cokernel(alpha), kernel_cokernel(gamma)
    # zig-zag: c in Ker gamma -> b with g1 b = c -> beta b = f2 a -> class of a
    c_cols = kc.inclusion.matrix
    b_cols = la.solve(top.g.matrix, c_cols, p) if top.g.matrix.size else la.zeros(top.middle.dim, c_cols.shape[1])
    if b_cols is None:
        raise ValidationError("top row is not surjective")
    moved = la.mul(p, beta.matrix, b_cols) if beta.matrix.size else la.zeros(beta.target.dim, c_cols.shape[1])
    a_cols = la.solve(bottom.f.matrix, moved, p) if bottom.f.matrix.size else la.zeros(bottom.left.dim, c_cols.shape[1])
    if a_cols is None:
        raise ValidationError("bottom row is not exact in the middle")
    d = la.mul(p, ka.projection.matrix, a_cols) if ka.cokernel.dim and a_cols.size else la.zeros(ka.cokernel.dim, kc.kernel.dim)
    delta = ModuleHom(kc.kernel, ka.cokernel, d)
    m1 = _ker_map(alpha, beta, top.f)
    m2 = _ker_map(beta, gamma, top.g)
    m4 = _coker_map(alpha, beta, bottom.f)
    m5 = _coker_map(beta, gamma, bottom.g)
    chain = [m1, m2, delta, m4, m5]
    ex = {
        "Ker alpha": m1.is_mono(),
        "Ker beta": is_exact_at(m1, m2),
        "Ker gamma": is_exact_at(m2, delta),
        "Coker alpha": is_exact_at(delta, m4),
        "Coker beta": is_exact_at(m4, m5),
        "Coker gamma": m5.is_epi(),
    }
    return SnakeResult(delta, chain, ex)


# --------------------------------------------------------------------------
# splitting and standard triangles


def _solve_in_hom(hs, apply: Callable[[np.ndarray], np.ndarray], target: np.ndarray, p: int):
    """Coefficients ``c`` with ``apply(sum c_k h_k) = target`` (``apply`` linear)."""
    if hs.dim == 0:
        return None if target.any() else np.zeros(0, dtype=np.int64)
    cols = np.array([apply(h).reshape(-1) % p for h in hs.matrices()], dtype=np.int64).T
    return la.solve(cols, target.reshape(-1) % p, p)


def is_split(s: ShortExactSeq) -> tuple[bool, ModuleHom | None]:
    """Whether the sequence splits, with a module section of the epi when it does."""
    p = s.g.p
    hs = hom_space(s.right, s.middle)
    c = _solve_in_hom(hs, lambda h: la.mul(p, s.g.matrix, h), la.identity(s.right.dim), p)
    if c is None:
        return False, None
    return True, hs.element(c)


def extend_along(mono: ModuleHom, target_map: ModuleHom) -> ModuleHom | None:
    """``u`` with ``u mono = target_map`` (exists when the target is injective)."""
    p = mono.p
    hs = hom_space(mono.target, target_map.target)
    c = _solve_in_hom(hs, lambda h: la.mul(p, h, mono.matrix), target_map.matrix, p)
    return None if c is None else hs.element(c)


def lift_along(epi: ModuleHom, source_map: ModuleHom) -> ModuleHom | None:
    """``u`` with ``epi u = source_map`` (exists when the source is projective)."""
    p = epi.p
    hs = hom_space(source_map.source, epi.source)
    c = _solve_in_hom(hs, lambda h: la.mul(p, epi.matrix, h), source_map.matrix, p)
    return None if c is None else hs.element(c)


@dataclass(frozen=True, eq=False)
class StandardTriangle:
    xi: ShortExactSeq
    embedding: ModuleHom  # X -> I(X)
    middle: ModuleHom  # Y -> I(X)
    cone: ShortExactSeq  # 0 -> X -> I(X) -> TX -> 0
    h: ModuleHom  # Z -> TX

    def commutes(self) -> bool:
        ok_left = (self.middle @ self.xi.f).equals(self.embedding)
        ok_right = (self.h @ self.xi.g).equals(self.cone.g @ self.middle)
        return ok_left and ok_right and self.cone.f.equals(self.embedding)


def standard_triangle(
    xi: ShortExactSeq,
    emb: ModuleHom,
    injective: Callable[[Module], bool] | None = None,
) -> StandardTriangle:
    """Complete ``xi`` against the embedding ``X -> I(X)``; ``h: Z -> TX``.

    ``injective`` decides whether ``I(X)`` is admissible (defaults to module
    injectivity); in an exact subcategory pass its own injectivity test.
    """
    if emb.source.dim != xi.left.dim or not np.array_equal(emb.source.action, xi.left.action):
        raise MalformedInputError("embedding must start at the first term of the sequence")
    if not emb.is_mono():
        raise ValidationError("embedding is not injective")
    test = injective or is_injective
    if not test(emb.target):
        raise ValidationError("embedding target is not injective")
    u = extend_along(xi.f, emb)
    if u is None:
        raise ValidationError("cannot extend the embedding along the sequence")
    kc = kernel_cokernel(emb)
    cone = ShortExactSeq(emb, kc.projection, check=False)
    h = factor_through_epi(kc.projection @ u, xi.g)
    if h is None:
        raise ValidationError("third map does not factor")
    return StandardTriangle(xi, emb, u, cone, h)


# --------------------------------------------------------------------------
# random generators for property runs


def random_module(algebra, dim: int, rng: np.random.Generator) -> Module:
    """A random module of a given dimension over a field or a truncated polynomial ring.

    For ``F_p[x]/(x^n)`` the generator acts by a random conjugate of a
    random nilpotent Jordan form of index at most ``n``.
    """
    p, d = algebra.p, algebra.dim
    if d == 1:
        return Module(algebra, np.eye(dim, dtype=np.int64).reshape(1, dim, dim))
    sizes = []
    left = dim
    while left:
        s = int(rng.integers(1, min(d, left) + 1))
        sizes.append(s)
        left -= s
    jordan = la.block_diag(*[np.eye(s, k=1, dtype=np.int64) for s in sizes]) if sizes else la.zeros(0, 0)
    while True:
        q = rng.integers(0, p, size=(dim, dim))
        if dim == 0 or la.is_invertible(q, p):
            break
    n = la.mul(p, q, jordan, la.inverse(q, p)) if dim else jordan
    powers = [la.identity(dim)]
    for _ in range(d - 1):
        powers.append(la.mul(p, powers[-1], n) if dim else n)
    return Module(algebra, np.stack(powers))


def random_hom(x: Module, y: Module, rng: np.random.Generator) -> ModuleHom:
    hs = hom_space(x, y)
    return hs.element(rng.integers(0, x.p, size=hs.dim))


def random_ses(algebra, rng: np.random.Generator, max_dim: int = 4) -> ShortExactSeq:
    """``0 -> Im h -> Y -> Y / Im h -> 0`` for a random ``h: U -> Y``."""
    y = random_module(algebra, int(rng.integers(0, max_dim + 1)), rng)
    u = random_module(algebra, int(rng.integers(0, max_dim + 1)), rng)
    h = random_hom(u, y, rng)
    sub = la.image(h.matrix, y.p) if y.dim else la.Subspace.zero(0, y.p)
    k, inc = submodule(y, sub)
    kc = kernel_cokernel(inc)
    return ShortExactSeq(inc, kc.projection)


@dataclass
class PropertyRun:
    squares: int = 0
    row_shaped: int = 0
    snakes: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _square_failure(kind: str, sq: CommSquare, rep: SquareReport, universal: bool) -> dict | None:
    bad = [k for k, v in rep.lemma_checks.items() if not v]
    if not universal:
        bad.append(f"not a {kind}")
    if rep.pushout_pullback_confirmed is False:
        bad.append("row shape without pushout-pullback")
    if not bad:
        return None
    return {"kind": kind, "dims": [sq.a.source.dim, sq.f.target.dim, sq.a.target.dim, sq.corner.dim], "failed": bad}


def property_run(algebra, count: int, rng: np.random.Generator, max_dim: int = 4) -> PropertyRun:
    """Randomized pushouts, pullbacks, row-shaped squares and snakes.

    Each trial builds a pushout and a pullback of random maps, the two
    row-shaped squares obtained by pulling a random sequence back along a
    map into its last term and pushing it out along a map from its first
    term, and runs the snake lemma on both resulting morphisms of sequences.
    """
    out = PropertyRun()

    def dim():
        return int(rng.integers(0, max_dim + 1))

    for trial in range(count):
        a_mod, b_mod, c_mod = (random_module(algebra, dim(), rng) for _ in range(3))
        sq = pushout(random_hom(a_mod, c_mod, rng), random_hom(a_mod, b_mod, rng))
        rep = verify_pushout_pullback(sq)
        fails = [_square_failure("pushout", sq, rep, rep.pushout)]
        d_mod = random_module(algebra, dim(), rng)
        sq = pullback(random_hom(b_mod, d_mod, rng), random_hom(c_mod, d_mod, rng))
        rep = verify_pushout_pullback(sq)
        fails.append(_square_failure("pullback", sq, rep, rep.pullback))
        out.squares += 2

        xi = random_ses(algebra, rng, max_dim)
        # pull back along gamma: C' -> C, giving a kernel-row square
        c2 = random_module(algebra, dim(), rng)
        gamma = random_hom(c2, xi.right, rng)
        sq = pullback(gamma, xi.g)
        rep = verify_pushout_pullback(sq)
        fails.append(_square_failure("row pullback", sq, rep, rep.pullback and rep.row_shape != "none"))
        inc = universal_lift(sq, xi.f, zero_hom(xi.left, c2))
        top = ShortExactSeq(inc, sq.f)
        res = snake(top, xi, identity_hom(xi.left), sq.a, gamma)
        if not res.ok:
            fails.append({"kind": "snake after pullback", "failed": [k for k, v in res.exactness.items() if not v]})
        # push out along alpha: A -> A', giving a cokernel-row square
        a2 = random_module(algebra, dim(), rng)
        alpha = random_hom(xi.left, a2, rng)
        sq = pushout(alpha, xi.f)
        rep = verify_pushout_pullback(sq)
        fails.append(_square_failure("row pushout", sq, rep, rep.pushout and rep.row_shape != "none"))
        proj = universal_factorization(sq, zero_hom(a2, xi.right), xi.g)
        bottom = ShortExactSeq(sq.g, proj)
        res2 = snake(xi, bottom, alpha, sq.b, identity_hom(xi.right))
        if not res2.ok:
            fails.append({"kind": "snake after pushout", "failed": [k for k, v in res2.exactness.items() if not v]})
        out.squares += 2
        out.row_shaped += 2
        out.snakes += 2
        for f in fails:
            if f is not None:
                out.failures.append({"trial": trial, **f})
    return out
