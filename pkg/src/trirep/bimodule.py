"""(A, B)-bimodules, the tensor and hom functors they induce, and the
currying bijection between the two hom spaces.

A bimodule of dimension ``m`` stores left-action matrices ``L[a]`` and
right-action matrices ``R[b]`` on column vectors, so ``v . b = R[b] v`` and
``R[b1 b2] = R[b2] R[b1]``.  The pure tensor ``e_i (x) y_j`` of
``M (x)_k Y`` has index ``i * dim Y + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import Algebra, HomSpace, Module, ModuleHom, ext_group, free_cover, hom_space
from .errors import MalformedInputError, ValidationError


@dataclass(frozen=True, eq=False)
class Bimodule:
    left: Algebra
    right: Algebra
    left_action: np.ndarray
    right_action: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        lact = np.array(self.left_action, dtype=np.int64) % self.left.p
        ract = np.array(self.right_action, dtype=np.int64) % self.left.p
        if self.left.p != self.right.p:
            raise MalformedInputError("bimodule over algebras with different moduli")
        m = lact.shape[1] if lact.ndim == 3 else -1
        if lact.shape != (self.left.dim, m, m) or ract.shape != (self.right.dim, m, m):
            raise MalformedInputError("bimodule action shapes do not match the algebras")
        lact.setflags(write=False)
        ract.setflags(write=False)
        object.__setattr__(self, "left_action", lact)
        object.__setattr__(self, "right_action", ract)
        # both constructors validate the one-sided axioms
        Module(self.left, lact)
        Module(self.right.opposite, ract)
        lhs = np.einsum("aij,bjk->abik", lact, ract) % self.p
        rhs = np.einsum("bij,ajk->abik", ract, lact) % self.p
        bad = np.argwhere((lhs != rhs).reshape(self.left.dim, self.right.dim, -1).any(axis=2))
        if bad.size:
            raise ValidationError("left and right actions do not commute", tuple(int(v) for v in bad[0]))

    @property
    def p(self) -> int:
        return self.left.p

    @property
    def dim(self) -> int:
        return self.left_action.shape[1]

    @cached_property
    def as_left_module(self) -> Module:
        return Module(self.left, self.left_action, self.name, check=False)

    @cached_property
    def as_right_module(self) -> Module:
        """``M`` as a left module over the opposite of ``B``."""
        return Module(self.right.opposite, self.right_action, self.name, check=False)

    def __repr__(self) -> str:
        return f"Bimodule({self.name or '?'}, dim={self.dim})"


def regular_bimodule(a: Algebra, name: str = "") -> Bimodule:
    """``A`` as an (A, A)-bimodule."""
    right = np.einsum("ijk->jki", a.mul)  # R[j][k, i] = mul[i, j, k]
    return Bimodule(a, a, a.left_regular, right, name or a.name)


# --------------------------------------------------------------------------
# tensor


@dataclass(frozen=True, eq=False)
class Tensor:
    """``M (x)_B Y`` with its projection from ``M (x)_k Y`` and a linear section."""

    module: Module
    projection: np.ndarray  # dim x (m * dim Y)
    section: np.ndarray  # (m * dim Y) x dim
    y: Module

    def pure(self, i: int, v: np.ndarray) -> np.ndarray:
        """Image of ``e_i (x) v``."""
        ny = self.y.dim
        return self.projection[:, i * ny : (i + 1) * ny] @ np.asarray(v) % self.module.p


def tensor_MY(m: Bimodule, y: Module) -> Tensor:
    if y.algebra != m.right:
        raise MalformedInputError("tensor: module is not over the right algebra of the bimodule")
    p, ny, dm = m.p, y.dim, m.dim
    total = dm * ny
    rels = [
        (np.kron(m.right_action[b], la.identity(ny)) - np.kron(la.identity(dm), y.action[b])) % p
        for b in m.right.generators
    ]
    if total == 0 or not rels:
        sub = la.Subspace.zero(total, p)
    else:
        sub = la.image(np.hstack(rels), p)
    q = la.quotient(total, sub)
    lifted = np.stack([np.kron(m.left_action[a], la.identity(ny)) for a in range(m.left.dim)])
    act = np.einsum("ab,ibc,cd->iad", q.projection, lifted, q.section) % p
    mod = Module(m.left, act, f"M(x){y.name}" if y.name else "")
    return Tensor(mod, q.projection, q.section, y)


def tensor_map(m: Bimodule, g: ModuleHom, src: Tensor | None = None, tgt: Tensor | None = None) -> ModuleHom:
    """``M (x) g`` between the tensor modules."""
    src = src or tensor_MY(m, g.source)
    tgt = tgt or tensor_MY(m, g.target)
    lifted = np.kron(la.identity(m.dim), g.matrix)
    mat = la.mul(m.p, tgt.projection, lifted, src.section) if src.module.dim and tgt.module.dim else la.zeros(tgt.module.dim, src.module.dim)
    return ModuleHom(src.module, tgt.module, mat, check=False)


# --------------------------------------------------------------------------
# hom


@dataclass(frozen=True, eq=False)
class HomM:
    """``Hom_A(M, X)`` as a B-module; basis element ``k`` is ``space.hom(k)``."""

    module: Module
    space: HomSpace
    x: Module

    def matrices(self) -> np.ndarray:
        return self.space.matrices()

    def coords(self, mat: np.ndarray) -> np.ndarray:
        return self.space.coords(mat)

    def columns(self, i: int) -> np.ndarray:
        """``dim X x dim Hom`` matrix whose column ``k`` is basis map ``k`` applied to ``e_i``."""
        return self.matrices()[:, :, i].T.copy() if self.space.dim else la.zeros(self.x.dim, 0)


def hom_MX(m: Bimodule, x: Module) -> HomM:
    if x.algebra != m.left:
        raise MalformedInputError("hom: module is not over the left algebra of the bimodule")
    p = m.p
    space = hom_space(m.as_left_module, x)
    k = space.dim
    mats = space.matrices()
    act = np.zeros((m.right.dim, k, k), dtype=np.int64)
    for b in range(m.right.dim):
        for j in range(k):
            moved = la.mul(p, mats[j], m.right_action[b])
            act[b, :, j] = space.coords(moved)
    mod = Module(m.right, act, f"Hom(M,{x.name})" if x.name else "")
    return HomM(mod, space, x)


def hom_map(m: Bimodule, f: ModuleHom, src: HomM | None = None, tgt: HomM | None = None) -> ModuleHom:
    """``Hom_A(M, f)`` between the hom modules."""
    src = src or hom_MX(m, f.source)
    tgt = tgt or hom_MX(m, f.target)
    mat = la.zeros(tgt.module.dim, src.module.dim)
    for j, h in enumerate(src.matrices()):
        mat[:, j] = tgt.coords(la.mul(m.p, f.matrix, h))
    return ModuleHom(src.module, tgt.module, mat, check=False)


# --------------------------------------------------------------------------
# the currying bijection


def curry(m: Bimodule, ten: Tensor, hm: HomM, phi: np.ndarray) -> np.ndarray:
    """``Hom_A(M (x) Y, X) -> Hom_B(Y, Hom_A(M, X))`` on a single matrix."""
    p = m.p
    ny, nx = ten.y.dim, hm.x.dim
    big = la.mul(p, phi, ten.projection) if ten.module.dim else la.zeros(nx, m.dim * ny)
    big = big.reshape(nx, m.dim, ny)
    out = la.zeros(hm.module.dim, ny)
    for j in range(ny):
        out[:, j] = hm.coords(big[:, :, j])
    return out


def uncurry(m: Bimodule, ten: Tensor, hm: HomM, varphi: np.ndarray) -> np.ndarray:
    """Inverse of :func:`curry`."""
    p = m.p
    ny, nx = ten.y.dim, hm.x.dim
    big = np.zeros((nx, m.dim, ny), dtype=np.int64)
    mats = hm.matrices()
    for j in range(ny):
        big[:, :, j] = np.einsum("k,kab->ab", varphi[:, j], mats) % p if hm.module.dim else 0
    flat = big.reshape(nx, m.dim * ny)
    return la.mul(p, flat, ten.section) if ten.module.dim else la.zeros(nx, 0)


@dataclass(frozen=True, eq=False)
class Adjunction:
    source: HomSpace  # Hom_A(M (x) Y, X)
    target: HomSpace  # Hom_B(Y, Hom_A(M, X))
    matrix: np.ndarray  # coordinates: target x source


def tau(m: Bimodule, x: Module, y: Module) -> Adjunction:
    """Matrix of the currying bijection in the canonical hom-space bases."""
    ten = tensor_MY(m, y)
    hm = hom_MX(m, x)
    src = hom_space(ten.module, x)
    tgt = hom_space(y, hm.module)
    mat = la.zeros(tgt.dim, src.dim)
    for k, phi in enumerate(src.matrices()):
        mat[:, k] = tgt.coords(curry(m, ten, hm, phi))
    return Adjunction(src, tgt, mat)


# --------------------------------------------------------------------------
# Tor and the vanishing subcategories


def tor_dim(m: Bimodule, y: Module, i: int) -> int:
    """``dim Tor_i^B(M, y)`` by dimension shifting along free covers."""
    if i < 0:
        raise MalformedInputError("Tor degree must be nonnegative")
    if i == 0:
        return tensor_MY(m, y).module.dim
    cur = y
    for _ in range(i - 1):
        if cur.dim == 0:
            return 0
        cur = free_cover(cur, reduced=True).left
    if cur.dim == 0:
        return 0
    ses = free_cover(cur, reduced=True)
    r = ses.middle.dim // cur.algebra.dim
    # 0 -> Tor_1 -> M(x)K -> M^r -> M(x)cur -> 0
    return tensor_MY(m, ses.left).module.dim - r * m.dim + tensor_MY(m, cur).module.dim


def default_imax(algebra: Algebra) -> int:
    return algebra.dim + 2


@dataclass(frozen=True)
class PerpInventory:
    kind: str  # "X" (Ext vanishing) or "Y" (Tor vanishing)
    members: tuple[Module, ...]
    rejected: tuple[tuple[Module, int], ...]  # (module, first nonvanishing degree)
    imax: int


def ext_vanishing_degree(m: Bimodule, x: Module, imax: int) -> int | None:
    """First ``i`` in ``1..imax`` with ``Ext^i_A(M, x) != 0``, else None."""
    for i in range(1, imax + 1):
        if ext_group(m.as_left_module, x, i):
            return i
    return None


def tor_vanishing_degree(m: Bimodule, y: Module, imax: int) -> int | None:
    for i in range(1, imax + 1):
        if tor_dim(m, y, i):
            return i
    return None


def perp_inventory(m: Bimodule, pool, kind: str, imax: int | None = None) -> PerpInventory:
    if kind not in ("X", "Y"):
        raise MalformedInputError(f"unknown kind {kind!r}, expected 'X' or 'Y'")
    alg = m.left if kind == "X" else m.right
    imax = default_imax(alg) if imax is None else imax
    test = ext_vanishing_degree if kind == "X" else tor_vanishing_degree
    keep, drop = [], []
    for mod in pool:
        if mod.algebra != alg:
            raise MalformedInputError("pool module over the wrong algebra")
        bad = test(m, mod, imax)
        if bad is None:
            keep.append(mod)
        else:
            drop.append((mod, bad))
    return PerpInventory(kind, tuple(keep), tuple(drop), imax)
