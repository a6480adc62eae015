"""Exact linear algebra over prime fields F_p.

Vectors are columns; a linear map V -> W is a ``dim W x dim V`` integer
array with entries reduced into ``[0, p)``.  Every pivot choice is the
leftmost one and free variables are set to zero, so results are
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import MalformedInputError

MAX_PRIME = 97


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    check_prime(p)
    table = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        table[v] = pow(v, p - 2, p)
    return table


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or p < 2 or p > MAX_PRIME:
        raise MalformedInputError(f"modulus must be a prime in [2, {MAX_PRIME}], got {p!r}")
    if any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise MalformedInputError(f"modulus {p} is not prime")
    return int(p)


def as_array(a, p: int) -> np.ndarray:
    arr = np.asarray(a, dtype=np.int64)
    return np.mod(arr, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(p: int, *mats: np.ndarray) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = (out @ m) % p
    return out % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns (leftmost-pivot rule)."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r, c:] = (a[r, c:] * inv[a[r, c]]) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[np.ix_(hit, np.arange(c, cols))] = (
                a[np.ix_(hit, np.arange(c, cols))] - np.outer(col[hit], a[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Basis of ``{v : a v = 0}`` as rows, plus the free columns.

    Basis vector ``i`` has a 1 in free column ``free[i]`` and 0 in the
    other free columns, so the coordinates of any kernel vector ``v`` are
    simply ``v[free]``.
    """
    rows, cols = a.shape
    if rows == 0:
        return identity(cols), list(range(cols))
    red, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = (-red[r, f]) % p
    return basis, free


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a x = b`` (free variables zero), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise MalformedInputError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.shape[1]
    if a.shape[0] == 0:
        x = zeros(n, b.shape[1])
        return x[:, 0] if vector else x
    red, piv = rref(np.hstack([a % p, b % p]), p)
    if piv and piv[-1] >= n:
        return None
    x = zeros(n, b.shape[1])
    for r, c in enumerate(piv):
        x[c] = red[r, n:]
    return x[:, 0] if vector else x


def row_space(vectors: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Canonical (RREF, nonzero rows only) basis of the span of the rows."""
    if vectors.shape[0] == 0:
        return vectors.reshape(0, vectors.shape[1]).astype(np.int64), []
    red, piv = rref(vectors, p)
    return red[: len(piv)], piv


@dataclass(frozen=True, eq=False)
class Matrix:
    """An immutable matrix over F_p; the JSON carrier for fixtures."""

    p: int
    data: np.ndarray

    def __post_init__(self) -> None:
        check_prime(self.p)
        arr = np.array(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise MalformedInputError("matrix data must be two dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= self.p):
            raise MalformedInputError(f"entries outside [0, {self.p})")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "Matrix":
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        return cls(p, arr % p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> list[int]:
        return [int(v) for v in self.data.ravel()]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        return hash((self.p, self.data.shape, self.data.tobytes()))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p:
            raise MalformedInputError("modulus mismatch")
        return Matrix(self.p, mul(self.p, self.data, other.data))

    def rref(self) -> tuple["Matrix", int, list[int]]:
        red, piv = rref(self.data, self.p)
        return Matrix(self.p, red), len(piv), piv

    def to_json(self) -> dict:
        return {"p": self.p, "rows": self.rows, "cols": self.cols, "entries": self.entries}

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        try:
            p, rows, cols, entries = obj["p"], obj["rows"], obj["cols"], obj["entries"]
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad matrix JSON: {obj!r}") from exc
        if len(entries) != rows * cols:
            raise MalformedInputError(f"matrix has {len(entries)} entries, expected {rows * cols}")
        check_prime(p)
        arr = np.array(entries, dtype=np.int64).reshape(rows, cols)
        return cls(p, arr)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F_p^n held by its canonical RREF basis (rows)."""

    p: int
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors, ambient_dim: int, p: int) -> "Subspace":
        vecs = np.asarray(vectors, dtype=np.int64)
        vecs = (vecs.reshape(-1, ambient_dim) if ambient_dim else np.zeros((0, 0), dtype=np.int64)) % p
        b, piv = row_space(vecs, p)
        b.setflags(write=False)
        return cls(p, ambient_dim, b, tuple(piv))

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls.span(zeros(0, ambient_dim), ambient_dim, p)

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls.span(identity(ambient_dim), ambient_dim, p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def columns(self) -> np.ndarray:
        """Basis as an ``ambient x dim`` matrix (inclusion map)."""
        return self.basis.T.copy()

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of column vectors lying in the subspace."""
        return np.asarray(vectors)[list(self.pivots)] % self.p

    def contains(self, vectors: np.ndarray) -> bool:
        v = np.asarray(vectors, dtype=np.int64)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        resid = (v - self.basis.T @ v[list(self.pivots)]) % self.p
        return not resid.any()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)

    def intersect(self, other: "Subspace") -> "Subspace":
        # u = B1^T x = B2^T y  <=>  [B1^T | -B2^T] (x, y) = 0
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        stacked = np.hstack([self.basis.T, (-other.basis.T) % self.p])
        ns, _ = nullspace(stacked, self.p)
        vecs = (ns[:, : self.dim] @ self.basis) % self.p
        return Subspace.span(vecs, self.ambient_dim, self.p)


def image(a: np.ndarray, p: int) -> Subspace:
    return Subspace.span(np.asarray(a).T, a.shape[0], p)


def kernel(a: np.ndarray, p: int) -> Subspace:
    ns, _ = nullspace(a, p)
    return Subspace.span(ns, a.shape[1], p)


@dataclass(frozen=True, eq=False)
class Quotient:
    dim: int
    projection: np.ndarray
    section: np.ndarray


def quotient(ambient_dim: int, sub: Subspace) -> Quotient:
    """``F_p^n / sub`` with the non-pivot coordinates as complement."""
    if sub.ambient_dim != ambient_dim:
        raise MalformedInputError("subspace lives in a different ambient space")
    p = sub.p
    piv = list(sub.pivots)
    nonpiv = [c for c in range(ambient_dim) if c not in set(piv)]
    eye = identity(ambient_dim)
    proj = (eye[nonpiv] - sub.basis[:, nonpiv].T @ eye[piv]) % p
    section = eye[:, nonpiv].copy()
    return Quotient(len(nonpiv), proj, section)


def is_injective(a: np.ndarray, p: int) -> bool:
    return rank(a, p) == a.shape[1]


def is_surjective(a: np.ndarray, p: int) -> bool:
    return rank(a, p) == a.shape[0]


def is_invertible(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    x = solve(a, identity(n), p)
    if x is None or a.shape[0] != a.shape[1]:
        raise MalformedInputError("matrix is not invertible")
    return x


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def all_vectors(p: int, n: int) -> np.ndarray:
    """Every vector of F_p^n as rows, in lexicographic order."""
    if n == 0:
        return zeros(1, 0)
    grids = np.indices((p,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


def batch_invertible(mats: np.ndarray, p: int) -> np.ndarray:
    """Invertibility of a stack ``(N, n, n)`` of square matrices."""
    a = np.array(mats, dtype=np.int64) % p
    N, n, _ = a.shape
    ok = np.ones(N, dtype=bool)
    inv = inverse_table(p)
    idx = np.arange(N)
    for c in range(n):
        sub = a[:, c:, c]
        has = sub != 0
        any_piv = has.any(axis=1)
        ok &= any_piv
        r = c + np.argmax(has, axis=1)
        row_c = a[idx, c].copy()
        row_r = a[idx, r].copy()
        a[idx, c] = row_r
        a[idx, r] = row_c
        pivot = a[:, c, c]
        scale = inv[pivot]
        a[:, c] = (a[:, c] * scale[:, None]) % p
        factors = a[:, :, c].copy()
        factors[:, c] = 0
        a = (a - factors[:, :, None] * a[:, c][:, None, :]) % p
    return ok
