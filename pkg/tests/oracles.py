"""Brute-force oracles sharing no code with the library's solvers.

They enumerate every matrix or cochain over tiny fields, so they are
only usable at dimension two or three.
"""

import itertools

import numpy as np


def all_matrices(p, rows, cols):
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def intertwines(act_x, act_y, mat, p):
    return all(not ((mat @ ax - ay @ mat) % p).any() for ax, ay in zip(act_x, act_y))


def hom_count(act_x, act_y, p):
    """Number of module maps x -> y, by checking every linear map."""
    nx, ny = act_x.shape[1], act_y.shape[1]
    return sum(1 for m in all_matrices(p, ny, nx) if intertwines(act_x, act_y, m, p))


def hom_dim(act_x, act_y, p):
    return _log(hom_count(act_x, act_y, p), p)


def _log(count, p):
    d = 0
    while count > 1:
        assert count % p == 0
        count //= p
        d += 1
    return d


def ext1_dim(mul, act_x, act_y, p):
    """dim Ext^1(x, y) as cocycles modulo coboundaries.

    An extension 0 -> y -> E -> x -> 0 with E = y + x as spaces is an
    action a -> [[rho_y(a), c(a)], [0, rho_x(a)]]; c must satisfy
    c(ab) = rho_y(a) c(b) + c(a) rho_x(b).  Coboundaries are
    c(a) = rho_y(a) h - h rho_x(a).
    """
    d = mul.shape[0]
    nx, ny = act_x.shape[1], act_y.shape[1]
    cocycles = 0
    for flat in itertools.product(range(p), repeat=d * ny * nx):
        c = np.array(flat, dtype=np.int64).reshape(d, ny, nx)
        ok = True
        for i in range(d):
            for j in range(d):
                lhs = np.einsum("k,kab->ab", mul[i, j], c)
                rhs = act_y[i] @ c[j] + c[i] @ act_x[j]
                if ((lhs - rhs) % p).any():
                    ok = False
                    break
            if not ok:
                break
        cocycles += ok
    boundaries = set()
    for h in all_matrices(p, ny, nx):
        cb = np.stack([(act_y[i] @ h - h @ act_x[i]) % p for i in range(d)])
        boundaries.add(cb.tobytes())
    return _log(cocycles, p) - _log(len(boundaries), p)


def is_iso_brute(act_x, act_y, p):
    if act_x.shape[1] != act_y.shape[1]:
        return False
    n = act_x.shape[1]
    for m in all_matrices(p, n, n):
        if intertwines(act_x, act_y, m, p) and round(np.linalg.det(m)) % p:
            return True
    return n == 0
