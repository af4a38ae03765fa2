"""Exact linear algebra over the tower field.

Row-based: a subspace is a list of coordinate rows (lists of FieldElem).
Everything is computed by exact elimination; no floating point anywhere.

For large rank/kernel-dimension questions there is a separate modular
certificate path (`modp_rank`, `modp_kernel_dim`): ranks computed over a
prime field only ever *lower-bound* the rational rank, so combining a
modular rank with exactly exhibited kernel vectors yields a fully rigorous
dimension count at a fraction of the cost.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .fieldtower import FieldElem, TowerSpec


def _zero(tower: TowerSpec) -> FieldElem:
    return tower.zero()


def rref(rows, tower: TowerSpec):
    """Reduced row echelon form. Returns (new_rows, pivot_columns).

    Zero rows are dropped; pivots are normalized to 1.
    """
    if not rows:
        return [], []
    mat = [list(r) for r in rows]
    nrows, ncols = len(mat), len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not mat[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = mat[r][c].inv()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat[:r], pivots


def rank(rows, tower: TowerSpec) -> int:
    return len(rref(rows, tower)[0])


def nullspace(rows, ncols: int, tower: TowerSpec):
    """Basis of {v : M v = 0} for the matrix M with the given rows."""
    red, pivots = rref(rows, tower)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    zero, one = tower.zero(), tower.one()
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, pc in zip(red, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return basis


def solve(rows, rhs, tower: TowerSpec):
    """One solution x of M x = b, or None when inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, tower)
    zero = tower.zero()
    x = [zero] * ncols
    for r, pc in zip(red, pivots):
        if pc == ncols:
            return None  # pivot in augmented column
        x[pc] = r[-1]
    return x


def in_span(basis_rref, pivots, v, tower: TowerSpec) -> bool:
    """Membership test against an rref basis."""
    w = list(v)
    for row, pc in zip(basis_rref, pivots):
        if not w[pc].is_zero():
            f = w[pc]
            w = [a - f * b for a, b in zip(w, row)]
    return all(x.is_zero() for x in w)


def span_contains_rows(basis_rows, candidate_rows, tower: TowerSpec) -> bool:
    red, piv = rref(basis_rows, tower)
    return all(in_span(red, piv, v, tower) for v in candidate_rows)


def spans_equal(a_rows, b_rows, tower: TowerSpec) -> bool:
    ra, _ = rref(a_rows, tower)
    rb, _ = rref(b_rows, tower)
    if len(ra) != len(rb):
        return False
    return all(x == y for rowa, rowb in zip(ra, rb) for x, y in zip(rowa, rowb))


def intersect(a_rows, b_rows, tower: TowerSpec):
    """Zassenhaus intersection of two row spans."""
    if not a_rows or not b_rows:
        return []
    n = len(a_rows[0])
    zero = tower.zero()
    block = [list(r) + list(r) for r in a_rows]
    block += [list(r) + [zero] * n for r in b_rows]
    red, _ = rref(block, tower)
    out = []
    for row in red:
        if all(x.is_zero() for x in row[:n]):
            tail = row[n:]
            if any(not x.is_zero() for x in tail):
                out.append(tail)
    red_out, _ = rref(out, tower)
    return red_out


def subspace_sum(a_rows, b_rows, tower: TowerSpec):
    red, _ = rref(list(a_rows) + list(b_rows), tower)
    return red


# -- small dense matrix helpers ----------------------------------------------


def identity_matrix(n: int, tower: TowerSpec):
    zero, one = tower.zero(), tower.one()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_vec(mat, vec, tower: TowerSpec):
    out = []
    for row in mat:
        acc = tower.zero()
        for a, b in zip(row, vec):
            if not a.is_zero():
                acc = acc + a * tower.scalar(b)
        out.append(acc)
    return out


def mat_mul(a, b, tower: TowerSpec):
    n, k = len(a), len(b)
    m = len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = tower.zero()
            for t in range(k):
                x = a[i][t]
                if not x.is_zero():
                    acc = acc + x * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_scale(mat, s):
    return [[x * s for x in row] for row in mat]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_eq(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_inverse(mat, tower: TowerSpec):
    n = len(mat)
    aug = [list(row) + list(idrow) for row, idrow in zip(mat, identity_matrix(n, tower))]
    red, pivots = rref(aug, tower)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


# -- modular certificates ----------------------------------------------------

#: primes just below 2^20 so that int64 inner products over ~10^3 terms fit
MOD_PRIMES = (1048573, 1048571, 1048559, 1048549)


def fieldelem_matrix_to_int(rows) -> list:
    """Clear denominators row by row; requires all entries rational.

    Scaling rows preserves the row space and the kernel of the matrix.
    Not suitable for operator matrices; see matrix_to_int_global.
    """
    out = []
    for row in rows:
        fracs = []
        for x in row:
            if isinstance(x, FieldElem):
                fracs.append(x.as_rational())
            else:
                fracs.append(Fraction(x))
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        out.append([int(f * den) for f in fracs])
    return out


def matrix_to_int_global(rows) -> list:
    """Clear denominators with one common factor, preserving the operator
    up to a global scale (so kernels and annihilation are unchanged)."""
    fracs = []
    for row in rows:
        frow = []
        for x in row:
            frow.append(x.as_rational() if isinstance(x, FieldElem) else Fraction(x))
        fracs.append(frow)
    den = 1
    for row in fracs:
        for f in row:
            den = den * f.denominator // gcd(den, f.denominator)
    return [[int(f * den) for f in row] for row in fracs]


def _rref_mod_p(M: np.ndarray, p: int):
    """In-place row reduction mod p; returns pivot column list."""
    M %= p
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = M[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        col_all = M[:, c].copy()
        col_all[r] = 0
        nzrows = np.nonzero(col_all)[0]
        if nzrows.size:
            M[nzrows] = (M[nzrows] - np.outer(col_all[nzrows], M[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def modp_rank(int_rows, p: int) -> int:
    """Rank of an integer matrix mod p; always <= the rank over Q."""
    if not int_rows:
        return 0
    M = np.array(int_rows, dtype=np.int64)
    return len(_rref_mod_p(M, p))


def modp_kernel(int_rows, ncols: int, p: int) -> np.ndarray:
    """Kernel basis mod p, as columns of an (ncols x k) array."""
    if not int_rows:
        return np.eye(ncols, dtype=np.int64)
    M = np.array(int_rows, dtype=np.int64)
    pivots = _rref_mod_p(M, p)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    K = np.zeros((ncols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        K[f, j] = 1
        for r, pc in enumerate(pivots):
            K[pc, j] = (-int(M[r, f])) % p
    return K


def modp_joint_kernel_dim(int_matrices, ncols: int, p: int) -> int:
    """dim of the joint kernel mod p of several integer matrices.

    Computed by iterated restriction; by the rank inequality mod p this
    upper-bounds the rational joint kernel dimension.
    """
    K = np.eye(ncols, dtype=np.int64)
    for rows in int_matrices:
        if K.shape[1] == 0:
            return 0
        M = np.array(rows, dtype=np.int64) % p
        R = (M @ K) % p
        KB = modp_kernel(list(R), K.shape[1], p)
        K = (K @ KB) % p
    return K.shape[1]
