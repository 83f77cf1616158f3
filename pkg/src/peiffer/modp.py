"""Exact dense linear algebra over a prime field F_p.

All matrices are small (dimensions bounded by the ambient dimension cap), so
plain row reduction with numpy int64 arrays is both exact and fast enough.
Rows of a reduced matrix are the canonical basis of the space they span.
"""

from __future__ import annotations

import numpy as np


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(mat, p: int):
    """Reduced row echelon form.

    Returns ``(reduced, pivots)`` where ``reduced`` has its zero rows dropped
    and ``pivots`` lists the pivot column of each remaining row.
    """
    m = np.array(mat, dtype=np.int64).reshape(len(mat), -1) % p if len(mat) else np.zeros((0, 0), dtype=np.int64)
    if m.size == 0:
        return m.reshape(0, m.shape[1] if m.ndim == 2 else 0), []
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i, c] % p:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[[r, pivot_row]] = m[[pivot_row, r]]
        m[r] = (m[r] * inv_mod(m[r, c], p)) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def reduce_vector(basis, pivots, vec, p: int):
    """Residual of ``vec`` after elimination against an rref ``basis``."""
    v = np.array(vec, dtype=np.int64) % p
    for row, c in zip(basis, pivots):
        if v[c]:
            v = (v - v[c] * row) % p
    return v


def in_span(basis, pivots, vec, p: int) -> bool:
    return not reduce_vector(basis, pivots, vec, p).any()


def coordinates(basis, pivots, vec, p: int):
    """Coordinates of ``vec`` in an rref ``basis``, or None if outside the span."""
    v = np.array(vec, dtype=np.int64) % p
    coords = np.zeros(len(basis), dtype=np.int64)
    for i, (row, c) in enumerate(zip(basis, pivots)):
        if v[c]:
            coords[i] = v[c]
            v = (v - v[c] * row) % p
    if v.any():
        return None
    return coords


def nullspace(mat, p: int):
    """Rows spanning the right nullspace of ``mat`` (canonical rref basis)."""
    m = np.array(mat, dtype=np.int64) % p
    if m.size == 0:
        cols = m.shape[1] if m.ndim == 2 else 0
        return np.eye(cols, dtype=np.int64)
    red, pivots = rref(m, p)
    rows, cols = red.shape
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for c in free:
        v = np.zeros(cols, dtype=np.int64)
        v[c] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-red[i, c]) % p
        basis.append(v)
    if not basis:
        return np.zeros((0, cols), dtype=np.int64)
    out, _ = rref(np.array(basis, dtype=np.int64), p)
    return out


def solve(mat, rhs, p: int):
    """One solution x of ``mat @ x = rhs`` over F_p, or None."""
    m = np.array(mat, dtype=np.int64) % p
    b = np.array(rhs, dtype=np.int64) % p
    rows, cols = m.shape
    aug = np.concatenate([m, b.reshape(rows, 1)], axis=1)
    red, pivots = rref(aug, p)
    x = np.zeros(cols, dtype=np.int64)
    for row, c in zip(red, pivots):
        if c == cols:
            return None
        x[c] = row[cols]
    # pivots of the reduced augmented system give the solution directly
    if ((m @ x - b) % p).any():
        return None
    return x


def intersect(basis_a, basis_b, p: int):
    """Canonical basis of the intersection of two row spaces."""
    a = np.array(basis_a, dtype=np.int64) % p
    b = np.array(basis_b, dtype=np.int64) % p
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1] if a.size else b.shape[1]), dtype=np.int64)
    # pairs (u, v) with u @ a = v @ b  <=>  (u, v) in the nullspace of [a^T | -b^T]
    stacked = np.concatenate([a.T, (-b.T) % p], axis=1)
    ns = nullspace(stacked, p)
    if ns.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    vecs = (ns[:, : a.shape[0]] @ a) % p
    out, _ = rref(vecs, p)
    return out


def matrix_rank(mat, p: int) -> int:
    red, _ = rref(np.array(mat, dtype=np.int64) % p, p) if len(mat) else (np.zeros((0, 0)), [])
    return red.shape[0]
