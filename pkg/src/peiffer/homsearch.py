"""Exhaustive enumeration of homomorphisms under constraints.

Group homomorphisms are found by assigning images element by element with
forward propagation: once f is fixed on a subset, every product inside that
subset forces further values, so the search effectively only branches on
generators.  Lie homomorphisms are found by solving the linear part
(linearity, over-base, equivariance are all linear in the matrix entries)
and filtering the solution space by the bracket condition.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import modp
from .ambient import (
    ActionTable,
    FiniteGroup,
    FiniteLieAlgebra,
    Hom,
    make_action,
    make_hom,
)


def group_homs(
    dom: FiniteGroup,
    cod: FiniteGroup,
    candidates=None,
    pins=None,
    extra_force=None,
    injective=False,
    surjective=False,
    limit=None,
):
    """All homomorphism mapping tuples dom -> cod, deterministically ordered.

    candidates: optional per-element candidate image lists.
    pins: dict of forced assignments.
    extra_force: callable (x, y) -> iterable of further forced pairs, used to
        thread equivariance or fiber constraints through the propagation.
    """
    n = dom.order
    dorders = dom.element_orders
    corders = cod.element_orders
    if candidates is None:
        base = [[c for c in range(cod.order) if dorders[x] % corders[c] == 0] for x in range(n)]
    else:
        base = [sorted(set(candidates[x])) for x in range(n)]
    images = [-1] * n
    used = [0] * cod.order
    results = []

    def force(pairs, trail):
        queue = list(pairs)
        while queue:
            x, y = queue.pop()
            cur = images[x]
            if cur != -1:
                if cur != y:
                    return False
                continue
            if dorders[x] % corders[y] != 0:
                return False
            if injective and used[y]:
                return False
            images[x] = y
            used[y] += 1
            trail.append(x)
            for a in range(n):
                ia = images[a]
                if ia == -1:
                    continue
                queue.append((int(dom.table[a, x]), int(cod.table[ia, y])))
                queue.append((int(dom.table[x, a]), int(cod.table[y, ia])))
            if extra_force is not None:
                queue.extend(extra_force(x, y))
        return True

    def undo(trail):
        for x in trail:
            used[images[x]] -= 1
            images[x] = -1

    start_trail = []
    seed = [(dom.identity, cod.identity)]
    if pins:
        seed.extend(pins.items())
    if not force(seed, start_trail):
        return []

    def search(k):
        if limit is not None and len(results) >= limit:
            return
        while k < n and images[k] != -1:
            k += 1
        if k == n:
            if not surjective or len(set(images)) == cod.order:
                results.append(tuple(images))
            return
        for y in base[k]:
            trail = []
            if force([(k, y)], trail):
                search(k + 1)
            undo(trail)
            if limit is not None and len(results) >= limit:
                return

    search(0)
    undo(start_trail)
    return results


def automorphisms(G: FiniteGroup):
    """All automorphism mapping tuples of G, sorted."""
    maps = group_homs(G, G, injective=True)
    return sorted(maps)


_aut_cache = {}


def automorphism_group(G: FiniteGroup):
    """(Aut(G) as a FiniteGroup, list of automorphism mapping tuples)."""
    key = G
    if key in _aut_cache:
        return _aut_cache[key]
    auts = automorphisms(G)
    index = {a: i for i, a in enumerate(auts)}
    k = len(auts)
    table = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(auts):
        for j, b in enumerate(auts):
            table[i, j] = index[tuple(a[v] for v in b)]
    aut_group = FiniteGroup(table, name=f"Aut({G.name})")
    _aut_cache[key] = (aut_group, auts)
    return aut_group, auts


def group_actions(B: FiniteGroup, X: FiniteGroup):
    """All actions of B on X, one per homomorphism B -> Aut(X)."""
    aut_group, auts = automorphism_group(X)
    out = []
    for mapping in group_homs(B, aut_group):
        table = np.array([auts[mapping[b]] for b in range(B.order)], dtype=np.int64)
        out.append(make_action(B, X, table, check=False))
    return out


def equivariant_boundaries(X: FiniteGroup, B: FiniteGroup, xi: ActionTable):
    """All group homs X -> B with f(b.x) = b f(x) b^-1."""
    act = xi.table_np

    def forced(x, y):
        return [(int(act[b, x]), B.ad(b, y)) for b in range(B.order)]

    return [make_hom(X, B, mapping=m, check=False) for m in group_homs(X, B, extra_force=forced)]


def overbase_morphism_maps(
    x1: FiniteGroup,
    x2: FiniteGroup,
    bd1,
    bd2,
    xi1: ActionTable,
    xi2: ActionTable,
    B: FiniteGroup,
    surjective=False,
    injective=False,
    pins=None,
    candidates=None,
    limit=None,
):
    """Mapping tuples x1 -> x2 that are over the base (bd2 . f = bd1) and
    equivariant for the two actions."""
    fibers = {}
    for v in range(x2.order):
        fibers.setdefault(bd2.mapping[v], []).append(v)
    cand = []
    for x in range(x1.order):
        allowed = fibers.get(bd1.mapping[x], [])
        if candidates is not None:
            allowed = [v for v in allowed if v in candidates[x]]
        cand.append(allowed)
    a1, a2 = xi1.table_np, xi2.table_np

    def forced(x, y):
        return [(int(a1[b, x]), int(a2[b, y])) for b in range(B.order)]

    return group_homs(
        x1,
        x2,
        candidates=cand,
        pins=pins,
        extra_force=forced,
        surjective=surjective,
        injective=injective,
        limit=limit,
    )


# ---------------------------------------------------------------------------
# Lie side
# ---------------------------------------------------------------------------

_der_cache = {}


def derivation_space(L: FiniteLieAlgebra):
    """Basis (list of matrices) of the derivation algebra of L, cached."""
    if L in _der_cache:
        return _der_cache[L]
    out = _derivation_space(L)
    _der_cache[L] = out
    return out


def _derivation_space(L: FiniteLieAlgebra):
    d, p = L.dim, L.prime
    if d == 0:
        return []
    s = L.structure
    rows = []
    # D[k, m] = coefficient of e_k in D(e_m); one row per (a, b, k):
    # (D [ea,eb] - [D ea, eb] - [ea, D eb])_k = 0
    for a in range(d):
        for b in range(d):
            for k in range(d):
                row = np.zeros((d, d), dtype=np.int64)
                row[k, :] += s[a, b]
                row[:, a] -= s[:, b, k]
                row[:, b] -= s[a, :, k]
                rows.append(row.reshape(-1) % p)
    ns = modp.nullspace(np.array(rows, dtype=np.int64), p)
    return [r.reshape(d, d) for r in ns]


def lie_actions(B: FiniteLieAlgebra, X: FiniteLieAlgebra):
    """All actions of B on X: derivation tuples compatible with B's bracket."""
    if B.prime != X.prime:
        return []
    p = X.prime
    if B.dim == 0:
        return [make_action(B, X, np.zeros((0, X.dim, X.dim), dtype=np.int64), check=False)]
    ders = derivation_space(X)
    combos = [np.zeros((X.dim, X.dim), dtype=np.int64)]
    if ders:
        combos = []
        for coeffs in itertools.product(range(p), repeat=len(ders)):
            mat = np.zeros((X.dim, X.dim), dtype=np.int64)
            for c, dm in zip(coeffs, ders):
                if c:
                    mat = (mat + c * dm) % p
            combos.append(mat)
    out = []
    slots = [None] * B.dim

    def pair_ok(i, j, upto):
        lhs = np.zeros((X.dim, X.dim), dtype=np.int64)
        for m in range(B.dim):
            c = int(B.structure[i, j, m])
            if c:
                if m > upto:
                    return True  # involves a slot not assigned yet
                lhs = (lhs + c * slots[m]) % p
        rhs = (slots[i] @ slots[j] - slots[j] @ slots[i]) % p
        return np.array_equal(lhs, rhs)

    def assign(idx):
        if idx == B.dim:
            for i in range(B.dim):
                for j in range(B.dim):
                    if not pair_ok(i, j, B.dim - 1):
                        return
            out.append(make_action(B, X, np.array(slots, dtype=np.int64), check=False))
            return
        for mat in combos:
            slots[idx] = mat
            if all(pair_ok(i, idx, idx) and pair_ok(idx, i, idx) for i in range(idx + 1)):
                assign(idx + 1)
        slots[idx] = None

    assign(0)
    return out


def lie_morphism_matrices(
    x1: FiniteLieAlgebra,
    x2: FiniteLieAlgebra,
    bd1=None,
    bd2=None,
    xi1=None,
    xi2=None,
    extra_constraints=None,
    surjective=False,
    injective=False,
    limit=None,
):
    """All bracket-preserving matrices M: x1 -> x2 satisfying the linear side
    conditions.

    Linearity in M covers the over-base condition (bd2 M = bd1), equivariance
    (M D1_j = D2_j M per actor basis vector) and any extra (A, B, C) constraint
    read as A @ M @ B = C; the quadratic bracket condition is filtered on the
    enumerated affine solution space.
    """
    p = x1.prime
    d1, d2 = x1.dim, x2.dim
    nunk = d2 * d1
    sys_rows = []
    rhs = []

    def add_amb(A, Bm, C):
        A = np.array(A, dtype=np.int64) % p
        Bm = np.array(Bm, dtype=np.int64) % p
        C = np.array(C, dtype=np.int64) % p
        for i in range(A.shape[0]):
            for j in range(Bm.shape[1]):
                row = np.zeros(nunk, dtype=np.int64)
                for kk in range(d2):
                    for u in range(d1):
                        row[kk * d1 + u] = (A[i, kk] * Bm[u, j]) % p
                sys_rows.append(row)
                rhs.append(int(C[i, j]) % p)

    if bd1 is not None and bd2 is not None:
        add_amb(bd2.matrix_np, np.eye(d1, dtype=np.int64), bd1.matrix_np)
    if xi1 is not None and xi2 is not None:
        for j in range(xi1.actor.dim):
            d1j = xi1.table_np[j]
            d2j = xi2.table_np[j]
            for i in range(d2):
                for c in range(d1):
                    row = np.zeros(nunk, dtype=np.int64)
                    for u in range(d1):
                        row[i * d1 + u] = (row[i * d1 + u] + d1j[u, c]) % p
                    for kk in range(d2):
                        row[kk * d1 + c] = (row[kk * d1 + c] - d2j[i, kk]) % p
                    sys_rows.append(row)
                    rhs.append(0)
    if extra_constraints:
        for A, Bm, C in extra_constraints:
            add_amb(A, Bm, C)

    if sys_rows:
        system = np.array(sys_rows, dtype=np.int64) % p
        part = modp.solve(system, np.array(rhs, dtype=np.int64), p)
        if part is None:
            return []
        basis = list(modp.nullspace(system, p))
    else:
        part = np.zeros(nunk, dtype=np.int64)
        basis = list(np.eye(nunk, dtype=np.int64))

    out = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = part.copy()
        for c, row in zip(coeffs, basis):
            if c:
                v = (v + c * row) % p
        M = v.reshape(d2, d1)
        ok = True
        for i in range(d1):
            for j in range(d1):
                if not np.array_equal((M @ x1.structure[i, j]) % p, x2.bracket_vec(M[:, i], M[:, j])):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        rank = modp.matrix_rank(M, p)
        if surjective and rank != d2:
            continue
        if injective and rank != d1:
            continue
        out.append(M)
        if limit is not None and len(out) >= limit:
            break
    return out
