"""Element-level algebra for the two ambient theories.

Finite groups are dense Cayley tables indexed 0..order-1; finite Lie algebras
over F_p are structure-constant tensors with elements encoded as base-p
integers.  Both expose the same handle-level operations (op, neg, ad, comm),
so the precrossed-module layer above can stay theory-neutral; subobject,
quotient and commutator constructions dispatch internally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd

import numpy as np

from . import modp
from .errors import (
    ActionInvalid,
    AmbientMismatch,
    AxiomViolation,
    BadSpec,
    CapExceeded,
    InvalidMorphism,
    NotNormal,
)

DEFAULT_MAX_ORDER = 2048
DEFAULT_MAX_DIM = 6
SUPPORTED_PRIMES = (2, 3, 5, 7)
FULL_ASSOC_LIMIT = 64
_ASSOC_SAMPLES = 4096


# ---------------------------------------------------------------------------
# ambient objects
# ---------------------------------------------------------------------------

class FiniteGroup:
    """Finite group on element indices 0..order-1 with a dense Cayley table.

    Associativity is checked on all triples up to order 64 and on a
    deterministic sample above that; identity and inverses are always checked
    in full.
    """

    def __init__(self, table, name=None, max_order=None, check=True):
        cap = DEFAULT_MAX_ORDER if max_order is None else max_order
        table = np.array(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise BadSpec("Cayley table must be a nonempty square matrix")
        n = table.shape[0]
        if n > cap:
            raise CapExceeded(f"group order {n} exceeds cap {cap}")
        if table.min() < 0 or table.max() >= n:
            raise BadSpec("Cayley table entries must be element indices")
        self.order = n
        self.table = table
        self.name = name or f"G{n}"
        if check:
            self.identity = self._find_identity()
            self.inv = self._find_inverses()
            self._check_associativity()
        else:
            self.identity = self._find_identity()
            self.inv = self._find_inverses()
        self.table.setflags(write=False)
        self.inv.setflags(write=False)

    def _find_identity(self):
        rng = np.arange(self.order)
        for e in range(self.order):
            if np.array_equal(self.table[e], rng) and np.array_equal(self.table[:, e], rng):
                return e
        raise AxiomViolation("no two-sided identity element")

    def _find_inverses(self):
        e = self.identity
        inv = np.full(self.order, -1, dtype=np.int64)
        for i in range(self.order):
            right = np.nonzero(self.table[i] == e)[0]
            found = None
            for j in right:
                if self.table[j, i] == e:
                    found = j
                    break
            if found is None:
                raise AxiomViolation(f"element {i} has no two-sided inverse", witness=i)
            inv[i] = found
        return inv

    def _check_associativity(self):
        t = self.table
        n = self.order
        if n <= FULL_ASSOC_LIMIT:
            for i in range(n):
                if not np.array_equal(t[t[i]], t[i][t]):
                    j, k = np.argwhere(t[t[i]] != t[i][t])[0]
                    raise AxiomViolation("associativity fails", witness=(i, int(j), int(k)))
        else:
            rng = np.random.default_rng(n)
            i = rng.integers(0, n, _ASSOC_SAMPLES)
            j = rng.integers(0, n, _ASSOC_SAMPLES)
            k = rng.integers(0, n, _ASSOC_SAMPLES)
            if not np.array_equal(t[t[i, j], k], t[i, t[j, k]]):
                bad = int(np.nonzero(t[t[i, j], k] != t[i, t[j, k]])[0][0])
                raise AxiomViolation(
                    "associativity fails", witness=(int(i[bad]), int(j[bad]), int(k[bad]))
                )

    # -- element operations ------------------------------------------------

    @property
    def size(self) -> int:
        return self.order

    @property
    def unit(self) -> int:
        return int(self.identity)

    def op(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def neg(self, a: int) -> int:
        return int(self.inv[a])

    def ad(self, g: int, x: int) -> int:
        """Conjugate g x g^-1."""
        return int(self.table[self.table[g, x], self.inv[g]])

    def comm(self, a: int, b: int) -> int:
        """Commutator a b a^-1 b^-1."""
        return int(self.table[self.table[a, b], self.table[self.inv[a], self.inv[b]]])

    def elements(self):
        return range(self.order)

    def spanning(self):
        """Element set sufficient to span identities bilinear in each slot."""
        return range(self.order)

    @cached_property
    def element_orders(self):
        orders = np.ones(self.order, dtype=np.int64)
        for i in range(self.order):
            x = i
            k = 1
            while x != self.identity:
                x = int(self.table[x, i])
                k += 1
            orders[i] = k
        orders.setflags(write=False)
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def conjugacy_class_sizes(self):
        seen = np.zeros(self.order, dtype=bool)
        sizes = []
        for i in range(self.order):
            if seen[i]:
                continue
            orbit = {self.ad(g, i) for g in range(self.order)}
            for x in orbit:
                seen[x] = True
            sizes.append(len(orbit))
        return tuple(sorted(sizes))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


class FiniteLieAlgebra:
    """Finite-dimensional Lie algebra over F_p given by structure constants.

    ``structure[i, j]`` is the coordinate vector of [e_i, e_j].  Elements are
    handled as integers encoding coordinate vectors in base p (little-endian),
    so the handle-level interface matches FiniteGroup, with vector addition as
    ``op`` and the bracket as ``ad``.
    """

    def __init__(self, prime, structure, name=None, max_dim=None, check=True):
        cap = DEFAULT_MAX_DIM if max_dim is None else max_dim
        if prime not in SUPPORTED_PRIMES:
            raise BadSpec(f"field characteristic must be one of {SUPPORTED_PRIMES}")
        structure = np.array(structure, dtype=np.int64)
        if structure.size == 0:
            structure = structure.reshape(0, 0, 0)
        if structure.ndim != 3 or len(set(structure.shape)) > 1:
            raise BadSpec("structure constants must form a dim x dim x dim tensor")
        d = structure.shape[0]
        if d > cap:
            raise CapExceeded(f"dimension {d} exceeds cap {cap}")
        self.prime = int(prime)
        self.dim = d
        self.structure = structure % self.prime
        self.name = name or f"L{d}(F{prime})"
        self._pows = self.prime ** np.arange(d, dtype=np.int64)
        if check:
            self._check_axioms()
        self.structure.setflags(write=False)

    def _check_axioms(self):
        p, s, d = self.prime, self.structure, self.dim
        for i in range(d):
            if s[i, i].any():
                raise AxiomViolation("bracket not alternating: [e_i, e_i] != 0", witness=i)
            for j in range(d):
                if ((s[i, j] + s[j, i]) % p).any():
                    raise AxiomViolation("bracket not antisymmetric", witness=(i, j))
        eye = np.eye(d, dtype=np.int64)
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    total = (
                        self.bracket_vec(s[i, j], eye[k])
                        + self.bracket_vec(s[j, k], eye[i])
                        + self.bracket_vec(s[k, i], eye[j])
                    ) % p
                    if total.any():
                        raise AxiomViolation("Jacobi identity fails", witness=(i, j, k))

    # -- vector/handle conversion -------------------------------------------

    @property
    def size(self) -> int:
        return int(self.prime ** self.dim)

    @property
    def unit(self) -> int:
        return 0

    def decode(self, h: int):
        out = np.empty(self.dim, dtype=np.int64)
        for i in range(self.dim):
            out[i] = h % self.prime
            h //= self.prime
        return out

    def encode(self, vec) -> int:
        return int((np.asarray(vec, dtype=np.int64) % self.prime) @ self._pows)

    def bracket_vec(self, u, v):
        p = self.prime
        return (np.einsum("i,j,ijk->k", u % p, v % p, self.structure) % p).astype(np.int64)

    # -- element operations ------------------------------------------------

    def op(self, a: int, b: int) -> int:
        return self.encode(self.decode(a) + self.decode(b))

    def neg(self, a: int) -> int:
        return self.encode(-self.decode(a))

    def ad(self, a: int, b: int) -> int:
        return self.encode(self.bracket_vec(self.decode(a), self.decode(b)))

    def comm(self, a: int, b: int) -> int:
        return self.ad(a, b)

    def elements(self):
        return range(self.size)

    def spanning(self):
        return [int(self._pows[i]) for i in range(self.dim)]

    def ad_matrix(self, vec):
        """Matrix of [v, -] acting on coordinate columns."""
        p = self.prime
        return (np.einsum("i,ijk->kj", np.asarray(vec) % p, self.structure) % p).astype(np.int64)

    @cached_property
    def is_abelian(self) -> bool:
        return not self.structure.any()

    @cached_property
    def derived_dims(self):
        """Dimensions of the lower central series terms."""
        dims = []
        current = np.eye(self.dim, dtype=np.int64)
        while True:
            brackets = []
            for i in range(self.dim):
                for row in current:
                    brackets.append(self.bracket_vec(np.eye(self.dim, dtype=np.int64)[i], row))
            nxt, _ = modp.rref(np.array(brackets, dtype=np.int64), self.prime) if brackets else (np.zeros((0, self.dim), dtype=np.int64), [])
            dims.append(nxt.shape[0])
            if nxt.shape[0] == 0 or nxt.shape[0] == current.shape[0]:
                break
            current = nxt
        return tuple(dims)

    def __repr__(self):
        return f"FiniteLieAlgebra({self.name}, dim={self.dim}, p={self.prime})"


def is_lie(obj) -> bool:
    return isinstance(obj, FiniteLieAlgebra)


# ---------------------------------------------------------------------------
# subobjects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subobject:
    """Subgroup (sorted member handles) or subalgebra (rref basis handles)."""

    ambient: object
    carrier: tuple

    @cached_property
    def _member_set(self):
        return frozenset(self.members())

    @cached_property
    def basis_matrix(self):
        rows = [self.ambient.decode(h) for h in self.carrier]
        if not rows:
            return np.zeros((0, self.ambient.dim), dtype=np.int64)
        return np.array(rows, dtype=np.int64)

    @cached_property
    def _pivots(self):
        _, piv = modp.rref(self.basis_matrix, self.ambient.prime) if self.carrier else (None, [])
        return piv

    @property
    def size(self) -> int:
        if is_lie(self.ambient):
            return int(self.ambient.prime ** len(self.carrier))
        return len(self.carrier)

    def members(self):
        """All element handles, sorted."""
        if not is_lie(self.ambient):
            return self.carrier
        L = self.ambient
        p, k = L.prime, len(self.carrier)
        basis = self.basis_matrix
        out = []
        for coeffs in itertools.product(range(p), repeat=k):
            vec = (np.array(coeffs, dtype=np.int64) @ basis) % p if k else np.zeros(L.dim, dtype=np.int64)
            out.append(L.encode(vec))
        return tuple(sorted(out))

    def spanning(self):
        """Generators spanning the carrier (all members for groups, basis for Lie)."""
        return self.carrier

    def contains(self, h: int) -> bool:
        if is_lie(self.ambient):
            return modp.in_span(self.basis_matrix, self._pivots, self.ambient.decode(h), self.ambient.prime)
        return h in self._member_set

    @property
    def is_trivial(self) -> bool:
        if is_lie(self.ambient):
            return len(self.carrier) == 0
        return self.carrier == (self.ambient.unit,)

    @property
    def is_whole(self) -> bool:
        return self.size == self.ambient.size

    def leq(self, other: "Subobject") -> bool:
        if other.ambient is not self.ambient:
            raise AmbientMismatch("subobjects of different ambient objects")
        return all(other.contains(h) for h in self.carrier)


def _canon_group_sub(A, members) -> Subobject:
    return Subobject(A, tuple(sorted(set(int(m) for m in members))))


def _canon_lie_sub(L, rows) -> Subobject:
    if len(rows) == 0:
        return Subobject(L, ())
    red, _ = modp.rref(np.array(rows, dtype=np.int64), L.prime)
    return Subobject(L, tuple(L.encode(r) for r in red))


def make_subobject(A, handles, check=True) -> Subobject:
    """Subobject from explicit member handles (group) or spanning vectors (Lie)."""
    if is_lie(A):
        sub = _canon_lie_sub(A, [A.decode(h) for h in handles])
        if check:
            for u in sub.carrier:
                for v in sub.carrier:
                    if not sub.contains(A.ad(u, v)):
                        raise AxiomViolation("carrier not closed under bracket", witness=(u, v))
        return sub
    members = set(int(h) for h in handles)
    members.add(A.unit)
    sub = _canon_group_sub(A, members)
    if check:
        for a in sub.carrier:
            if A.neg(a) not in sub._member_set:
                raise AxiomViolation("carrier not closed under inverse", witness=a)
            for b in sub.carrier:
                if A.op(a, b) not in sub._member_set:
                    raise AxiomViolation("carrier not closed under product", witness=(a, b))
    return sub


def trivial_subobject(A) -> Subobject:
    if is_lie(A):
        return Subobject(A, ())
    return Subobject(A, (A.unit,))


def whole_subobject(A) -> Subobject:
    if is_lie(A):
        return _canon_lie_sub(A, np.eye(A.dim, dtype=np.int64))
    return Subobject(A, tuple(range(A.order)))


def _close_group(A, gens) -> tuple:
    gens = sorted(set(int(g) for g in gens))
    members = {A.unit}
    frontier = [A.unit]
    table = A.table
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in members:
                    members.add(y)
                    fresh.append(y)
        frontier = fresh
    return tuple(sorted(members))


def _close_lie_subalgebra(L, rows):
    basis, _ = modp.rref(np.array(rows, dtype=np.int64), L.prime) if len(rows) else (np.zeros((0, L.dim), dtype=np.int64), [])
    while True:
        new_rows = list(basis)
        for u in basis:
            for v in basis:
                new_rows.append(L.bracket_vec(u, v))
        nxt, _ = modp.rref(np.array(new_rows, dtype=np.int64), L.prime)
        if nxt.shape[0] == basis.shape[0]:
            return nxt
        basis = nxt


def _close_lie_ideal(L, rows):
    basis, _ = modp.rref(np.array(rows, dtype=np.int64), L.prime) if len(rows) else (np.zeros((0, L.dim), dtype=np.int64), [])
    eye = np.eye(L.dim, dtype=np.int64)
    while True:
        new_rows = list(basis)
        for e in eye:
            for v in basis:
                new_rows.append(L.bracket_vec(e, v))
        nxt, _ = modp.rref(np.array(new_rows, dtype=np.int64), L.prime)
        if nxt.shape[0] == basis.shape[0]:
            return nxt
        basis = nxt


def generated_subobject(A, handles, normal=False) -> Subobject:
    """Smallest (normal) subgroup / (ideal) subalgebra containing the handles."""
    if is_lie(A):
        rows = [A.decode(h) for h in handles]
        closed = _close_lie_ideal(A, rows) if normal else _close_lie_subalgebra(A, rows)
        return _canon_lie_sub(A, closed)
    seeds = set(int(h) for h in handles)
    while True:
        members = _close_group(A, seeds)
        if not normal:
            return Subobject(A, members)
        member_set = set(members)
        conjugates = {A.ad(g, m) for g in range(A.order) for m in members}
        if conjugates <= member_set:
            return Subobject(A, members)
        seeds = member_set | conjugates


def normal_closure(S: Subobject) -> Subobject:
    return generated_subobject(S.ambient, S.spanning(), normal=True)


def is_normal_subobject(S: Subobject) -> bool:
    A = S.ambient
    if is_lie(A):
        for e in A.spanning():
            for v in S.carrier:
                if not S.contains(A.ad(e, v)):
                    return False
        return True
    for g in range(A.order):
        for m in S.carrier:
            if A.ad(g, m) not in S._member_set:
                return False
    return True


def meet(M: Subobject, N: Subobject) -> Subobject:
    if M.ambient is not N.ambient:
        raise AmbientMismatch("meet of subobjects over different ambient objects")
    A = M.ambient
    if is_lie(A):
        inter = modp.intersect(M.basis_matrix, N.basis_matrix, A.prime)
        return _canon_lie_sub(A, inter)
    return Subobject(A, tuple(sorted(M._member_set & N._member_set)))


def join(M: Subobject, N: Subobject) -> Subobject:
    if M.ambient is not N.ambient:
        raise AmbientMismatch("join of subobjects over different ambient objects")
    return generated_subobject(M.ambient, tuple(M.spanning()) + tuple(N.spanning()), normal=False)


def lattice(A, M: Subobject, N: Subobject, op: str) -> Subobject:
    if M.ambient is not A or N.ambient is not A:
        raise AmbientMismatch("subobjects do not live in the given ambient object")
    if op == "meet":
        return meet(M, N)
    if op == "join":
        return join(M, N)
    raise BadSpec(f"unknown lattice operation {op!r}")


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hom:
    """Structure-preserving map; element images for groups, matrix for Lie."""

    domain: object
    codomain: object
    mapping: tuple = None
    matrix: tuple = None

    @cached_property
    def matrix_np(self):
        return np.array(self.matrix, dtype=np.int64).reshape(
            self.codomain.dim, self.domain.dim
        )

    def apply(self, h: int) -> int:
        if self.mapping is not None:
            return self.mapping[h]
        cod = self.codomain
        vec = (self.matrix_np @ self.domain.decode(h)) % cod.prime
        return cod.encode(vec)

    @cached_property
    def mapping_all(self):
        if self.mapping is not None:
            return self.mapping
        return tuple(self.apply(h) for h in range(self.domain.size))

    def kernel(self) -> Subobject:
        if self.mapping is not None:
            e = self.codomain.unit
            return Subobject(self.domain, tuple(sorted(h for h, v in enumerate(self.mapping) if v == e)))
        ns = modp.nullspace(self.matrix_np, self.domain.prime)
        return _canon_lie_sub(self.domain, ns)

    def image(self) -> Subobject:
        if self.mapping is not None:
            return Subobject(self.codomain, tuple(sorted(set(self.mapping))))
        return _canon_lie_sub(self.codomain, self.matrix_np.T)

    @property
    def is_surjective(self) -> bool:
        return self.image().size == self.codomain.size

    @property
    def is_injective(self) -> bool:
        return self.kernel().is_trivial

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective


def make_hom(domain, codomain, mapping=None, matrix=None, check=True) -> Hom:
    if is_lie(domain) != is_lie(codomain):
        raise AmbientMismatch("mixed group/Lie homomorphism")
    if is_lie(domain):
        m = np.array(matrix, dtype=np.int64).reshape(codomain.dim, domain.dim) % codomain.prime
        if domain.prime != codomain.prime:
            raise AmbientMismatch("Lie homomorphism between different characteristics")
        f = Hom(domain, codomain, matrix=tuple(tuple(int(x) for x in row) for row in m))
        if check:
            for i in range(domain.dim):
                for j in range(domain.dim):
                    lhs = (m @ domain.structure[i, j]) % domain.prime
                    rhs = codomain.bracket_vec(m[:, i], m[:, j])
                    if not np.array_equal(lhs, rhs):
                        raise InvalidMorphism("map does not preserve the bracket", witness=(i, j))
        return f
    mapping = tuple(int(x) for x in mapping)
    if len(mapping) != domain.order or any(not 0 <= v < codomain.order for v in mapping):
        raise BadSpec("homomorphism mapping has wrong shape")
    f = Hom(domain, codomain, mapping=mapping)
    if check:
        arr = np.array(mapping, dtype=np.int64)
        for a in range(domain.order):
            if not np.array_equal(arr[domain.table[a]], codomain.table[arr[a], arr]):
                b = int(np.nonzero(arr[domain.table[a]] != codomain.table[arr[a], arr])[0][0])
                raise InvalidMorphism("map does not preserve the product", witness=(a, b))
    return f


def identity_hom(A) -> Hom:
    if is_lie(A):
        return make_hom(A, A, matrix=np.eye(A.dim, dtype=np.int64), check=False)
    return make_hom(A, A, mapping=tuple(range(A.order)), check=False)


def zero_hom(domain, codomain) -> Hom:
    if is_lie(domain):
        return make_hom(domain, codomain, matrix=np.zeros((codomain.dim, domain.dim), dtype=np.int64), check=False)
    return make_hom(domain, codomain, mapping=(codomain.unit,) * domain.order, check=False)


def compose(f: Hom, g: Hom) -> Hom:
    """f after g."""
    if g.codomain is not f.domain:
        raise AmbientMismatch("composition of non-composable homomorphisms")
    if is_lie(f.domain):
        m = (f.matrix_np @ g.matrix_np) % f.codomain.prime
        return make_hom(g.domain, f.codomain, matrix=m, check=False)
    return make_hom(g.domain, f.codomain, mapping=tuple(f.mapping[v] for v in g.mapping), check=False)


def hom_image_kernel(f: Hom):
    return f.image(), f.kernel()


def hom_equal(f: Hom, g: Hom) -> bool:
    if f.domain is not g.domain or f.codomain is not g.codomain:
        return False
    if f.mapping is not None:
        return f.mapping == g.mapping
    return np.array_equal(f.matrix_np % f.codomain.prime, g.matrix_np % g.codomain.prime)


# ---------------------------------------------------------------------------
# embedded subobjects (a subobject as a first-class ambient object)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddedSub:
    subobject: Subobject
    object: object
    include: Hom

    @cached_property
    def _locate(self):
        table = {}
        for local in range(self.object.size):
            table[self.include.apply(local)] = local
        return table

    def locate(self, h: int) -> int:
        """Local handle of an ambient handle known to lie in the carrier."""
        return self._locate[h]


def embed_subobject(S: Subobject, name=None) -> EmbeddedSub:
    A = S.ambient
    if is_lie(A):
        basis = S.basis_matrix
        k = basis.shape[0]
        structure = np.zeros((k, k, k), dtype=np.int64)
        red, piv = modp.rref(basis, A.prime) if k else (basis, [])
        for i in range(k):
            for j in range(k):
                coords = modp.coordinates(red, piv, A.bracket_vec(basis[i], basis[j]), A.prime)
                if coords is None:
                    raise AxiomViolation("carrier not closed under bracket", witness=(i, j))
                structure[i, j] = coords
        sub = FiniteLieAlgebra(A.prime, structure, name=name or f"{A.name}|sub{k}")
        incl = make_hom(sub, A, matrix=basis.T, check=False)
        return EmbeddedSub(S, sub, incl)
    members = S.carrier
    index = {h: i for i, h in enumerate(members)}
    k = len(members)
    table = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            table[i, j] = index[A.op(a, b)]
    sub = FiniteGroup(table, name=name or f"{A.name}|sub{k}")
    incl = make_hom(sub, A, mapping=members, check=False)
    return EmbeddedSub(S, sub, incl)


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

def quotient_by(A, N: Subobject):
    """Quotient by a normal subgroup / ideal; returns (object, projection)."""
    if N.ambient is not A:
        raise AmbientMismatch("subobject does not live in the given ambient object")
    if not is_normal_subobject(N):
        raise NotNormal("carrier is not normal / not an ideal")
    if is_lie(A):
        basis = N.basis_matrix
        red, piv = modp.rref(basis, A.prime) if basis.shape[0] else (np.zeros((0, A.dim), dtype=np.int64), [])
        free = [c for c in range(A.dim) if c not in piv]
        q_dim = len(free)

        def project_vec(v):
            # reduce modulo N, then read the non-pivot coordinates
            return modp.reduce_vector(red, piv, v, A.prime)[free]

        proj = np.array(
            [project_vec(np.eye(A.dim, dtype=np.int64)[c]) for c in range(A.dim)]
        ).T % A.prime if A.dim else np.zeros((0, 0), dtype=np.int64)
        lift = np.zeros((A.dim, q_dim), dtype=np.int64)
        for r, c in enumerate(free):
            lift[c, r] = 1
        structure = np.zeros((q_dim, q_dim, q_dim), dtype=np.int64)
        for i in range(q_dim):
            for j in range(q_dim):
                structure[i, j] = project_vec(A.bracket_vec(lift[:, i], lift[:, j]))
        Q = FiniteLieAlgebra(A.prime, structure, name=f"{A.name}/{N.size}")
        proj_hom = make_hom(A, Q, matrix=proj, check=True)
        return Q, proj_hom
    members = N.carrier
    coset_of = np.full(A.order, -1, dtype=np.int64)
    reps = []
    for h in range(A.order):
        if coset_of[h] >= 0:
            continue
        idx = len(reps)
        reps.append(h)
        for n in members:
            coset_of[A.op(h, n)] = idx
    k = len(reps)
    table = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            table[i, j] = coset_of[A.op(a, b)]
    Q = FiniteGroup(table, name=f"{A.name}/{N.size}")
    proj_hom = make_hom(A, Q, mapping=tuple(int(c) for c in coset_of), check=True)
    return Q, proj_hom


def section_of(proj: Hom):
    """Minimal-representative lift for a surjective map; returns handle list / matrix."""
    if proj.mapping is not None:
        reps = {}
        for h, c in enumerate(proj.mapping):
            if c not in reps:
                reps[c] = h
        return tuple(reps[c] for c in range(proj.codomain.size))
    p = proj.domain.prime
    cols = []
    for i in range(proj.codomain.dim):
        rhs = np.zeros(proj.codomain.dim, dtype=np.int64)
        rhs[i] = 1
        sol = modp.solve(proj.matrix_np, rhs, p)
        if sol is None:
            raise NotSurjectiveInternal()
        cols.append(sol)
    if not cols:
        return np.zeros((proj.domain.dim, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T


class NotSurjectiveInternal(Exception):
    pass


def induced_hom(proj: Hom, f: Hom) -> Hom:
    """The map on proj's codomain induced by f; requires ker(proj) <= ker(f)."""
    if proj.domain is not f.domain:
        raise AmbientMismatch("induced_hom operands must share a domain")
    if f.mapping is not None:
        lift = section_of(proj)
        mapping = tuple(f.mapping[r] for r in lift)
        for h in range(proj.domain.size):
            if mapping[proj.mapping[h]] != f.mapping[h]:
                raise InvalidMorphism("map does not factor through the quotient", witness=h)
        return make_hom(proj.codomain, f.codomain, mapping=mapping, check=True)
    lift = section_of(proj)
    candidate = (f.matrix_np @ lift) % f.codomain.prime
    if not np.array_equal((candidate @ proj.matrix_np) % f.codomain.prime, f.matrix_np % f.codomain.prime):
        raise InvalidMorphism("map does not factor through the quotient")
    return make_hom(proj.codomain, f.codomain, matrix=candidate, check=True)


def induced_from_callable(proj: Hom, target, fn) -> Hom:
    """Hom on proj's codomain defined by h -> fn(any preimage), with a
    well-definedness sweep over every domain element."""
    values = {}
    for h in range(proj.domain.size):
        c = proj.apply(h)
        v = fn(h)
        if values.setdefault(c, v) != v:
            raise InvalidMorphism("assignment not constant on fibers", witness=h)
    mapping = tuple(values[c] for c in range(proj.codomain.size))
    if is_lie(target):
        basis_images = [target.decode(mapping[proj.codomain.encode(row)]) for row in np.eye(proj.codomain.dim, dtype=np.int64)]
        matrix = np.array(basis_images, dtype=np.int64).T if basis_images else np.zeros((target.dim, 0), dtype=np.int64)
        f = make_hom(proj.codomain, target, matrix=matrix, check=True)
        # matrix route must reproduce the elementwise assignment
        for c, v in enumerate(mapping):
            if f.apply(c) != v:
                raise InvalidMorphism("induced map is not linear", witness=c)
        return f
    return make_hom(proj.codomain, target, mapping=mapping, check=True)


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionTable:
    """Action of B on X: one automorphism per element (one derivation per
    basis vector in the Lie case)."""

    actor: object
    acted: object
    table: tuple

    @cached_property
    def table_np(self):
        if is_lie(self.acted):
            return np.array(self.table, dtype=np.int64).reshape(
                self.actor.dim, self.acted.dim, self.acted.dim
            )
        return np.array(self.table, dtype=np.int64).reshape(self.actor.order, self.acted.order)

    def act(self, b: int, x: int) -> int:
        if not is_lie(self.acted):
            return int(self.table_np[b, x])
        X = self.acted
        mat = self.matrix_for(b)
        return X.encode((mat @ X.decode(x)) % X.prime)

    def matrix_for(self, b: int):
        """Combined derivation matrix for an arbitrary actor handle (Lie)."""
        beta = self.actor.decode(b)
        return (np.einsum("i,ijk->jk", beta, self.table_np) % self.acted.prime).astype(np.int64)

    def automorphism_of(self, b: int) -> Hom:
        if is_lie(self.acted):
            raise BadSpec("Lie action slices are derivations, not automorphisms")
        return make_hom(self.acted, self.acted, mapping=tuple(int(v) for v in self.table_np[b]), check=False)

    def is_stable(self, S: Subobject) -> bool:
        if S.ambient is not self.acted:
            raise AmbientMismatch("subobject does not live in the acted object")
        if is_lie(self.acted):
            for j in range(self.actor.dim):
                mat = self.table_np[j]
                for h in S.carrier:
                    img = (mat @ self.acted.decode(h)) % self.acted.prime
                    if not S.contains(self.acted.encode(img)):
                        return False
            return True
        for b in range(self.actor.order):
            row = self.table_np[b]
            for m in S.carrier:
                if int(row[m]) not in S._member_set:
                    return False
        return True


def make_action(actor, acted, table, check=True) -> ActionTable:
    if is_lie(actor) != is_lie(acted):
        raise AmbientMismatch("actor and acted must come from the same theory")
    if is_lie(actor):
        arr = np.array(table, dtype=np.int64).reshape(actor.dim, acted.dim, acted.dim) % acted.prime
        xi = ActionTable(actor, acted, tuple(tuple(tuple(int(v) for v in row) for row in mat) for mat in arr))
        if check:
            p = acted.prime
            for j in range(actor.dim):
                D = arr[j]
                for a in range(acted.dim):
                    for b in range(acted.dim):
                        lhs = (D @ acted.structure[a, b]) % p
                        ea, eb = np.eye(acted.dim, dtype=np.int64)[[a, b]]
                        rhs = (acted.bracket_vec(D @ ea, eb) + acted.bracket_vec(ea, D @ eb)) % p
                        if not np.array_equal(lhs, rhs):
                            raise ActionInvalid("slice is not a derivation", witness=(j, a, b))
            for i in range(actor.dim):
                for j in range(actor.dim):
                    lhs = (np.einsum("k,kab->ab", actor.structure[i, j], arr) % p)
                    rhs = (arr[i] @ arr[j] - arr[j] @ arr[i]) % p
                    if not np.array_equal(lhs, rhs):
                        raise ActionInvalid("assignment is not a Lie homomorphism into Der", witness=(i, j))
        return xi
    arr = np.array(table, dtype=np.int64).reshape(actor.order, acted.order)
    xi = ActionTable(actor, acted, tuple(tuple(int(v) for v in row) for row in arr))
    if check:
        for b in range(actor.order):
            row = arr[b]
            if sorted(set(int(v) for v in row)) != list(range(acted.order)):
                raise ActionInvalid("slice is not a bijection", witness=b)
            if not np.array_equal(row[acted.table], acted.table[np.ix_(row, row)]):
                raise ActionInvalid("slice is not an automorphism", witness=b)
        for b1 in range(actor.order):
            for b2 in range(actor.order):
                if not np.array_equal(arr[actor.table[b1, b2]], arr[b1][arr[b2]]):
                    raise ActionInvalid("assignment is not a homomorphism into Aut", witness=(b1, b2))
    return xi


def trivial_action(B, X) -> ActionTable:
    if is_lie(B):
        return make_action(B, X, np.zeros((B.dim, X.dim, X.dim), dtype=np.int64), check=False)
    return make_action(B, X, np.tile(np.arange(X.order, dtype=np.int64), (B.order, 1)), check=False)


def conjugation_action(A) -> ActionTable:
    if is_lie(A):
        slices = [A.ad_matrix(np.eye(A.dim, dtype=np.int64)[i]) for i in range(A.dim)]
        return make_action(A, A, np.array(slices, dtype=np.int64), check=False)
    table = np.zeros((A.order, A.order), dtype=np.int64)
    for g in range(A.order):
        table[g] = A.table[A.table[g], A.inv[g]]
    return make_action(A, A, table, check=False)


def pullback_action(f: Hom, xi: ActionTable) -> ActionTable:
    """Action of f's domain obtained by precomposing the actor with f."""
    if f.codomain is not xi.actor:
        raise AmbientMismatch("pullback along a map into a different actor")
    A = f.domain
    if is_lie(A):
        slices = [np.einsum("k,kab->ab", f.matrix_np[:, i], xi.table_np) % xi.acted.prime for i in range(A.dim)]
        return make_action(A, xi.acted, np.array(slices, dtype=np.int64), check=False)
    table = np.array([xi.table_np[f.mapping[a]] for a in range(A.order)], dtype=np.int64)
    return make_action(A, xi.acted, table, check=False)


# ---------------------------------------------------------------------------
# semidirect / direct products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemidirectProduct:
    object: object
    proj: Hom       # onto the actor
    insert: Hom     # section of proj
    inject: Hom     # the acted object as the kernel of proj


def semidirect_product(X, B, xi: ActionTable, max_order=None) -> SemidirectProduct:
    """X â‹Š B for an action of B on X; handles are x + |X| * b (group) or
    concatenated coordinates (Lie)."""
    if xi.actor is not B or xi.acted is not X:
        raise ActionInvalid("action does not match the given actor/acted pair")
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if is_lie(X):
        dx, db = X.dim, B.dim
        if dx + db > DEFAULT_MAX_DIM or X.prime ** (dx + db) > cap:
            raise CapExceeded(f"semidirect dimension {dx + db} over F_{X.prime} exceeds cap")
        d = dx + db
        structure = np.zeros((d, d, d), dtype=np.int64)
        p = X.prime
        structure[:dx, :dx, :dx] = X.structure
        structure[dx:, dx:, dx:] = B.structure
        for j in range(db):
            D = xi.table_np[j]
            for i in range(dx):
                structure[dx + j, i, :dx] = D[:, i] % p
                structure[i, dx + j, :dx] = (-D[:, i]) % p
        S = FiniteLieAlgebra(X.prime, structure, name=f"{X.name}:{B.name}")
        proj = make_hom(S, B, matrix=np.concatenate([np.zeros((db, dx), dtype=np.int64), np.eye(db, dtype=np.int64)], axis=1), check=False)
        insert = make_hom(B, S, matrix=np.concatenate([np.zeros((dx, db), dtype=np.int64), np.eye(db, dtype=np.int64)], axis=0), check=False)
        inject = make_hom(X, S, matrix=np.concatenate([np.eye(dx, dtype=np.int64), np.zeros((db, dx), dtype=np.int64)], axis=0), check=False)
        return SemidirectProduct(S, proj, insert, inject)
    nx, nb = X.order, B.order
    n = nx * nb
    if n > cap:
        raise CapExceeded(f"semidirect order {n} exceeds cap {cap}")
    act = xi.table_np
    # handle layout is x + nx*b; entry = (x * b.x') + nx * (b * b')
    xs = np.arange(n) % nx
    bs = np.arange(n) // nx
    left_x, left_b = xs[:, None], bs[:, None]
    right_x, right_b = xs[None, :], bs[None, :]
    twisted = act[left_b, right_x]
    table = X.table[left_x, twisted] + nx * B.table[left_b, right_b]
    S = FiniteGroup(table, name=f"{X.name}:{B.name}", max_order=cap)
    proj = make_hom(S, B, mapping=tuple(int(v) for v in bs), check=False)
    insert = make_hom(B, S, mapping=tuple(X.unit + nx * b for b in range(nb)), check=False)
    inject = make_hom(X, S, mapping=tuple(x + nx * B.unit for x in range(nx)), check=False)
    return SemidirectProduct(S, proj, insert, inject)


@dataclass(frozen=True)
class DirectProduct:
    object: object
    p1: Hom
    p2: Hom
    i1: Hom
    i2: Hom

    def pair(self, a: int, b: int) -> int:
        """Handle of (a, b) with a in the p1 factor and b in the p2 factor."""
        if is_lie(self.object):
            vec = np.concatenate([self.p2.codomain.decode(b), self.p1.codomain.decode(a)])
            return self.object.encode(vec)
        return b + self.p2.codomain.order * a


def direct_product(X, Y, max_order=None) -> DirectProduct:
    sd = semidirect_product(Y, X, trivial_action(X, Y), max_order=max_order)
    # semidirect layout: handle = y + |Y| * x; p1 = proj (onto X); build p2
    S = sd.object
    if is_lie(X):
        dy = Y.dim
        p2 = make_hom(S, Y, matrix=np.concatenate([np.eye(dy, dtype=np.int64), np.zeros((dy, X.dim), dtype=np.int64)], axis=1), check=False)
        return DirectProduct(S, sd.proj, p2, sd.insert, sd.inject)
    ny = Y.order
    p2 = make_hom(S, Y, mapping=tuple(h % ny for h in range(S.order)), check=False)
    return DirectProduct(S, sd.proj, p2, sd.insert, sd.inject)


# ---------------------------------------------------------------------------
# commutators
# ---------------------------------------------------------------------------

def huq_commutator(A, M: Subobject, N: Subobject) -> Subobject:
    """Subgroup generated by commutators / subalgebra generated by brackets."""
    if M.ambient is not A or N.ambient is not A:
        raise AmbientMismatch("subobjects do not live in the given ambient object")
    if is_lie(A):
        gens = [A.comm(m, n) for m in M.spanning() for n in N.spanning()]
        return generated_subobject(A, gens, normal=False)
    ms = np.array(M.carrier, dtype=np.int64)
    ns = np.array(N.carrier, dtype=np.int64)
    t, inv = A.table, A.inv
    gens = t[t[np.ix_(ms, ns)], t[np.ix_(inv[ms], inv[ns])]]
    return generated_subobject(A, np.unique(gens), normal=False)


# ---------------------------------------------------------------------------
# construction from structured descriptions
# ---------------------------------------------------------------------------

def _perm_compose(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def group_from_permutations(perms, max_order=None, name=None) -> FiniteGroup:
    """Close a list of permutations (index image arrays) into a group,
    indexing elements in breadth-first word order with the identity first."""
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if not perms:
        raise BadSpec("at least one permutation generator required")
    degree = len(perms[0])
    gens = []
    for perm in perms:
        t = tuple(int(v) for v in perm)
        if len(t) != degree or sorted(t) != list(range(degree)):
            raise BadSpec(f"not a permutation of 0..{degree - 1}: {perm}")
        gens.append(t)
    identity = tuple(range(degree))
    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        fresh = []
        for w in frontier:
            for g in gens:
                nxt = _perm_compose(w, g)
                if nxt not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(f"permutation closure exceeds cap {cap}")
                    index[nxt] = len(elements)
                    elements.append(nxt)
                    fresh.append(nxt)
        frontier = fresh
    n = len(elements)
    table = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[_perm_compose(a, b)]
    return FiniteGroup(table, name=name or f"perm{n}", max_order=cap)


def build_ambient(spec: dict, max_order=None, name=None):
    """Validated ambient object from a structured description."""
    if not isinstance(spec, dict):
        raise BadSpec("ambient description must be a mapping")
    kind = spec.get("kind")
    name = name or spec.get("name")
    if kind == "group":
        if "table" in spec:
            return FiniteGroup(spec["table"], name=name, max_order=max_order)
        if "perms" in spec:
            return group_from_permutations(spec["perms"], max_order=max_order, name=name)
        raise BadSpec("group description needs 'table' or 'perms'")
    if kind == "lie":
        if "p" not in spec or "structure" not in spec:
            raise BadSpec("lie description needs 'p' and 'structure'")
        return FiniteLieAlgebra(spec["p"], spec["structure"], name=name)
    raise BadSpec(f"unknown ambient kind {kind!r}")


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------

def _lcm(a, b):
    return a * b // gcd(a, b)


def abelian_invariants(A: FiniteGroup):
    """Invariant factors d1 | d2 | ... (largest first) of an abelian group."""
    if not A.is_abelian:
        return None
    factors = []
    current = A
    while current.order > 1:
        orders = current.element_orders
        g = int(np.argmax(orders))
        factors.append(int(orders[g]))
        powers = set()
        x = current.unit
        for _ in range(int(orders[g])):
            powers.add(x)
            x = current.op(x, g)
        current, _ = quotient_by(current, Subobject(current, tuple(sorted(powers))))
    return tuple(factors)


def fingerprint(A) -> str:
    """Readable isomorphism-type label; exact for abelian groups, an invariant
    fingerprint otherwise."""
    if is_lie(A):
        if A.dim == 0:
            return f"0(F{A.prime})"
        if A.is_abelian:
            return f"F{A.prime}^{A.dim}"
        return f"lie(p={A.prime},d={A.dim},lcs={'.'.join(map(str, A.derived_dims))})"
    if A.order == 1:
        return "0"
    inv = abelian_invariants(A)
    if inv is not None:
        return "x".join(f"Z/{d}" for d in inv)
    exponent = 1
    for o in A.element_orders:
        exponent = _lcm(exponent, int(o))
    cc = ".".join(map(str, A.conjugacy_class_sizes))
    return f"grp(o={A.order},exp={exponent},cc={cc})"
