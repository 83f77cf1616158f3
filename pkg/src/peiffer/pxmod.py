"""Precrossed and crossed modules over a fixed base object.

A precrossed module is a boundary map d: X -> B equivariant for an action of
B on X.  This module provides validation, morphisms, action-stable
submodules, the Peiffer commutator, the reflection into crossed modules, and
the equivalence with reflexive graphs via the semidirect product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ambient as amb
from . import homsearch
from .ambient import (
    ActionTable,
    Hom,
    Subobject,
    is_lie,
)
from .errors import (
    AmbientMismatch,
    InvalidMorphism,
    NonzeroBoundary,
    NotEquivariant,
    NotNormal,
    StabilityViolation,
)


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PrecrossedModule:
    X: object
    B: object
    boundary: Hom
    action: ActionTable

    @property
    def name(self):
        return f"({self.X.name} -> {self.B.name})"

    def __repr__(self):
        return f"PrecrossedModule{self.name}"


def make_pxmod(X, B, boundary: Hom, action: ActionTable, check=True) -> PrecrossedModule:
    """Validated precrossed module; raises NotEquivariant with a witness pair."""
    if boundary.domain is not X or boundary.codomain is not B:
        raise AmbientMismatch("boundary must map X to B")
    if action.actor is not B or action.acted is not X:
        raise AmbientMismatch("action must let B act on X")
    P = PrecrossedModule(X, B, boundary, action)
    if check:
        w = _equivariance_witness(P)
        if w is not None:
            raise NotEquivariant("boundary is not equivariant", witness=w)
    return P


def _equivariance_witness(P: PrecrossedModule):
    X, B, bd, xi = P.X, P.B, P.boundary, P.action
    if is_lie(X):
        for j in range(B.dim):
            dj = xi.table_np[j]
            bj = np.eye(B.dim, dtype=np.int64)[j]
            lhs = (bd.matrix_np @ dj) % B.prime
            rhs_cols = [B.bracket_vec(bj, bd.matrix_np[:, i]) for i in range(X.dim)]
            rhs = np.array(rhs_cols, dtype=np.int64).T if rhs_cols else np.zeros((B.dim, 0), dtype=np.int64)
            if not np.array_equal(lhs, rhs % B.prime):
                i = int(np.nonzero((lhs - rhs) % B.prime)[1][0])
                return (j, i)
        return None
    bdarr = np.array(bd.mapping, dtype=np.int64)
    act = xi.table_np
    for b in range(B.order):
        lhs = bdarr[act[b]]
        rhs = B.table[B.table[b, bdarr], B.inv[b]]
        if not np.array_equal(lhs, rhs):
            x = int(np.nonzero(lhs != rhs)[0][0])
            return (b, x)
    return None


_zero_bases = {}


def zero_base(prime=None):
    """The shared trivial base object (group, or Lie algebra over a prime)."""
    if prime in _zero_bases:
        return _zero_bases[prime]
    if prime is None:
        base = amb.FiniteGroup([[0]], name="0")
    else:
        base = amb.FiniteLieAlgebra(prime, np.zeros((0, 0, 0), dtype=np.int64), name="0")
    _zero_bases[prime] = base
    return base


def zero_base_pxmod(X) -> PrecrossedModule:
    """The degenerate precrossed module over the zero/trivial base."""
    B = zero_base(X.prime if is_lie(X) else None)
    return make_pxmod(X, B, amb.zero_hom(X, B), amb.trivial_action(B, X), check=False)


@dataclass(frozen=True, eq=False)
class PXMorphism:
    source: PrecrossedModule
    target: PrecrossedModule
    map: Hom

    def apply(self, h: int) -> int:
        return self.map.apply(h)


def make_pxmorphism(source: PrecrossedModule, target: PrecrossedModule, f: Hom, check=True) -> PXMorphism:
    if source.B is not target.B:
        raise AmbientMismatch("morphism endpoints live over different bases")
    if f.domain is not source.X or f.codomain is not target.X:
        raise AmbientMismatch("underlying map does not match the endpoints")
    m = PXMorphism(source, target, f)
    if check:
        if not _over_base(m):
            raise InvalidMorphism("target boundary composed with map differs from source boundary")
        w = _morphism_equivariance_witness(m)
        if w is not None:
            raise NotEquivariant("morphism is not equivariant", witness=w)
    return m


def _over_base(m: PXMorphism) -> bool:
    composed = amb.compose(m.target.boundary, m.map)
    return amb.hom_equal(composed, m.source.boundary)


def _morphism_equivariance_witness(m: PXMorphism):
    B = m.source.B
    xi1, xi2 = m.source.action, m.target.action
    if is_lie(m.source.X):
        M = m.map.matrix_np
        p = m.source.X.prime
        for j in range(B.dim):
            lhs = (M @ xi1.table_np[j]) % p
            rhs = (xi2.table_np[j] @ M) % p
            if not np.array_equal(lhs, rhs):
                i = int(np.nonzero((lhs - rhs) % p)[1][0])
                return (j, i)
        return None
    f = np.array(m.map.mapping, dtype=np.int64)
    a1, a2 = xi1.table_np, xi2.table_np
    for b in range(B.order):
        lhs = f[a1[b]]
        rhs = a2[b][f]
        if not np.array_equal(lhs, rhs):
            x = int(np.nonzero(lhs != rhs)[0][0])
            return (b, x)
    return None


def identity_pxmorphism(P: PrecrossedModule) -> PXMorphism:
    return make_pxmorphism(P, P, amb.identity_hom(P.X), check=False)


def compose_pxmorphisms(f: PXMorphism, g: PXMorphism) -> PXMorphism:
    """f after g."""
    return make_pxmorphism(g.source, f.target, amb.compose(f.map, g.map), check=False)


# ---------------------------------------------------------------------------
# submodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PXSubmodule:
    parent: PrecrossedModule
    carrier: Subobject
    carrier_normal: bool
    zero_boundary: bool

    @property
    def normal_in_parent(self) -> bool:
        """Kernel-type: stable, normal carrier with zero boundary."""
        return self.carrier_normal and self.zero_boundary

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def is_trivial(self) -> bool:
        return self.carrier.is_trivial


def make_submodule(parent: PrecrossedModule, carrier: Subobject) -> PXSubmodule:
    if carrier.ambient is not parent.X:
        raise AmbientMismatch("carrier does not live in the module's object")
    if not parent.action.is_stable(carrier):
        raise StabilityViolation("carrier is not stable under the base action")
    normal = amb.is_normal_subobject(carrier)
    zero = all(parent.boundary.apply(h) == parent.B.unit for h in carrier.spanning())
    return PXSubmodule(parent, carrier, normal, zero)


def whole_submodule(P: PrecrossedModule) -> PXSubmodule:
    return make_submodule(P, amb.whole_subobject(P.X))


def trivial_submodule(P: PrecrossedModule) -> PXSubmodule:
    return make_submodule(P, amb.trivial_subobject(P.X))


def kernel_submodule(m: PXMorphism) -> PXSubmodule:
    return make_submodule(m.source, m.map.kernel())


def image_submodule(m: PXMorphism) -> PXSubmodule:
    return make_submodule(m.target, m.map.image())


def restrict_action(xi: ActionTable, emb: amb.EmbeddedSub) -> ActionTable:
    """The action induced on an embedded stable subobject."""
    S = emb.object
    if is_lie(S):
        basis = emb.subobject.basis_matrix
        red, piv = None, None
        from . import modp
        red, piv = modp.rref(basis, S.prime) if basis.shape[0] else (basis, [])
        slices = []
        for j in range(xi.actor.dim):
            cols = []
            for i in range(S.dim):
                img = (xi.table_np[j] @ basis[i]) % S.prime
                coords = modp.coordinates(red, piv, img, S.prime)
                if coords is None:
                    raise StabilityViolation("carrier is not stable under the base action")
                cols.append(coords)
            slices.append(np.array(cols, dtype=np.int64).T if cols else np.zeros((0, 0), dtype=np.int64))
        return amb.make_action(xi.actor, S, np.array(slices, dtype=np.int64).reshape(xi.actor.dim, S.dim, S.dim), check=False)
    rows = []
    for b in range(xi.actor.order):
        rows.append([emb.locate(xi.act(b, emb.include.apply(x))) for x in range(S.order)])
    return amb.make_action(xi.actor, S, np.array(rows, dtype=np.int64), check=False)


def sub_as_pxmod(sub: PXSubmodule):
    """The submodule as a precrossed module plus its inclusion morphism."""
    emb = amb.embed_subobject(sub.carrier)
    parent = sub.parent
    boundary = amb.compose(parent.boundary, emb.include)
    action = restrict_action(parent.action, emb)
    module = make_pxmod(emb.object, parent.B, boundary, action, check=False)
    incl = make_pxmorphism(module, parent, emb.include, check=False)
    return module, incl, emb


def action_on_quotient(xi: ActionTable, proj: Hom) -> ActionTable:
    """Action induced on a quotient along a projection with stable kernel."""
    Q = proj.codomain
    if is_lie(Q):
        lift = amb.section_of(proj)
        p = Q.prime
        slices = []
        for j in range(xi.actor.dim):
            induced = (proj.matrix_np @ xi.table_np[j] @ lift) % p
            if not np.array_equal((induced @ proj.matrix_np) % p, (proj.matrix_np @ xi.table_np[j]) % p):
                raise StabilityViolation("kernel is not stable under the base action")
            slices.append(induced)
        return amb.make_action(xi.actor, Q, np.array(slices, dtype=np.int64), check=False)
    lift = amb.section_of(proj)
    rows = []
    pmap = proj.mapping
    for b in range(xi.actor.order):
        row = [pmap[xi.act(b, r)] for r in lift]
        rows.append(row)
    rows = np.array(rows, dtype=np.int64)
    for b in range(xi.actor.order):
        for x in range(proj.domain.size):
            if pmap[xi.act(b, x)] != rows[b][pmap[x]]:
                raise StabilityViolation("kernel is not stable under the base action")
    return amb.make_action(xi.actor, Q, rows, check=False)


def quotient_pxmod(P: PrecrossedModule, N: Subobject):
    """Quotient by a kernel-type subobject (normal, stable, zero boundary)."""
    if N.ambient is not P.X:
        raise AmbientMismatch("subobject does not live in the module's object")
    if not amb.is_normal_subobject(N):
        raise NotNormal("can only quotient by a normal subobject")
    for h in N.spanning():
        if P.boundary.apply(h) != P.B.unit:
            raise NonzeroBoundary("quotient kernel must have zero boundary", witness=h)
    QX, proj = amb.quotient_by(P.X, N)
    boundary = amb.induced_hom(proj, P.boundary)
    action = action_on_quotient(P.action, proj)
    Q = make_pxmod(QX, P.B, boundary, action, check=True)
    unit = make_pxmorphism(P, Q, proj, check=False)
    return Q, unit


# ---------------------------------------------------------------------------
# crossedness and the Peiffer commutator
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CrossedVerdict:
    ok: bool
    witness: tuple = None

    def __bool__(self):
        return self.ok


def is_crossed(P: PrecrossedModule) -> CrossedVerdict:
    """Peiffer identity check: acting through the boundary is conjugation."""
    X, bd, xi = P.X, P.boundary, P.action
    if is_lie(X):
        for i, x in enumerate(X.spanning()):
            mat = xi.matrix_for(bd.apply(x))
            for j, y in enumerate(X.spanning()):
                if X.encode((mat @ X.decode(y)) % X.prime) != X.ad(x, y):
                    return CrossedVerdict(False, (x, y))
        return CrossedVerdict(True)
    act = xi.table_np
    for x in range(X.order):
        row = act[bd.mapping[x]]
        conj = X.table[X.table[x], X.inv[x]]
        if not np.array_equal(row, conj):
            y = int(np.nonzero(row != conj)[0][0])
            return CrossedVerdict(False, (x, y))
    return CrossedVerdict(True)


def peiffer_element(P: PrecrossedModule, m: int, n: int) -> int:
    """m n m^-1 (bd(m).n)^-1 in groups; [m,n] - xi(bd m)(n) in Lie algebras."""
    X = P.X
    acted = P.action.act(P.boundary.apply(m), n)
    return X.op(X.ad(m, n), X.neg(acted))


def peiffer_commutator(A: PrecrossedModule, M: PXSubmodule, N: PXSubmodule) -> PXSubmodule:
    """Subgroup generated (ideal generated, in the Lie case) by the Peiffer
    elements of the two submodules, in both orientations."""
    if M.parent is not A or N.parent is not A:
        raise AmbientMismatch("submodules do not live in the given module")
    X = A.X
    gens = set()
    for m in M.carrier.spanning():
        for n in N.carrier.spanning():
            gens.add(peiffer_element(A, m, n))
            gens.add(peiffer_element(A, n, m))
    carrier = amb.generated_subobject(X, sorted(gens), normal=is_lie(X))
    if not A.action.is_stable(carrier):
        raise StabilityViolation("Peiffer commutator carrier is not action-stable")
    return make_submodule(A, carrier)


def peiffer_radical(P: PrecrossedModule) -> PXSubmodule:
    """The Peiffer commutator of the whole module with itself."""
    w = whole_submodule(P)
    return peiffer_commutator(P, w, w)


@dataclass(frozen=True, eq=False)
class Reflection:
    module: PrecrossedModule
    unit: PXMorphism
    radical: PXSubmodule
    closure_was_proper: bool


_reflection_memo = {}


def reflect_to_xmod_cached(P: PrecrossedModule) -> "Reflection":
    """Memoized reflection; safe because modules are immutable and the memo
    holds a strong reference to its keys."""
    if P not in _reflection_memo:
        _reflection_memo[P] = reflect_to_xmod(P)
    return _reflection_memo[P]


def reflect_to_xmod(P: PrecrossedModule) -> Reflection:
    """Reflection into crossed modules: quotient by the (normal closure of
    the) Peiffer commutator of the module with itself."""
    radical = peiffer_radical(P)
    closed = amb.normal_closure(radical.carrier)
    proper = closed.carrier != radical.carrier.carrier
    Q, unit = quotient_pxmod(P, closed)
    verdict = is_crossed(Q)
    if not verdict.ok:
        raise StabilityViolation("reflection failed to produce a crossed module", witness=verdict.witness)
    return Reflection(Q, unit, radical, proper)


# ---------------------------------------------------------------------------
# reflexive graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReflexiveGraph:
    X1: object
    B: object
    d: Hom
    c: Hom
    e: Hom


def make_reflexive_graph(X1, B, d: Hom, c: Hom, e: Hom, check=True) -> ReflexiveGraph:
    if d.domain is not X1 or c.domain is not X1 or e.codomain is not X1:
        raise AmbientMismatch("graph maps do not match the vertex/edge objects")
    if d.codomain is not B or c.codomain is not B or e.domain is not B:
        raise AmbientMismatch("graph maps do not match the base object")
    G = ReflexiveGraph(X1, B, d, c, e)
    if check:
        de = amb.compose(d, e)
        ce = amb.compose(c, e)
        ident = amb.identity_hom(B)
        if not (amb.hom_equal(de, ident) and amb.hom_equal(ce, ident)):
            raise InvalidMorphism("e is not a common section of d and c")
    return G


def to_reflexive_graph(P: PrecrossedModule, max_order=None) -> ReflexiveGraph:
    """The reflexive graph with edges X x| B, d = projection, c = boundary-
    twisted projection, e = insertion."""
    sd = amb.semidirect_product(P.X, P.B, P.action, max_order=max_order)
    S, B = sd.object, P.B
    if is_lie(S):
        c_matrix = np.concatenate([P.boundary.matrix_np, np.eye(B.dim, dtype=np.int64)], axis=1) % B.prime
        c = amb.make_hom(S, B, matrix=c_matrix, check=True)
    else:
        nx = P.X.order
        mapping = tuple(B.op(P.boundary.mapping[h % nx], h // nx) for h in range(S.order))
        c = amb.make_hom(S, B, mapping=mapping, check=True)
    return make_reflexive_graph(S, B, sd.proj, c, sd.insert, check=True)


def normalize(G: ReflexiveGraph) -> PrecrossedModule:
    """Precrossed module of a reflexive graph: X = ker d, boundary = c
    restricted, action = conjugation by e(b) inside the edge object."""
    emb = amb.embed_subobject(G.d.kernel())
    X = emb.object
    boundary = amb.compose(G.c, emb.include)
    X1 = G.X1
    if is_lie(X1):
        from . import modp
        basis = emb.subobject.basis_matrix
        red, piv = modp.rref(basis, X1.prime) if basis.shape[0] else (basis, [])
        slices = []
        for j in range(G.B.dim):
            eb = G.e.matrix_np[:, j]
            admat = X1.ad_matrix(eb)
            cols = []
            for i in range(X.dim):
                img = (admat @ basis[i]) % X1.prime
                coords = modp.coordinates(red, piv, img, X1.prime)
                if coords is None:
                    raise StabilityViolation("kernel of d is not stable under conjugation")
                cols.append(coords)
            slices.append(np.array(cols, dtype=np.int64).T if cols else np.zeros((0, 0), dtype=np.int64))
        action = amb.make_action(G.B, X, np.array(slices, dtype=np.int64).reshape(G.B.dim, X.dim, X.dim), check=True)
    else:
        rows = []
        for b in range(G.B.order):
            eb = G.e.mapping[b]
            rows.append([emb.locate(X1.ad(eb, emb.include.apply(x))) for x in range(X.order)])
        action = amb.make_action(G.B, X, np.array(rows, dtype=np.int64), check=True)
    return make_pxmod(X, G.B, boundary, action, check=True)


@dataclass(frozen=True, eq=False)
class GraphReflection:
    graph: ReflexiveGraph
    projection: Hom
    closure_was_proper: bool


def rg_reflection(G: ReflexiveGraph) -> GraphReflection:
    """Quotient of the edge object by the Huq commutator of ker d and ker c."""
    kd = G.d.kernel()
    kc = G.c.kernel()
    comm = amb.huq_commutator(G.X1, kd, kc)
    closed = amb.normal_closure(comm)
    proper = closed.carrier != comm.carrier
    Q, proj = amb.quotient_by(G.X1, closed)
    dbar = amb.induced_hom(proj, G.d)
    cbar = amb.induced_hom(proj, G.c)
    ebar = amb.compose(proj, G.e)
    graph = make_reflexive_graph(Q, G.B, dbar, cbar, ebar, check=True)
    return GraphReflection(graph, proj, proper)


# ---------------------------------------------------------------------------
# graph isomorphism over the base
# ---------------------------------------------------------------------------

def _graph_triangles_ok(G1: ReflexiveGraph, G2: ReflexiveGraph, f: Hom) -> bool:
    return (
        amb.hom_equal(amb.compose(G2.d, f), G1.d)
        and amb.hom_equal(amb.compose(G2.c, f), G1.c)
        and amb.hom_equal(amb.compose(f, G1.e), G2.e)
    )


def graph_iso_over_base(G1: ReflexiveGraph, G2: ReflexiveGraph):
    """A bijection of edge objects commuting with d, c, e, or None."""
    if G1.B is not G2.B:
        raise AmbientMismatch("graphs live over different bases")
    if G1.X1.size != G2.X1.size:
        return None
    if is_lie(G1.X1):
        extras = [
            (G2.d.matrix_np, np.eye(G1.X1.dim, dtype=np.int64), G1.d.matrix_np),
            (G2.c.matrix_np, np.eye(G1.X1.dim, dtype=np.int64), G1.c.matrix_np),
            (np.eye(G2.X1.dim, dtype=np.int64), G1.e.matrix_np, G2.e.matrix_np),
        ]
        mats = homsearch.lie_morphism_matrices(
            G1.X1, G2.X1, extra_constraints=extras, injective=True, surjective=True, limit=1
        )
        if not mats:
            return None
        return amb.make_hom(G1.X1, G2.X1, matrix=mats[0], check=False)
    fibers = {}
    for v in range(G2.X1.order):
        fibers.setdefault((G2.d.mapping[v], G2.c.mapping[v]), []).append(v)
    orders1 = G1.X1.element_orders
    orders2 = G2.X1.element_orders
    cands = []
    for x in range(G1.X1.order):
        allowed = [v for v in fibers.get((G1.d.mapping[x], G1.c.mapping[x]), []) if orders2[v] == orders1[x]]
        cands.append(allowed)
    pins = {G1.e.mapping[b]: G2.e.mapping[b] for b in range(G1.B.order)}
    maps = homsearch.group_homs(
        G1.X1, G2.X1, candidates=cands, pins=pins, injective=True, surjective=True, limit=1
    )
    if not maps:
        return None
    return amb.make_hom(G1.X1, G2.X1, mapping=maps[0], check=False)


def reflection_correspondence_iso(P: PrecrossedModule):
    """Compare the two routes around the reflection square: reflect the graph
    of P, or take the graph of the reflection of P.  Returns the comparison
    bijection (trying the canonical induced map first), or None."""
    G0 = to_reflexive_graph(P)
    refl_graph = rg_reflection(G0)
    reflected = reflect_to_xmod(P)
    G2 = to_reflexive_graph(reflected.module)
    # canonical comparison: (x, b) -> (unit(x), b) on the semidirect products
    eta = reflected.unit.map
    S1, S2 = G0.X1, G2.X1
    if is_lie(S1):
        dx, db = P.X.dim, P.B.dim
        block = np.zeros((S2.dim, S1.dim), dtype=np.int64)
        block[: reflected.module.X.dim, :dx] = eta.matrix_np
        block[reflected.module.X.dim:, dx:] = np.eye(db, dtype=np.int64)
        psi = amb.make_hom(S1, S2, matrix=block, check=False)
    else:
        nx = P.X.order
        nx2 = reflected.module.X.order
        mapping = tuple(eta.mapping[h % nx] + nx2 * (h // nx) for h in range(S1.order))
        psi = amb.make_hom(S1, S2, mapping=mapping, check=False)
    try:
        candidate = amb.induced_hom(refl_graph.projection, psi)
        if candidate.is_bijective and _graph_triangles_ok(refl_graph.graph, G2, candidate):
            return candidate
    except InvalidMorphism:
        pass
    return graph_iso_over_base(refl_graph.graph, G2)
