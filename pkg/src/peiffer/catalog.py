"""Catalog of small ambient objects and exhaustive instance enumeration.

Streams of precrossed modules, extensions and double extensions are generated
deterministically from the catalog; named theorem-level properties run over a
stream and report pass/fail counts with a replayable first witness.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import ambient as amb
from . import galois as gal
from . import homsearch
from . import pxmod as px
from .ambient import FiniteGroup, FiniteLieAlgebra, Subobject, is_lie
from .errors import AmbientMismatch, CapExceeded, UnknownProperty

DEFAULT_GROUP_BOUND = 48
DEFAULT_LIE_BOUND = 27


# ---------------------------------------------------------------------------
# built-in objects
# ---------------------------------------------------------------------------

def cyclic_group(n: int, name=None) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], name=name or f"Z/{n}")


def quaternion_group() -> FiniteGroup:
    pairs = {
        ("e", "e"): (1, "e"), ("e", "i"): (1, "i"), ("e", "j"): (1, "j"), ("e", "k"): (1, "k"),
        ("i", "e"): (1, "i"), ("i", "i"): (-1, "e"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "e"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "e"), ("j", "k"): (1, "i"),
        ("k", "e"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "e"),
    }
    names = ["e", "i", "j", "k"]

    def mul(a, b):
        sa, xa = (1 if a < 4 else -1), names[a % 4]
        sb, xb = (1 if b < 4 else -1), names[b % 4]
        s, x = pairs[(xa, xb)]
        s *= sa * sb
        return names.index(x) + (0 if s == 1 else 4)

    return FiniteGroup([[mul(a, b) for b in range(8)] for a in range(8)], name="Q8")


def _direct(a: FiniteGroup, b: FiniteGroup, name) -> FiniteGroup:
    prod = amb.direct_product(a, b).object
    return FiniteGroup(prod.table, name=name)


@lru_cache(maxsize=None)
def default_group_catalog() -> tuple:
    """All groups of order <= 8 used by the acceptance runs."""
    z2 = cyclic_group(2)
    z4 = cyclic_group(4)
    return (
        cyclic_group(1, "0"),
        z2,
        cyclic_group(3),
        z4,
        _direct(z2, z2, "Z/2xZ/2"),
        cyclic_group(5),
        amb.group_from_permutations([[1, 0, 2], [1, 2, 0]], name="S3"),
        cyclic_group(6),
        cyclic_group(7),
        cyclic_group(8),
        _direct(z4, z2, "Z/4xZ/2"),
        _direct(_direct(z2, z2, "V4"), z2, "Z/2^3"),
        amb.group_from_permutations([[1, 2, 3, 0], [3, 2, 1, 0]], name="D4"),
        quaternion_group(),
    )


def abelian_lie(p: int, dim: int) -> FiniteLieAlgebra:
    return FiniteLieAlgebra(p, np.zeros((dim, dim, dim), dtype=np.int64), name=f"ab{dim}(F{p})")


def affine_lie(p: int) -> FiniteLieAlgebra:
    s = np.zeros((2, 2, 2), dtype=np.int64)
    s[0, 1, 1] = 1
    s[1, 0, 1] = p - 1
    return FiniteLieAlgebra(p, s, name=f"aff2(F{p})")


def heisenberg_lie(p: int) -> FiniteLieAlgebra:
    s = np.zeros((3, 3, 3), dtype=np.int64)
    s[0, 1, 2] = 1
    s[1, 0, 2] = p - 1
    return FiniteLieAlgebra(p, s, name=f"heis3(F{p})")


def solvable3_lie(p: int) -> FiniteLieAlgebra:
    s = np.zeros((3, 3, 3), dtype=np.int64)
    s[0, 1, 1] = 1
    s[1, 0, 1] = p - 1
    s[0, 2, 2] = 1
    s[2, 0, 2] = p - 1
    return FiniteLieAlgebra(p, s, name=f"sol3(F{p})")


def sl2_lie(p: int) -> FiniteLieAlgebra:
    # basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
    s = np.zeros((3, 3, 3), dtype=np.int64)
    s[0, 1, 1] = 2 % p
    s[1, 0, 1] = (-2) % p
    s[0, 2, 2] = (-2) % p
    s[2, 0, 2] = 2 % p
    s[1, 2, 0] = 1
    s[2, 1, 0] = p - 1
    return FiniteLieAlgebra(p, s, name=f"sl2(F{p})")


@lru_cache(maxsize=None)
def default_lie_catalog(p: int) -> tuple:
    """Lie algebras of dimension <= 3 over F_p used by the acceptance runs."""
    objs = [
        abelian_lie(p, 0),
        abelian_lie(p, 1),
        abelian_lie(p, 2),
        abelian_lie(p, 3),
        affine_lie(p),
        heisenberg_lie(p),
        solvable3_lie(p),
    ]
    if p != 2:
        objs.append(sl2_lie(p))
    return tuple(objs)


# ---------------------------------------------------------------------------
# streams
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PXInstance:
    module: px.PrecrossedModule
    label: str


@dataclass(frozen=True)
class ExtInstance:
    extension: gal.Extension
    label: str
    source_index: int
    target_index: int


@dataclass
class InstanceStream:
    theory: str
    bound: int
    seed: int
    pxmods: tuple
    extensions: tuple
    max_maps_per_pair: int = None
    max_pairs_per_base: int = None

    def describe(self) -> dict:
        return {
            "theory": self.theory,
            "bound": self.bound,
            "seed": self.seed,
            "pxmods": len(self.pxmods),
            "extensions": len(self.extensions),
            "max_maps_per_pair": self.max_maps_per_pair,
            "max_pairs_per_base": self.max_pairs_per_base,
        }


def all_actions(B, X):
    if is_lie(X):
        return homsearch.lie_actions(B, X)
    return homsearch.group_actions(B, X)


def all_equivariant_boundaries(X, B, xi):
    if is_lie(X):
        mats = homsearch.lie_morphism_matrices(X, B, xi1=xi, xi2=amb.conjugation_action(B))
        return [amb.make_hom(X, B, matrix=m, check=False) for m in mats]
    return homsearch.equivariant_boundaries(X, B, xi)


def enumerate_pxmods(catalog, bound: int, max_order=None) -> tuple:
    """Every precrossed module on catalog pairs with |X| * |B| <= bound."""
    cap = amb.DEFAULT_MAX_ORDER if max_order is None else max_order
    if bound > cap * cap:
        raise CapExceeded(f"enumeration bound {bound} exceeds the order cap")
    out = []
    for X in catalog:
        for B in catalog:
            if X.size * B.size > bound:
                continue
            for ai, xi in enumerate(all_actions(B, X)):
                for di, bd in enumerate(all_equivariant_boundaries(X, B, xi)):
                    module = px.make_pxmod(X, B, bd, xi, check=True)
                    out.append(PXInstance(module, f"px[{X.name}|{B.name}|a{ai}|d{di}]"))
    return tuple(out)


def _surjections_between(src: px.PrecrossedModule, tgt: px.PrecrossedModule):
    if is_lie(src.X):
        mats = homsearch.lie_morphism_matrices(
            src.X, tgt.X,
            bd1=src.boundary, bd2=tgt.boundary,
            xi1=src.action, xi2=tgt.action,
            surjective=True,
        )
        return [amb.make_hom(src.X, tgt.X, matrix=m, check=False) for m in mats]
    maps = homsearch.overbase_morphism_maps(
        src.X, tgt.X, src.boundary, tgt.boundary, src.action, tgt.action, src.B,
        surjective=True,
    )
    return [amb.make_hom(src.X, tgt.X, mapping=m, check=False) for m in maps]


def _boundary_image_key(P: px.PrecrossedModule):
    return P.boundary.image().carrier


def enumerate_extensions(pxmods, max_maps_per_pair=None, seed=0,
                         max_pairs_per_base=None) -> tuple:
    """Surjective over-base equivariant maps between stream instances over the
    same base object.

    Pairing is quadratic in the stream, so when caps are given the viable
    pairs per base (after cheap necessary-condition filters: target size
    divides source size, equal boundary images) and the maps per pair are
    subsampled deterministically from the seed.
    """
    by_base = {}
    for idx, inst in enumerate(pxmods):
        by_base.setdefault(id(inst.module.B), []).append(idx)
    img_key = [_boundary_image_key(inst.module) for inst in pxmods]
    out = []
    for _, idxs in sorted(by_base.items(), key=lambda kv: kv[1][0]):
        viable = []
        for i in idxs:
            for j in idxs:
                src, tgt = pxmods[i].module, pxmods[j].module
                if src.X.size % tgt.X.size != 0:
                    continue
                if img_key[i] != img_key[j]:
                    continue
                viable.append((i, j))
        if max_pairs_per_base is not None and len(viable) > max_pairs_per_base:
            rng = random.Random(seed * 999_983 + idxs[0])
            viable = sorted(rng.sample(viable, max_pairs_per_base))
        for i, j in viable:
            src, tgt = pxmods[i].module, pxmods[j].module
            homs = _surjections_between(src, tgt)
            if max_maps_per_pair is not None and len(homs) > max_maps_per_pair:
                rng = random.Random(seed * 1_000_003 + i * 8191 + j)
                keep = sorted(rng.sample(range(len(homs)), max_maps_per_pair))
                homs = [homs[k] for k in keep]
            for k, f in enumerate(homs):
                morphism = px.make_pxmorphism(src, tgt, f, check=True)
                ext = gal.make_extension(morphism)
                out.append(ExtInstance(ext, f"ext[{i}->{j}|m{k}]", i, j))
    return tuple(out)


GROUP_MAPS_PER_PAIR = 24
GROUP_PAIRS_PER_BASE = 4000
LIE_MAPS_PER_PAIR = 48
LIE_PAIRS_PER_BASE = 3000


def build_stream(theory="group", bound=None, seed=0, max_maps_per_pair=None,
                 max_pairs_per_base=None, prime=2, catalog=None) -> InstanceStream:
    if catalog is None:
        if theory == "group":
            catalog = default_group_catalog()
            bound = DEFAULT_GROUP_BOUND if bound is None else bound
            if max_maps_per_pair is None:
                max_maps_per_pair = GROUP_MAPS_PER_PAIR
            if max_pairs_per_base is None:
                max_pairs_per_base = GROUP_PAIRS_PER_BASE
        elif theory == "lie":
            catalog = default_lie_catalog(prime)
            bound = DEFAULT_LIE_BOUND if bound is None else bound
            if max_maps_per_pair is None:
                max_maps_per_pair = LIE_MAPS_PER_PAIR
            if max_pairs_per_base is None:
                max_pairs_per_base = LIE_PAIRS_PER_BASE
        else:
            raise UnknownProperty(f"unknown theory {theory!r}")
    if bound is None:
        bound = DEFAULT_GROUP_BOUND
    pxmods = enumerate_pxmods(catalog, bound)
    extensions = enumerate_extensions(
        pxmods, max_maps_per_pair=max_maps_per_pair, seed=seed,
        max_pairs_per_base=max_pairs_per_base,
    )
    label = theory if theory == "group" else f"lie(F{prime})"
    return InstanceStream(label, bound, seed, pxmods, extensions,
                          max_maps_per_pair, max_pairs_per_base)


# ---------------------------------------------------------------------------
# stable submodules of an instance
# ---------------------------------------------------------------------------

def all_subgroups(G: FiniteGroup):
    known = {(G.unit,)}
    queue = [(G.unit,)]
    while queue:
        carrier = queue.pop()
        members = set(carrier)
        for g in range(G.order):
            if g in members:
                continue
            grown = amb.generated_subobject(G, carrier + (g,)).carrier
            if grown not in known:
                known.add(grown)
                queue.append(grown)
    return sorted(known, key=lambda c: (len(c), c))


def all_subalgebras(L: FiniteLieAlgebra):
    empty = amb.trivial_subobject(L).carrier
    known = {empty}
    queue = [empty]
    while queue:
        carrier = queue.pop()
        sub = Subobject(L, carrier)
        for h in range(1, L.size):
            if sub.contains(h):
                continue
            grown = amb.generated_subobject(L, carrier + (h,)).carrier
            if grown not in known:
                known.add(grown)
                queue.append(grown)
    return sorted(known, key=lambda c: (len(c), c))


_submodule_cache = {}
_subobject_cache = {}


def all_subobjects(X):
    """All subgroup / subalgebra carriers of an ambient object, cached."""
    if X not in _subobject_cache:
        _subobject_cache[X] = all_subalgebras(X) if is_lie(X) else all_subgroups(X)
    return _subobject_cache[X]


def stable_submodules(P: px.PrecrossedModule):
    """All action-stable submodules, sorted by size then carrier."""
    if P in _submodule_cache:
        return _submodule_cache[P]
    subs = []
    for carrier in all_subobjects(P.X):
        S = Subobject(P.X, carrier)
        if P.action.is_stable(S):
            subs.append(px.make_submodule(P, S))
    _submodule_cache[P] = subs
    return subs


def cached_reflection(P: px.PrecrossedModule) -> px.Reflection:
    return px.reflect_to_xmod_cached(P)


def image_subobject(f: amb.Hom, S: Subobject) -> Subobject:
    """Image of a subobject carrier under a homomorphism."""
    if is_lie(f.domain):
        rows = [f.codomain.decode(f.apply(h)) for h in S.carrier]
        return amb._canon_lie_sub(f.codomain, rows) if rows else amb.trivial_subobject(f.codomain)
    return Subobject(f.codomain, tuple(sorted({f.mapping[h] for h in S.carrier})))


# ---------------------------------------------------------------------------
# derived streams: squares, morphism pairs, five-term pairs
# ---------------------------------------------------------------------------

def cospan_square(f: gal.Extension, g: gal.Extension, max_order=None) -> gal.DoubleExtension:
    """The pushout square of two extensions with a common domain."""
    if f.source is not g.source:
        raise AmbientMismatch("cospan square needs a common domain")
    Ym = f.target
    nw = image_subobject(f.map, g.kernel.carrier)
    Wm, j_unit = px.quotient_pxmod(Ym, amb.normal_closure(nw))
    j = gal.make_extension(px.make_pxmorphism(Ym, Wm, j_unit.map, check=False))
    h_hom = amb.induced_from_callable(
        g.map, Wm.X, lambda x: j_unit.map.apply(f.map.apply(x))
    )
    h = gal.make_extension(px.make_pxmorphism(g.target, Wm, h_hom, check=True))
    return gal.make_double_extension(f, g, h, j, max_order=max_order)


def _grouped_pairs(rng: random.Random, groups, cap: int, skip_equal=False):
    """Deterministic sample of within-group index pairs without materializing
    the full quadratic pair set."""
    groups = [g for g in groups if g]
    weights = [len(g) * (len(g) - (1 if skip_equal else 0)) for g in groups]
    total = sum(weights)
    if total == 0:
        return []
    if total <= cap:
        out = []
        for g in groups:
            for a in g:
                for b in g:
                    if skip_equal and a == b:
                        continue
                    out.append((a, b))
        return out
    seen = set()
    out = []
    attempts = 0
    while len(out) < cap and attempts < cap * 50:
        attempts += 1
        r = rng.randrange(total)
        gi = 0
        while r >= weights[gi]:
            r -= weights[gi]
            gi += 1
        g = groups[gi]
        a = g[rng.randrange(len(g))]
        b = g[rng.randrange(len(g))]
        if skip_equal and a == b:
            continue
        if (a, b) in seen:
            continue
        seen.add((a, b))
        out.append((a, b))
    return sorted(out)


def enumerate_squares(stream: InstanceStream, cap=250):
    """Deterministic family of double extensions: pushout squares over sampled
    pairs of extensions sharing their domain instance."""
    rng = random.Random(stream.seed * 7_368_787 + 1)
    by_source = {}
    for idx, inst in enumerate(stream.extensions):
        by_source.setdefault(inst.source_index, []).append(idx)
    groups = [idxs for _, idxs in sorted(by_source.items())]
    pairs = _grouped_pairs(rng, groups, cap)
    squares = []
    for a, b in pairs:
        f = stream.extensions[a].extension
        g = stream.extensions[b].extension
        squares.append((cospan_square(f, g), f"square[{stream.extensions[a].label}|{stream.extensions[b].label}]"))
    return squares


# ---------------------------------------------------------------------------
# property registry
# ---------------------------------------------------------------------------

@dataclass
class VerifyReport:
    property: str
    theory: str
    bound: int
    seed: int
    checked: int
    failures: int
    first_failure: dict = None
    notes: tuple = ()

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json_dict(self) -> dict:
        return {
            "property": self.property,
            "theory": self.theory,
            "bound": self.bound,
            "seed": self.seed,
            "checked": self.checked,
            "failures": self.failures,
            "first_failure": self.first_failure,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def _report(stream, name, checked, failures, first_failure=None, notes=()):
    return VerifyReport(
        name, stream.theory, stream.bound, stream.seed, checked, failures, first_failure, tuple(notes)
    )


def _prop_main_theorem(stream: InstanceStream, **_):
    failures = 0
    first = None
    for inst in stream.extensions:
        direct = gal.is_central(inst.extension).verdict
        crosscheck = gal.is_central_via_huq(inst.extension).verdict
        if direct != crosscheck:
            failures += 1
            if first is None:
                first = {"instance": inst.label, "peiffer_verdict": direct, "huq_verdict": crosscheck}
    return _report(stream, "main-theorem-equivalence", len(stream.extensions), failures, first)


def _prop_crossed_iff_peiffer(stream: InstanceStream, **_):
    failures = 0
    first = None
    for inst in stream.pxmods:
        crossed = px.is_crossed(inst.module).ok
        trivial = px.peiffer_radical(inst.module).is_trivial
        if crossed != trivial:
            failures += 1
            if first is None:
                first = {"instance": inst.label, "crossed": crossed, "radical_trivial": trivial}
    return _report(stream, "crossed-iff-peiffer-trivial", len(stream.pxmods), failures, first)


def _prop_reflection_correspondence(stream: InstanceStream, **_):
    failures = 0
    first = None
    for inst in stream.pxmods:
        iso = px.reflection_correspondence_iso(inst.module)
        if iso is None:
            failures += 1
            if first is None:
                first = {"instance": inst.label}
    return _report(stream, "reflection-correspondence", len(stream.pxmods), failures, first)


def _prop_reflect_is_crossed(stream: InstanceStream, **_):
    failures = 0
    first = None
    for inst in stream.pxmods:
        refl = cached_reflection(inst.module)
        if not px.is_crossed(refl.module).ok:
            failures += 1
            if first is None:
                first = {"instance": inst.label}
    return _report(stream, "reflect-is-crossed", len(stream.pxmods), failures, first)


def _prop_peiffer_monotone(stream: InstanceStream, **_):
    failures = 0
    first = None
    checked = 0
    for inst in stream.pxmods:
        P = inst.module
        subs = stable_submodules(P)
        peif = {}
        for a, M in enumerate(subs):
            for b, N in enumerate(subs):
                if b < a:
                    continue
                peif[(a, b)] = px.peiffer_commutator(P, M, N).carrier
        def lookup(a, b):
            return peif[(a, b) if a <= b else (b, a)]
        nested = [(a, b) for a, M in enumerate(subs) for b, N in enumerate(subs)
                  if M.carrier.leq(N.carrier)]
        for a, a2 in nested:
            for b, b2 in nested:
                checked += 1
                if not lookup(a, b).leq(lookup(a2, b2)):
                    failures += 1
                    if first is None:
                        first = {"instance": inst.label, "pair": (a, b), "larger": (a2, b2)}
    return _report(stream, "peiffer-monotone", checked, failures, first)


def _prop_peiffer_normal_bound(stream: InstanceStream, **_):
    failures = 0
    first = None
    checked = 0
    for inst in stream.pxmods:
        P = inst.module
        whole = px.whole_submodule(P)
        for K in stable_submodules(P):
            if not (K.carrier_normal and K.zero_boundary):
                continue
            checked += 1
            comm = px.peiffer_commutator(P, whole, K)
            if not comm.carrier.leq(K.carrier):
                failures += 1
                if first is None:
                    first = {"instance": inst.label, "kernel": list(K.carrier.carrier)}
    return _report(stream, "peiffer-normal-bound", checked, failures, first)


def _prop_peiffer_huq_remark(stream: InstanceStream, **_):
    failures = 0
    first = None
    checked = 0
    for inst in stream.pxmods:
        P = inst.module
        normal_subs = [S for S in stable_submodules(P) if S.carrier_normal and S.zero_boundary]
        for H in normal_subs:
            for K in normal_subs:
                checked += 1
                peif = amb.normal_closure(px.peiffer_commutator(P, H, K).carrier)
                huq = amb.normal_closure(amb.huq_commutator(P.X, H.carrier, K.carrier))
                if peif.carrier != huq.carrier:
                    failures += 1
                    if first is None:
                        first = {"instance": inst.label, "H": list(H.carrier.carrier), "K": list(K.carrier.carrier)}
    return _report(stream, "peiffer-huq-remark", checked, failures, first)


def _prop_peiffer_image_preservation(stream: InstanceStream, samples=200, **_):
    rng = random.Random(stream.seed * 31_337 + 5)
    candidates = []
    for inst in stream.pxmods:
        kernels = [S for S in stable_submodules(inst.module) if S.carrier_normal and S.zero_boundary]
        if kernels:
            candidates.append((inst, kernels))
    failures = 0
    first = None
    checked = 0
    if not candidates:
        return _report(stream, "peiffer-image-preservation", 0, 0)
    while checked < samples:
        inst, kernels = candidates[rng.randrange(len(candidates))]
        P = inst.module
        K = kernels[rng.randrange(len(kernels))]
        Q, unit = px.quotient_pxmod(P, K.carrier)
        subs = stable_submodules(P)
        M = subs[rng.randrange(len(subs))]
        N = subs[rng.randrange(len(subs))]
        checked += 1
        lhs = image_subobject(unit.map, px.peiffer_commutator(P, M, N).carrier)
        qm = px.make_submodule(Q, image_subobject(unit.map, M.carrier))
        qn = px.make_submodule(Q, image_subobject(unit.map, N.carrier))
        rhs = px.peiffer_commutator(Q, qm, qn).carrier
        if lhs.carrier != rhs.carrier:
            failures += 1
            if first is None:
                first = {"instance": inst.label, "kernel": list(K.carrier.carrier),
                         "M": list(M.carrier.carrier), "N": list(N.carrier.carrier)}
    return _report(stream, "peiffer-image-preservation", checked, failures, first,
                   notes=(f"seeded random quotients: {samples}",))


def _prop_centralize(stream: InstanceStream, **_):
    failures = 0
    first = None
    for inst in stream.extensions:
        cz = gal.centralize(inst.extension)
        ok = gal.is_central(cz.extension).verdict
        again = gal.centralize(cz.extension)
        idem = again.unit.map.is_bijective
        if not (ok and idem):
            failures += 1
            if first is None:
                first = {"instance": inst.label, "central": ok, "idempotent": idem}
    return _report(stream, "centralize-central", len(stream.extensions), failures, first)


def _prop_centralize_universal(stream: InstanceStream, cap=200, **_):
    rng = random.Random(stream.seed * 104_729 + 11)
    by_target = {}
    for idx, inst in enumerate(stream.extensions):
        by_target.setdefault(inst.target_index, []).append(idx)
    groups = [idxs for _, idxs in sorted(by_target.items())]
    pairs = _grouped_pairs(rng, groups, cap, skip_equal=True)
    failures = 0
    first = None
    checked = 0
    for a, b in pairs:
        f = stream.extensions[a].extension
        g = stream.extensions[b].extension
        if not gal.is_central(g).verdict:
            continue
        morphs = _morphisms_over(f, g)
        cz = gal.centralize(f)
        for h in morphs:
            checked += 1
            try:
                hbar = amb.induced_hom(cz.unit.map, h)
            except Exception:
                failures += 1
                if first is None:
                    first = {"from": stream.extensions[a].label, "to": stream.extensions[b].label,
                             "reason": "no factorization through the centralization"}
                continue
            factor = px.make_pxmorphism(cz.extension.source, g.source, hbar, check=True)
            recomposed = amb.compose(factor.map, cz.unit.map)
            if not amb.hom_equal(recomposed, h):
                failures += 1
                if first is None:
                    first = {"from": stream.extensions[a].label, "to": stream.extensions[b].label,
                             "reason": "factorization does not recompose"}
    return _report(stream, "centralize-universal", checked, failures, first,
                   notes=("uniqueness is forced: the quotient map is surjective",))


def _morphisms_over(f: gal.Extension, g: gal.Extension):
    """Morphisms h: dom f -> dom g with g . h = f (same codomain)."""
    src, tgt = f.source, g.source
    if is_lie(src.X):
        mats = homsearch.lie_morphism_matrices(
            src.X, tgt.X,
            bd1=src.boundary, bd2=tgt.boundary,
            xi1=src.action, xi2=tgt.action,
            extra_constraints=[(g.map.matrix_np, np.eye(src.X.dim, dtype=np.int64), f.map.matrix_np)],
        )
        return [amb.make_hom(src.X, tgt.X, matrix=m, check=False) for m in mats]
    fibers = {}
    for v in range(tgt.X.order):
        fibers.setdefault(g.map.mapping[v], []).append(v)
    cands = [fibers.get(f.map.mapping[x], []) for x in range(src.X.order)]
    maps = homsearch.overbase_morphism_maps(
        src.X, tgt.X, src.boundary, tgt.boundary, src.action, tgt.action, src.B,
        candidates=cands,
    )
    return [amb.make_hom(src.X, tgt.X, mapping=m, check=False) for m in maps]


def _prop_trivial_implies_central(stream: InstanceStream, **_):
    failures = 0
    first = None
    for inst in stream.extensions:
        if gal.is_trivial_extension(inst.extension) and not gal.is_central(inst.extension).verdict:
            failures += 1
            if first is None:
                first = {"instance": inst.label}
    return _report(stream, "trivial-implies-central", len(stream.extensions), failures, first)


def _prop_pullback_stability(stream: InstanceStream, cap=200, **_):
    rng = random.Random(stream.seed * 65_537 + 3)
    by_target = {}
    for idx, inst in enumerate(stream.extensions):
        by_target.setdefault(inst.target_index, []).append(idx)
    groups = [idxs for _, idxs in sorted(by_target.items())]
    pairs = _grouped_pairs(rng, groups, cap)
    failures = 0
    first = None
    for a, b in pairs:
        f = stream.extensions[a].extension
        g = stream.extensions[b].extension
        pulled, _ = gal.pullback_extension(f, g.morphism)
        before = gal.is_central(f).verdict
        after = gal.is_central(pulled).verdict
        if before != after:
            failures += 1
            if first is None:
                first = {"extension": stream.extensions[a].label, "along": stream.extensions[b].label,
                         "before": before, "after": after}
    return _report(stream, "pullback-stability", len(pairs), failures, first)


def _prop_double_transpose(stream: InstanceStream, cap=250, **_):
    squares = enumerate_squares(stream, cap=cap)
    failures = 0
    first = None
    for sq, label in squares:
        direct = gal.is_double_central(sq).verdict
        transposed = gal.is_double_central(gal.transpose_double(sq)).verdict
        if direct != transposed:
            failures += 1
            if first is None:
                first = {"square": label, "direct": direct, "transposed": transposed}
    return _report(stream, "double-central-transpose", len(squares), failures, first)


def _prop_double_centralize(stream: InstanceStream, cap=250, **_):
    squares = enumerate_squares(stream, cap=cap)
    failures = 0
    first = None
    for sq, label in squares:
        try:
            dc = gal.double_centralize(sq)
            meet_car = amb.meet(sq.f.kernel.carrier, sq.g.kernel.carrier)
            report = gal.is_double_central(sq)
            joined = amb.normal_closure(
                amb.join(report.meet_obstruction.carrier, report.kernels_obstruction.carrier)
            )
            ok = joined.leq(meet_car) and gal.is_double_central(dc.square).verdict
        except AssertionError:
            ok = False
        if not ok:
            failures += 1
            if first is None:
                first = {"square": label}
    return _report(stream, "double-centralize", len(squares), failures, first)


def _prop_five_term(stream: InstanceStream, cap=200, **_):
    rng = random.Random(stream.seed * 2_147_483 + 29)
    identity_pairs = [(gi, None) for gi in range(len(stream.extensions))]
    if len(identity_pairs) > cap:
        identity_pairs = sorted(rng.sample(identity_pairs, cap))
    by_target = {}
    for pi, pinst in enumerate(stream.extensions):
        by_target.setdefault(pinst.target_index, []).append(pi)
    crossed = []
    for gi, ginst in enumerate(stream.extensions):
        crossed.extend((gi, pi) for pi in by_target.get(ginst.source_index, ()))
    if len(crossed) > cap:
        crossed = sorted(rng.sample(crossed, cap))
    pairs = identity_pairs + crossed
    failures = 0
    first = None
    for gi, pi in pairs:
        ginst = stream.extensions[gi]
        g = ginst.extension
        ksub = g.kernel
        kmod, kincl, _ = px.sub_as_pxmod(ksub)
        p = gal.identity_extension(g.source) if pi is None else stream.extensions[pi].extension
        ft = gal.five_term(kincl, g.morphism, p)
        ok = (
            ft.composites_zero
            and ft.exactness[3] == "exact"
            and ft.exactness[4] == "exact"
            and ft.exactness[5] == "exact (surjective)"
            and ft.exactness[1].startswith("not checked")
            and ft.exactness[2].startswith("not checked")
        )
        if not ok:
            failures += 1
            if first is None:
                first = {"sequence": ginst.label,
                         "presentation": "identity" if pi is None else stream.extensions[pi].label,
                         "exactness": {str(k): v for k, v in ft.exactness.items()}}
    return _report(stream, "five-term", len(pairs), failures, first)


def _prop_galois_group_consistency(stream: InstanceStream, **_):
    failures = 0
    first = None
    checked = 0
    for inst in stream.extensions:
        ext = inst.extension
        if not gal.is_central(ext).verdict:
            continue
        checked += 1
        gg = gal.galois_group(ext)
        refl = cached_reflection(ext.source)
        kmod, kincl, _ = px.sub_as_pxmod(ext.kernel)
        composite = amb.compose(refl.unit.map, kincl.map)
        independent = image_subobject(kincl.map, composite.kernel())
        if gg.numerator.carrier != independent.carrier:
            failures += 1
            if first is None:
                first = {"instance": inst.label}
    return _report(stream, "galois-group-consistency", checked, failures, first)


PROPERTIES = {
    "main-theorem-equivalence": _prop_main_theorem,
    "crossed-iff-peiffer-trivial": _prop_crossed_iff_peiffer,
    "reflection-correspondence": _prop_reflection_correspondence,
    "reflect-is-crossed": _prop_reflect_is_crossed,
    "peiffer-monotone": _prop_peiffer_monotone,
    "peiffer-normal-bound": _prop_peiffer_normal_bound,
    "peiffer-huq-remark": _prop_peiffer_huq_remark,
    "peiffer-image-preservation": _prop_peiffer_image_preservation,
    "centralize-central": _prop_centralize,
    "centralize-universal": _prop_centralize_universal,
    "trivial-implies-central": _prop_trivial_implies_central,
    "pullback-stability": _prop_pullback_stability,
    "double-central-transpose": _prop_double_transpose,
    "double-centralize": _prop_double_centralize,
    "five-term": _prop_five_term,
    "galois-group-consistency": _prop_galois_group_consistency,
}


def verify_property(stream: InstanceStream, name: str, **params) -> VerifyReport:
    if name not in PROPERTIES:
        raise UnknownProperty(f"unknown property {name!r}; known: {sorted(PROPERTIES)}")
    return PROPERTIES[name](stream, **params)
