"""The Mackey category: spans of G-maps composed by pullback.

A basic morphism from G/K to G/S is an equivalence class of spans
G/K <- G/L -> G/S.  Every class has a standard form (left leg the
projection G/L -> G/K for L <= K, right leg a coset map), and is uniquely
labelled by a canonical double coset representative g of KgS together with
a "tube" subgroup L <= K meet gSg^-1, canonical up to conjugacy by that
intersection.  Composition enumerates the concrete pullback of G-sets and
decomposes it into orbits; the classical double-coset formula is kept as a
cross-check in the tests, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import permgroup as pg
from .errors import NotASubgroup, ObjectMismatch
from .fincat import CatFunctor, FinAbCategory, combo_add


def subgroups_up_to_local_conjugacy(M):
    """Subgroups of M (a Subgroup) up to conjugation by elements of M,
    canonical least representative first, sorted."""
    G = M.parent
    inside = [S for S in G.all_subgroups() if S.eset <= M.eset]
    remaining = set(inside)
    reps = []
    while remaining:
        S = min(remaining)
        orbit = {S.conjugate_by(m) for m in M.elements}
        reps.append(min(orbit))
        remaining -= orbit
    reps.sort()
    return reps


def intersection_subgroup(G, A_eset, B_eset):
    return pg.Subgroup(G, sorted(A_eset & B_eset))


def conjugate_intersection(K, S, g):
    """K meet gSg^-1 as a subgroup."""
    G = K.parent
    els = [k for k in K.elements if G.conjugate(k, g) in S.eset]
    return pg.Subgroup(G, els)


@dataclass(frozen=True)
class Span:
    """G/src <-alpha_left- G/apex -alpha_right-> G/dst (cosets by index)."""
    src: object
    dst: object
    apex: object
    left: int
    right: int

    def validate(self):
        G = self.src.parent
        for x in self.apex.elements:
            if G.conjugate(x, self.left) not in self.src.eset:
                raise NotASubgroup("left leg is not a G-map")
            if G.conjugate(x, self.right) not in self.dst.eset:
                raise NotASubgroup("right leg is not a G-map")
        return self


def standard_form(span):
    """Canonical (coset, tube) label of a basic span.

    Two spans get equal labels exactly when they differ by a bijective
    relabelling of the apex.
    """
    G = span.src.parent
    K, S = span.src, span.dst
    a, b = span.left, span.right
    # relabel the apex through alpha_a so the left leg becomes the
    # projection: tube L0 = apex^a, right coset g0 = a^-1 b
    L0 = span.apex.conjugate_by(a)
    g0 = G.mul[G.inv[a]][b]
    gstar = pg.double_coset_of(K, S, g0)
    # translators x in K with g0^-1 x gstar in S move (L0, g0) to
    # (L0^x, gstar); the tube is canonical over all of them
    g0_inv = G.inv[g0]
    best = None
    for x in K.elements:
        s = G.mul[G.mul[g0_inv][x]][gstar]
        if s in S.eset:
            cand = L0.conjugate_by(x)
            if best is None or cand < best:
                best = cand
    if best is None:
        raise RuntimeError("no translator to the canonical double coset")
    return (gstar, best)


def basis_pairs(K, S):
    """Canonical (coset, tube) labels spanning [G/K, G/S]."""
    out = []
    for g in pg.double_cosets(K, S):
        M = conjugate_intersection(K, S, g)
        for L in subgroups_up_to_local_conjugacy(M):
            out.append((g, L))
    return out


def compose_pairs(G, src, mid, dst, pair2, pair1):
    """Composite of m1 = (src -> mid, pair1) then m2 = (mid -> dst, pair2)
    as {(coset, tube): coeff} over [G/src, G/dst], via the concrete
    pullback decomposed into G-orbits."""
    g1, L1 = pair1
    g2, L2 = pair2
    cosL1 = pg.left_cosets(L1)
    cosL2 = pg.left_cosets(L2)
    pairs = []
    for a in cosL1:
        target = pg.coset_of(mid, G.mul[a][g1])
        for b in cosL2:
            if pg.coset_of(mid, b) == target:
                pairs.append((a, b))
    seen = set()
    result = {}
    for (a, b) in pairs:
        if (a, b) in seen:
            continue
        orbit = set()
        for g in range(G.order):
            orbit.add((pg.coset_of(L1, G.mul[g][a]),
                       pg.coset_of(L2, G.mul[g][b])))
        seen |= orbit
        stab = [g for g in range(G.order)
                if pg.coset_of(L1, G.mul[g][a]) == a
                and pg.coset_of(L2, G.mul[g][b]) == b]
        apex = pg.Subgroup(G, stab)
        span = Span(src, dst, apex, a, G.mul[b][g2])
        key = standard_form(span)
        result[key] = result.get(key, 0) + 1
    return result


def pullback_formula(G, src, mid, dst, pair2, pair1):
    """The double-coset formula for the same composite; used as an oracle
    against compose_pairs.  The sum runs over L1^{g1}-L2 double cosets
    inside the middle subgroup, with apex L1^{g1} meet x L2 x^-1."""
    g1, L1 = pair1
    g2, L2 = pair2
    L1g = L1.conjugate_by(g1)          # L1^{g1} <= mid
    out = {}
    for x in pg.double_cosets_within(mid, L1g, L2):
        els = [u for u in L1g.elements if G.conjugate(u, x) in L2.eset]
        apex = pg.Subgroup(G, els)
        span = Span(src, dst, apex, G.inv[g1], G.mul[x][g2])
        key = standard_form(span)
        out[key] = out.get(key, 0) + 1
    return out


class MackeyMorphism:
    """A formal integer combination of basic morphisms between two fixed
    subgroups (not necessarily class representatives)."""

    def __init__(self, G, src, dst, terms=None):
        self.G = G
        self.src = src
        self.dst = dst
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        combo_add(terms, other.terms)
        return MackeyMorphism(self.G, self.src, self.dst, terms)

    def scale(self, c):
        return MackeyMorphism(self.G, self.src, self.dst,
                              {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, MackeyMorphism)
                and self.src == other.src and self.dst == other.dst
                and self.terms == other.terms)

    def __repr__(self):
        return f"MackeyMorphism({self.src.elements}->{self.dst.elements}, " \
               f"{self.terms})"

    def _check(self, other):
        if self.src != other.src or self.dst != other.dst:
            raise ObjectMismatch("mismatched endpoints")

    def then(self, other):
        """Composite self followed by other (diagrammatic order)."""
        if self.dst != other.src:
            raise ObjectMismatch("mismatched endpoints")
        out = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                comp = compose_pairs(self.G, self.src, self.dst,
                                     other.dst, p2, p1)
                for k, v in comp.items():
                    out[k] = out.get(k, 0) + c1 * c2 * v
        return MackeyMorphism(self.G, self.src, other.dst,
                              {k: v for k, v in out.items() if v})


def span_morphism(G, span, coeff=1):
    span.validate()
    key = standard_form(span)
    return MackeyMorphism(G, span.src, span.dst, {key: coeff})


def identity_morphism(G, H):
    return span_morphism(G, Span(H, H, H, G.id, G.id))


def induction_morphism(G, H, K):
    """I: G/H -> G/K in the category for K <= H (raises values from K up
    to H on contravariant modules)."""
    if not K.eset <= H.eset:
        raise NotASubgroup("induction needs K <= H")
    return span_morphism(G, Span(H, K, K, G.id, G.id))


def restriction_morphism(G, H, K):
    """R: G/K -> G/H for K <= H."""
    if not K.eset <= H.eset:
        raise NotASubgroup("restriction needs K <= H")
    return span_morphism(G, Span(K, H, K, G.id, G.id))


def conjugation_morphism(G, H, g):
    """c_g: G/H^{g^-1} -> G/H."""
    Hg = H.conjugate_by(G.inv[g])
    return span_morphism(G, Span(Hg, H, Hg, G.id, g))


def green_generator(G, kind, H, K=None, g=None):
    """The I / R / c generators by letter, matching the usual notation."""
    if kind == "I":
        return induction_morphism(G, H, K)
    if kind == "R":
        return restriction_morphism(G, H, K)
    if kind == "c":
        return conjugation_morphism(G, H, g)
    raise ValueError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class MackeyBasisElement:
    src: int
    dst: int
    coset: int
    tube: object        # Subgroup

    def __repr__(self):
        return f"M({self.src}->{self.dst}; g={self.coset}, " \
               f"L={self.tube.elements})"


class MackeyCategory(FinAbCategory):
    def __init__(self, G, family):
        self.group = G
        self.family = family
        reps = family.class_representatives()
        objs = sorted(reps, key=lambda H: (-H.order, H.elements))
        from .orbitcat import subgroup_name
        super().__init__(objs, [subgroup_name(G, H) for H in objs])
        self._obj_index = {H: i for i, H in enumerate(objs)}

    def object_index(self, H):
        if H in self._obj_index:
            return self._obj_index[H]
        rep = min(pg.conjugacy_class_of_subgroup(H))
        return self._obj_index[rep]

    def subgroup(self, i):
        return self.objects[i]

    def _hom_basis(self, i, j):
        K, S = self.objects[i], self.objects[j]
        return [MackeyBasisElement(i, j, g, L) for (g, L) in
                basis_pairs(K, S)]

    def _compose_basic(self, b2, b1):
        K = self.objects[b1.src]
        S = self.objects[b1.dst]
        Q = self.objects[b2.dst]
        out = compose_pairs(self.group, K, S, Q,
                            (b2.coset, b2.tube), (b1.coset, b1.tube))
        return {MackeyBasisElement(b1.src, b2.dst, g, L): c
                for (g, L), c in out.items()}

    def identity_basis(self, i):
        H = self.objects[i]
        key = standard_form(Span(H, H, H, self.group.id, self.group.id))
        return {MackeyBasisElement(i, i, key[0], key[1]): 1}

    def morphism_to_basis(self, morphism):
        """Rehouse a MackeyMorphism between class representatives as a
        combo of category basis elements."""
        i = self.object_index(morphism.src)
        j = self.object_index(morphism.dst)
        if self.objects[i] != morphism.src or \
                self.objects[j] != morphism.dst:
            raise ObjectMismatch("endpoints are not class representatives")
        return {MackeyBasisElement(i, j, g, L): c
                for (g, L), c in morphism.terms.items()}


def build_mackey_category(G, family):
    return MackeyCategory(G, family)


def burnside_module(cat, ring):
    """The Mackey functor represented at the full group (adjoined as a
    formal target when it is not in the family): the value at G/K is free
    on the K-conjugacy classes of subgroups of K."""
    from .catmod import CatModule, FPModule
    from .linalg import Matrix
    G = cat.group
    full = G.full_subgroup()
    formal = full not in set(cat.family.members)
    bases = []
    for K in cat.objects:
        bases.append(basis_pairs(K, full))
    values = [FPModule.free(ring, len(b)) for b in bases]
    index = [{p: i for i, p in enumerate(b)} for b in bases]
    actions = {}
    for b in cat.all_basis_elements():
        K, S = cat.objects[b.src], cat.objects[b.dst]
        cols = []
        for (g, L) in bases[b.dst]:
            comp = compose_pairs(G, K, S, full, (g, L),
                                 (b.coset, b.tube))
            col = [ring.zero()] * len(bases[b.src])
            for key, c in comp.items():
                col[index[b.src][key]] += c
            cols.append(col)
        actions[b] = Matrix.from_columns(ring, cols,
                                         rows=len(bases[b.src]))
    mod = CatModule(cat, ring, "contra", values, actions, name="burnside")
    mod.formal_terminal_object = formal
    mod.bases = bases
    return mod


def orbit_to_mackey_functor(ocat, mcat):
    """The functor sending a G-map to the span with identity left leg."""
    if [H.elements for H in ocat.objects] != \
            [H.elements for H in mcat.objects]:
        raise ObjectMismatch("categories built from different families")
    G = ocat.group

    def mmap(b):
        H = ocat.objects[b.src]
        K = ocat.objects[b.dst]
        key = standard_form(Span(H, K, H, G.id, b.coset))
        return {MackeyBasisElement(b.src, b.dst, key[0], key[1]): 1}

    return CatFunctor(ocat, mcat, list(range(ocat.n_objects)), mmap,
                      name="span-embedding")


def induce_to_mackey(A, ocat, mcat):
    """Induction of a contravariant orbit-category module along the span
    embedding; sends the constant module to the Burnside functor."""
    from .catmod import induce
    return induce(A, orbit_to_mackey_functor(ocat, mcat))


def burnside_counit(ind, B, mcat):
    """The canonical comparison map from the induced constant module to
    the Burnside functor: 1 (x) f |-> ('restrict to the terminal span')
    composed with f."""
    from .catmod import induction_counit
    G = mcat.group
    full = G.full_subgroup()
    ring = B.ring
    unit_columns = []
    for i, X in enumerate(mcat.objects):
        key = standard_form(Span(X, full, X, G.id, G.id))
        col = [ring.zero()] * B.ngens(i)
        col[B.bases[i].index(key)] = ring.one()
        unit_columns.append(col)
    return induction_counit(ind, B, unit_columns)
