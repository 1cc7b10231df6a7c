"""Yoshida's Hecke category: double-coset bases for maps of permutation
modules.

The hom group from G/H to G/K has basis H\\G/K.  A double coset HxK acts as
the G-map of permutation modules gH |-> sum over u in H/(H meet xKx^-1) of
guxK, and composition constants count coset intersections.  Both routes
are implemented: the counting formula drives the category, and the
explicit permutation-module matrices provide an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import permgroup as pg
from .errors import NotASubgroup, ObjectMismatch
from .fincat import CatFunctor, FinAbCategory
from .linalg import Matrix, solve


@dataclass(frozen=True)
class HeckeBasisElement:
    src: int
    dst: int
    rep: int           # canonical double coset representative

    def __repr__(self):
        return f"H({self.src}->{self.dst}; x={self.rep})"


def left_coset_reps_in(H, M):
    """Canonical reps of the cosets uM inside H, for M <= H."""
    seen = set()
    reps = []
    for u in H.elements:
        c = pg.coset_of(M, u)
        if c not in seen:
            seen.add(c)
            reps.append(c)
    return reps


def perm_hom_matrix(G, H, K, x, ring):
    """The matrix of the G-map R[G/H] -> R[G/K] attached to HxK, in the
    canonical coset bases."""
    cosH = pg.left_cosets(H)
    cosK = pg.left_cosets(K)
    rowi = {c: i for i, c in enumerate(cosK)}
    M = pg.Subgroup(G, [h for h in H.elements
                        if G.conjugate(h, x) in K.eset])
    us = left_coset_reps_in(H, M)
    data = [[ring.zero()] * len(cosH) for _ in range(len(cosK))]
    for j, g in enumerate(cosH):
        for u in us:
            tgt = pg.coset_of(K, G.mul[G.mul[g][u]][x])
            data[rowi[tgt]][j] += ring.one()
    return Matrix(ring, data, len(cosK), len(cosH))


def perm_action_matrix(G, K, g, ring):
    """Left multiplication by g on R[G/K] in the canonical coset basis."""
    cosK = pg.left_cosets(K)
    rowi = {c: i for i, c in enumerate(cosK)}
    data = [[ring.zero()] * len(cosK) for _ in range(len(cosK))]
    for j, c in enumerate(cosK):
        data[rowi[pg.coset_of(K, G.mul[g][c])]][j] = ring.one()
    return Matrix(ring, data, len(cosK), len(cosK))


def is_equivariant(G, H, K, mat, ring):
    for g in G.generators:
        gi = G.index(g)
        left = perm_action_matrix(G, K, gi, ring) * mat
        right = mat * perm_action_matrix(G, H, gi, ring)
        if left != right:
            return False
    return True


def compose_counting(G, H, K, L, x, y):
    """Structure constants of (HxK) followed by (KyL) in the double-coset
    basis of [G/H, G/L], by the intersection-counting formula."""
    HxK = pg.double_coset_set(H, K, x)
    yinv = G.inv[y]
    out = {}
    for z in pg.double_cosets(H, L):
        zLyK = frozenset(G.mul[G.mul[G.mul[z][l]][yinv]][k]
                         for l in L.elements for k in K.elements)
        cnt = len(HxK & zLyK)
        if cnt:
            if cnt % K.order:
                raise RuntimeError("intersection is not a union of cosets")
            out[z] = cnt // K.order
    return out


def compose_perm_oracle(G, H, K, L, x, y, ring):
    """The same structure constants, read off from the composed
    permutation-module matrices."""
    prod = perm_hom_matrix(G, K, L, y, ring) * \
        perm_hom_matrix(G, H, K, x, ring)
    cosH = pg.left_cosets(H)
    cosL = pg.left_cosets(L)
    col = cosH.index(pg.coset_of(H, G.id))
    rowi = {c: i for i, c in enumerate(cosL)}
    out = {}
    for z in pg.double_cosets(H, L):
        c = prod[rowi[pg.coset_of(L, z)], col]
        if c:
            out[z] = c
    return out


class HeckeCategory(FinAbCategory):
    def __init__(self, G, family, debug_oracle=False):
        self.group = G
        self.family = family
        self.debug_oracle = debug_oracle
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
        H, K = self.objects[i], self.objects[j]
        return [HeckeBasisElement(i, j, x) for x in pg.double_cosets(H, K)]

    def _compose_basic(self, b2, b1):
        G = self.group
        H = self.objects[b1.src]
        K = self.objects[b1.dst]
        L = self.objects[b2.dst]
        out = compose_counting(G, H, K, L, b1.rep, b2.rep)
        if self.debug_oracle:
            from .linalg import ZZ
            oracle = compose_perm_oracle(G, H, K, L, b1.rep, b2.rep, ZZ)
            if oracle != out:
                raise RuntimeError(
                    f"composition mismatch on {b2} . {b1}: counting "
                    f"{out} vs permutation-module {oracle}")
        return {HeckeBasisElement(b1.src, b2.dst, z): c
                for z, c in out.items()}

    def identity_basis(self, i):
        H = self.objects[i]
        return {HeckeBasisElement(i, i, pg.double_coset_of(H, H,
                                                           self.group.id)):
                1}


def build_hecke_category(G, family, debug_oracle=False):
    return HeckeCategory(G, family, debug_oracle=debug_oracle)


def perm_hom(cat, b, ring):
    """The PermHom matrix of a basis element (the psi map)."""
    G = cat.group
    return perm_hom_matrix(G, cat.objects[b.src], cat.objects[b.dst],
                           b.rep, ring)


# -- the projection from the span category ------------------------------------

def project_span_pair(G, H, K, pair):
    """Image of the standard span (coset x, tube L) in [G/H, G/K]: the
    multiplicity |H meet xKx^-1 : L| on the double coset HxK."""
    x, L = pair
    M = pg.Subgroup(G, [h for h in H.elements
                        if G.conjugate(h, x) in K.eset])
    if not L.eset <= M.eset:
        raise NotASubgroup("tube does not sit inside the intersection")
    coeff = M.order // L.order
    return (pg.double_coset_of(H, K, x), coeff)


def hecke_projection_morphism(G, src, dst, terms):
    """Image of a MackeyMorphism's terms as {double coset: coeff}."""
    out = {}
    for pair, c in terms.items():
        z, coeff = project_span_pair(G, src, dst, pair)
        out[z] = out.get(z, 0) + c * coeff
    return {z: c for z, c in out.items() if c}


def mackey_to_hecke_functor(mcat, hcat):
    """The projection functor from spans to double cosets."""
    if [H.elements for H in mcat.objects] != \
            [H.elements for H in hcat.objects]:
        raise ObjectMismatch("categories built from different families")
    G = mcat.group

    def mmap(b):
        H = mcat.objects[b.src]
        K = mcat.objects[b.dst]
        z, coeff = project_span_pair(G, H, K, (b.coset, b.tube))
        return {HeckeBasisElement(b.src, b.dst, z): coeff}

    return CatFunctor(mcat, hcat, list(range(mcat.n_objects)), mmap,
                      name="cohomological-projection")


def orbit_to_hecke_functor(ocat, hcat):
    """Composite of the span embedding and the projection: a G-map
    alpha_g: G/H -> G/K goes to the double coset HgK with coefficient 1."""
    if [H.elements for H in ocat.objects] != \
            [H.elements for H in hcat.objects]:
        raise ObjectMismatch("categories built from different families")
    G = ocat.group

    def mmap(b):
        H = ocat.objects[b.src]
        K = ocat.objects[b.dst]
        return {HeckeBasisElement(b.src, b.dst,
                                  pg.double_coset_of(H, K, b.coset)): 1}

    return CatFunctor(ocat, hcat, list(range(ocat.n_objects)), mmap,
                      name="orbit-to-hecke")


def induce_to_hecke(A, ocat, hcat):
    """Induction of a contravariant orbit-category module along the
    composite functor; the constant module lands on the fixed-point
    functor of the trivial module."""
    from .catmod import induce
    return induce(A, orbit_to_hecke_functor(ocat, hcat))


def fixed_point_counit(ind, rminus, hcat):
    """The canonical comparison map from the induced constant module to
    the fixed points of the trivial module."""
    from .catmod import induction_counit
    ring = rminus.ring
    unit_columns = [[ring.one()] * rminus.ngens(i)
                    for i in range(hcat.n_objects)]
    return induction_counit(ind, rminus, unit_columns)


# -- fixed point modules -------------------------------------------------------

class GModule:
    """A finitely generated free R-module with a G-action by matrices."""

    def __init__(self, G, ring, rank, action):
        self.G = G
        self.ring = ring
        self.rank = rank
        self._action = dict(action)

    def act(self, g):
        return self._action[g]

    @classmethod
    def trivial(cls, G, ring, rank=1):
        ident = Matrix.identity(ring, rank)
        return cls(G, ring, rank, {g: ident for g in range(G.order)})

    @classmethod
    def permutation(cls, G, K, ring):
        """R[G/K] with the left translation action."""
        return cls(G, ring, len(pg.left_cosets(K)),
                   {g: perm_action_matrix(G, K, g, ring)
                    for g in range(G.order)})

    @classmethod
    def regular(cls, G, ring):
        return cls.permutation(G, G.trivial_subgroup(), ring)

    def fixed_lattice(self, H):
        """Columns spanning the H-fixed sublattice/subspace."""
        from .linalg import kernel_basis
        blocks = [self.act(h) - Matrix.identity(self.ring, self.rank)
                  for h in H.elements if h != self.G.id]
        if not blocks:
            return Matrix.identity(self.ring, self.rank)
        stacked = blocks[0]
        for b in blocks[1:]:
            stacked = stacked.vstack(b)
        return kernel_basis(stacked)


def fixed_point_module(M, cat):
    """The cohomological Mackey functor G/H |-> M^H as a contravariant
    module over the Hecke category."""
    from .catmod import CatModule, FPModule
    G = cat.group
    ring = M.ring
    lattices = [M.fixed_lattice(H) for H in cat.objects]
    values = [FPModule.free(ring, lat.cols) for lat in lattices]
    actions = {}
    for b in cat.all_basis_elements():
        H = cat.objects[b.src]
        K = cat.objects[b.dst]
        x = b.rep
        Mi = pg.Subgroup(G, [h for h in H.elements
                             if G.conjugate(h, x) in K.eset])
        us = left_coset_reps_in(H, Mi)
        T = Matrix.zeros(ring, M.rank, M.rank)
        for u in us:
            T = T + M.act(G.mul[u][x])
        img = T * lattices[b.dst]
        coords = solve(lattices[b.src], img) if img.cols else \
            Matrix.zeros(ring, lattices[b.src].cols, 0)
        if coords is None:
            raise RuntimeError("trace left the fixed lattice")
        actions[b] = coords
    mod = CatModule(cat, ring, "contra", values, actions,
                    name="fixed-points")
    mod.lattices = lattices
    return mod


def trivial_fixed_point_module(cat, ring):
    return fixed_point_module(GModule.trivial(cat.group, ring), cat)


# -- prime-order reduction morphisms -------------------------------------------

def sylow_reduction_maps(G, H, Q, ring):
    """The pair (rho, iota) with rho = the restriction double coset in
    [G/Q, G/H] and iota = (1/|H:Q|) times the induction double coset in
    [G/H, G/Q]; iota needs the index invertible in the ring.

    Returns ((rho_rep, rho_coeff), (iota_rep, iota_coeff)).
    """
    if not Q.eset <= H.eset:
        raise NotASubgroup("Q must be a subgroup of H")
    index = H.order // Q.order
    rho = (pg.double_coset_of(Q, H, G.id), ring.one())
    try:
        inv_index = ring.invert(ring.coerce(index))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"index {index} is not invertible over {ring}")
    iota = (pg.double_coset_of(H, Q, G.id), inv_index)
    return rho, iota
