"""The orbit category of a finite group over a family of subgroups.

Objects are the transitive G-sets G/H, one per conjugacy class of the
family (a skeleton).  The hom basis from G/H to G/K is the fixed point set
(G/K)^H: cosets gK with g^-1 H g <= K, each stored by its canonical (least)
coset representative.  Composition of the G-maps alpha_g: H -> gK and
alpha_h: K -> hL is alpha_{gh}.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import permgroup as pg
from .errors import IsotropyNotInFamily, NotAComplex
from .fincat import FinAbCategory


@dataclass(frozen=True)
class OrbitBasisElement:
    """The G-map G/H -> G/K with H |-> coset*K, coset the least element."""
    src: int
    dst: int
    coset: int

    def __repr__(self):
        return f"O({self.src}->{self.dst}; g={self.coset})"


class OrbitCategory(FinAbCategory):
    def __init__(self, G, family):
        self.group = G
        self.family = family
        reps = family.class_representatives()
        # larger stabilisers first: free covers then prefer the objects
        # whose representables reach the most targets
        objs = sorted(reps, key=lambda H: (-H.order, H.elements))
        names = [subgroup_name(G, H) for H in objs]
        super().__init__(objs, names)
        self._obj_index = {H: i for i, H in enumerate(objs)}

    def object_index(self, H):
        """Index of the object for the conjugacy class of H."""
        if H in self._obj_index:
            return self._obj_index[H]
        rep = min(pg.conjugacy_class_of_subgroup(H))
        return self._obj_index[rep]

    def subgroup(self, i):
        return self.objects[i]

    def _hom_basis(self, i, j):
        H, K = self.objects[i], self.objects[j]
        return [OrbitBasisElement(i, j, g) for g in pg.fixed_points(H, K)]

    def _compose_basic(self, b2, b1):
        G = self.group
        L = self.objects[b2.dst]
        g = G.mul[b1.coset][b2.coset]
        return {OrbitBasisElement(b1.src, b2.dst, pg.coset_of(L, g)): 1}

    def identity_basis(self, i):
        K = self.objects[i]
        return {OrbitBasisElement(i, i, pg.coset_of(K, self.group.id)): 1}


def build_orbit_category(G, family):
    return OrbitCategory(G, family)


def subgroup_name(G, H):
    if H.order == 1:
        return "G/1"
    if H.order == G.order:
        return "G/G"
    gens = _small_generating_set(H)
    return "G/<" + ",".join(
        pg.cycle_string(G.elements[g]) for g in gens) + ">"


def _small_generating_set(H):
    G = H.parent
    gens = []
    got = G.generated_subgroup([G.id])
    for g in H.elements:
        if g not in got.eset:
            gens.append(g)
            got = G.generated_subgroup(gens)
            if got.order == H.order:
                break
    return gens


# -- Weyl-module decompositions of hom groups -------------------------------

def right_weyl_decomposition(G, H, K):
    """Indices of the free right W(K)-orbits in [G/H, G/K]: the cosets
    g N_G(K) with g^-1 H g <= K.  |hom| = |WK| * len(result)."""
    N = pg.normaliser(K)
    out = []
    for g in pg.left_cosets(N):
        if all(G.conjugate(h, g) in K.eset for h in H.elements):
            out.append(g)
    return out


def left_weyl_decomposition(G, H, K):
    """Left W(H)-orbit data of [G/H, G/K]: pairs (x, stab) with x a double
    coset rep in N_G(H)\\G/K satisfying x^-1 H x <= K and stab the
    stabiliser subgroup (N_G(H) meet xKx^-1), containing H.
    |hom| = sum |WH| / (|stab| / |H|)."""
    N = pg.normaliser(H)
    out = []
    for x in pg.double_cosets(N, K):
        if not all(G.conjugate(h, x) in K.eset for h in H.elements):
            continue
        xinv = G.inv[x]
        stab_els = [n for n in N.elements if G.conjugate(n, x) in K.eset]
        out.append((x, pg.Subgroup(G, stab_els)))
    return out


# -- distinguished modules ---------------------------------------------------

def constant_module(cat, ring):
    """The contravariant module with value R everywhere and every G-map
    acting as the identity."""
    from .catmod import CatModule, FPModule
    from .linalg import Matrix
    values = [FPModule.free(ring, 1) for _ in cat.objects]
    actions = {b: Matrix.identity(ring, 1)
               for b in cat.all_basis_elements()}
    return CatModule(cat, ring, "contra", values, actions,
                     name="constant")


def truncated_constant_module(cat, ring, k):
    """Value R at G/H when |H| <= k, zero otherwise; morphisms act as the
    identity where both ends are nonzero."""
    if k < 1:
        raise ValueError("truncation bound must be >= 1")
    from .catmod import CatModule, FPModule
    from .linalg import Matrix
    live = [H.order <= k for H in cat.objects]
    values = [FPModule.free(ring, 1 if ok else 0) for ok in live]
    actions = {}
    for b in cat.all_basis_elements():
        r = 1 if live[b.src] else 0
        c = 1 if live[b.dst] else 0
        if r == 1 and c == 1:
            actions[b] = Matrix.identity(ring, 1)
        else:
            actions[b] = Matrix.zeros(ring, r, c)
    return CatModule(cat, ring, "contra", values, actions,
                     name=f"constant<={k}")


# -- equivariant cell data ----------------------------------------------------

@dataclass(frozen=True)
class GCWCell:
    isotropy: int               # object index in the orbit category
    boundary: tuple             # ((cell_index, coset_index, coeff), ...)


class GCWData:
    """Combinatorial equivariant cell structure: per dimension, a list of
    cells with isotropy in the family and attaching data into the previous
    dimension."""

    def __init__(self, cells):
        self.cells = [list(layer) for layer in cells]

    @classmethod
    def from_json(cls, cat, data):
        G = cat.group
        layers = []
        for layer in data["cells"]:
            cells = []
            for cell in layer:
                iso = cell["isotropy"]
                if isinstance(iso, str):
                    iso = cat.object_index(pg.subgroup_from_spec(G, iso))
                bnd = []
                for b in cell.get("boundary", []):
                    coset = b["coset"]
                    if isinstance(coset, str):
                        coset = G.index(pg.parse_cycles(coset, G.degree))
                    elif isinstance(coset, list):
                        coset = G.index(tuple(coset))
                    bnd.append((b["cell"], coset, b.get("coeff", 1)))
                cells.append(GCWCell(iso, tuple(bnd)))
            layers.append(cells)
        return cls(layers)


def bredon_chain_complex(cat, x, ring=None):
    """The chain complex of free contravariant modules attached to
    equivariant cell data, with augmentation onto the constant module.

    Returns a FreeResolution-shaped object whose degree-n module is the sum
    of representables R[-, G/H_j] over the n-cells.
    """
    from .catmod import FreeCatModule, FreeResolution, module_map_from_images
    from .linalg import ZZ as _ZZ
    ring = ring or _ZZ
    G = cat.group
    for layer in x.cells:
        for cell in layer:
            if not 0 <= cell.isotropy < cat.n_objects:
                raise IsotropyNotInFamily(
                    f"cell isotropy {cell.isotropy} is not an object")
    modules = [FreeCatModule(cat, ring, "contra",
                             tuple(c.isotropy for c in layer))
               for layer in x.cells]
    diffs = []
    for n in range(1, len(modules)):
        lower = x.cells[n - 1]
        images = []
        for cell in x.cells[n]:
            img = {}
            for (cidx, coset, coeff) in cell.boundary:
                tgt = lower[cidx]
                # G-map G/H_cell -> G/H_tgt sending H |-> coset * H_tgt
                Hsrc = cat.objects[cell.isotropy]
                Htgt = cat.objects[tgt.isotropy]
                if not all(G.conjugate(h, coset) in Htgt.eset
                           for h in Hsrc.elements):
                    raise NotAComplex(
                        "attaching coset does not define a G-map")
                b = OrbitBasisElement(cell.isotropy, tgt.isotropy,
                                      pg.coset_of(Htgt, coset))
                key = (cidx, b)
                img[key] = img.get(key, 0) + coeff
            images.append(img)
        diffs.append(module_map_from_images(modules[n], modules[n - 1],
                                            images))
    aug_target = constant_module(cat, ring)
    aug = _augmentation(modules[0], aug_target) if modules else None
    res = FreeResolution(aug_target, modules, diffs, aug)
    res.check_complex()
    return res


def _augmentation(P0, target):
    from .catmod import cat_module_map_from_generator_values
    from .linalg import Matrix
    ring = P0.ring
    values = []
    for _ in P0.summands:
        values.append(Matrix(ring, [[ring.one()]]))
    return cat_module_map_from_generator_values(P0, target, values)
