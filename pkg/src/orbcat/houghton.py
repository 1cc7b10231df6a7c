"""Houghton's group H_n and the monoid of injective eventual translations.

Points of the underlying set are pairs (i, x) with i >= 0 and ray index
x in 1..n.  An element stores, per ray, a translation amount m_x and an
explicit table for the finitely many points below the cutoffs; beyond the
cutoff of its ray a point (i, x) goes to (i + m_x, x).  Elements are kept
in canonical form (componentwise minimal cutoffs), so equality of the
stored data is equality of maps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import permgroup as pg
from .errors import (FiniteOrder, InfiniteOrder, NotBijective,
                     NotNormalised)


class HoughtonMap:
    """Shared machinery for bijections (HoughtonElement) and injections
    (MonoidVertex)."""

    surjective_required = True

    def __init__(self, rays, translations, prefix):
        self.rays = rays
        self.m = tuple(int(v) for v in translations)
        if len(self.m) != rays:
            raise NotBijective("translation vector has the wrong length")
        table = {}
        for k, v in prefix.items():
            k = (int(k[0]), int(k[1]))
            v = (int(v[0]), int(v[1]))
            self._check_point(k)
            self._check_point(v)
            table[k] = v
        self.prefix = table
        self._canonicalise()
        self._validate()
        self.prefix = dict(sorted(self.prefix.items()))

    def _check_point(self, p):
        i, x = p
        if i < 0 or not 1 <= x <= self.rays:
            raise NotBijective(f"point {p} is outside the ray set")

    def _canonicalise(self):
        cuts = []
        for x in range(1, self.rays + 1):
            dom = [i for (i, xx) in self.prefix if xx == x]
            z = max(dom) + 1 if dom else 0
            if set(dom) != set(range(z)):
                raise NotBijective(
                    f"prefix domain on ray {x} is not an initial segment")
            while z > 0 and self.prefix.get((z - 1, x)) == \
                    (z - 1 + self.m[x - 1], x):
                del self.prefix[(z - 1, x)]
                z -= 1
            cuts.append(z)
        self.cutoffs = tuple(cuts)

    def _validate(self):
        for x in range(1, self.rays + 1):
            if self.cutoffs[x - 1] + self.m[x - 1] < 0:
                raise NotBijective(
                    f"tail of ray {x} would leave the ray set")
        images = list(self.prefix.values())
        if len(set(images)) != len(images):
            raise NotBijective("prefix images collide")
        for (j, y) in images:
            if j >= self.cutoffs[y - 1] + self.m[y - 1]:
                raise NotBijective("prefix image collides with a tail")
        if self.surjective_required:
            missing = set()
            for y in range(1, self.rays + 1):
                for j in range(self.cutoffs[y - 1] + self.m[y - 1]):
                    missing.add((j, y))
            if missing != set(images):
                raise NotBijective("map is not onto the ray set")

    def __call__(self, p):
        if p in self.prefix:
            return self.prefix[p]
        i, x = p
        if i < self.cutoffs[x - 1]:
            raise NotBijective(f"{p} below cutoff but not in the table")
        return (i + self.m[x - 1], x)

    def __eq__(self, other):
        return (type(self) is type(other) and self.rays == other.rays
                and self.m == other.m and self.prefix == other.prefix)

    def __hash__(self):
        return hash((type(self).__name__, self.rays, self.m,
                     tuple(sorted(self.prefix.items()))))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.rays}, m={self.m}, " \
               f"prefix={self.prefix})"

    @property
    def translations(self):
        return self.m

    def image_complement(self):
        """The finite set of points missed by the map (empty iff onto)."""
        images = set(self.prefix.values())
        out = []
        for y in range(1, self.rays + 1):
            for j in range(self.cutoffs[y - 1] + self.m[y - 1]):
                if (j, y) not in images:
                    out.append((j, y))
        return sorted(out)

    def to_json(self):
        return {"n": self.rays,
                "prefix": [[list(k), list(v)]
                           for k, v in sorted(self.prefix.items())],
                "m": list(self.m)}


class HoughtonElement(HoughtonMap):
    """A permutation of the ray set that is eventually a translation on
    every ray."""

    surjective_required = True

    @classmethod
    def identity(cls, rays):
        return cls(rays, [0] * rays, {})

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        prefix = {tuple(k): tuple(v) for k, v in data.get("prefix", [])}
        return cls(data["n"], data["m"], prefix)

    @classmethod
    def from_cycles(cls, rays, cycles):
        """Finite-support element from cycles of points, e.g.
        [[(0, 1), (1, 1)]] swaps the first two points of ray 1."""
        prefix = {}
        for cyc in cycles:
            pts = [tuple(p) for p in cyc]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                prefix[a] = b
        bound = {}
        for (i, x) in list(prefix):
            bound[x] = max(bound.get(x, 0), i + 1)
        full = {}
        for x, z in bound.items():
            for i in range(z):
                full[(i, x)] = prefix.get((i, x), (i, x))
        return cls(rays, [0] * rays, full)

    @classmethod
    def shift_into(cls, rays, src, dst):
        """The basic infinite-order element pushing ray src into ray dst:
        (i, src) -> (i+1, src) backwards... concretely (0, src) -> (0, dst)
        and ray dst shifted up; all other rays fixed."""
        if src == dst:
            raise ValueError("source and destination rays must differ")
        m = [0] * rays
        m[src - 1] = -1
        m[dst - 1] = 1
        prefix = {(0, src): (0, dst)}
        return cls(rays, m, prefix)


class MonoidVertex(HoughtonMap):
    """An injective eventual translation; the missing points measure how
    far it is from being onto."""

    surjective_required = False

    @classmethod
    def from_element(cls, h):
        return cls(h.rays, h.m, h.prefix)

    @classmethod
    def translation(cls, rays, amounts):
        if any(a < 0 for a in amounts):
            raise ValueError("translations need nonnegative amounts")
        return cls(rays, list(amounts), {})

    @classmethod
    def identity(cls, rays):
        return cls(rays, [0] * rays, {})


def compose(h1, h2, cls=None):
    """h1 after h2: the map s -> h1(h2(s))."""
    if h1.rays != h2.rays:
        raise NotBijective("different numbers of rays")
    n = h1.rays
    m = [a + b for a, b in zip(h1.m, h2.m)]
    prefix = {}
    for x in range(1, n + 1):
        z = max(h2.cutoffs[x - 1],
                h1.cutoffs[x - 1] - h2.m[x - 1], 0)
        for i in range(z):
            prefix[(i, x)] = h1(h2((i, x)))
    if cls is None:
        cls = HoughtonElement if (isinstance(h1, HoughtonElement)
                                  and isinstance(h2, HoughtonElement)) \
            else MonoidVertex
    return cls(n, m, prefix)


def inverse(h):
    """Inverse of a HoughtonElement."""
    if not isinstance(h, HoughtonElement):
        raise NotBijective("only bijections have inverses")
    n = h.rays
    m = [-v for v in h.m]
    prefix = {}
    for k, v in h.prefix.items():
        prefix[v] = k
    # image-tail points below the new cutoffs must be tabulated
    for y in range(1, n + 1):
        newcut = h.cutoffs[y - 1] + h.m[y - 1]
        for j in range(newcut):
            if (j, y) not in prefix:
                # (j, y) = h(j - m_y, y) from the tail rule
                prefix[(j, y)] = (j - h.m[y - 1], y)
    return HoughtonElement(n, m, prefix)


def translation_vector(h):
    """The per-ray translation amounts; zero exactly on the finite-order
    elements."""
    return h.m


def support(h):
    """Points moved by a finite-order element."""
    if any(h.m):
        raise InfiniteOrder("support is infinite")
    return sorted(p for p in h.prefix if h.prefix[p] != p)


def cycle_type(q):
    """Multiset of cycle lengths (>= 2) of a finite-order element."""
    if any(q.m):
        raise InfiniteOrder("cycle type needs a finite-order element")
    seen = set()
    lengths = []
    for p in support(q):
        if p in seen:
            continue
        length = 1
        cur = q(p)
        seen.add(p)
        while cur != p:
            seen.add(cur)
            cur = q(cur)
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


def are_conjugate_finite(q1, q2):
    """Finite-order elements are conjugate exactly when their cycle types
    agree."""
    return cycle_type(q1) == cycle_type(q2)


# -- centralisers ---------------------------------------------------------------

@dataclass(frozen=True)
class CentraliserShape:
    """Symbolic direct-product decomposition of a centraliser:
    (H_k or a finite symmetric group) x Z^r x product of wreath factors
    (W order, wreath degree)."""
    rays: int
    houghton_rays: int | None
    ray_set: tuple
    finite_symmetric_size: int | None
    free_abelian_rank: int
    finite_factors: tuple

    @property
    def finite_factor_order(self):
        total = 1
        for (w, r) in self.finite_factors:
            fact = 1
            for t in range(2, r + 1):
                fact *= t
            total *= (w ** r) * fact
        return total

    def describe(self):
        parts = []
        if self.houghton_rays is not None:
            if self.houghton_rays > 0:
                parts.append(f"H_{self.houghton_rays}")
        elif self.finite_symmetric_size is not None:
            parts.append(f"Sym_{self.finite_symmetric_size}")
        if self.free_abelian_rank:
            parts.append(f"Z^{self.free_abelian_rank}")
        for (w, r) in self.finite_factors:
            parts.append(f"C{w} wr Sym_{r}" if w > 1 else f"Sym_{r}")
        return " x ".join(parts) if parts else "1"

    def to_json(self):
        return {"rays": self.rays,
                "houghton_rays": self.houghton_rays,
                "ray_set": list(self.ray_set),
                "finite_symmetric_size": self.finite_symmetric_size,
                "free_abelian_rank": self.free_abelian_rank,
                "finite_factors": [list(f) for f in self.finite_factors],
                "finite_factor_order": self.finite_factor_order,
                "description": self.describe()}


def close_finite_group(gens):
    """Closure of finite-order elements under the group law."""
    if not gens:
        return []
    n = gens[0].rays
    for g in gens:
        if any(g.m):
            raise InfiniteOrder("closure needs finite-order elements")
    ident = HoughtonElement.identity(n)
    els = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = compose(g, a)
                if c not in els:
                    els.add(c)
                    new.append(c)
        frontier = new
    return sorted(els, key=lambda e: sorted(e.prefix.items()))


def _isotropy_factors(points, perm_group):
    """Wreath-product decomposition data of the Q-set automorphisms of a
    finite Q-set split by stabiliser conjugacy class: list of
    (W order, wreath degree, base points) over classes, where base points
    have equal stabilisers."""
    G = perm_group
    npts = len(points)
    orbits = []
    seen = set()
    for p in range(npts):
        if p in seen:
            continue
        orb = sorted({G.elements[g][p] for g in range(G.order)})
        orbits.append(orb)
        seen.update(orb)

    def stab(p):
        return pg.Subgroup(G, [g for g in range(G.order)
                               if G.elements[g][p] == p])

    factors = []
    ungrouped = list(orbits)
    while ungrouped:
        orb0 = ungrouped.pop(0)
        Q_a = stab(orb0[0])
        group_orbits = [orb0]
        rest = []
        for orb in ungrouped:
            if any(stab(p) == Q_a for p in orb):
                group_orbits.append(orb)
            else:
                s = stab(orb[0])
                if pg.is_subconjugate(s, Q_a) and \
                        pg.is_subconjugate(Q_a, s):
                    group_orbits.append(orb)
                else:
                    rest.append(orb)
        ungrouped = rest
        base_pts = []
        for orb in group_orbits:
            base = next(p for p in orb if stab(p) == Q_a)
            base_pts.append(base)
        W = pg.weyl_group(Q_a)
        factors.append((W.order, len(group_orbits),
                        [points[p] for p in base_pts], Q_a))
    return factors


def _restricted_group(elements, points):
    """The permutation group induced on a finite invariant point set."""
    index = {p: i for i, p in enumerate(points)}
    perms = []
    for e in elements:
        img = tuple(index[e(p)] for p in points)
        perms.append(img)
    return pg.PermGroup(len(points), sorted(set(perms)))


def centraliser_of_finite_subgroup(gens):
    """The direct-product shape of the centraliser of the finite subgroup
    generated by the given finite-order elements: a full Houghton factor on
    the fixed points and one wreath factor per stabiliser class."""
    Q = close_finite_group(gens)
    if not Q:
        raise ValueError("no generators supplied")
    n = Q[0].rays
    if len(Q) == 1:
        return CentraliserShape(n, n, tuple(range(1, n + 1)), None, 0, ())
    moved = sorted({p for q in Q for p in support(q)})
    group = _restricted_group(Q, moved)
    factors = _isotropy_factors(moved, group)
    return CentraliserShape(
        n, n, tuple(range(1, n + 1)), None, 0,
        tuple(sorted((w, r) for (w, r, _, _) in factors)))


def centraliser_witnesses(gens):
    """Explicit finite-support generators of the wreath factors of the
    centraliser of a finite subgroup: per factor, generators of one Weyl
    block and the transpositions of the copies."""
    Q = close_finite_group(gens)
    n = Q[0].rays
    moved = sorted({p for q in Q for p in support(q)})
    if not moved:
        return []
    group = _restricted_group(Q, moved)
    index = {p: i for i, p in enumerate(moved)}
    out = []
    for (worder, degree, base_pts, Q_a) in _isotropy_factors(moved, group):
        gens_here = []
        N = pg.normaliser(Q_a)
        base = index[base_pts[0]]
        orbit0 = sorted({group.elements[g][base] for g in range(group.order)})
        # Weyl block on the first copy: point q.base -> q.n.base
        for ncos in pg.left_cosets(Q_a):
            if ncos not in N.eset or ncos == group.id:
                continue
            mapping = {}
            ok = True
            for p in orbit0:
                qs = [g for g in range(group.order)
                      if group.elements[g][base] == p]
                img = group.elements[group.mul[qs[0]][ncos]][base]
                mapping[moved[p]] = moved[img]
            cycles = _mapping_to_cycles(mapping)
            if cycles:
                gens_here.append(HoughtonElement.from_cycles(n, cycles))
        # copy swap between the first two blocks
        if degree >= 2:
            b2 = index[base_pts[1]]
            mapping = {}
            for g in range(group.order):
                p1 = group.elements[g][base]
                p2 = group.elements[g][b2]
                mapping[moved[p1]] = moved[p2]
                mapping[moved[p2]] = moved[p1]
            cycles = _mapping_to_cycles(mapping)
            gens_here.append(HoughtonElement.from_cycles(n, cycles))
        out.append(gens_here)
    return out


def _mapping_to_cycles(mapping):
    cycles = []
    seen = set()
    for p in sorted(mapping):
        if p in seen or mapping[p] == p:
            seen.add(p)
            continue
        cyc = [p]
        seen.add(p)
        cur = mapping[p]
        while cur != p:
            seen.add(cur)
            cyc.append(cur)
            cur = mapping.get(cur, cur)
        cycles.append(cyc)
    return cycles


def gamma_graph(q):
    """The crossing graph of an infinite-order element: vertices are the
    rays where it translates, edges join the backward-escape ray to the
    forward-escape ray of each orbit at infinity.  Returns (vertices,
    edges, J, components) with J the eventually-fixed rays."""
    if not any(q.m):
        raise FiniteOrder("the crossing graph needs an infinite-order "
                          "element")
    n = q.rays
    J = tuple(x for x in range(1, n + 1) if q.m[x - 1] == 0)
    vertices = [x for x in range(1, n + 1) if q.m[x - 1] != 0]
    qinv = inverse(q)
    bound = sum(q.cutoffs) + sum(qinv.cutoffs) + \
        sum(abs(v) for v in q.m) + len(q.prefix) + n + 4
    edges = set()
    for y in vertices:
        if q.m[y - 1] <= 0:
            continue
        for r in range(q.m[y - 1]):
            s = (q.cutoffs[y - 1] + r, y)
            steps = 0
            while True:
                i, x = s
                if q.m[x - 1] < 0 and i >= qinv.cutoffs[x - 1]:
                    edges.add((x, y) if x <= y else (y, x))
                    break
                s = qinv(s)
                steps += 1
                if steps > 4 * bound * max(1, max(abs(v) for v in q.m)):
                    raise RuntimeError("backward walk failed to escape")
    comps = _components(vertices, edges)
    return vertices, sorted(edges), J, comps


def _components(vertices, edges):
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (a, b) in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = {}
    for v in vertices:
        comps.setdefault(find(v), []).append(v)
    return sorted(sorted(c) for c in comps.values())


def _finite_orbit_factors(gens_all, window_points, bound):
    """Wreath data of the finite nontrivial orbits of the group generated
    by gens_all (which may include infinite-order elements); orbits
    reaching past the bound are discarded as infinite."""
    pts = set()
    finite_orbits = []
    seen = set()
    for p in sorted(window_points):
        if p in seen:
            continue
        orbit = {p}
        frontier = [p]
        infinite = False
        while frontier and not infinite:
            new = []
            for s in frontier:
                for g in gens_all:
                    t = g(s)
                    if t not in orbit:
                        if t[0] > bound:
                            infinite = True
                            break
                        orbit.add(t)
                        new.append(t)
                if infinite:
                    break
            frontier = new
        seen |= orbit
        if not infinite:
            if len(orbit) > 1 or any(g(p) != p for g in gens_all):
                finite_orbits.append(sorted(orbit))
    moved = sorted({s for orb in finite_orbits for s in orb
                    if any(g(s) != s for g in gens_all)})
    if not moved:
        return ()
    closed = sorted({s for orb in finite_orbits for s in orb
                     if any(s2 in moved for s2 in orb)})
    group = _restricted_group_from_gens(gens_all, closed)
    keep = [p for p in closed
            if any(group.elements[g][closed.index(p)] !=
                   closed.index(p) for g in range(group.order))]
    if not keep:
        return ()
    group2 = _restricted_group_from_gens(gens_all, keep)
    factors = _isotropy_factors(keep, group2)
    return tuple(sorted((w, r) for (w, r, _, _) in factors))


def _restricted_group_from_gens(gens, points):
    index = {p: i for i, p in enumerate(points)}
    perms = set()
    for g in gens:
        perms.add(tuple(index[g(p)] for p in points))
    return pg.PermGroup(len(points), sorted(perms))


def centraliser_of_element(q):
    """The direct-product shape of the centraliser of a single element,
    split by order: full Houghton factor for finite order, otherwise a
    smaller Houghton (or finite symmetric) factor, a free abelian factor
    counting crossing components, and wreath factors from the finite
    orbits."""
    n = q.rays
    if not any(q.m):
        return centraliser_of_finite_subgroup([q])
    vertices, edges, J, comps = gamma_graph(q)
    r = len(comps)
    k = len(J)
    if k == 0:
        fixed = sorted(p for p in q.prefix if q.prefix[p] == p)
        houghton_rays = None
        sym_size = len(fixed)
    else:
        houghton_rays = k
        sym_size = None
    qinv = inverse(q)
    bound = max([q.cutoffs[x - 1] + qinv.cutoffs[x - 1]
                 for x in range(1, n + 1)] + [1]) + \
        max(abs(v) for v in q.m) + 2
    window = [(i, x) for x in range(1, n + 1)
              for i in range(q.cutoffs[x - 1])]
    factors = _finite_orbit_factors([q, qinv], window, bound)
    if not 1 <= r <= max(1, (n - k) // 2):
        raise RuntimeError(
            f"crossing-component count {r} violates its bound")
    return CentraliserShape(n, houghton_rays, J, sym_size, r, factors)


def centraliser_of_vcyc(finite_part, w):
    """Centraliser shape of the virtually cyclic subgroup generated by a
    finite normalised part and an infinite-order element."""
    for f in finite_part:
        if any(f.m):
            raise NotNormalised("finite part contains an infinite-order "
                                "element")
    if not any(w.m):
        raise NotNormalised("the cyclic part must have infinite order")
    F = close_finite_group(finite_part) if finite_part else \
        [HoughtonElement.identity(w.rays)]
    winv = inverse(w)
    conj = {compose(compose(winv, f), w) for f in F}
    if conj != set(F):
        raise NotNormalised("conjugation by the cyclic part does not "
                            "preserve the finite part")
    n = w.rays
    vertices, edges, J, comps = gamma_graph(w)
    r = len(comps)
    k = len(J)
    if k == 0:
        fixed = sorted(p for p in w.prefix
                       if w.prefix[p] == p and all(f(p) == p for f in F))
        houghton_rays, sym_size = None, len(fixed)
    else:
        houghton_rays, sym_size = k, None
    gens_all = [w, winv] + [f for f in F if f.prefix]
    cut = [0] * n
    for g in gens_all:
        for x in range(n):
            cut[x] = max(cut[x], g.cutoffs[x])
    bound = max(cut + [1]) + max(abs(v) for v in w.m) + 2
    window = [(i, x) for x in range(1, n + 1) for i in range(cut[x - 1])]
    factors = _finite_orbit_factors(gens_all, window, bound)
    if not 1 <= r <= max(1, (n - k) // 2):
        raise RuntimeError(
            f"crossing-component count {r} violates its bound")
    return CentraliserShape(n, houghton_rays, J, sym_size, r, factors)


# -- the poset of injective eventual translations --------------------------------

def poset_leq(alpha, beta):
    """alpha <= beta iff beta factors as a translation followed by alpha."""
    if alpha.rays != beta.rays:
        return False
    diff = [b - a for a, b in zip(alpha.m, beta.m)]
    if any(d < 0 for d in diff):
        return False
    t = MonoidVertex.translation(alpha.rays, diff)
    return compose(alpha, t, cls=MonoidVertex) == \
        MonoidVertex(beta.rays, beta.m, beta.prefix)


def vertex_fixed_by(alpha, h):
    """Does h fix the vertex, i.e. fix the image of alpha pointwise?"""
    lhs = compose(h, alpha, cls=MonoidVertex)
    return lhs == MonoidVertex(alpha.rays, alpha.m, alpha.prefix)


def directed_join(alpha, beta, fixing=()):
    """A common upper bound of two vertices, fixed by the given finite
    set of finite-order elements whenever both inputs are."""
    n = alpha.rays
    if beta.rays != n:
        raise NotBijective("different numbers of rays")
    a = [max(0, pb - pa) for pa, pb in zip(alpha.m, beta.m)]
    b = [max(0, pa - pb) for pa, pb in zip(alpha.m, beta.m)]
    am = compose(alpha, MonoidVertex.translation(n, a), cls=MonoidVertex)
    bn = compose(beta, MonoidVertex.translation(n, b), cls=MonoidVertex)
    fix_cut = [0] * n
    for q in fixing:
        for x in range(n):
            fix_cut[x] = max(fix_cut[x], q.cutoffs[x])
    c = []
    for x in range(n):
        c.append(max(am.cutoffs[x], bn.cutoffs[x],
                     fix_cut[x] - am.m[x], 0))
    join = compose(am, MonoidVertex.translation(n, c), cls=MonoidVertex)
    join_b = compose(bn, MonoidVertex.translation(n, c), cls=MonoidVertex)
    if join != join_b:
        raise RuntimeError("join construction produced unequal maps")
    return join


def vertex_stabiliser_certificate(alpha, expected_bound=None):
    """The finite set the stabiliser of the vertex permutes, with its
    size: the stabiliser embeds in the symmetric group on it."""
    comp = alpha.image_complement()
    if expected_bound is not None and len(comp) > expected_bound:
        raise RuntimeError(
            f"complement size {len(comp)} exceeds the expected bound")
    fact = 1
    for t in range(2, len(comp) + 1):
        fact *= t
    return {"complement": comp, "size": len(comp),
            "stabiliser_order_bound": fact}
