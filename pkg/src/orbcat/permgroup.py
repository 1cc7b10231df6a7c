"""Finite permutation group kernel.

Permutations are tuples of images on the points 0..degree-1, so ``p[i]`` is
the image of ``i``.  The product ``p * q`` acts by ``i -> p[q[i]]`` (apply q
first).  Group elements are enumerated once, sorted lexicographically on
their image words, and afterwards everything runs on integer indices into
that list via a Cayley table.  All objects are immutable after construction.
"""

from __future__ import annotations

import itertools
import json
import re

from .errors import CapExceeded, NotASubgroup

DEFAULT_ORDER_CAP = 20000


def pmul(p, q):
    """Compose permutations: (p * q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def pinv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def identity_perm(degree):
    return tuple(range(degree))


def parse_cycles(text, degree=None):
    """Parse cycle notation like "(0 1)(2 3)" or "(01)" into an image tuple.

    Points inside a cycle may be separated by spaces or commas; a bare digit
    string like "(012)" is read one character at a time, which only works
    for degrees up to 10.
    """
    cycles = []
    maxpt = -1
    for body in re.findall(r"\(([^()]*)\)", text):
        body = body.strip()
        if not body:
            continue
        if re.search(r"[\s,]", body):
            pts = [int(tok) for tok in re.split(r"[\s,]+", body) if tok]
        else:
            pts = [int(ch) for ch in body]
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle ({body})")
        cycles.append(pts)
        maxpt = max(maxpt, *pts)
    if degree is None:
        degree = maxpt + 1
    if maxpt >= degree:
        raise ValueError(f"cycle point {maxpt} exceeds degree {degree}")
    images = list(range(degree))
    for pts in cycles:
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    return tuple(images)


def cycle_string(p):
    """Inverse of parse_cycles, with space-separated points."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        j = p[i]
        seen[i] = True
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        parts.append("(" + " ".join(str(x) for x in cyc) + ")")
    return "".join(parts) if parts else "()"


class PermGroup:
    """A finite permutation group with a fixed, reproducible element order."""

    def __init__(self, degree, generators, cap=DEFAULT_ORDER_CAP):
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(g)
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of 0..{degree - 1}: {g}")
            if g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self.elements = self._close(cap)
        self.order = len(self.elements)
        self._index = {p: i for i, p in enumerate(self.elements)}
        n = self.order
        self.mul = [[0] * n for _ in range(n)]
        self.inv = [0] * n
        for i, p in enumerate(self.elements):
            self.inv[i] = self._index[pinv(p)]
            row = self.mul[i]
            for j, q in enumerate(self.elements):
                row[j] = self._index[pmul(p, q)]
        self.id = self._index[identity_perm(degree)]
        self._cache = {}

    def _close(self, cap):
        ident = identity_perm(self.degree)
        els = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for a in frontier:
                for g in self.generators:
                    c = pmul(g, a)
                    if c not in els:
                        els.add(c)
                        new.append(c)
                        if len(els) > cap:
                            raise CapExceeded(
                                f"group order exceeds cap {cap}")
            frontier = new
        return tuple(sorted(els))

    def index(self, p):
        return self._index[tuple(p)]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def conjugate(self, i, g):
        """Index of g^-1 * e_i * g."""
        return self.mul[self.mul[self.inv[g]][i]][g]

    # -- subgroups ---------------------------------------------------------

    def subgroup(self, element_indices):
        return Subgroup(self, element_indices)

    def subgroup_from_perms(self, perms):
        gens = [self._index[tuple(p)] for p in perms]
        return self.generated_subgroup(gens)

    def generated_subgroup(self, gen_indices):
        els = {self.id}
        frontier = [self.id]
        gens = list(gen_indices)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    c = self.mul[g][a]
                    if c not in els:
                        els.add(c)
                        new.append(c)
            frontier = new
        return Subgroup(self, els)

    def trivial_subgroup(self):
        return Subgroup(self, [self.id])

    def full_subgroup(self):
        return Subgroup(self, range(self.order))

    def all_subgroups(self):
        """Every subgroup, found by closing generator sets incrementally."""
        if "all_subgroups" in self._cache:
            return self._cache["all_subgroups"]
        triv = frozenset([self.id])
        found = {triv}
        layer = {triv}
        while layer:
            nxt = set()
            for base in layer:
                for g in range(self.order):
                    if g in base:
                        continue
                    new = self._close_set(base, g)
                    if new not in found:
                        found.add(new)
                        nxt.add(new)
            layer = nxt
        subs = sorted(tuple(sorted(s)) for s in found)
        result = tuple(Subgroup(self, s) for s in subs)
        self._cache["all_subgroups"] = result
        return result

    def _close_set(self, base, extra):
        els = set(base)
        els.add(extra)
        frontier = list(els)
        while frontier:
            new = []
            for a in frontier:
                for b in list(els):
                    for c in (self.mul[a][b], self.mul[b][a]):
                        if c not in els:
                            els.add(c)
                            new.append(c)
                a_inv = self.inv[a]
                if a_inv not in els:
                    els.add(a_inv)
                    new.append(a_inv)
            frontier = new
        return frozenset(els)


class Subgroup:
    """A subgroup stored as a sorted tuple of parent element indices."""

    def __init__(self, parent, element_indices):
        self.parent = parent
        els = tuple(sorted(set(element_indices)))
        if parent.id not in els:
            raise NotASubgroup("subgroup must contain the identity")
        eset = frozenset(els)
        for a in els:
            if parent.inv[a] not in eset:
                raise NotASubgroup("subgroup not closed under inverse")
            for b in els:
                if parent.mul[a][b] not in eset:
                    raise NotASubgroup("subgroup not closed under product")
        self.elements = els
        self.eset = eset
        self.order = len(els)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.parent is other.parent
                and self.elements == other.elements)

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __le__(self, other):
        return self.eset <= other.eset

    def __lt__(self, other):
        # sort key: order first, then element tuple; total on one parent
        return (self.order, self.elements) < (other.order, other.elements)

    def __contains__(self, idx):
        return idx in self.eset

    def __repr__(self):
        return f"Subgroup(order={self.order}, elements={self.elements})"

    def conjugate_by(self, g):
        G = self.parent
        return Subgroup(G, [G.conjugate(i, g) for i in self.elements])

    def perms(self):
        return [self.parent.elements[i] for i in self.elements]

    def as_perm_group(self):
        """This subgroup as a standalone PermGroup on the parent's points."""
        return PermGroup(self.parent.degree,
                         [self.parent.elements[i] for i in self.elements],
                         cap=self.order)


# -- coset and conjugacy machinery ----------------------------------------

def left_cosets(H):
    """Canonical reps of gH in the parent, each the least element of its
    coset, in increasing order."""
    G = H.parent
    seen = [False] * G.order
    reps = []
    for g in range(G.order):
        if seen[g]:
            continue
        reps.append(g)
        for h in H.elements:
            seen[G.mul[g][h]] = True
    return reps


def coset_of(H, g):
    """Canonical (least) representative of gH."""
    G = H.parent
    return min(G.mul[g][h] for h in H.elements)


def double_cosets(H, K):
    """Canonical reps of H\\G/K, least element per class, increasing."""
    G = H.parent
    if K.parent is not G:
        raise ValueError("subgroups of different groups")
    seen = [False] * G.order
    reps = []
    for g in range(G.order):
        if seen[g]:
            continue
        reps.append(g)
        for h in H.elements:
            hg = G.mul[h][g]
            for k in K.elements:
                seen[G.mul[hg][k]] = True
    return reps


def double_coset_of(H, K, g):
    """Canonical (least) representative of HgK."""
    G = H.parent
    return min(G.mul[G.mul[h][g]][k] for h in H.elements for k in K.elements)


def double_coset_set(H, K, g):
    G = H.parent
    return frozenset(G.mul[G.mul[h][g]][k]
                     for h in H.elements for k in K.elements)


def double_cosets_within(H, J, K):
    """Canonical reps of J\\H/K for J, K <= H."""
    G = H.parent
    if not (J.eset <= H.eset and K.eset <= H.eset):
        raise NotASubgroup("double cosets within H need J, K <= H")
    seen = set()
    reps = []
    for h in H.elements:
        if h in seen:
            continue
        reps.append(h)
        for j in J.elements:
            jh = G.mul[j][h]
            for k in K.elements:
                seen.add(G.mul[jh][k])
    return reps


def normaliser(H):
    G = H.parent
    els = [g for g in range(G.order)
           if all(G.conjugate(i, g) in H.eset for i in H.elements)]
    return Subgroup(G, els)


def centraliser(G, S):
    """Elements of G commuting with every index in S."""
    els = [g for g in range(G.order)
           if all(G.mul[g][s] == G.mul[s][g] for s in S)]
    return Subgroup(G, els)


def weyl_group(H):
    """W_G(H) = N_G(H)/H as a permutation group on the cosets of H in N."""
    G = H.parent
    N = normaliser(H)
    cosets = sorted(set(coset_of(H, n) for n in N.elements))
    pos = {c: i for i, c in enumerate(cosets)}
    perms = set()
    for n in N.elements:
        perms.add(tuple(pos[coset_of(H, G.mul[n][c])] for c in cosets))
    return PermGroup(len(cosets), sorted(perms))


def fixed_points(H, K):
    """Cosets gK (canonical reps) with HgK = gK, i.e. g^-1 H g <= K."""
    G = H.parent
    out = []
    for g in left_cosets(K):
        if all(G.conjugate(h, g) in K.eset for h in H.elements):
            out.append(g)
    return out


def is_subconjugate(H, K):
    """True iff some conjugate of H lies in K."""
    return bool(fixed_points(H, K))


def conjugacy_class_of_subgroup(H):
    G = H.parent
    return sorted(set(H.conjugate_by(g) for g in range(G.order)))


def subgroups_up_to_conjugacy(G):
    """One canonical representative per conjugacy class of subgroups.

    The representative is the least element-tuple in its class; classes are
    returned sorted by (order, elements).
    """
    if "subgroup_classes" in G._cache:
        return G._cache["subgroup_classes"]
    remaining = set(G.all_subgroups())
    reps = []
    while remaining:
        H = min(remaining)
        cls = conjugacy_class_of_subgroup(H)
        reps.append(min(cls))
        remaining -= set(cls)
    reps.sort()
    result = tuple(reps)
    G._cache["subgroup_classes"] = result
    return result


def canonical_subgroup_rep(H, conjugators):
    """Least element-tuple among H^g for g in the given index iterable."""
    return min(H.conjugate_by(g) for g in conjugators)


# -- families ---------------------------------------------------------------

class Family:
    """A family of subgroups closed under conjugation and subgroups."""

    ALL = "All"
    TRIVIAL = "Trivial"
    PSUBGROUPS = "PSubgroups"
    EXPLICIT = "Explicit"

    def __init__(self, group, kind, members, p=None):
        self.group = group
        self.kind = kind
        self.p = p
        self.members = tuple(sorted(set(members)))
        self._validate()

    def _validate(self):
        mset = set(self.members)
        G = self.group
        for H in self.members:
            for g in range(G.order):
                if H.conjugate_by(g) not in mset:
                    raise ValueError("family not closed under conjugation")
        # subgroup closure: every subgroup of a member is a member
        all_subs = G.all_subgroups()
        for S in all_subs:
            if any(S <= H for H in self.members) and S not in mset:
                raise ValueError("family not closed under subgroups")

    @classmethod
    def all(cls, G):
        return cls(G, cls.ALL, G.all_subgroups())

    @classmethod
    def trivial(cls, G):
        return cls(G, cls.TRIVIAL, [G.trivial_subgroup()])

    @classmethod
    def p_subgroups(cls, G, p):
        members = [H for H in G.all_subgroups() if _is_p_power(H.order, p)]
        return cls(G, cls.PSUBGROUPS, members, p=p)

    @classmethod
    def explicit(cls, G, seeds):
        """Smallest family containing the seed subgroups."""
        members = set()
        for H in seeds:
            for Hg in conjugacy_class_of_subgroup(H):
                for S in G.all_subgroups():
                    if S <= Hg:
                        members.add(S)
        return cls(G, cls.EXPLICIT, members)

    def class_representatives(self):
        """Conjugacy-class reps of the members, canonical and sorted."""
        reps = [H for H in subgroups_up_to_conjugacy(self.group)
                if H in set(self.members)]
        return tuple(reps)

    def __contains__(self, H):
        return H in set(self.members)


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


# -- construction helpers ---------------------------------------------------

def enumerate_group(generators, degree=None, cap=DEFAULT_ORDER_CAP):
    """Build a PermGroup from image-tuple generators."""
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generator list")
        degree = len(gens[0])
    return PermGroup(degree, gens, cap=cap)


_PRESET_RE = re.compile(r"^(C|S|D)(\d+)$|^C2XC2$", re.IGNORECASE)


def preset_group(name, cap=DEFAULT_ORDER_CAP):
    """Named presets: C<n>, S<n>, D<n> (dihedral of order 2n), C2xC2."""
    key = name.strip().upper()
    if key == "C2XC2":
        return PermGroup(4, [parse_cycles("(0 1)", 4),
                             parse_cycles("(2 3)", 4)], cap=cap)
    m = _PRESET_RE.match(key)
    if not m or m.group(1) is None:
        raise ValueError(f"unknown preset group {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValueError("preset index must be >= 1")
    if kind == "C":
        if n == 1:
            return PermGroup(1, [], cap=cap)
        rot = tuple((i + 1) % n for i in range(n))
        return PermGroup(n, [rot], cap=cap)
    if kind == "S":
        if n == 1:
            return PermGroup(1, [], cap=cap)
        gens = [parse_cycles("(0 1)", n)]
        if n > 2:
            gens.append(tuple((i + 1) % n for i in range(n)))
        return PermGroup(n, gens, cap=cap)
    # dihedral of order 2n on n points
    if n < 3:
        raise ValueError("dihedral preset needs n >= 3")
    rot = tuple((i + 1) % n for i in range(n))
    refl = tuple((n - i) % n for i in range(n))
    return PermGroup(n, [rot, refl], cap=cap)


def group_from_spec(spec, cap=DEFAULT_ORDER_CAP):
    """Accept a preset name, a JSON dict/string, or ';'-joined cycles."""
    if isinstance(spec, dict):
        return enumerate_group(spec["generators"], degree=spec["degree"],
                               cap=cap)
    spec = spec.strip()
    try:
        return preset_group(spec, cap=cap)
    except ValueError:
        pass
    if spec.startswith("{"):
        return group_from_spec(json.loads(spec), cap=cap)
    if "(" in spec:
        parts = [s for s in spec.split(";") if s.strip()]
        degree = 0
        for part in parts:
            p = parse_cycles(part)
            degree = max(degree, len(p))
        gens = [parse_cycles(part, degree) for part in parts]
        return enumerate_group(gens, degree=degree, cap=cap)
    raise ValueError(f"cannot parse group spec {spec!r}")


def family_from_spec(G, spec):
    spec = spec.strip().lower()
    if spec == "all":
        return Family.all(G)
    if spec in ("triv", "trivial"):
        return Family.trivial(G)
    if spec.startswith("p:"):
        return Family.p_subgroups(G, int(spec[2:]))
    raise ValueError(f"cannot parse family spec {spec!r}")


def subgroup_from_spec(G, spec):
    """A subgroup given by cycle strings joined with ';', 'triv' or 'all'."""
    spec = spec.strip()
    if spec.lower() in ("triv", "trivial", "1"):
        return G.trivial_subgroup()
    if spec.lower() in ("all", "g", "full"):
        return G.full_subgroup()
    parts = [s for s in spec.split(";") if s.strip()]
    perms = [parse_cycles(p, G.degree) for p in parts]
    return G.subgroup_from_perms(perms)


def check_double_coset_partition(H, K):
    """Sum of |HxK| over class reps must be |G|."""
    G = H.parent
    total = sum(len(double_coset_set(H, K, x)) for x in double_cosets(H, K))
    return total == G.order
