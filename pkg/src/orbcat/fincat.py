"""Finite categories with free-abelian hom groups.

A FinAbCategory has finitely many objects, a canonical finite basis for
every hom group, and integer structure constants for composition.  Basis
elements carry their endpoint object indices as ``src`` and ``dst``.
Morphisms in general are dicts {basis element: integer coefficient};
compose(b2, b1) composes b1: x -> y first, then b2: y -> z.
"""

from __future__ import annotations

from .errors import FunctorNotAdditive, ObjectMismatch


def combo_add(acc, combo, scale=1):
    for b, c in combo.items():
        v = acc.get(b, 0) + scale * c
        if v:
            acc[b] = v
        else:
            acc.pop(b, None)
    return acc


def combo_equal(c1, c2):
    return {b: c for b, c in c1.items() if c} == \
           {b: c for b, c in c2.items() if c}


class FinAbCategory:
    """Base class; concrete categories implement the three hooks."""

    def __init__(self, objects, object_names):
        self.objects = list(objects)
        self.object_names = list(object_names)
        self._hom_cache = {}
        self._compose_cache = {}

    # hooks -----------------------------------------------------------------
    def _hom_basis(self, i, j):
        raise NotImplementedError

    def _compose_basic(self, b2, b1):
        """dict basis -> int for b2 . b1 with b1: x->y, b2: y->z."""
        raise NotImplementedError

    def identity_basis(self, i):
        """dict basis -> int representing id at object i."""
        raise NotImplementedError

    # shared API --------------------------------------------------------------
    @property
    def n_objects(self):
        return len(self.objects)

    def hom_basis(self, i, j):
        key = (i, j)
        if key not in self._hom_cache:
            self._hom_cache[key] = tuple(self._hom_basis(i, j))
        return self._hom_cache[key]

    def hom_index(self, b):
        basis = self.hom_basis(b.src, b.dst)
        return basis.index(b)

    def compose(self, b2, b1):
        if b1.dst != b2.src:
            raise ObjectMismatch(
                f"cannot compose: {b1} ends at {b1.dst}, {b2} starts "
                f"at {b2.src}")
        key = (b2, b1)
        if key not in self._compose_cache:
            self._compose_cache[key] = dict(self._compose_basic(b2, b1))
        return dict(self._compose_cache[key])

    def compose_combos(self, m2, m1):
        out = {}
        for b1, c1 in m1.items():
            for b2, c2 in m2.items():
                combo_add(out, self.compose(b2, b1), c1 * c2)
        return out

    def all_basis_elements(self):
        for i in range(self.n_objects):
            for j in range(self.n_objects):
                yield from self.hom_basis(i, j)

    def check_identities(self):
        for i in range(self.n_objects):
            ident = self.identity_basis(i)
            for j in range(self.n_objects):
                for b in self.hom_basis(i, j):
                    if not combo_equal(self.compose_combos({b: 1}, ident),
                                       {b: 1}):
                        return False
                for b in self.hom_basis(j, i):
                    if not combo_equal(self.compose_combos(ident, {b: 1}),
                                       {b: 1}):
                        return False
        return True

    def check_associativity(self):
        """Exhaustive (b3.b2).b1 == b3.(b2.b1) over all basis triples."""
        n = self.n_objects
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        for b1 in self.hom_basis(i, j):
                            for b2 in self.hom_basis(j, k):
                                m21 = self.compose(b2, b1)
                                for b3 in self.hom_basis(k, l):
                                    lhs = self.compose_combos({b3: 1}, m21)
                                    rhs = self.compose_combos(
                                        self.compose(b3, b2), {b1: 1})
                                    if not combo_equal(lhs, rhs):
                                        return False
        return True


class EndObjectBasisElement:
    """A hom-basis element of a one-object endomorphism category, wrapping
    a basis element of the parent category."""

    __slots__ = ("inner",)
    src = 0
    dst = 0

    def __init__(self, inner):
        self.inner = inner

    def __eq__(self, other):
        return (isinstance(other, EndObjectBasisElement)
                and self.inner == other.inner)

    def __hash__(self):
        return hash(("end", self.inner))

    def __repr__(self):
        return f"End({self.inner})"


class EndCategory(FinAbCategory):
    """The one-object category carrying the endomorphism ring of an object
    of a parent category; modules over it are modules over that ring."""

    def __init__(self, parent, obj):
        self.parent = parent
        self.obj = obj
        super().__init__([parent.objects[obj]],
                         [parent.object_names[obj]])

    def _hom_basis(self, i, j):
        return [EndObjectBasisElement(b)
                for b in self.parent.hom_basis(self.obj, self.obj)]

    def _compose_basic(self, b2, b1):
        out = self.parent.compose(b2.inner, b1.inner)
        return {EndObjectBasisElement(k): v for k, v in out.items()}

    def identity_basis(self, i):
        out = self.parent.identity_basis(self.obj)
        return {EndObjectBasisElement(k): v for k, v in out.items()}

    def inclusion_functor(self):
        return CatFunctor(self, self.parent, [self.obj],
                          lambda b: {b.inner: 1},
                          name=f"end@{self.obj}")


class CatFunctor:
    """An additive functor between FinAbCategories.

    ``object_map[i]`` is the target object index for source object i, and
    ``morphism_map(b)`` returns the image of a source basis element as a
    target-category combo dict.
    """

    def __init__(self, source, target, object_map, morphism_map, name=""):
        self.source = source
        self.target = target
        self.object_map = list(object_map)
        self._morphism_map = morphism_map
        self.name = name
        self._cache = {}

    def on_object(self, i):
        return self.object_map[i]

    def on_basis(self, b):
        if b not in self._cache:
            img = dict(self._morphism_map(b))
            for t in img:
                if (t.src, t.dst) != (self.object_map[b.src],
                                      self.object_map[b.dst]):
                    raise FunctorNotAdditive(
                        f"image of {b} has wrong endpoints")
            self._cache[b] = img
        return dict(self._cache[b])

    def on_combo(self, combo):
        out = {}
        for b, c in combo.items():
            combo_add(out, self.on_basis(b), c)
        return out

    def validate(self):
        """Check identities and composition on every composable pair."""
        for i in range(self.source.n_objects):
            lhs = self.on_combo(self.source.identity_basis(i))
            rhs = self.target.identity_basis(self.object_map[i])
            if not combo_equal(lhs, rhs):
                raise FunctorNotAdditive(f"identity at object {i} broken")
        n = self.source.n_objects
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for b1 in self.source.hom_basis(i, j):
                        for b2 in self.source.hom_basis(j, k):
                            lhs = self.on_combo(self.source.compose(b2, b1))
                            rhs = self.target.compose_combos(
                                self.on_basis(b2), self.on_basis(b1))
                            if not combo_equal(lhs, rhs):
                                raise FunctorNotAdditive(
                                    f"composition broken on {b2} . {b1}")
        return True

    def compose_with(self, other):
        """self . other (apply other first)."""
        if other.target is not self.source:
            raise ObjectMismatch("functors not composable")

        def mmap(b):
            return self.on_combo(other.on_basis(b))

        return CatFunctor(other.source, self.target,
                          [self.object_map[j] for j in other.object_map],
                          mmap, name=f"{self.name}.{other.name}")
