import random

import pytest

from orbcat.catmod import find_natural_isomorphism
from orbcat.errors import NotASubgroup, ObjectMismatch
from orbcat.linalg import ZZ
from orbcat.mackeycat import (MackeyMorphism, Span, basis_pairs,
                              build_mackey_category, burnside_counit,
                              burnside_module, compose_pairs,
                              conjugation_morphism, green_generator,
                              identity_morphism, induce_to_mackey,
                              induction_morphism, orbit_to_mackey_functor,
                              pullback_formula, restriction_morphism,
                              span_morphism, standard_form,
                              subgroups_up_to_local_conjugacy)
from orbcat.orbitcat import build_orbit_category, constant_module
from orbcat.permgroup import (Family, Subgroup, double_cosets,
                              double_cosets_within, parse_cycles,
                              subgroups_up_to_conjugacy)


def sub(G, *cycles):
    return G.subgroup_from_perms([parse_cycles(c, G.degree)
                                  for c in cycles])


def mackey_axiom_holds(G, H, J, K):
    lhs = restriction_morphism(G, H, J).then(induction_morphism(G, H, K))
    rhs = None
    for x in double_cosets_within(H, J, K):
        A = Subgroup(G, [u for u in J.elements
                         if G.conjugate(u, x) in K.eset])
        Ax = A.conjugate_by(x)
        term = induction_morphism(G, J, A).then(
            conjugation_morphism(G, Ax, x)).then(
            restriction_morphism(G, K, Ax))
        rhs = term if rhs is None else rhs + term
    return lhs == rhs


class TestBasis:
    def test_group_ring_at_free_orbit(self, groups):
        G = groups["S3"]
        T = G.trivial_subgroup()
        assert len(basis_pairs(T, T)) == G.order

    def test_c2_endomorphisms(self, groups):
        G = groups["C2"]
        full = G.full_subgroup()
        pairs = basis_pairs(full, full)
        assert len(pairs) == 2
        assert sorted(L.order for (_, L) in pairs) == [1, 2]

    def test_into_free_orbit_counts_cosets(self, groups):
        G = groups["S3"]
        K = sub(G, "(01)")
        pairs = basis_pairs(K, G.trivial_subgroup())
        assert len(pairs) == G.order // K.order

    def test_category_identities_and_associativity(self, groups):
        for name in ("C2", "C4", "S3"):
            cat = build_mackey_category(groups[name],
                                        Family.all(groups[name]))
            assert cat.check_identities()
            assert cat.check_associativity()


class TestStandardForm:
    def test_bijective_left_leg_relabels(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        for a in range(G.order):
            Ha = H.conjugate_by(G.inv[a])
            span = Span(H, G.full_subgroup(), Ha, a, G.id)
            g, L = standard_form(span.validate())
            assert g == G.id
            assert L.order == H.order

    def test_already_standard(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        K = G.full_subgroup()
        g, L = standard_form(Span(H, K, H, G.id, G.id))
        assert (g, L.order) == (G.id, 2)

    def test_invariance_under_apex_relabelling(self, groups):
        # a span and its translate under any inner bijection agree
        G = groups["D4"]
        rng = random.Random(5)
        reps = subgroups_up_to_conjugacy(G)
        for _ in range(60):
            K, S = rng.choice(reps), rng.choice(reps)
            pairs = basis_pairs(K, S)
            if not pairs:
                continue
            g0, L0 = rng.choice(pairs)
            base = Span(K, S, L0, G.id, g0)
            x = rng.randrange(G.order)
            Lx = L0.conjugate_by(G.inv[x])
            moved = Span(K, S, Lx, x, G.mul[x][g0])
            assert standard_form(moved.validate()) == \
                standard_form(base.validate())

    def test_local_conjugacy_enumeration(self, groups):
        G = groups["D4"]
        M = G.full_subgroup()
        reps = subgroups_up_to_local_conjugacy(M)
        assert len(reps) == len(subgroups_up_to_conjugacy(G))


class TestComposition:
    def test_identity_neutral(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        for (g, L) in basis_pairs(H, G.full_subgroup()):
            m = span_morphism(G, Span(H, G.full_subgroup(), L, G.id, g))
            assert identity_morphism(G, H).then(m) == m
            assert m.then(identity_morphism(G, G.full_subgroup())) == m

    def test_paper_style_idempotent_relation(self, groups):
        # e = (G/C2 <- G/1 -> G/C2) squares to twice itself
        G = groups["C2"]
        e = span_morphism(G, Span(G.full_subgroup(), G.full_subgroup(),
                                  G.trivial_subgroup(), G.id, G.id))
        assert e.then(e) == e.scale(2)

    def test_restriction_induction_two_terms(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        full = G.full_subgroup()
        comp = restriction_morphism(G, full, H).then(
            induction_morphism(G, full, H))
        tubes = sorted(L.order for (_, L) in comp.terms)
        assert tubes == [1, 2]

    def test_concrete_pullback_matches_formula(self, groups):
        for name in ("S3", "D4"):
            G = groups[name]
            reps = subgroups_up_to_conjugacy(G)
            for K in reps:
                for S in reps:
                    for Q in reps:
                        for p1 in basis_pairs(K, S):
                            for p2 in basis_pairs(S, Q):
                                assert compose_pairs(G, K, S, Q, p2, p1) \
                                    == pullback_formula(G, K, S, Q, p2, p1)

    def test_endpoint_mismatch(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        with pytest.raises(ObjectMismatch):
            induction_morphism(G, G.full_subgroup(), H).then(
                induction_morphism(G, G.full_subgroup(), H))


class TestGreenGenerators:
    def test_identity_cases(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        assert green_generator(G, "I", H, K=H) == identity_morphism(G, H)
        assert green_generator(G, "R", H, K=H) == identity_morphism(G, H)
        for h in H.elements:
            assert green_generator(G, "c", H, g=h) == \
                identity_morphism(G, H)

    def test_restriction_tube(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        R = green_generator(G, "R", G.full_subgroup(), K=H)
        [(g, L)] = list(R.terms)
        assert L == H

    def test_requires_subgroup(self, groups):
        G = groups["S3"]
        with pytest.raises(NotASubgroup):
            induction_morphism(G, sub(G, "(01)"), sub(G, "(012)"))

    def test_every_basis_element_factors(self, groups):
        # every basic morphism is R . c . I of its tube data
        G = groups["S3"]
        reps = subgroups_up_to_conjugacy(G)
        for H in reps:
            for K in reps:
                for (x, L) in basis_pairs(H, K):
                    Lx = L.conjugate_by(x)
                    m = induction_morphism(G, H, L).then(
                        conjugation_morphism(G, Lx, x)).then(
                        restriction_morphism(G, K, Lx))
                    assert m == span_morphism(G, Span(H, K, L, G.id, x))


class TestGreenAxioms:
    def test_transitivity_axioms(self, groups):
        G = groups["S3"]
        full = G.full_subgroup()
        H = sub(G, "(01)")
        T = G.trivial_subgroup()
        assert restriction_morphism(G, full, T) == \
            restriction_morphism(G, H, T).then(
                restriction_morphism(G, full, H))
        assert induction_morphism(G, full, T) == \
            induction_morphism(G, full, H).then(
                induction_morphism(G, H, T))

    def test_conjugation_composition(self, groups):
        G = groups["D4"]
        H = sub(G, "(0 2)")
        for g in range(G.order):
            for h in range(G.order):
                Hh = H.conjugate_by(G.inv[h])
                lhs = conjugation_morphism(G, Hh, g).then(
                    conjugation_morphism(G, H, h))
                assert lhs == conjugation_morphism(G, H, G.mul[g][h])

    def test_conjugation_commutes_with_restriction_induction(self, groups):
        G = groups["S3"]
        full = G.full_subgroup()
        K = sub(G, "(01)")
        for g in range(G.order):
            Kg = K.conjugate_by(G.inv[g])
            fullg = full
            # restriction: c_g at K then R = R' then c_g at full
            lhs = conjugation_morphism(G, K, g).then(
                restriction_morphism(G, full, K))
            rhs = restriction_morphism(G, fullg, Kg).then(
                conjugation_morphism(G, full, g))
            assert lhs == rhs
            lhs = conjugation_morphism(G, full, g).then(
                induction_morphism(G, full, K))
            rhs = induction_morphism(G, fullg, Kg).then(
                conjugation_morphism(G, K, g))
            assert lhs == rhs

    def test_mackey_axiom_sample(self, groups):
        G = groups["S3"]
        H = sub(G, "(01)")
        assert mackey_axiom_holds(G, G.full_subgroup(), H, H)

    def test_mackey_axiom_d4_exhaustive(self, groups):
        G = groups["D4"]
        subs = G.all_subgroups()
        for H in subs:
            inside = [S for S in subs if S.eset <= H.eset]
            for J in inside:
                for K in inside:
                    assert mackey_axiom_holds(G, H, J, K)


class TestBurnside:
    def test_ranks(self, groups):
        G = groups["S3"]
        cat = build_mackey_category(G, Family.all(G))
        B = burnside_module(cat, ZZ)
        by_object = {cat.object_names[i]: B.ngens(i)
                     for i in range(cat.n_objects)}
        assert by_object["G/G"] == 4
        assert by_object["G/1"] == 1

    def test_c2_rank_two_at_full(self, groups):
        G = groups["C2"]
        cat = build_mackey_category(G, Family.all(G))
        B = burnside_module(cat, ZZ)
        assert B.ngens(0) == 2

    def test_functorial(self, groups):
        G = groups["C4"]
        cat = build_mackey_category(G, Family.all(G))
        burnside_module(cat, ZZ).validate()

    def test_formal_terminal_object_flag(self, groups):
        G = groups["C2"]
        B_all = burnside_module(build_mackey_category(G, Family.all(G)),
                                ZZ)
        assert not B_all.formal_terminal_object
        B_triv = burnside_module(
            build_mackey_category(G, Family.trivial(G)), ZZ)
        assert B_triv.formal_terminal_object


class TestInduction:
    @pytest.mark.parametrize("name", ["C2", "C4", "S3"])
    def test_induced_constant_is_burnside(self, groups, name):
        G = groups[name]
        fam = Family.all(G)
        ocat = build_orbit_category(G, fam)
        mcat = build_mackey_category(G, fam)
        ind = induce_to_mackey(constant_module(ocat, ZZ), ocat, mcat)
        B = burnside_module(mcat, ZZ)
        cmap = burnside_counit(ind, B, mcat)
        cmap.validate()
        assert cmap.is_isomorphism()

    def test_functor_validates(self, groups):
        G = groups["S3"]
        fam = Family.all(G)
        ocat = build_orbit_category(G, fam)
        mcat = build_mackey_category(G, fam)
        orbit_to_mackey_functor(ocat, mcat).validate()

    def test_induction_of_free_is_free(self, groups):
        from orbcat.catmod import free_module, induce
        G = groups["C2"]
        fam = Family.all(G)
        ocat = build_orbit_category(G, fam)
        mcat = build_mackey_category(G, fam)
        F = free_module(ocat, ZZ, 0, "contra")
        ind = induce(F, orbit_to_mackey_functor(ocat, mcat))
        target = free_module(mcat, ZZ, 0, "contra")
        assert find_natural_isomorphism(ind, target) is not None

    def test_induction_of_zero(self, groups):
        from orbcat.catmod import CatModule, FPModule, induce
        from orbcat.linalg import Matrix
        G = groups["C2"]
        fam = Family.all(G)
        ocat = build_orbit_category(G, fam)
        mcat = build_mackey_category(G, fam)
        Z = CatModule(ocat, ZZ, "contra",
                      [FPModule.free(ZZ, 0) for _ in range(2)],
                      {b: Matrix.zeros(ZZ, 0, 0)
                       for b in ocat.all_basis_elements()})
        ind = induce(Z, orbit_to_mackey_functor(ocat, mcat))
        assert ind.is_zero_module()
