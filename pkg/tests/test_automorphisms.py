"""Automorphism enumeration, order filters, and induced quotient maps."""

import itertools
import math

import numpy as np
import pytest

from grouptwist import (
    Automorphism,
    automorphism_group,
    automorphisms_of_order_dividing,
    build_from_table,
    conjugation_automorphism,
    fallback_automorphisms,
    identity_automorphism,
    induced_quotient_automorphism,
    inversion_automorphism,
    is_automorphism,
)
from grouptwist.errors import (
    NotInvariantError,
    OrderCapExceededError,
    TooManyAutomorphismsError,
)

from conftest import cyclic_table


def brute_force_automorphisms(group):
    """Oracle: test every permutation of the element set for multiplicativity."""
    found = []
    for perm in itertools.permutations(range(group.order)):
        if all(perm[group.mul(i, j)] == group.mul(perm[i], perm[j])
               for i in range(group.order) for j in range(group.order)):
            found.append(perm)
    return found


class TestIsAutomorphism:
    def test_identity_map(self, s3):
        assert is_automorphism(s3, list(range(6)))

    def test_inversion_on_c3(self, c3):
        assert is_automorphism(c3, c3.inverse)

    def test_inversion_on_s3(self, s3):
        assert not is_automorphism(s3, s3.inverse)
        # witness: two non-commuting transpositions break multiplicativity
        t = [x for x in range(6) if s3.element_order(x) == 2]
        a, b = t[0], t[1]
        inv = s3.inverse
        assert inv[s3.mul(a, b)] != s3.mul(inv[a], inv[b])

    def test_non_bijection(self, c3):
        assert not is_automorphism(c3, [0, 0, 0])

    def test_wrong_length(self, c3):
        with pytest.raises(ValueError):
            is_automorphism(c3, [0, 1])

    def test_constructor_validates(self, s3):
        with pytest.raises(ValueError):
            Automorphism(s3, s3.inverse)


class TestAutomorphismGroup:
    def test_trivial(self, trivial):
        assert len(automorphism_group(trivial)) == 1

    def test_c3_against_brute_force(self, c3):
        oracle = brute_force_automorphisms(c3)
        enumerated = automorphism_group(c3)
        assert len(oracle) == 2
        assert sorted(a.key() for a in enumerated) == sorted(oracle)

    def test_klein_four_against_brute_force(self, c2):
        v4 = c2.direct_product(c2)
        oracle = brute_force_automorphisms(v4)
        assert len(oracle) == 6
        assert sorted(a.key() for a in automorphism_group(v4)) == sorted(oracle)

    def test_s3_against_brute_force(self, s3):
        oracle = brute_force_automorphisms(s3)
        enumerated = automorphism_group(s3)
        assert sorted(a.key() for a in enumerated) == sorted(oracle)
        assert len(enumerated) == 6

    def test_q8_size(self, q8):
        assert len(automorphism_group(q8)) == 24  # Aut(Q8) = S4

    def test_complete_flag_and_identity_present(self, d8):
        auts = automorphism_group(d8)
        assert auts.complete
        assert any(a.is_identity() for a in auts)

    def test_closure_under_composition_and_inverse_small(self, catalog24):
        for entry in catalog24:
            if entry.group.order > 24:
                continue
            auts = automorphism_group(entry.group)
            keys = {a.key() for a in auts}
            assert math.factorial(entry.group.order) % len(auts) == 0
            for a in auts:
                assert a.inverse().key() in keys
            sample = list(auts)[:8]
            for a, b in itertools.product(sample, repeat=2):
                assert a.compose(b).key() in keys

    def test_order_cap(self, s3):
        with pytest.raises(OrderCapExceededError):
            automorphism_group(s3, order_cap=4)

    def test_budget(self, c2):
        g = c2.direct_product(c2).direct_product(c2)  # |Aut| = 168
        with pytest.raises(TooManyAutomorphismsError):
            automorphism_group(g, budget=100)

    def test_deterministic_order(self, d8):
        keys = [a.key() for a in automorphism_group(d8)]
        assert keys == sorted(keys)


class TestOrderDividing:
    def test_n_one_gives_identity_only(self, s3):
        auts = automorphisms_of_order_dividing(s3, 1)
        assert len(auts) == 1 and auts[0].is_identity()
        assert not auts.complete

    def test_c3_n2(self, c3):
        auts = automorphisms_of_order_dividing(c3, 2)
        keys = {a.key() for a in auts}
        assert keys == {(0, 1, 2), tuple(int(v) for v in c3.inverse)}

    def test_c5_n3_identity_only(self, c5):
        auts = automorphisms_of_order_dividing(c5, 3)
        assert len(auts) == 1 and auts[0].is_identity()

    def test_exactness(self, d8, s4):
        for group, n in ((d8, 2), (d8, 4), (s4, 3), (s4, 6)):
            for alpha in automorphisms_of_order_dividing(group, n):
                image = np.arange(group.order)
                for _ in range(n):
                    image = alpha.image[image]
                assert np.array_equal(image, np.arange(group.order))


class TestConjugation:
    def test_central_element(self, d8):
        z = next(x for x in range(8) if d8.class_sizes()[x] == 1 and x != d8.identity)
        assert conjugation_automorphism(d8, z).is_identity()

    def test_abelian(self, c6):
        for g in range(6):
            assert conjugation_automorphism(c6, g).is_identity()

    def test_three_cycle_order(self, s3):
        g = next(x for x in range(6) if s3.element_order(x) == 3)
        assert conjugation_automorphism(s3, g).order == 3

    def test_order_divides_element_order(self, s4):
        for g in range(24):
            assert s4.element_order(g) % conjugation_automorphism(s4, g).order == 0

    def test_composition_identity(self, s3):
        for g, h in itertools.product(range(6), repeat=2):
            left = conjugation_automorphism(s3, g).compose(
                conjugation_automorphism(s3, h))
            assert left == conjugation_automorphism(s3, s3.mul(g, h))


class TestInducedQuotient:
    def test_identity_induces_identity(self, s3):
        a3 = s3.subgroup_generated([x for x in range(6) if s3.element_order(x) == 3])
        induced = induced_quotient_automorphism(s3, a3, identity_automorphism(s3))
        assert induced.is_identity()

    def test_conjugation_induces_conjugation(self, s3):
        a3 = s3.subgroup_generated([x for x in range(6) if s3.element_order(x) == 3])
        quotient = s3.quotient(a3)
        qgroup, proj = quotient
        for g in range(6):
            induced = induced_quotient_automorphism(
                s3, a3, conjugation_automorphism(s3, g), quotient=quotient)
            expected = conjugation_automorphism(qgroup, int(proj[g]))
            assert induced == expected

    def test_commuting_square(self, d8):
        center = d8.subgroup_generated(
            [x for x in range(8) if d8.class_sizes()[x] == 1])
        qgroup, proj = d8.quotient(center)
        for alpha in automorphism_group(d8):
            if not center.is_stabilized_by(alpha.image):
                continue
            induced = induced_quotient_automorphism(
                d8, center, alpha, quotient=(qgroup, proj))
            for x in range(8):
                assert proj[alpha(x)] == induced(int(proj[x]))
            assert alpha.order % induced.order == 0

    def test_not_invariant(self, c3xc3):
        # coordinate swap does not stabilize the first factor
        swap = Automorphism(c3xc3, [(i % 3) * 3 + i // 3 for i in range(9)])
        first_factor = c3xc3.subgroup_generated([3])
        assert first_factor.order == 3
        with pytest.raises(NotInvariantError) as info:
            induced_quotient_automorphism(c3xc3, first_factor, swap)
        assert info.value.witness is not None


class TestFallback:
    def test_abelian_contains_inversion(self, c6):
        fam = fallback_automorphisms(c6)
        assert not fam.complete
        keys = {a.key() for a in fam}
        assert tuple(int(v) for v in c6.inverse) in keys
        assert tuple(range(6)) in keys

    def test_nonabelian_contains_conjugations(self, s3):
        fam = fallback_automorphisms(s3)
        keys = {a.key() for a in fam}
        for g in range(6):
            assert conjugation_automorphism(s3, g).key() in keys

    def test_inversion_none_for_nonabelian(self, s3):
        assert inversion_automorphism(s3) is None


def test_automorphism_order_via_cycle_lcm():
    g = build_from_table(cyclic_table(7))
    triple = Automorphism(g, [(3 * i) % 7 for i in range(7)])  # x -> 3x
    # 3 has multiplicative order 6 mod 7
    assert triple.order == 6
    assert triple.power_maps(7)[1].tolist() == [(3 * i) % 7 for i in range(7)]


def test_aut_of_relabeled_group_matches(s3):
    from grouptwist.groups import relabeled
    copy = relabeled(s3, [5, 3, 1, 0, 4, 2])
    assert len(automorphism_group(copy)) == len(automorphism_group(s3))
