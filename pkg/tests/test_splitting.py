"""Twisted power sets, densities, and the Hughes-Thompson machinery."""

from fractions import Fraction

import pytest

from grouptwist import (
    Automorphism,
    check_index_bound,
    conjugation_automorphism,
    format_fraction,
    hughes_thompson_subgroup,
    identity_automorphism,
    power_solution_set,
    twisted_solution_set,
)
from grouptwist.errors import AutomorphismOrderMismatchError


def brute_twisted_members(group, image, n):
    """Oracle: evaluate the defining product left to right, element by element."""
    out = []
    for x in range(group.order):
        acc = x
        power = x
        for _ in range(n - 1):
            power = image[power]
            acc = group.mul(acc, power)
        if acc == group.identity:
            out.append(x)
    return out


class TestTwistedSolutionSet:
    def test_c3_identity_n3_full(self, c3):
        ss = twisted_solution_set(c3, identity_automorphism(c3), 3)
        assert ss.size == 3 and ss.density == 1

    def test_s3_identity_n3(self, s3):
        ss = twisted_solution_set(s3, identity_automorphism(s3), 3)
        oracle = brute_twisted_members(s3, list(range(6)), 3)
        assert ss.members.tolist() == oracle
        assert ss.density == Fraction(1, 2)
        # members are the identity and the two 3-cycles
        assert all(s3.element_order(x) in (1, 3) for x in ss.members)

    def test_c3xc3_swap_n2(self, c3xc3):
        swap_image = [(i % 3) * 3 + i // 3 for i in range(9)]
        swap = Automorphism(c3xc3, swap_image)
        ss = twisted_solution_set(c3xc3, swap, 2)
        assert ss.density == Fraction(1, 3) and ss.size == 3
        oracle = brute_twisted_members(c3xc3, swap_image, 2)
        assert ss.members.tolist() == oracle
        # members are exactly the pairs (a, -a)
        expected = {a * 3 + (-a) % 3 for a in range(3)}
        assert set(ss.members.tolist()) == expected

    def test_order_mismatch(self, s3):
        g3 = next(x for x in range(6) if s3.element_order(x) == 3)
        alpha = conjugation_automorphism(s3, g3)
        with pytest.raises(AutomorphismOrderMismatchError):
            twisted_solution_set(s3, alpha, 2)

    def test_alpha_invariance(self, s4):
        g = next(x for x in range(24) if s4.element_order(x) == 3)
        alpha = conjugation_automorphism(s4, g)
        ss = twisted_solution_set(s4, alpha, 3)
        mask = ss.member_mask()
        assert mask[alpha.image[ss.members]].all()

    def test_identity_always_member(self, d8, q8, s4):
        for group, n in ((d8, 2), (q8, 4), (s4, 6)):
            ss = twisted_solution_set(group, identity_automorphism(group), n)
            assert group.identity in ss


class TestPowerSolutionSet:
    def test_d8_n2(self, d8):
        ss = power_solution_set(d8, 2)
        # oracle: count x with x*x = identity straight off the table
        oracle = [x for x in range(8) if d8.mul(x, x) == d8.identity]
        assert ss.members.tolist() == oracle
        assert ss.size == 6 and ss.density == Fraction(3, 4)

    def test_exponent_divides_full(self, c2):
        v8 = c2.direct_product(c2).direct_product(c2)
        assert power_solution_set(v8, 2).density == 1
        assert power_solution_set(v8, 4).density == 1

    def test_c5_n2(self, c5):
        ss = power_solution_set(c5, 2)
        assert ss.size == 1 and ss.density == Fraction(1, 5)

    def test_equals_twisted_with_identity(self, catalog24):
        for entry in catalog24:
            for n in (2, 3, 5):
                a = power_solution_set(entry.group, n)
                b = twisted_solution_set(entry.group,
                                         identity_automorphism(entry.group), n)
                assert a.members.tolist() == b.members.tolist()


class TestHughesThompson:
    def test_exponent_n_trivial(self, c2):
        v4 = c2.direct_product(c2)
        assert hughes_thompson_subgroup(v4, 2).order == 1

    def test_s3_n2(self, s3):
        hn = hughes_thompson_subgroup(s3, 2)
        assert hn.order == 3 and hn.index == 2
        assert all(s3.element_order(x) in (1, 3) for x in hn.members)

    def test_c4_n2_whole_group(self, c4):
        assert hughes_thompson_subgroup(c4, 2).order == 4

    def test_always_normal(self, s4, d8, q8):
        for group in (s4, d8, q8):
            for n in range(2, 9):
                assert hughes_thompson_subgroup(group, n).is_normal()


class TestIndexBound:
    def test_s3_n2(self, s3):
        report = check_index_bound(s3, 2)
        assert report.density == Fraction(2, 3)
        assert report.hn_index == 2
        assert report.containment_ok and report.bound_ok and not report.vacuous
        # the bound value is 1/(1 - 2/3) = 3
        assert Fraction(1, 1) / (1 - report.density) == 3

    def test_d8_n2(self, d8):
        report = check_index_bound(d8, 2)
        assert report.density == Fraction(3, 4)
        assert report.hn_order == 4 and report.hn_index == 2
        assert report.containment_ok and report.bound_ok

    def test_exponent_group_vacuous(self, c2):
        v4 = c2.direct_product(c2)
        report = check_index_bound(v4, 2)
        assert report.vacuous and report.containment_ok and report.bound_ok

    def test_containment_definitionally(self, s4):
        for n in range(2, 9):
            report = check_index_bound(s4, n)
            assert report.containment_ok


def test_format_fraction():
    assert format_fraction(Fraction(3, 4)) == "3/4"
    assert format_fraction(Fraction(1)) == "1/1"
    assert format_fraction(Fraction(2, 6)) == "1/3"


def test_solution_set_contains(d8):
    ss = power_solution_set(d8, 2)
    mask = ss.member_mask()
    for x in range(8):
        assert (x in ss) == bool(mask[x])
