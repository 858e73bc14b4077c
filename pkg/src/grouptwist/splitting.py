"""Twisted power sets, exact densities, and the Hughes-Thompson index bound.

Densities are exact rationals end to end: no floating point may influence
any verdict, because frontier comparisons like "strictly below 1" must be
exact.  ``fractions.Fraction`` already provides the reduced-fraction type
this needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .automorphisms import Automorphism, identity_automorphism
from .errors import AutomorphismOrderMismatchError
from .groups import FiniteGroup, Subgroup


def format_fraction(value: Fraction) -> str:
    """Render an exact rational as "p/q" (density 1 prints as "1/1")."""
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class SolutionSet:
    """The set {x : x alpha(x) alpha^2(x) ... alpha^(n-1)(x) = 1} with its density."""

    group: FiniteGroup
    alpha: Automorphism
    n: int
    members: np.ndarray
    density: Fraction

    def __post_init__(self):
        self.members.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.members.size)

    def member_mask(self) -> np.ndarray:
        mask = np.zeros(self.group.order, dtype=bool)
        mask[self.members] = True
        return mask

    def __contains__(self, x: int) -> bool:
        i = int(np.searchsorted(self.members, x))
        return i < self.members.size and int(self.members[i]) == int(x)

    def is_full(self) -> bool:
        return self.size == self.group.order


def _solution_set(group: FiniteGroup, alpha: Automorphism, n: int,
                  members: np.ndarray) -> SolutionSet:
    members = np.sort(members.astype(np.int32))
    ss = SolutionSet(group, alpha, n, members,
                     Fraction(int(members.size), group.order))
    # structural invariants of every computed set
    if group.identity not in ss:
        raise AssertionError("identity missing from solution set")
    mask = ss.member_mask()
    if not mask[alpha.image[members]].all():
        raise AssertionError("solution set is not closed under alpha")
    return ss


def twisted_solution_set(group: FiniteGroup, alpha: Automorphism,
                         n: int) -> SolutionSet:
    """Members x with x * alpha(x) * ... * alpha^(n-1)(x) = identity.

    The defining product is evaluated left to right; requires alpha^n = id.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if alpha.group is not group:
        raise ValueError("automorphism belongs to a different group")
    if n % alpha.order != 0:
        raise AutomorphismOrderMismatchError(
            f"alpha^{n} != id (alpha has order {alpha.order})")
    T = group.table
    idx = np.arange(group.order, dtype=np.int32)
    acc = idx.copy()
    power = idx
    for _ in range(n - 1):
        power = alpha.image[power]
        acc = T[acc, power]
    members = np.nonzero(acc == group.identity)[0]
    return _solution_set(group, alpha, n, members)


def power_solution_set(group: FiniteGroup, n: int) -> SolutionSet:
    """Members x with x^n = identity (independent of the twisted evaluation path)."""
    if n < 1:
        raise ValueError("n must be positive")
    T = group.table
    idx = np.arange(group.order, dtype=np.int32)
    acc = idx.copy()
    for _ in range(n - 1):
        acc = T[acc, idx]
    members = np.nonzero(acc == group.identity)[0]
    return _solution_set(group, identity_automorphism(group), n, members)


def hughes_thompson_subgroup(group: FiniteGroup, n: int) -> Subgroup:
    """Subgroup generated by all x with x^n != identity; always normal."""
    full = power_solution_set(group, n)
    mask = full.member_mask()
    generators = np.nonzero(~mask)[0]
    sub = group.subgroup_generated(generators.tolist())
    # generated by a union of conjugacy classes, hence normal
    assert sub.is_normal(), "Hughes-Thompson subgroup must be normal"
    return sub


@dataclass(frozen=True)
class IndexBoundReport:
    """Exact verdicts for the index bound on the Hughes-Thompson subgroup."""

    n: int
    group_order: int
    hn_order: int
    hn_index: int
    density: Fraction
    containment_ok: bool
    bound_ok: bool
    vacuous: bool


def check_index_bound(group: FiniteGroup, n: int) -> IndexBoundReport:
    """Check (exactly) that G minus H_n(G) sits inside {x : x^n = 1}, and that
    [G : H_n(G)] <= 1/(1 - density) whenever H_n(G) != 1 and the power set
    is proper.  Degenerate cases are flagged vacuous."""
    solutions = power_solution_set(group, n)
    hn = hughes_thompson_subgroup(group, n)
    mask = solutions.member_mask()
    outside = [x for x in range(group.order) if not hn.contains(x)]
    containment_ok = all(mask[x] for x in outside)
    density = solutions.density
    vacuous = hn.order == 1 or solutions.is_full()
    if vacuous:
        bound_ok = True
    else:
        # index <= 1/(1 - density), compared in exact rational arithmetic
        bound_ok = Fraction(hn.index) * (1 - density) <= 1
    return IndexBoundReport(
        n=n, group_order=group.order, hn_order=hn.order, hn_index=hn.index,
        density=density, containment_ok=containment_ok, bound_ok=bound_ok,
        vacuous=vacuous)
