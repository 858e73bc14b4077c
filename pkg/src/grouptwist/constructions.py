"""Semidirect products with a cyclic acting group, and exact finite-scale
verifiers for the coset relation, quotient monotonicity, and the two
measure lemmas.

Convention, recorded in every report: the acting factor is cyclic of order
exactly n (kernel allowed when the automorphism has smaller order), and
conjugation satisfies t^-1 x t = alpha(x) on the embedded base.  Under this
convention the n-th power of x * t^-1 is the defining twisted product of x,
which is what the coset relation checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .automorphisms import Automorphism, induced_quotient_automorphism
from .errors import (
    AutomorphismOrderMismatchError,
    EmptySetError,
    NotNormalError,
    OrderCapExceededError,
)
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, Subgroup, _TRUSTED_ASSOC_LIMIT
from .splitting import power_solution_set, twisted_solution_set

SEMIDIRECT_CONVENTION = ("acting factor C_n of order exactly n; "
                         "t^-1 x t = alpha(x) on the embedded base")


@dataclass(frozen=True)
class SemidirectProduct:
    """G semidirect C_n acting through alpha, on pairs (x, t^k) -> x*n + k."""

    base: FiniteGroup
    acting_order: int
    action: Automorphism
    product_group: FiniteGroup
    embedding: np.ndarray
    generator_t: int

    def embedded(self, x: int) -> int:
        return int(self.embedding[x])

    @property
    def convention(self) -> str:
        return SEMIDIRECT_CONVENTION


def semidirect_with_cyclic(group: FiniteGroup, alpha: Automorphism, n: int, *,
                           order_cap: int = DEFAULT_ORDER_CAP) -> SemidirectProduct:
    """Build G semidirect C_n with t^-1 x t = alpha(x); requires alpha^n = id."""
    if n < 1:
        raise ValueError("n must be positive")
    if alpha.group is not group:
        raise ValueError("automorphism belongs to a different group")
    if n % alpha.order != 0:
        raise AutomorphismOrderMismatchError(
            f"alpha^{n} != id (alpha has order {alpha.order})")
    total = group.order * n
    if total > order_cap:
        raise OrderCapExceededError(f"product order {total} exceeds cap {order_cap}")

    powmaps = alpha.power_maps(n)
    g = group.order
    table = np.empty((total, total), dtype=np.int64)
    # (x, k)(y, l) = (x * alpha^(-k)(y), k + l mod n); alpha^(-k) = alpha^(n-k)
    for k in range(n):
        act = powmaps[(n - k) % n]
        block = group.table[:, act]
        for l in range(n):
            table[k::n, l::n] = block.astype(np.int64) * n + ((k + l) % n)
    product = FiniteGroup(
        table, name=f"{group.name} : C{n}",
        check_associativity=total <= _TRUSTED_ASSOC_LIMIT)

    embedding = (np.arange(g, dtype=np.int64) * n).astype(np.int32)
    t = group.identity * n + (1 % n)
    sd = SemidirectProduct(base=group, acting_order=n, action=alpha,
                           product_group=product, embedding=embedding,
                           generator_t=int(t))
    _check_semidirect_invariants(sd)
    return sd


def _check_semidirect_invariants(sd: SemidirectProduct) -> None:
    P, G = sd.product_group, sd.base
    emb = sd.embedding
    # embedding is an injective homomorphism
    if not np.array_equal(emb[G.table], P.table[np.ix_(emb, emb)]):
        raise AssertionError("embedding is not a homomorphism")
    # generator t has order exactly n
    if P.element_order(sd.generator_t) != sd.acting_order:
        raise AssertionError("acting generator does not have order n")
    # conjugation relation t^-1 x t = alpha(x)
    t, tinv = sd.generator_t, P.inv(sd.generator_t)
    conj = P.table[P.table[tinv, emb], t]
    if not np.array_equal(conj, emb[sd.action.image]):
        raise AssertionError("conjugation by t does not realize alpha")


@dataclass(frozen=True)
class CosetRelationReport:
    """X_n(G : C_n) intersected with the coset (embedded G) t^-1, versus the
    translate of the embedded twisted solution set."""

    group_name: str
    n: int
    alpha_order: int
    lhs_size: int
    rhs_size: int
    equal: bool
    convention: str = SEMIDIRECT_CONVENTION


def verify_coset_relation(group: FiniteGroup, alpha: Automorphism, n: int, *,
                          order_cap: int = DEFAULT_ORDER_CAP) -> CosetRelationReport:
    """Exact set equality X_n(P) cap G t^-1 = X_{n,alpha}(G) t^-1 in the product P."""
    sd = semidirect_with_cyclic(group, alpha, n, order_cap=order_cap)
    P = sd.product_group
    tinv = P.inv(sd.generator_t)
    coset = P.table[sd.embedding, tinv]
    power_set = power_solution_set(P, n)
    pmask = power_set.member_mask()
    lhs = {int(c) for c in coset if pmask[c]}
    twisted = twisted_solution_set(group, alpha, n)
    rhs = {int(P.table[sd.embedding[x], tinv]) for x in twisted.members}
    return CosetRelationReport(
        group_name=group.name, n=n, alpha_order=alpha.order,
        lhs_size=len(lhs), rhs_size=len(rhs), equal=lhs == rhs)


@dataclass(frozen=True)
class MonotonicityReport:
    """density(X_{n,alpha}(G)) <= density(X_{n,induced}(G/N)), exactly."""

    group_name: str
    n: int
    normal_order: int
    density_group: Fraction
    density_quotient: Fraction
    ok: bool


def verify_quotient_monotonicity(group: FiniteGroup, alpha: Automorphism, n: int,
                                 normal: Subgroup, *,
                                 quotient: tuple[FiniteGroup, np.ndarray] | None = None,
                                 ) -> MonotonicityReport:
    """Check the quotient density inequality for one alpha-invariant normal N."""
    induced = induced_quotient_automorphism(group, normal, alpha, quotient=quotient)
    dg = twisted_solution_set(group, alpha, n).density
    dq = twisted_solution_set(induced.group, induced, n).density
    return MonotonicityReport(group_name=group.name, n=n,
                              normal_order=normal.order,
                              density_group=dg, density_quotient=dq,
                              ok=dg <= dq)


@dataclass(frozen=True)
class QuotientFamilyReport:
    """If every member of a family of nontrivial alpha-invariant normal
    subgroups has a full quotient solution set and the family intersects
    trivially, then the solution set must be all of G."""

    group_name: str
    n: int
    family_size: int
    intersection_order: int
    intersection_trivial: bool
    solution_set_full: bool
    ok: bool


def check_full_quotient_family(group: FiniteGroup, alpha: Automorphism, n: int,
                               normals: list[Subgroup], *,
                               quotients: dict | None = None) -> QuotientFamilyReport:
    """Finite form of the quotient-collapse argument over a family of normals."""
    family = []
    for N in normals:
        if N.order == 1 or not N.is_stabilized_by(alpha.image):
            continue
        quotient = quotients.get(N) if quotients is not None else None
        induced = induced_quotient_automorphism(group, N, alpha,
                                                quotient=quotient)
        if twisted_solution_set(induced.group, induced, n).is_full():
            family.append(N)
    if family:
        members = set(int(x) for x in family[0].members)
        for N in family[1:]:
            members &= set(int(x) for x in N.members)
        inter_order = len(members)
    else:
        inter_order = group.order
    trivial = inter_order == 1
    full = twisted_solution_set(group, alpha, n).is_full()
    return QuotientFamilyReport(
        group_name=group.name, n=n, family_size=len(family),
        intersection_order=inter_order, intersection_trivial=trivial,
        solution_set_full=full, ok=(not trivial) or full)


@dataclass(frozen=True)
class LargeIntersectionReport:
    """|intersection of g_i A| / |G| >= 1 - k * (1 - |A|/|G|), exactly."""

    group_order: int
    set_size: int
    shift_count: int
    epsilon: Fraction
    lower_bound: Fraction
    actual: Fraction
    ok: bool


def check_large_intersection(group: FiniteGroup, members, shifts) -> LargeIntersectionReport:
    """Finite analogue of the translate-intersection bound for any subset A."""
    mask = np.zeros(group.order, dtype=bool)
    for x in members:
        mask[int(x)] = True
    size = int(mask.sum())
    inter = np.ones(group.order, dtype=bool)
    shifts = [int(s) for s in shifts]
    for s in shifts:
        # g A = { g a }: membership x in gA  <=>  g^-1 x in A
        ginv = group.inv(s)
        inter &= mask[group.table[ginv]]
    epsilon = 1 - Fraction(size, group.order)
    lower = 1 - len(shifts) * epsilon
    actual = Fraction(int(inter.sum()), group.order)
    return LargeIntersectionReport(
        group_order=group.order, set_size=size, shift_count=len(shifts),
        epsilon=epsilon, lower_bound=lower, actual=actual, ok=actual >= lower)


@dataclass(frozen=True)
class CosetDensityReport:
    """The two division-free coset inequalities for a normal subgroup N:
    (r - s)/r <= 1 - |A|/|G| and |A|/|G| <= s * |Nx cap A|/|G|."""

    group_order: int
    set_size: int
    r: int
    s: int
    max_coset_density: Fraction
    ine1_ok: bool
    ine2_ok: bool


def check_coset_density(group: FiniteGroup, members, normal: Subgroup) -> CosetDensityReport:
    """r = [G:N]; s = cosets of N meeting A; x maximizes |Nx cap A|."""
    if not normal.is_normal():
        raise NotNormalError("subgroup is not normal")
    mask = np.zeros(group.order, dtype=bool)
    for x in members:
        mask[int(x)] = True
    size = int(mask.sum())
    if size == 0:
        raise EmptySetError("subset A must be nonempty")
    r = normal.index
    counts: dict[int, int] = {}
    seen = np.zeros(group.order, dtype=bool)
    for g in range(group.order):
        if seen[g]:
            continue
        coset = group.table[normal.members, g]
        seen[coset] = True
        hit = int(mask[coset].sum())
        counts[int(coset.min())] = hit
    s = sum(1 for v in counts.values() if v > 0)
    best = max(counts.values())
    max_coset_density = Fraction(best, group.order)
    dens_a = Fraction(size, group.order)
    ine1 = Fraction(r - s, r) <= 1 - dens_a
    ine2 = dens_a <= s * max_coset_density
    return CosetDensityReport(group_order=group.order, set_size=size, r=r, s=s,
                              max_coset_density=max_coset_density,
                              ine1_ok=ine1, ine2_ok=ine2)


@dataclass(frozen=True)
class TrialSummary:
    """Outcome of a batch of seeded random draws; failures should be empty."""

    group_name: str
    draws: int
    seed: int
    failures: tuple


def large_intersection_trials(group: FiniteGroup, *, draws: int = 1000,
                              seed: int = 0, min_size: int = 1,
                              shift_count: int | None = None,
                              max_shifts: int = 4) -> TrialSummary:
    """Seeded random (A, shifts) draws checked against the intersection bound."""
    rng = random.Random(seed)
    failures = []
    n = group.order
    for _ in range(draws):
        size = rng.randint(min(min_size, n), n)
        A = rng.sample(range(n), size)
        k = shift_count if shift_count is not None else rng.randint(1, max_shifts)
        shifts = [rng.randrange(n) for _ in range(k)]
        report = check_large_intersection(group, A, shifts)
        if not report.ok:
            failures.append((sorted(A), shifts, report))
    return TrialSummary(group_name=group.name, draws=draws, seed=seed,
                        failures=tuple(failures))


def coset_density_trials(group: FiniteGroup, normal: Subgroup, *,
                         draws: int = 500, seed: int = 0) -> TrialSummary:
    """Seeded random nonempty subsets checked against both coset inequalities."""
    rng = random.Random(seed)
    failures = []
    n = group.order
    for _ in range(draws):
        size = rng.randint(1, n)
        A = rng.sample(range(n), size)
        report = check_coset_density(group, A, normal)
        if not (report.ine1_ok and report.ine2_ok):
            failures.append((sorted(A), report))
    return TrialSummary(group_name=group.name, draws=draws, seed=seed,
                        failures=tuple(failures))
