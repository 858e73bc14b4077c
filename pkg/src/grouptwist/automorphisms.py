"""Automorphism enumeration and manipulation for small finite groups.

Automorphisms are stored as full image arrays rather than generator words:
constant-time application dominates survey cost.  Complete enumeration works
by choosing a small generating set greedily, backtracking over candidate
generator images (pruned by element order and conjugacy-class size, both
isomorphism invariants), extending each consistent tuple by closure, and
validating multiplicativity on the full table.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NotInvariantError,
    NotNormalError,
    OrderCapExceededError,
    TooManyAutomorphismsError,
)
from .groups import FiniteGroup, Subgroup

DEFAULT_AUT_ORDER_CAP = 256
DEFAULT_AUT_BUDGET = 200_000


class Automorphism:
    """Multiplicative bijection of a group, as an element-index image array."""

    __slots__ = ("group", "image", "_order")

    def __init__(self, group: FiniteGroup, image: Sequence[int] | np.ndarray, *,
                 _validated: bool = False):
        arr = np.ascontiguousarray(np.asarray(image, dtype=np.int32))
        if not _validated:
            if not is_automorphism(group, arr):
                raise ValueError("image array is not an automorphism")
        self.group = group
        self.image = arr
        self.image.setflags(write=False)
        self._order: int | None = None

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other):
        return (isinstance(other, Automorphism) and other.group is self.group
                and np.array_equal(other.image, self.image))

    def __hash__(self):
        return hash((id(self.group), self.image.tobytes()))

    def __repr__(self):
        return f"Automorphism(order={self.order} of {self.group.name})"

    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.image)

    @property
    def order(self) -> int:
        """Least k >= 1 with the k-fold composition equal to the identity map."""
        if self._order is None:
            seen = np.zeros(self.group.order, dtype=bool)
            img = self.image
            order = 1
            for start in range(self.group.order):
                if seen[start]:
                    continue
                length = 0
                x = start
                while not seen[x]:
                    seen[x] = True
                    x = int(img[x])
                    length += 1
                order = math.lcm(order, length)
            self._order = order
        return self._order

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.image, np.arange(self.group.order)))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other: x -> self(other(x))."""
        return Automorphism(self.group, self.image[other.image], _validated=True)

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(self.group.order, dtype=np.int32)
        return Automorphism(self.group, inv, _validated=True)

    def power_maps(self, n: int) -> list[np.ndarray]:
        """Index arrays for alpha^0 .. alpha^(n-1)."""
        maps = [np.arange(self.group.order, dtype=np.int32)]
        for _ in range(n - 1):
            maps.append(self.image[maps[-1]])
        return maps


class AutomorphismSet:
    """A list of distinct automorphisms of one group.

    ``complete`` is True only when the list is known to be all of Aut(G).
    """

    def __init__(self, group: FiniteGroup,
                 automorphisms: Iterable[Automorphism], *, complete: bool):
        unique = {a.key(): a for a in automorphisms}
        self.group = group
        self.automorphisms: tuple[Automorphism, ...] = tuple(
            unique[k] for k in sorted(unique))
        self.complete = complete

    def __len__(self):
        return len(self.automorphisms)

    def __iter__(self):
        return iter(self.automorphisms)

    def __getitem__(self, i):
        return self.automorphisms[i]

    def order_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for a in self.automorphisms:
            hist[a.order] = hist.get(a.order, 0) + 1
        return dict(sorted(hist.items()))


def is_automorphism(group: FiniteGroup, image: Sequence[int] | np.ndarray) -> bool:
    """True iff the index map is bijective and multiplicative."""
    img = np.asarray(image, dtype=np.int32)
    if img.shape != (group.order,):
        raise ValueError(f"image must have length {group.order}")
    if not np.array_equal(np.sort(img), np.arange(group.order)):
        return False
    T = group.table
    return bool(np.array_equal(img[T], T[img][:, img]))


def identity_automorphism(group: FiniteGroup) -> Automorphism:
    return Automorphism(group, np.arange(group.order, dtype=np.int32),
                        _validated=True)


def inversion_automorphism(group: FiniteGroup) -> Automorphism | None:
    """x -> x^-1, an automorphism exactly when the group is abelian."""
    if not group.is_abelian:
        return None
    return Automorphism(group, group.inverse, _validated=True)


def conjugation_automorphism(group: FiniteGroup, g: int) -> Automorphism:
    """The inner automorphism x -> g x g^-1; its order divides the order of g."""
    image = group.table[group.table[g], group.inverse[g]]
    return Automorphism(group, image, _validated=True)


def _greedy_generating_set(group: FiniteGroup) -> list[int]:
    """Small generating set: repeatedly add the element that grows the closure most."""
    n = group.order
    if n == 1:
        return []
    rows = group.rows
    gens: list[int] = []
    members = {group.identity}

    def closure(extra: int) -> set[int]:
        out = set(members)
        out.add(extra)
        frontier = list(out)
        gs = gens + [extra]
        while frontier:
            nxt = []
            for x in frontier:
                row = rows[x]
                for g in gs:
                    y = row[g]
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    while len(members) < n:
        best_x, best = -1, None
        for x in range(n):
            if x in members:
                continue
            got = closure(x)
            if best is None or len(got) > len(best):
                best_x, best = x, got
                if len(got) == n:
                    break
        gens.append(best_x)
        members = best
    return gens


def _enumerate_images(group: FiniteGroup, budget: int | None):
    """Yield image arrays of all automorphisms (unordered), backtracking over
    generator images with invariant pruning and closure-based consistency."""
    n = group.order
    rows = group.rows
    gens = _greedy_generating_set(group)
    if not gens:
        yield np.zeros(1, dtype=np.int32)
        return
    orders = group.element_orders()
    csizes = group.class_sizes()
    profile = [(int(orders[x]), int(csizes[x])) for x in range(n)]
    candidates = [[c for c in range(n) if profile[c] == profile[g]] for g in gens]

    m = len(gens)
    img = [-1] * n
    used = [False] * n
    img[group.identity] = group.identity
    used[group.identity] = True
    produced = 0

    def extend(level: int) -> tuple[list[int], bool]:
        """Close the partial map over gens[:level+1]; return (assigned, ok)."""
        assigned: list[int] = []
        queue = [x for x in range(n) if img[x] >= 0]
        head = 0
        active = gens[:level + 1]
        imgs = [img[g] for g in active]
        while head < len(queue):
            x = queue[head]
            head += 1
            ix = img[x]
            rx, rix = rows[x], rows[ix]
            for g, ig in zip(active, imgs):
                y = rx[g]
                iy = rix[ig]
                cur = img[y]
                if cur < 0:
                    if used[iy]:
                        return assigned, False
                    img[y] = iy
                    used[iy] = True
                    assigned.append(y)
                    queue.append(y)
                elif cur != iy:
                    return assigned, False
        return assigned, True

    def backtrack(level: int):
        nonlocal produced
        if level == m:
            produced += 1
            if budget is not None and produced > budget:
                raise TooManyAutomorphismsError(
                    f"more than {budget} automorphisms of {group.name}")
            yield np.array(img, dtype=np.int32)
            return
        # greedy generators lie outside the closure of the earlier ones, so
        # the image of gens[level] is never forced yet
        g = gens[level]
        for c in candidates[level]:
            if used[c]:
                continue
            img[g] = c
            used[c] = True
            assigned, ok = extend(level)
            if ok:
                yield from backtrack(level + 1)
            for y in assigned:
                used[img[y]] = False
                img[y] = -1
            img[g] = -1
            used[c] = False

    yield from backtrack(0)


def automorphism_group(group: FiniteGroup, *,
                       order_cap: int = DEFAULT_AUT_ORDER_CAP,
                       budget: int | None = DEFAULT_AUT_BUDGET) -> AutomorphismSet:
    """Complete Aut(G) for groups with at most ``order_cap`` elements.

    Raises OrderCapExceededError above the order cap and
    TooManyAutomorphismsError when more than ``budget`` automorphisms exist.
    The result is cached on the group when called with default limits.
    """
    if group.order > order_cap:
        raise OrderCapExceededError(
            f"|G| = {group.order} exceeds automorphism enumeration cap {order_cap}")
    default_call = (order_cap == DEFAULT_AUT_ORDER_CAP and budget == DEFAULT_AUT_BUDGET)
    if default_call:
        cached = group._caches.get("aut")
        if cached is not None:
            if isinstance(cached, Exception):
                raise cached
            return cached
    T = group.table
    auts = []
    try:
        for image in _enumerate_images(group, budget):
            # final multiplicativity validation on the full table
            if not np.array_equal(image[T], T[image][:, image]):
                raise AssertionError("enumeration produced a non-automorphism")
            auts.append(Automorphism(group, image, _validated=True))
    except TooManyAutomorphismsError as exc:
        if default_call:
            group._caches["aut"] = exc
        raise
    result = AutomorphismSet(group, auts, complete=True)
    if default_call:
        group._caches["aut"] = result
    return result


def automorphisms_of_order_dividing(group: FiniteGroup, n: int, *,
                                    order_cap: int = DEFAULT_AUT_ORDER_CAP,
                                    budget: int | None = DEFAULT_AUT_BUDGET
                                    ) -> AutomorphismSet:
    """Exactly the alpha in Aut(G) with alpha^n = id (a filtered, partial list)."""
    if n < 1:
        raise ValueError("n must be positive")
    full = automorphism_group(group, order_cap=order_cap, budget=budget)
    picked = [a for a in full if n % a.order == 0]
    return AutomorphismSet(group, picked, complete=False)


def fallback_automorphisms(group: FiniteGroup) -> AutomorphismSet:
    """Documented sub-family used when complete enumeration is infeasible:
    the identity, inversion where applicable, and all conjugations."""
    auts = [identity_automorphism(group)]
    inv = inversion_automorphism(group)
    if inv is not None:
        auts.append(inv)
    for g in range(group.order):
        auts.append(conjugation_automorphism(group, g))
    return AutomorphismSet(group, auts, complete=group.order == 1)


def induced_quotient_automorphism(
        group: FiniteGroup, normal: Subgroup, alpha: Automorphism, *,
        quotient: tuple[FiniteGroup, np.ndarray] | None = None) -> Automorphism:
    """The automorphism induced on G/N by alpha, when alpha stabilizes N.

    Requires N normal and alpha(N) = N; the result commutes with the
    projection.  Pass a precomputed ``quotient`` pair to avoid rebuilding it.
    """
    if alpha.group is not group:
        raise ValueError("automorphism belongs to a different group")
    if not normal.is_normal():
        raise NotNormalError("subgroup is not normal")
    if not normal.is_stabilized_by(alpha.image):
        for x in normal.members:
            if not normal.contains(int(alpha.image[x])):
                raise NotInvariantError(
                    f"alpha does not stabilize the subgroup: alpha({int(x)}) = "
                    f"{int(alpha.image[x])} is outside", witness=int(x))
    if quotient is None:
        quotient = group.quotient(normal)
    qgroup, proj = quotient
    image = np.full(qgroup.order, -1, dtype=np.int32)
    for x in range(group.order):
        image[proj[x]] = proj[alpha.image[x]]
    if not np.array_equal(image[proj], proj[alpha.image]):
        raise AssertionError("induced map does not commute with projection")
    return Automorphism(qgroup, image)
