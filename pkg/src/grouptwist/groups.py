"""Finite groups as validated multiplication tables with 0-based element indices.

A :class:`FiniteGroup` stores the full order x order table, the identity
index and the inverse map.  Instances are immutable after construction and
safe to share across parallel workers; every operation here is a pure
function of its inputs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArityTooSmallError,
    NoIdentityError,
    NoInverseError,
    NotAssociativeError,
    NotLatinError,
    NotNormalError,
    OrderCapExceededError,
)

DEFAULT_ORDER_CAP = 2000

# Internally constructed tables (cyclic formulas, products, quotients,
# semidirect products) are associative by construction; re-checking the
# cubic identity is only worth the cost for small orders.
_TRUSTED_ASSOC_LIMIT = 128


def _check_associativity(table: np.ndarray) -> None:
    n = table.shape[0]
    for i in range(n):
        left = table[table[i]]          # left[j, k] = (i*j)*k
        right = table[i][table]         # right[j, k] = i*(j*k)
        if not np.array_equal(left, right):
            j, k = np.argwhere(left != right)[0]
            raise NotAssociativeError((i, int(j), int(k)))


class FiniteGroup:
    """Finite group on elements ``0..order-1`` given by a multiplication table.

    ``table[i, j]`` is the index of the product of elements ``i`` and ``j``.
    Do not call the constructor with untrusted data; use
    :func:`build_from_table`, which always runs the full validation.
    """

    def __init__(
        self,
        table: np.ndarray,
        *,
        name: str = "",
        labels: Sequence[str] | None = None,
        check_associativity: bool = True,
    ):
        table = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise NotLatinError(f"table must be square, got shape {table.shape}")
        n = table.shape[0]
        if n == 0:
            raise NotLatinError("a group has at least one element")
        if table.min(initial=0) < 0 or table.max(initial=0) >= n:
            raise NotLatinError("table entries out of range (not closed)")

        idx = np.arange(n, dtype=np.int32)
        if not (np.array_equal(np.sort(table, axis=1), np.broadcast_to(idx, (n, n)))
                and np.array_equal(np.sort(table, axis=0), np.broadcast_to(idx[:, None], (n, n)))):
            raise NotLatinError("some row or column is not a permutation")

        # cheap checks first; the cubic associativity scan runs last
        row_ident = np.nonzero((table == idx).all(axis=1))[0]
        ident = -1
        for e in row_ident:
            if np.array_equal(table[:, e], idx):
                ident = int(e)
                break
        if ident < 0:
            raise NoIdentityError("no two-sided identity element")

        inverse = np.argmax(table == ident, axis=1).astype(np.int32)
        if not np.array_equal(table[inverse, idx], np.full(n, ident, dtype=np.int32)):
            raise NoInverseError("some element has no two-sided inverse")

        if check_associativity:
            _check_associativity(table)

        self.order: int = n
        self.table: np.ndarray = table
        self.identity: int = ident
        self.inverse: np.ndarray = inverse
        self.name: str = name or f"group<{n}>"
        self.labels: tuple[str, ...] | None = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise NotLatinError("labels length does not match group order")
        self.table.setflags(write=False)
        self.inverse.setflags(write=False)
        self._caches: dict = {}

    # pickling: drop derived caches, workers recompute deterministically
    def __getstate__(self):
        state = dict(self.__dict__)
        state["_caches"] = {}
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def elements(self) -> range:
        return range(self.order)

    # -- scalar arithmetic ------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        """k-th power of element a, for any integer k."""
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        row = a
        while k:
            if k & 1:
                result = int(self.table[result, row])
            k >>= 1
            row = int(self.table[row, row])
        return result

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    @property
    def rows(self) -> list[list[int]]:
        """Table rows as plain Python lists (fast scalar indexing in hot loops)."""
        cached = self._caches.get("rows")
        if cached is None:
            cached = self._caches["rows"] = self.table.tolist()
        return cached

    # -- cached structure -------------------------------------------------

    @property
    def is_abelian(self) -> bool:
        cached = self._caches.get("abelian")
        if cached is None:
            cached = self._caches["abelian"] = bool(np.array_equal(self.table, self.table.T))
        return cached

    def element_orders(self) -> np.ndarray:
        """Array of element orders, orders()[x] = least k >= 1 with x^k = identity."""
        cached = self._caches.get("orders")
        if cached is None:
            n = self.order
            idx = np.arange(n, dtype=np.int32)
            orders = np.zeros(n, dtype=np.int64)
            cur = idx.copy()
            k = 1
            while True:
                hit = (cur == self.identity) & (orders == 0)
                orders[hit] = k
                if orders.all():
                    break
                cur = self.table[cur, idx]
                k += 1
            orders.setflags(write=False)
            cached = self._caches["orders"] = orders
        return cached

    def element_order(self, x: int) -> int:
        """Least k >= 1 with x^k = identity; divides the group order."""
        return int(self.element_orders()[x])

    def exponent(self) -> int:
        cached = self._caches.get("exponent")
        if cached is None:
            cached = self._caches["exponent"] = int(np.lcm.reduce(self.element_orders()))
        return cached

    def center(self) -> np.ndarray:
        """Sorted indices of central elements."""
        cached = self._caches.get("center")
        if cached is None:
            mask = (self.table == self.table.T).all(axis=1)
            cached = self._caches["center"] = np.nonzero(mask)[0].astype(np.int32)
            cached.setflags(write=False)
        return cached

    def conjugacy_classes(self) -> list[np.ndarray]:
        """Conjugacy classes as sorted index arrays, ordered by minimal member."""
        cached = self._caches.get("classes")
        if cached is None:
            n = self.order
            seen = np.zeros(n, dtype=bool)
            classes = []
            for x in range(n):
                if seen[x]:
                    continue
                if self.is_abelian:
                    cls = np.array([x], dtype=np.int32)
                else:
                    # g x g^-1 over all g
                    cls = np.unique(self.table[self.table[:, x], self.inverse])
                seen[cls] = True
                classes.append(cls.astype(np.int32))
            cached = self._caches["classes"] = classes
        return cached

    def class_sizes(self) -> np.ndarray:
        """class_sizes()[x] = size of the conjugacy class of x."""
        cached = self._caches.get("class_sizes")
        if cached is None:
            sizes = np.zeros(self.order, dtype=np.int64)
            for cls in self.conjugacy_classes():
                sizes[cls] = len(cls)
            sizes.setflags(write=False)
            cached = self._caches["class_sizes"] = sizes
        return cached

    def commutator_table(self) -> np.ndarray:
        """Full grid K with K[a, b] = [a, b] = a^-1 b^-1 a b."""
        cached = self._caches.get("comm_table")
        if cached is None:
            n = self.order
            idx = np.arange(n, dtype=np.int32)
            ab = self.table[self.inverse[:, None], self.inverse[None, :]]
            ab = self.table[ab, idx[:, None]]
            cached = self._caches["comm_table"] = self.table[ab, idx[None, :]]
            cached.setflags(write=False)
        return cached

    # -- group-theoretic operations ---------------------------------------

    def commutator(self, elements: Sequence[int]) -> int:
        """Left-normed iterated commutator [x1, x2, ..., xk], k >= 2.

        Convention: [a, b] = a^-1 b^-1 a b and [a, b, c] = [[a, b], c].
        """
        if len(elements) < 2:
            raise ArityTooSmallError("need at least two elements")
        acc = elements[0]
        T, inv = self.table, self.inverse
        for b in elements[1:]:
            acc = int(T[T[T[inv[acc], inv[b]], acc], b])
        return acc

    def subgroup_generated(self, generators: Iterable[int]) -> "Subgroup":
        """Smallest subgroup containing the generators, by closure."""
        gens = sorted(set(int(g) for g in generators))
        rows = self.rows
        members = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                row = rows[x]
                for g in gens:
                    y = row[g]
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(self, members, _trusted=True)

    def normal_subgroups(self) -> list["Subgroup"]:
        """All normal subgroups, found by closing unions of conjugacy classes."""
        classes = self.conjugacy_classes()
        found: dict[tuple[int, ...], Subgroup] = {}
        trivial = self.subgroup_generated([])
        queue = [trivial]
        found[tuple(trivial.members.tolist())] = trivial
        while queue:
            cur = queue.pop()
            for cls in classes:
                if cur.contains(int(cls[0])):
                    continue
                bigger = self.subgroup_generated(list(cur.members) + cls.tolist())
                key = tuple(bigger.members.tolist())
                if key not in found:
                    found[key] = bigger
                    queue.append(bigger)
        subs = sorted(found.values(), key=lambda H: (H.order, tuple(H.members.tolist())))
        for H in subs:
            H._normal = True
        return subs

    def quotient(self, normal: "Subgroup") -> tuple["FiniteGroup", np.ndarray]:
        """Quotient group G/N and the projection map from G-indices.

        Cosets are indexed by increasing minimal member, so the table is
        deterministic across runs.  Raises NotNormalError if N is not normal.
        """
        if normal.parent is not self:
            raise ValueError("subgroup belongs to a different group")
        if not normal.is_normal():
            raise NotNormalError("subgroup is not normal")
        n = self.order
        members = normal.members
        coset_min = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            if coset_min[g] >= 0:
                continue
            coset = self.table[members, g]
            coset_min[coset] = int(coset.min())
        reps = np.unique(coset_min)
        proj = np.searchsorted(reps, coset_min).astype(np.int32)
        q = len(reps)
        qtable = proj[self.table[np.ix_(reps, reps)]]
        group = FiniteGroup(qtable, name=f"{self.name}/N{normal.order}",
                            check_associativity=q <= _TRUSTED_ASSOC_LIMIT)
        proj.setflags(write=False)
        return group, proj

    def _commutator_closure(self, left: Sequence[int], right: Sequence[int]) -> "Subgroup":
        K = self.commutator_table()
        gens = np.unique(K[np.ix_(np.asarray(left, dtype=np.intp),
                                  np.asarray(right, dtype=np.intp))])
        return self.subgroup_generated(gens.tolist())

    def lower_central_series(self) -> list["Subgroup"]:
        """G = gamma_1 >= gamma_2 >= ... until stabilization (last term repeated never)."""
        whole = Subgroup(self, range(self.order), _trusted=True)
        series = [whole]
        everything = list(range(self.order))
        while True:
            nxt = self._commutator_closure(list(series[-1].members), everything)
            if nxt.order == series[-1].order:
                break
            series.append(nxt)
            if nxt.order == 1:
                break
        return series

    def nilpotency_class(self) -> int | None:
        """Nilpotency class, or None if the group is not nilpotent.

        Not-nilpotent is an ordinary result value here: catalog surveys must
        process non-nilpotent groups.
        """
        series = self.lower_central_series()
        if series[-1].order != 1:
            return None
        return len(series) - 1

    def derived_series(self) -> list["Subgroup"]:
        whole = Subgroup(self, range(self.order), _trusted=True)
        series = [whole]
        while True:
            cur = list(series[-1].members)
            nxt = self._commutator_closure(cur, cur)
            if nxt.order == series[-1].order:
                break
            series.append(nxt)
            if nxt.order == 1:
                break
        return series

    def is_solvable(self) -> bool:
        """True iff the derived series reaches the trivial subgroup."""
        return self.derived_series()[-1].order == 1

    def is_two_engel(self) -> bool:
        """True iff [x, y, y] = identity for all pairs x, y."""
        K = self.commutator_table()
        idx = np.arange(self.order, dtype=np.int32)
        return bool((K[K, idx[None, :]] == self.identity).all())

    def direct_product(self, other: "FiniteGroup", *,
                       order_cap: int = DEFAULT_ORDER_CAP) -> "FiniteGroup":
        """Componentwise product; pair (i, j) maps to index i * |other| + j."""
        n = self.order * other.order
        if n > order_cap:
            raise OrderCapExceededError(
                f"product order {n} exceeds cap {order_cap}")
        h = other.order
        table = (self.table[:, None, :, None].astype(np.int64) * h
                 + other.table[None, :, None, :]).reshape(n, n)
        return FiniteGroup(table, name=f"{self.name} x {other.name}",
                           check_associativity=n <= _TRUSTED_ASSOC_LIMIT)


class Subgroup:
    """Subgroup of a parent group, stored as a sorted member array.

    Construction checks closure under product and inverse, membership of
    the identity, and Lagrange divisibility.
    """

    def __init__(self, parent: FiniteGroup, members: Iterable[int], *,
                 _trusted: bool = False):
        self.parent = parent
        arr = np.unique(np.array(sorted(int(m) for m in members), dtype=np.int32))
        if arr.size == 0:
            arr = np.array([parent.identity], dtype=np.int32)
        self.members: np.ndarray = arr
        self.members.setflags(write=False)
        self._member_set = frozenset(int(x) for x in arr)
        self._normal: bool | None = None
        if parent.identity not in self._member_set:
            raise ValueError("identity missing from subgroup")
        if not _trusted:
            sub = parent.table[np.ix_(arr, arr)]
            if not all(int(v) in self._member_set for v in np.unique(sub)):
                raise ValueError("member set is not closed under product")
            if not all(int(parent.inverse[m]) in self._member_set for m in arr):
                raise ValueError("member set is not closed under inverse")
        if parent.order % len(arr):
            raise ValueError("subgroup order does not divide group order")

    @property
    def order(self) -> int:
        return int(self.members.size)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def contains(self, x: int) -> bool:
        return int(x) in self._member_set

    def __contains__(self, x: int) -> bool:
        return self.contains(x)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and self._member_set == other._member_set)

    def __hash__(self):
        return hash((id(self.parent), self._member_set))

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.name})"

    def is_normal(self) -> bool:
        """True iff g^-1 H g = H for all g in the parent."""
        if self._normal is None:
            G = self.parent
            ok = True
            for g in range(G.order):
                conj = G.table[G.table[G.inverse[g], self.members], g]
                if not all(int(c) in self._member_set for c in conj):
                    ok = False
                    break
            self._normal = ok
        return self._normal

    def is_stabilized_by(self, image: np.ndarray) -> bool:
        """True iff the index map sends the member set onto itself."""
        return bool(np.array_equal(np.sort(np.asarray(image)[self.members]),
                                   self.members))


def build_from_table(table: Sequence[Sequence[int]], *, name: str = "",
                     labels: Sequence[str] | None = None) -> FiniteGroup:
    """Validate a full multiplication table and wrap it as a group.

    Runs the complete validation: Latin-square property, associativity for
    all triples, identity and two-sided inverses.
    """
    return FiniteGroup(np.asarray(table), name=name, labels=labels,
                       check_associativity=True)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p after q): apply q first, then p
    return tuple(p[i] for i in q)


def build_from_permutation_generators(
        generators: Sequence[Sequence[int]], *, name: str = "",
        order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Group generated by permutations, with the table materialized.

    Permutations are arrays of point images (0-based) over a common point
    set.  Associativity is inherited from function composition, so the
    cubic check is skipped on this path.
    """
    gens = [tuple(int(v) for v in g) for g in generators]
    npoints = len(gens[0]) if gens else 1
    for g in gens:
        if sorted(g) != list(range(npoints)):
            raise NotLatinError("generator is not a permutation of the point set")
    ident = tuple(range(npoints))
    elems: list[tuple[int, ...]] = [ident]
    index: dict[tuple[int, ...], int] = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(p, g)
                if q not in index:
                    if len(elems) >= order_cap:
                        raise OrderCapExceededError(
                            f"closure exceeds order cap {order_cap}")
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(elems)
    table = np.empty((n, n), dtype=np.int32)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            table[i, j] = index[_compose(p, q)]
    return FiniteGroup(table, name=name or f"perm<{n}>", check_associativity=False)


def relabeled(group: FiniteGroup, perm: Sequence[int]) -> FiniteGroup:
    """Isomorphic copy with element i renamed to perm[i] (testing helper)."""
    p = np.asarray(perm, dtype=np.int32)
    inv = np.empty_like(p)
    inv[p] = np.arange(group.order, dtype=np.int32)
    table = p[group.table[np.ix_(inv, inv)]]
    return FiniteGroup(table, name=f"{group.name}~", check_associativity=False)
