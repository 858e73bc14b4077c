"""Generation, import/export, and fingerprint dedup of the small-group corpus.

The catalog is families plus pairwise direct products, not all groups of
each order; survey reports always state the catalog identity so frontier
values are reproducible claims about this corpus.  Dedup is by fingerprint,
not true isomorphism: distinct classes sharing a fingerprint would be
collapsed, so merge counts are kept on every entry instead of hidden.

Family caps (documented artifact decisions):

* ``cyclic(m)``, ``dihedral(m)`` (order 2m, m >= 2), ``dicyclic(m)`` (order
  4m, m >= 2), ``symmetric(k)`` / ``alternating(k)`` (k >= 3): bounded by
  the catalog order cap only.
* ``abelian(parts)``: at most four invariant factors, each >= 2.
* ``elementary_abelian(p, k)``: rank k <= 4 for p = 2 and k <= 3 otherwise.
* ``extraspecial(p, type)``: the two extraspecial groups of order p^3
  (for p = 2 these are the dihedral and quaternion groups).
* abelian groups whose automorphism-group order (invariant-factor formula)
  exceeds the enumeration budget are excluded, so complete automorphism
  coverage stays feasible on every emitted group; mixed direct products
  restrict the abelian factor to at most two invariant factors for the
  same reason.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .automorphisms import DEFAULT_AUT_BUDGET, Automorphism
from .errors import OrderCapExceededError, ParseError, UnknownFamilyError
from .groups import (
    FiniteGroup,
    _TRUSTED_ASSOC_LIMIT,
    build_from_permutation_generators,
    build_from_table,
)

DEFAULT_CATALOG_CAP = 512
SEMIDIRECT_ORDER_CAP = 2000


# ---------------------------------------------------------------------------
# specs

@dataclass(frozen=True)
class GroupSpec:
    """Constructor name plus parameters; round-trips through its string form."""

    kind: str
    params: tuple = ()

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(str(p) for p in self.params)
        return f"{self.kind}({inner})"

    @property
    def name(self) -> str:
        return str(self)


_SPEC_TOKEN = re.compile(r"[a-z_0-9]+|\(|\)|,|[^\s]")


def parse_spec(text: str) -> GroupSpec:
    """Parse a spec string like ``product(dihedral(4),cyclic(2))``."""
    tokens = _SPEC_TOKEN.findall(text.strip())
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take(expect: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of spec {text!r}")
        tok = tokens[pos]
        pos += 1
        if expect is not None and tok != expect:
            raise ParseError(f"expected {expect!r} at token {pos} of {text!r}")
        return tok

    def parse_node() -> GroupSpec | int | str:
        tok = take()
        if tok.isdigit():
            return int(tok)
        if not re.fullmatch(r"[a-z_][a-z_0-9]*", tok):
            raise ParseError(f"bad token {tok!r} in spec {text!r}")
        if peek() == "(":
            take("(")
            params: list = []
            if peek() != ")":
                params.append(parse_node())
                while peek() == ",":
                    take(",")
                    params.append(parse_node())
            take(")")
            return GroupSpec(tok, tuple(params))
        return tok

    node = parse_node()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens in spec {text!r}")
    if isinstance(node, str):
        node = GroupSpec(node)
    if not isinstance(node, GroupSpec):
        raise ParseError(f"spec {text!r} is not a constructor")
    return node


# ---------------------------------------------------------------------------
# fingerprints

@dataclass(frozen=True)
class Fingerprint:
    """Cheap isomorphism invariants used for catalog dedup."""

    order: int
    exponent: int
    center_order: int
    derived_order: int
    order_histogram: tuple[tuple[int, int], ...]
    class_sizes: tuple[tuple[int, int], ...]

    @property
    def sort_key(self) -> tuple:
        return (self.order, self.exponent, self.center_order,
                self.derived_order, self.order_histogram, self.class_sizes)


def fingerprint(group: FiniteGroup) -> Fingerprint:
    """Order, element-order histogram, class-size multiset, |Z(G)|, |G'|, exponent."""
    cached = group._caches.get("fingerprint")
    if cached is not None:
        return cached
    orders = group.element_orders()
    values, counts = np.unique(orders, return_counts=True)
    histogram = tuple((int(v), int(c)) for v, c in zip(values, counts))
    sizes: dict[int, int] = {}
    for cls in group.conjugacy_classes():
        sizes[len(cls)] = sizes.get(len(cls), 0) + 1
    everything = list(range(group.order))
    derived = group._commutator_closure(everything, everything)
    fp = Fingerprint(
        order=group.order,
        exponent=group.exponent(),
        center_order=int(group.center().size),
        derived_order=derived.order,
        order_histogram=histogram,
        class_sizes=tuple(sorted(sizes.items())),
    )
    group._caches["fingerprint"] = fp
    return fp


# ---------------------------------------------------------------------------
# abelian feasibility (invariant-factor automorphism count)

def abelian_primary_types(group: FiniteGroup) -> dict[int, tuple[int, ...]] | None:
    """For abelian G, the partition of exponents per prime; None if nonabelian.

    Recovered from the power-count filtration: with s_k = #{x : x^(p^k) = 1},
    log_p(s_k / s_(k-1)) is the k-th column sum of the exponent partition.
    """
    if not group.is_abelian:
        return None
    orders = group.element_orders().tolist()
    types: dict[int, tuple[int, ...]] = {}
    for p in _prime_factors(group.order):
        # s_k = #{x : order(x) divides p^k}; log_p(s_k / s_(k-1)) is the k-th
        # column sum of the exponent partition
        column = []
        prev = 1
        k = 1
        while True:
            s_k = sum(1 for o in orders if (p ** k) % o == 0)
            if s_k == prev:
                break
            column.append(round(math.log(s_k / prev, p)))
            prev = s_k
            k += 1
        if column:
            # conjugate partition, nondecreasing: e_i = #{k : column_k >= i}
            types[p] = tuple(sorted(
                sum(1 for c in column if c >= i)
                for i in range(1, max(column) + 1)))
    return types


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def abelian_aut_order(group: FiniteGroup) -> int | None:
    """|Aut(G)| for abelian G by the standard invariant-factor formula."""
    types = abelian_primary_types(group)
    if types is None:
        return None
    total = 1
    for p, exps in types.items():
        e = list(exps)  # nondecreasing
        n = len(e)
        d = [max(l + 1 for l in range(n) if e[l] == e[k]) for k in range(n)]
        c = [min(l + 1 for l in range(n) if e[l] == e[k]) for k in range(n)]
        part = 1
        for k in range(1, n + 1):
            part *= p ** d[k - 1] - p ** (k - 1)
        for j in range(1, n + 1):
            part *= (p ** e[j - 1]) ** (n - d[j - 1])
        for i in range(1, n + 1):
            part *= (p ** (e[i - 1] - 1)) ** (n - c[i - 1] + 1)
        total *= part
    return total


# ---------------------------------------------------------------------------
# family builders

def _cyclic_table(m: int) -> np.ndarray:
    return (np.add.outer(np.arange(m), np.arange(m)) % m).astype(np.int32)


def _trusted(table: np.ndarray, name: str) -> FiniteGroup:
    n = table.shape[0]
    return FiniteGroup(table, name=name,
                       check_associativity=n <= _TRUSTED_ASSOC_LIMIT)


def _dihedral(m: int) -> FiniteGroup:
    # elements r^i s^j, index i + m*j
    i = np.arange(m)
    table = np.empty((2 * m, 2 * m), dtype=np.int64)
    add = np.add.outer(i, i) % m
    sub = np.subtract.outer(i, i) % m
    table[:m, :m] = add
    table[:m, m:] = add + m          # r^i * r^k s = r^(i+k) s
    table[m:, :m] = sub + m          # r^i s * r^k = r^(i-k) s
    table[m:, m:] = sub              # r^i s * r^k s = r^(i-k)
    return _trusted(table, f"dihedral({m})")


def _dicyclic(m: int) -> FiniteGroup:
    # elements a^i b^j with a of order 2m, b^2 = a^m, b a b^-1 = a^-1;
    # index i + 2m*j, j in {0, 1}
    n2 = 2 * m
    i = np.arange(n2)
    add = np.add.outer(i, i) % n2
    sub = np.subtract.outer(i, i) % n2
    table = np.empty((4 * m, 4 * m), dtype=np.int64)
    table[:n2, :n2] = add
    table[:n2, n2:] = add + n2
    table[n2:, :n2] = sub + n2
    table[n2:, n2:] = (sub + m) % n2
    return _trusted(table, f"dicyclic({m})")


def _symmetric_gens(k: int) -> list[list[int]]:
    swap = list(range(k))
    swap[0], swap[1] = 1, 0
    cycle = [(i + 1) % k for i in range(k)]
    return [swap, cycle]


def _alternating_gens(k: int) -> list[list[int]]:
    gens = []
    for i in range(k - 2):
        g = list(range(k))
        g[i], g[i + 1], g[i + 2] = g[i + 1], g[i + 2], g[i]
        gens.append(g)
    return gens


def _heisenberg(p: int) -> FiniteGroup:
    # (a, b, c)(a', b', c') = (a+a', b+b', c+c'+a*b'), all mod p
    n = p ** 3
    idx = np.arange(n)
    a, rem = np.divmod(idx, p * p)
    b, c = np.divmod(rem, p)
    a1, a2 = a[:, None], a[None, :]
    b1, b2 = b[:, None], b[None, :]
    c1, c2 = c[:, None], c[None, :]
    table = (((a1 + a2) % p) * p * p + ((b1 + b2) % p) * p
             + ((c1 + c2 + a1 * b2) % p))
    return _trusted(table, f"extraspecial({p},exponent_p)")


def _extraspecial_p2(p: int) -> FiniteGroup:
    # <a, b | a^(p^2) = b^p = 1, b^-1 a b = a^(1+p)>, pairs (i mod p^2, j mod p)
    p2 = p * p
    n = p2 * p
    idx = np.arange(n)
    i, j = np.divmod(idx, p)
    # careful: index = i*p + j with i in Z_(p^2), j in Z_p
    act = np.array([pow(1 + p, jj, p2) for jj in range(p)])
    i1, i2 = i[:, None], i[None, :]
    j1, j2 = j[:, None], j[None, :]
    table = (((i1 + i2 * act[j1]) % p2) * p + (j1 + j2) % p)
    return _trusted(table, f"extraspecial({p},exponent_p2)")


def _abelian(parts: Sequence[int]) -> FiniteGroup:
    group = _trusted(_cyclic_table(parts[0]), f"cyclic({parts[0]})")
    for m in parts[1:]:
        group = group.direct_product(_trusted(_cyclic_table(m), f"cyclic({m})"),
                                     order_cap=DEFAULT_CATALOG_CAP * 4)
    return group


def generate_family(spec: GroupSpec | str, *,
                    order_cap: int = DEFAULT_CATALOG_CAP) -> FiniteGroup:
    """Instantiate a named family member; see the module docstring for caps."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    kind, params = spec.kind, spec.params

    def need(count: int, kinds=int):
        if len(params) != count or not all(isinstance(p, kinds) for p in params):
            raise UnknownFamilyError(f"bad parameters for {spec}")

    if kind == "cyclic":
        need(1)
        m = params[0]
        if m < 1:
            raise UnknownFamilyError(f"cyclic order must be >= 1: {spec}")
        _cap(m, order_cap)
        g = _trusted(_cyclic_table(m), str(spec))
        return g
    if kind == "abelian":
        if not params or not all(isinstance(p, int) and p >= 2 for p in params):
            raise UnknownFamilyError(f"abelian parts must be integers >= 2: {spec}")
        if len(params) > 4:
            raise UnknownFamilyError("abelian family capped at four factors")
        _cap(math.prod(params), order_cap)
        g = _abelian(params)
        g.name = str(spec)
        return g
    if kind == "dihedral":
        need(1)
        m = params[0]
        if m < 2:
            raise UnknownFamilyError(f"dihedral parameter must be >= 2: {spec}")
        _cap(2 * m, order_cap)
        return _dihedral(m)
    if kind == "dicyclic":
        need(1)
        m = params[0]
        if m < 2:
            raise UnknownFamilyError(f"dicyclic parameter must be >= 2: {spec}")
        _cap(4 * m, order_cap)
        return _dicyclic(m)
    if kind == "symmetric":
        need(1)
        k = params[0]
        if k < 3:
            raise UnknownFamilyError(f"symmetric degree must be >= 3: {spec}")
        _cap(math.factorial(k), order_cap)
        return build_from_permutation_generators(
            _symmetric_gens(k), name=str(spec), order_cap=order_cap)
    if kind == "alternating":
        need(1)
        k = params[0]
        if k < 3:
            raise UnknownFamilyError(f"alternating degree must be >= 3: {spec}")
        _cap(math.factorial(k) // 2, order_cap)
        return build_from_permutation_generators(
            _alternating_gens(k), name=str(spec), order_cap=order_cap)
    if kind == "elementary_abelian":
        need(2)
        p, k = params
        if p < 2 or _prime_factors(p) != [p]:
            raise UnknownFamilyError(f"{p} is not prime in {spec}")
        if k < 1 or k > (4 if p == 2 else 3):
            raise UnknownFamilyError(f"elementary abelian rank cap exceeded: {spec}")
        _cap(p ** k, order_cap)
        g = _abelian([p] * k)
        g.name = str(spec)
        return g
    if kind == "extraspecial":
        if (len(params) != 2 or not isinstance(params[0], int)
                or params[1] not in ("exponent_p", "exponent_p2")):
            raise UnknownFamilyError(f"bad parameters for {spec}")
        p = params[0]
        if p < 2 or _prime_factors(p) != [p]:
            raise UnknownFamilyError(f"{p} is not prime in {spec}")
        _cap(p ** 3, order_cap)
        if p == 2:
            # order-8 extraspecials: "+" type is dihedral, "-" type quaternion
            g = _dihedral(4) if params[1] == "exponent_p" else _dicyclic(2)
            g.name = str(spec)
            return g
        return _heisenberg(p) if params[1] == "exponent_p" else _extraspecial_p2(p)
    if kind == "product":
        if len(params) != 2 or not all(isinstance(p, GroupSpec) for p in params):
            raise UnknownFamilyError(f"product needs two sub-specs: {spec}")
        left = generate_family(params[0], order_cap=order_cap)
        right = generate_family(params[1], order_cap=order_cap)
        g = left.direct_product(right, order_cap=order_cap)
        g.name = str(spec)
        return g
    if kind == "imported":
        need(1, (str, GroupSpec))
        from pathlib import Path
        return import_group(json.loads(Path(str(params[0])).read_text()))
    if kind == "semidirect":
        if len(params) != 3 or not isinstance(params[0], GroupSpec) \
                or not isinstance(params[2], int):
            raise UnknownFamilyError(f"semidirect needs (spec, aut_file, n): {spec}")
        from pathlib import Path
        from .constructions import semidirect_with_cyclic
        base = generate_family(params[0], order_cap=SEMIDIRECT_ORDER_CAP)
        doc = json.loads(Path(str(params[1])).read_text())
        alpha = Automorphism(base, doc["image"])
        return semidirect_with_cyclic(
            base, alpha, params[2], order_cap=SEMIDIRECT_ORDER_CAP).product_group
    raise UnknownFamilyError(f"unknown family {spec.kind!r}")


def _cap(order: int, cap: int) -> None:
    if order > cap:
        raise OrderCapExceededError(f"order {order} exceeds cap {cap}")


# ---------------------------------------------------------------------------
# catalog enumeration

@dataclass(frozen=True)
class CatalogEntry:
    spec: GroupSpec
    group: FiniteGroup
    fingerprint: Fingerprint
    merged: tuple[str, ...] = ()  # specs deduplicated into this entry


def _family_specs(max_order: int) -> list[GroupSpec]:
    """Deterministic candidate list of non-product family specs."""
    specs: list[GroupSpec] = []
    for m in range(1, max_order + 1):
        specs.append(GroupSpec("cyclic", (m,)))

    # abelian factor lists, nondecreasing, 2..4 parts
    def partitions(prefix: list[int]):
        prod = math.prod(prefix) if prefix else 1
        m = prefix[-1] if prefix else 2
        while prod * m <= max_order:
            cur = prefix + [m]
            if len(cur) >= 2:
                specs.append(GroupSpec("abelian", tuple(cur)))
            if len(cur) < 4:
                partitions(cur)
            m += 1

    partitions([])
    for m in range(2, max_order // 2 + 1):
        specs.append(GroupSpec("dihedral", (m,)))
    for m in range(2, max_order // 4 + 1):
        specs.append(GroupSpec("dicyclic", (m,)))
    k = 3
    while math.factorial(k) <= max_order:
        specs.append(GroupSpec("symmetric", (k,)))
        k += 1
    k = 4
    while math.factorial(k) // 2 <= max_order:
        specs.append(GroupSpec("alternating", (k,)))
        k += 1
    for p in (2, 3, 5, 7):
        for rank in range(2, (4 if p == 2 else 3) + 1):
            if p ** rank <= max_order:
                specs.append(GroupSpec("elementary_abelian", (p, rank)))
    for p in (2, 3, 5):
        if p ** 3 <= max_order:
            specs.append(GroupSpec("extraspecial", (p, "exponent_p")))
            specs.append(GroupSpec("extraspecial", (p, "exponent_p2")))
    return specs


def enumerate_catalog(max_order: int, *,
                      solvable_only: bool = False,
                      p_group: int | None = None,
                      order_cap: int = DEFAULT_CATALOG_CAP,
                      aut_budget: int = DEFAULT_AUT_BUDGET,
                      ) -> Iterator[CatalogEntry]:
    """All family instances and their pairwise direct products up to
    ``max_order``, deduplicated by fingerprint, in deterministic order
    (by order, then fingerprint, then spec name)."""
    if max_order > order_cap:
        raise OrderCapExceededError(
            f"max_order {max_order} exceeds catalog cap {order_cap}")

    retained: dict[Fingerprint, tuple[GroupSpec, FiniteGroup, list[str]]] = {}

    def admit(spec: GroupSpec, group: FiniteGroup) -> bool:
        if group.order > max_order:
            return False
        aut_order = abelian_aut_order(group)
        if aut_order is not None and aut_order > aut_budget:
            return False
        fp = fingerprint(group)
        if fp in retained:
            retained[fp][2].append(str(spec))
            return False
        retained[fp] = (spec, group, [])
        return True

    for spec in _family_specs(max_order):
        admit(spec, generate_family(spec, order_cap=order_cap))

    def low_rank_or_nonabelian(g: FiniteGroup) -> bool:
        types = abelian_primary_types(g)
        if types is None:
            return True
        return max((len(t) for t in types.values()), default=0) <= 2

    # pairwise products of retained family instances
    bases = sorted(((fp, spec, group) for fp, (spec, group, _) in retained.items()
                    if group.order >= 2),
                   key=lambda t: (t[0].sort_key, str(t[1])))
    for i, (fp1, spec1, g1) in enumerate(bases):
        for fp2, spec2, g2 in bases[i:]:
            if g1.order * g2.order > max_order:
                continue
            if not (g1.is_abelian and g2.is_abelian):
                # mixed products: abelian factors limited to <= 2 invariant
                # factors, keeping complete Aut enumeration feasible
                if not (low_rank_or_nonabelian(g1) and low_rank_or_nonabelian(g2)):
                    continue
            admit(GroupSpec("product", (spec1, spec2)),
                  g1.direct_product(g2, order_cap=order_cap))

    entries = [CatalogEntry(spec, group, fp, tuple(merged))
               for fp, (spec, group, merged) in retained.items()]
    entries.sort(key=lambda e: (e.group.order, e.fingerprint.sort_key, str(e.spec)))
    for entry in entries:
        if solvable_only and not entry.group.is_solvable():
            continue
        if p_group is not None and not _is_p_power(entry.group.order, p_group):
            continue
        yield entry


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def catalog_manifest(entries: Sequence[CatalogEntry]) -> list[dict]:
    """One record per entry: spec, fingerprint, merge count."""
    out = []
    for e in entries:
        out.append({
            "spec": str(e.spec),
            "order": e.group.order,
            "fingerprint": list(e.fingerprint.sort_key[:4]) + [
                list(map(list, e.fingerprint.order_histogram)),
                list(map(list, e.fingerprint.class_sizes))],
            "merged": list(e.merged),
        })
    return out


def catalog_hash(entries: Sequence[CatalogEntry]) -> str:
    """Stable identity of the corpus a survey ran over."""
    blob = json.dumps(catalog_manifest(entries), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------------------
# group files

def import_group(document: dict) -> FiniteGroup:
    """Build a group from a document with ``name`` and exactly one of
    ``table`` or ``generators`` (0-based permutation images)."""
    if not isinstance(document, dict):
        raise ParseError("group document must be an object")
    name = document.get("name", "")
    has_table = "table" in document
    has_gens = "generators" in document
    if has_table == has_gens:
        raise ParseError("document needs exactly one of 'table' or 'generators'")
    if has_table:
        table = document["table"]
        if (not isinstance(table, list)
                or not all(isinstance(r, list) for r in table)):
            raise ParseError("'table' must be an array of arrays of integers")
        return build_from_table(table, name=name)
    gens = document["generators"]
    if (not isinstance(gens, list)
            or not all(isinstance(g, list) for g in gens)):
        raise ParseError("'generators' must be an array of permutations")
    return build_from_permutation_generators(gens, name=name,
                                             order_cap=SEMIDIRECT_ORDER_CAP)


def export_group(group: FiniteGroup, *, name: str | None = None) -> dict:
    """Document that round-trips through import_group with an identical table."""
    return {"name": name if name is not None else group.name,
            "table": group.table.tolist()}
