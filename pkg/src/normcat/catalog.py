"""Named group constructors and the built-in bounded catalog.

The catalog is explicit and versioned; it is not an exhaustive census of
groups beyond order 12 (orders 13-16 contribute only cyclic groups).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

import numpy as np

from .finalg import FiniteGroup, direct_product

CATALOG_VERSION = "1"


def cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, name=f"Z{n}", labels=list(range(n)), trusted=True)


def from_permutations(gens: Iterable[tuple[int, ...]], name: str | None = None) -> FiniteGroup:
    """The permutation group generated by ``gens`` (tuples in image form).

    Elements are sorted lexicographically, so the identity comes first; the
    product ``p * q`` is the composite "apply q, then p".
    """
    gens = [tuple(g) for g in gens]
    degree = len(gens[0]) if gens else 1
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = sorted(seen)
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(p[i] for i in q)] for q in elems] for p in elems]
    return FiniteGroup(table, name=name, labels=elems, trusted=True)


def symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        return from_permutations([], name=f"S{n}")
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return from_permutations([cycle, swap], name=f"S{n}")


def alternating4() -> FiniteGroup:
    return from_permutations([(1, 2, 0, 3), (1, 0, 3, 2)], name="A4")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], name=f"D{n}")


def quaternion() -> FiniteGroup:
    units = ["1", "i", "j", "k"]
    # unit products as (sign, unit)
    rule = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = rule[(u1, u2)]
            row.append(index[(s1 * s2 * s, u)])
        table.append(row)
    labels = [("" if s > 0 else "-") + u for s, u in elems]
    return FiniteGroup(table, name="Q8", labels=labels, trusted=True)


def dicyclic3() -> FiniteGroup:
    """Z3 x| Z4 with the generator of Z4 acting by inversion (order 12)."""
    elems = [(k, y) for k in range(3) for y in range(4)]
    index = {e: i for i, e in enumerate(elems)}
    table = [
        [index[((k1 + (k2 if y1 % 2 == 0 else -k2)) % 3, (y1 + y2) % 4)] for k2, y2 in elems]
        for k1, y1 in elems
    ]
    return FiniteGroup(table, name="Dic3", labels=elems, trusted=True)


def product_of(*factors: FiniteGroup) -> FiniteGroup:
    G = factors[0]
    for H in factors[1:]:
        G = direct_product(G, H)
    G.name = "x".join(f.name for f in factors)
    return G


def _builtin() -> list[FiniteGroup]:
    gs = [cyclic(n) for n in range(1, 17)]
    gs += [
        product_of(cyclic(2), cyclic(2)),
        product_of(cyclic(2), cyclic(4)),
        product_of(cyclic(2), cyclic(2), cyclic(2)),
        product_of(cyclic(3), cyclic(3)),
        product_of(cyclic(2), cyclic(6)),
        symmetric(3),
        dihedral(4),
        quaternion(),
        dihedral(5),
        dihedral(6),
        alternating4(),
        dicyclic3(),
    ]
    gs.sort(key=lambda g: (g.order, g.name))
    return gs


_BUILTIN: list[FiniteGroup] | None = None


def builtin_groups(max_order: int = 16) -> list[FiniteGroup]:
    """Catalog groups of order at most ``max_order``, sorted by (order, name)."""
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = _builtin()
    return [g for g in _BUILTIN if g.order <= max_order]


def group_by_name(name: str) -> FiniteGroup:
    for g in builtin_groups():
        if g.name == name:
            return g
    raise KeyError(name)


@dataclass
class Catalog:
    """A bounded explicit family of groups and split extensions.

    Universal properties certified against a catalog are certified relative
    to it; ``describe()`` records the bounds in every report.
    """

    max_group_order: int
    max_total_order: int
    groups: list = field(default_factory=list)
    extensions: list = field(default_factory=list)
    extension_ids: list = field(default_factory=list)

    def describe(self) -> dict:
        return {
            "catalog_version": CATALOG_VERSION,
            "max_group_order": self.max_group_order,
            "max_total_order": self.max_total_order,
            "n_groups": len(self.groups),
            "n_extensions": len(self.extensions),
        }


_CATALOGS: dict[tuple[int, int], Catalog] = {}


def build_catalog(max_group_order: int = 12, max_total_order: int | None = None) -> Catalog:
    """Groups up to ``max_group_order`` and every split extension (one per
    action ``Y -> Aut(K)``) of catalog groups with ``|K| * |Y| <= max_total_order``."""
    from .ptcat import enumerate_points_with_kernel

    if max_total_order is None:
        max_total_order = max_group_order
    key = (max_group_order, max_total_order)
    if key in _CATALOGS:
        return _CATALOGS[key]
    groups = builtin_groups(max_group_order)
    ext_groups = builtin_groups(max_total_order)
    cat = Catalog(max_group_order, max_total_order, groups)
    for K, Y in product(ext_groups, ext_groups):
        if K.order * Y.order > max_total_order:
            continue
        for i, E in enumerate(enumerate_points_with_kernel(K, Y)):
            cat.extensions.append(E)
            cat.extension_ids.append(f"{K.name}|{Y.name}|a{i}")
    _CATALOGS[key] = cat
    return cat
