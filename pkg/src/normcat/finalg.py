"""Finite groups as multiplication tables, with homs, subgroups and congruences.

Elements of a group of order ``n`` are the integers ``0..n-1`` and the
identity is always ``0``.  Subgroups are stored as sorted element tuples so
equality of subobjects is plain set equality, and congruences are stored
through their normal subgroup (the identity class).
"""

from __future__ import annotations

import json
from collections import deque
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (
    AmbientMismatch,
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotAHomomorphism,
    NotASubgroup,
    NotAssociative,
    NotNormal,
)

__all__ = [
    "FiniteGroup",
    "GroupHom",
    "Subgroup",
    "Congruence",
    "validate_group",
    "closure",
    "subgroups",
    "normal_subgroups",
    "congruences",
    "automorphism_group",
    "is_normal_to",
    "normalization",
    "homs",
    "hom_maps",
    "direct_product",
    "quotient",
    "identity_hom",
    "zero_hom",
    "canonical_dumps",
    "group_to_json",
    "group_from_json",
]


def _frozen(a) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=np.int32)
    arr.setflags(write=False)
    return arr


class FiniteGroup:
    """A finite group given by its full multiplication table.

    Build instances with :func:`validate_group` for untrusted tables; the
    constructors in this package call ``FiniteGroup(table, trusted=True)``
    directly because their tables are correct by construction.
    """

    def __init__(
        self,
        table,
        name: str | None = None,
        labels: Sequence[Hashable] | None = None,
        *,
        trusted: bool = False,
    ):
        if not trusted:
            raise TypeError("use validate_group() to build a group from a raw table")
        self.table = _frozen(table)
        self.order = int(self.table.shape[0])
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        inv = np.argmin(self.table, axis=1)  # table[a, inv[a]] == 0 is the minimum
        self.inverse = _frozen(inv)
        self.identity = 0
        self._key = self.table.tobytes()
        self._hash = hash((self.order, self._key))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and self.order == other.order
            and self._key == other._key
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, t: int, a: int) -> int:
        """t * a * t^-1"""
        return int(self.table[self.table[t, a], self.inverse[t]])

    def index_of(self, label: Hashable) -> int:
        if self.labels is None:
            raise LookupError(f"{self!r} carries no element labels")
        return self.labels.index(label)

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        ids = np.arange(self.order)
        while True:
            pending = cur != 0
            if not pending.any():
                break
            orders[pending] += 1
            cur = np.where(pending, self.table[cur, ids], 0)
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, greedily picked by decreasing element order."""
        gens: list[int] = []
        inside = np.zeros(self.order, dtype=bool)
        inside[0] = True
        by_order = sorted(range(1, self.order), key=lambda a: (-self.element_orders[a], a))
        for a in by_order:
            if inside[a]:
                continue
            gens.append(a)
            inside[:] = False
            inside[list(closure(self, gens))] = True
            if inside.all():
                break
        return tuple(gens)

    @cached_property
    def cayley_tree(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """BFS spanning tree (child, parent, generator slot) from the identity."""
        gens = self.generators
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        child, parent, slot = [], [], []
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for j, g in enumerate(gens):
                y = int(self.table[x, g])
                if not seen[y]:
                    seen[y] = True
                    child.append(y)
                    parent.append(x)
                    slot.append(j)
                    queue.append(y)
        as_arr = lambda v: np.asarray(v, dtype=np.int32)  # noqa: E731
        return as_arr(child), as_arr(parent), as_arr(slot)

    def center(self) -> "Subgroup":
        mask = _kernels.centralizer_scan(self.table, np.arange(self.order, dtype=np.int32))
        return Subgroup(self, np.flatnonzero(mask))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))


def validate_group(table, name: str | None = None, labels=None) -> FiniteGroup:
    """Check a raw multiplication table and return it as a canonical group.

    The identity is moved to index 0 by swapping it with element 0.
    """
    try:
        rows = [list(r) for r in table]
    except TypeError as exc:
        raise MalformedTable(f"table is not a list of rows: {exc}") from None
    n = len(rows)
    if n == 0:
        raise MalformedTable("empty table")
    if any(len(r) != n for r in rows):
        raise MalformedTable("table is not square")
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise MalformedTable(f"entry {v!r} is not an integer")
            if not 0 <= v < n:
                raise MalformedTable(f"entry {v} out of range 0..{n - 1}")
    t = np.asarray(rows, dtype=np.int64)
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)]
    if not ids:
        raise NoIdentity("no two-sided identity element")
    e = ids[0]
    if not _kernels.is_associative(t.astype(np.int32)):
        raise NotAssociative("multiplication is not associative")
    has_left = (t == e).any(axis=0)
    has_right = (t == e).any(axis=1)
    if not (has_left.all() and has_right.all()):
        bad = int(np.flatnonzero(~(has_left & has_right))[0])
        raise NoInverse(f"element {bad} has no inverse")
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0
        new = np.empty_like(t)
        new[np.ix_(perm, perm)] = perm[t]
        t = new
        if labels is not None:
            labels = list(labels)
            labels[0], labels[e] = labels[e], labels[0]
    return FiniteGroup(t, name=name, labels=labels, trusted=True)


def closure(G: FiniteGroup, gens: Iterable[int]) -> tuple[int, ...]:
    """Elements of the subgroup generated by ``gens`` (sorted)."""
    gl = sorted({int(g) for g in gens} - {0})
    if not gl:
        return (0,)
    cur = np.unique(np.asarray([0] + gl))
    ga = np.asarray(gl)
    while True:
        nxt = np.union1d(cur, G.table[np.ix_(cur, ga)].ravel())
        if len(nxt) == len(cur):
            return tuple(int(x) for x in cur)
        cur = nxt


class Subgroup:
    """A subgroup of ``ambient`` stored as its sorted element tuple."""

    def __init__(self, ambient: FiniteGroup, elements: Iterable[int], *, check: bool = False):
        self.ambient = ambient
        self.elements = tuple(sorted({int(x) for x in elements}))
        self._mask = None
        self._hash = hash((ambient, self.elements))
        if check:
            self.validate()

    def validate(self) -> "Subgroup":
        els = np.asarray(self.elements)
        n = self.ambient.order
        if len(els) == 0 or els[0] != 0:
            raise NotASubgroup("a subgroup must contain the identity")
        if els[-1] >= n or els[0] < 0:
            raise NotASubgroup("element index out of range")
        m = self.mask
        if not m[self.ambient.table[np.ix_(els, els)]].all() or not m[self.ambient.inverse[els]].all():
            raise NotASubgroup("not closed under product and inverse")
        return self

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.ambient.order, dtype=bool)
            m[list(self.elements)] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.elements == other.elements
            and self.ambient == other.ambient
        )

    def __hash__(self) -> int:
        return self._hash

    def __le__(self, other: "Subgroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"

    def is_normal(self) -> bool:
        els = np.asarray(self.elements, dtype=np.int32)
        ok = _kernels.normalizer_scan(self.ambient.table, self.ambient.inverse, self.mask, els)
        return bool(np.all(ok))

    def intersection(self, other: "Subgroup") -> "Subgroup":
        if self.ambient != other.ambient:
            raise AmbientMismatch("subgroups live in different groups")
        return Subgroup(self.ambient, set(self.elements) & set(other.elements))

    def conjugate(self, t: int) -> "Subgroup":
        G = self.ambient
        return Subgroup(G, (G.conj(t, u) for u in self.elements))

    @cached_property
    def _materialized(self):
        G = self.ambient
        els = np.asarray(self.elements, dtype=np.int64)
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[els] = np.arange(len(els))
        table = pos[G.table[np.ix_(els, els)]]
        labels = [G.labels[e] for e in els] if G.labels is not None else [int(e) for e in els]
        H = FiniteGroup(table, name=None, labels=labels, trusted=True)
        return H, GroupHom(H, G, els, check=False)

    def as_group(self) -> tuple[FiniteGroup, "GroupHom"]:
        """The subgroup as a group on ``0..k-1`` (sorted order) and its inclusion."""
        return self._materialized


class GroupHom:
    """A homomorphism given by the image of every source element."""

    __slots__ = ("source", "target", "map", "_hash")

    def __init__(self, source: FiniteGroup, target: FiniteGroup, map, *, check: bool = True):
        self.source = source
        self.target = target
        self.map = _frozen(map)
        self._hash = None
        if check:
            self.validate()

    def validate(self) -> "GroupHom":
        if self.map.shape != (self.source.order,):
            raise NotAHomomorphism("image array has the wrong length")
        if self.map.min() < 0 or self.map.max() >= self.target.order:
            raise NotAHomomorphism("image index out of range")
        gens = np.asarray(self.source.generators, dtype=np.int32)
        ok = _kernels.hom_check(self.source.table, gens, self.target.table, self.map[None, :])
        if self.map[0] != 0 or not ok[0]:
            raise NotAHomomorphism("map does not respect multiplication")
        return self

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        """Composition: ``(g @ f)(x) == g(f(x))``."""
        if other.target != self.source:
            raise AmbientMismatch("composition of non-composable homs")
        return GroupHom(other.source, self.target, self.map[other.map], check=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and np.array_equal(self.map, other.map)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.map.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"GroupHom({self.source.order}->{self.target.order}, {self.map.tolist()})"

    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.order

    def image(self) -> Subgroup:
        return Subgroup(self.target, self.map.tolist())

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(self.map == 0))

    def restrict(self, H: Subgroup) -> "GroupHom":
        """Restriction to the materialized subgroup ``H.as_group()[0]``."""
        if H.ambient != self.source:
            raise AmbientMismatch("restriction to a subgroup of another group")
        Hg, inc = H.as_group()
        return self @ inc

    def preimage(self, H: Subgroup) -> Subgroup:
        if H.ambient != self.target:
            raise AmbientMismatch("preimage of a subgroup of another group")
        return Subgroup(self.source, np.flatnonzero(H.mask[self.map]))

    def image_of(self, H: Subgroup) -> Subgroup:
        return Subgroup(self.target, self.map[list(H.elements)].tolist())


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order), check=False)


def zero_hom(A: FiniteGroup, B: FiniteGroup) -> GroupHom:
    return GroupHom(A, B, np.zeros(A.order, dtype=np.int32), check=False)


class Congruence:
    """A congruence on ``ambient``, held as its normal subgroup.

    ``class_of[a] == class_of[b]`` iff ``a * b^-1`` lies in the normal
    subgroup; class ids are numbered by the smallest element of each class.
    """

    def __init__(self, normal_subgroup: Subgroup, *, check: bool = True):
        if check and not normal_subgroup.is_normal():
            raise NotNormal("congruences correspond to normal subgroups only")
        self.normal_subgroup = normal_subgroup
        self.ambient = normal_subgroup.ambient
        G = self.ambient
        cls = np.full(G.order, -1, dtype=np.int64)
        els = np.asarray(normal_subgroup.elements)
        nxt = 0
        for a in range(G.order):
            if cls[a] < 0:
                cls[G.table[els, a]] = nxt  # the coset N*a
                nxt += 1
        cls.setflags(write=False)
        self.class_of = cls
        self.n_classes = nxt

    @classmethod
    def discrete(cls, G: FiniteGroup) -> "Congruence":
        return cls(G.trivial_subgroup(), check=False)

    @classmethod
    def indiscrete(cls, G: FiniteGroup) -> "Congruence":
        return cls(G.whole(), check=False)

    def related(self, a: int, b: int) -> bool:
        return bool(self.class_of[a] == self.class_of[b])

    def relation_matrix(self) -> np.ndarray:
        return self.class_of[:, None] == self.class_of[None, :]

    def pairs(self) -> list[tuple[int, int]]:
        m = self.relation_matrix()
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(m))]

    def is_discrete(self) -> bool:
        return self.normal_subgroup.order == 1

    def is_indiscrete(self) -> bool:
        return self.normal_subgroup.order == self.ambient.order

    def __eq__(self, other) -> bool:
        return isinstance(other, Congruence) and self.normal_subgroup == other.normal_subgroup

    def __hash__(self) -> int:
        return hash(("cong", self.normal_subgroup))

    def __repr__(self) -> str:
        return f"Congruence(normal={list(self.normal_subgroup.elements)})"


# ----------------------------------------------------------------------------
# lattices
# ----------------------------------------------------------------------------

_SUBGROUP_CACHE: dict[FiniteGroup, list[Subgroup]] = {}
_NORMAL_CACHE: dict[FiniteGroup, list[Subgroup]] = {}


def _sort_key(H: Subgroup):
    return (H.order, H.elements)


def subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup of ``G``, grown from cyclic subgroups by joins."""
    if G in _SUBGROUP_CACHE:
        return _SUBGROUP_CACHE[G]
    cyclic = {closure(G, [g]) for g in range(G.order)}
    cyclic_list = sorted(cyclic, key=lambda e: (len(e), e))
    found = set(cyclic)
    queue = deque(cyclic_list)
    while queue:
        H = queue.popleft()
        hset = set(H)
        for C in cyclic_list:
            if set(C) <= hset:
                continue
            J = closure(G, H + C)
            if J not in found:
                found.add(J)
                queue.append(J)
    out = sorted((Subgroup(G, e) for e in found), key=_sort_key)
    _SUBGROUP_CACHE[G] = out
    return out


def _normal_closure(G: FiniteGroup, g: int) -> tuple[int, ...]:
    cls = {G.conj(t, g) for t in range(G.order)}
    return closure(G, cls)


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every normal subgroup: products of normal closures of single elements."""
    if G in _NORMAL_CACHE:
        return _NORMAL_CACHE[G]
    t = G.table
    minimal = sorted({_normal_closure(G, g) for g in range(G.order)}, key=lambda e: (len(e), e))
    min_arrs = [np.asarray(m) for m in minimal]
    found = {tuple(m) for m in minimal}
    queue = deque(minimal)
    while queue:
        N = queue.popleft()
        narr = np.asarray(N)
        nmask = np.zeros(G.order, dtype=bool)
        nmask[narr] = True
        for M in min_arrs:
            if nmask[M].all():
                continue
            prod = tuple(np.unique(t[np.ix_(narr, M)]).tolist())
            if prod not in found:
                found.add(prod)
                queue.append(prod)
    out = sorted((Subgroup(G, e) for e in found), key=_sort_key)
    _NORMAL_CACHE[G] = out
    return out


def congruences(G: FiniteGroup) -> list[Congruence]:
    return [Congruence(N, check=False) for N in normal_subgroups(G)]


def is_normal_to(u: Subgroup, R: Congruence) -> bool:
    """Whether the inclusion of ``u`` is normal to the equivalence relation ``R``.

    (i) all pairs of elements of U are R-related, and (ii) the discrete
    fibration condition: whenever ``a`` is in U and ``x`` is R-related to
    ``a``, the unique lift of ``x`` is in U, i.e. ``x`` itself is in U.
    """
    if u.ambient != R.ambient:
        raise AmbientMismatch("subgroup and congruence live on different groups")
    cls = R.class_of
    els = np.asarray(u.elements)
    if len(np.unique(cls[els])) != 1:
        return False
    in_u = u.mask
    for a in u.elements:
        related = np.flatnonzero(cls == cls[a])
        if not in_u[related].all():
            return False
    return True


def normalization(R: Congruence) -> Subgroup:
    """The identity class of ``R``: pullback of ``R`` along ``(0, 1)``."""
    G = R.ambient
    return Subgroup(G, np.flatnonzero(R.class_of == R.class_of[0]))


# ----------------------------------------------------------------------------
# homomorphisms
# ----------------------------------------------------------------------------

_HOM_CACHE: dict[tuple[FiniteGroup, FiniteGroup], np.ndarray] = {}


def hom_maps(A: FiniteGroup, B: FiniteGroup) -> np.ndarray:
    """Array of shape ``(h, |A|)`` whose rows are all homs ``A -> B``.

    Images are assigned to the generators of ``A`` only, restricted to
    elements of ``B`` whose order divides the generator's order, then each
    candidate is extended along a Cayley spanning tree and validated.
    """
    key = (A, B)
    hit = _HOM_CACHE.get(key)
    if hit is not None:
        return hit
    gens = np.asarray(A.generators, dtype=np.int32)
    child, parent, slot = A.cayley_tree
    cands = [np.flatnonzero(A.element_orders[g] % B.element_orders == 0) for g in gens]
    width = max((len(c) for c in cands), default=1)
    cand = np.zeros((max(len(gens), 1), width), dtype=np.int32)
    ncand = np.zeros(max(len(gens), 1), dtype=np.int64)
    for j, c in enumerate(cands):
        cand[j, : len(c)] = c
        ncand[j] = len(c)
    if len(gens) == 0:
        cand = cand[:0]
        ncand = ncand[:0]
    maps = _kernels.hom_search(A.table, gens, child, parent, slot, B.table, cand, ncand)
    maps = np.ascontiguousarray(maps, dtype=np.int32)
    if len(maps):
        maps = maps[np.lexsort(maps.T[::-1])]
    maps.setflags(write=False)
    _HOM_CACHE[key] = maps
    return maps


def homs(A: FiniteGroup, B: FiniteGroup) -> list[GroupHom]:
    return [GroupHom(A, B, row, check=False) for row in hom_maps(A, B)]


_AUT_CACHE: dict[FiniteGroup, tuple[FiniteGroup, list[GroupHom]]] = {}


def automorphism_group(G: FiniteGroup) -> tuple[FiniteGroup, list[GroupHom]]:
    """Aut(G) as a table group; element ``i`` is ``autos[i]``, product is composition.

    ``(i * j)`` is the automorphism ``autos[i] @ autos[j]`` (apply ``j`` first).
    """
    if G in _AUT_CACHE:
        return _AUT_CACHE[G]
    maps = hom_maps(G, G)
    bij = np.array([len(np.unique(r)) == G.order for r in maps], dtype=bool)
    autos = np.ascontiguousarray(maps[bij])  # lexicographic order: identity first
    k = len(autos)
    index = {row.tobytes(): i for i, row in enumerate(autos)}
    composed = autos[np.arange(k)[:, None, None], autos[None, :, :]]
    table = np.empty((k, k), dtype=np.int32)
    for i in range(k):
        for j in range(k):
            table[i, j] = index[composed[i, j].tobytes()]
    labels = [tuple(int(v) for v in r) for r in autos]
    A = FiniteGroup(table, name=f"Aut({G.name or '?'})", labels=labels, trusted=True)
    out = (A, [GroupHom(G, G, r, check=False) for r in autos])
    _AUT_CACHE[G] = out
    return out


# ----------------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------------


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """A x B with element ``(a, b)`` stored at index ``a * |B| + b``."""
    nb = B.order
    ta = A.table.astype(np.int64)
    tb = B.table.astype(np.int64)
    table = ta[:, None, :, None] * nb + tb[None, :, None, :]
    table = table.reshape(A.order * nb, A.order * nb)
    la = A.labels if A.labels is not None else range(A.order)
    lb = B.labels if B.labels is not None else range(B.order)
    labels = [(a, b) for a in la for b in lb]
    if name is None and A.name and B.name:
        name = f"{A.name}x{B.name}"
    return FiniteGroup(table, name=name, labels=labels, trusted=True)


def quotient(G: FiniteGroup, N: Subgroup, name: str | None = None) -> tuple[FiniteGroup, GroupHom]:
    """G/N with cosets numbered by smallest member, and the quotient map."""
    R = N if isinstance(N, Congruence) else Congruence(N)
    cls = R.class_of
    reps = np.array([int(np.flatnonzero(cls == c)[0]) for c in range(R.n_classes)])
    table = cls[G.table[np.ix_(reps, reps)]]
    labels = [G.labels[r] for r in reps] if G.labels is not None else reps.tolist()
    Q = FiniteGroup(table, name=name, labels=labels, trusted=True)
    return Q, GroupHom(G, Q, cls, check=False)


# ----------------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------------


def canonical_dumps(obj) -> str:
    """Byte-stable JSON: sorted keys and no optional whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def group_to_json(G: FiniteGroup) -> dict:
    doc = {"order": G.order, "table": G.table.tolist()}
    if G.name:
        doc["name"] = G.name
    return doc


def group_from_json(doc: dict) -> FiniteGroup:
    from .errors import ParseError

    if not isinstance(doc, dict) or "table" not in doc:
        raise ParseError("group document needs a 'table' field")
    G = validate_group(doc["table"], name=doc.get("name"))
    if "order" in doc and doc["order"] != G.order:
        raise ParseError(f"declared order {doc['order']} does not match table size {G.order}")
    return G
