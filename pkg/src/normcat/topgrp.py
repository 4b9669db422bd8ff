"""Finite topological groups: normal topological subgroups (two criteria) and
the normalizer carrying the subspace topology.

Subsets of a group of order ``n`` are ``int`` bitmasks over element indices.
A topology lives on a *carrier* bitmask, so a topology on a subgroup keeps
the ambient element indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import ConditionBFails, NotSubgroup, RouteMismatch, ValidationError
from .finalg import FiniteGroup, Subgroup, subgroups


def bits(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def members(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class FiniteTopology:
    """A topology on the carrier bitmask, given by its family of open sets."""

    def __init__(self, carrier: int, opens, *, check: bool = True):
        self.carrier = int(carrier)
        self.opens = tuple(sorted({int(o) for o in opens}))
        if check:
            self.validate()

    def validate(self) -> "FiniteTopology":
        fam = set(self.opens)
        if 0 not in fam or self.carrier not in fam:
            raise ValidationError("a topology contains the empty set and the carrier")
        for o in fam:
            if o & ~self.carrier:
                raise ValidationError("open set leaves the carrier")
        for a, b in combinations(self.opens, 2):
            if (a | b) not in fam or (a & b) not in fam:
                raise ValidationError("open sets are not closed under union and intersection")
        return self

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteTopology) and (self.carrier, self.opens) == (other.carrier, other.opens)

    def __hash__(self) -> int:
        return hash((self.carrier, self.opens))

    def __repr__(self) -> str:
        return f"FiniteTopology(carrier={members(self.carrier)}, opens={[members(o) for o in self.opens]})"

    def is_open(self, mask: int) -> bool:
        return mask in self._open_set

    @cached_property
    def _open_set(self) -> frozenset:
        return frozenset(self.opens)

    @cached_property
    def neighbourhood(self) -> dict[int, int]:
        """Smallest open set around each point of the carrier."""
        nb = {}
        for x in members(self.carrier):
            m = self.carrier
            for o in self.opens:
                if o >> x & 1:
                    m &= o
            nb[x] = m
        return nb

    def is_discrete(self) -> bool:
        return all(nb == 1 << x for x, nb in self.neighbourhood.items())

    def is_indiscrete(self) -> bool:
        return self.opens == tuple(sorted({0, self.carrier}))

    def to_json(self) -> list[list[int]]:
        return [members(o) for o in self.opens]


def discrete(carrier: int) -> FiniteTopology:
    pts = members(carrier)
    opens = [bits(c) for r in range(len(pts) + 1) for c in combinations(pts, r)]
    return FiniteTopology(carrier, opens, check=False)


def indiscrete(carrier: int) -> FiniteTopology:
    return FiniteTopology(carrier, {0, carrier}, check=False)


def subspace(top: FiniteTopology, carrier: int) -> FiniteTopology:
    return FiniteTopology(carrier, {o & carrier for o in top.opens})


def generated(carrier: int, basis) -> FiniteTopology:
    """Topology whose opens are all unions of the given blocks."""
    blocks = sorted(set(basis))
    opens = {0}
    for r in range(1, len(blocks) + 1):
        for c in combinations(blocks, r):
            m = 0
            for b in c:
                m |= b
            opens.add(m)
    opens.add(carrier)
    return FiniteTopology(carrier, opens)


def is_continuous(f, src: FiniteTopology, tgt: FiniteTopology) -> bool:
    """Preimage of every open is open; ``f`` maps carrier points to carrier points."""
    pts = members(src.carrier)
    for o in tgt.opens:
        pre = bits(x for x in pts if o >> int(f[x]) & 1)
        if not src.is_open(pre):
            return False
    return True


def _product_open(pairs: set, top_a: FiniteTopology, top_b: FiniteTopology) -> bool:
    # open in the product iff each point's basic neighbourhood stays inside
    nba, nbb = top_a.neighbourhood, top_b.neighbourhood
    for a, b in pairs:
        for a2 in members(nba[a]):
            for b2 in members(nbb[b]):
                if (a2, b2) not in pairs:
                    return False
    return True


def is_continuous_from_product(f, top_a: FiniteTopology, top_b: FiniteTopology, tgt: FiniteTopology) -> bool:
    """``f(a, b)`` continuous from the product topology on ``A x B``."""
    pa, pb = members(top_a.carrier), members(top_b.carrier)
    for o in tgt.opens:
        pre = {(a, b) for a in pa for b in pb if o >> int(f(a, b)) & 1}
        if not _product_open(pre, top_a, top_b):
            return False
    return True


@dataclass(frozen=True, eq=False)
class TopGroup:
    """A group (or a subgroup of ``group``, the topology's carrier) with a topology."""

    group: FiniteGroup
    topology: FiniteTopology

    def __post_init__(self):
        els = members(self.topology.carrier)
        try:
            Subgroup(self.group, els, check=True)
        except ValidationError:
            raise NotSubgroup("topology carrier is not a subgroup") from None
        t = self.group.table
        if not is_continuous_from_product(lambda a, b: t[a, b], self.topology, self.topology, self.topology):
            raise ValidationError("multiplication is not continuous")
        if not is_continuous(self.group.inverse, self.topology, self.topology):
            raise ValidationError("inversion is not continuous")

    @property
    def carrier(self) -> int:
        return self.topology.carrier

    @property
    def subgroup(self) -> Subgroup:
        return Subgroup(self.group, members(self.carrier))


def try_top_group(group: FiniteGroup, topology: FiniteTopology) -> TopGroup | None:
    try:
        return TopGroup(group, topology)
    except (ValidationError, NotSubgroup):
        return None


def _conj_set(G: FiniteGroup, b: int, U: int) -> int:
    """``b U b^-1`` as a bitmask."""
    return bits(G.conj(b, u) for u in members(U))


def _check_subobject(A: FiniteTopology, B: TopGroup) -> None:
    els = members(A.carrier)
    if A.carrier & ~B.carrier:
        raise NotSubgroup("A is not inside B")
    try:
        Subgroup(B.group, els, check=True)
    except ValidationError:
        raise NotSubgroup("A's carrier is not a subgroup") from None


def normal_by_conjugation_map(A: FiniteTopology, B: TopGroup) -> bool:
    """A is a normal subgroup and ``(a, b) |-> b^-1 a b`` is continuous on ``A x B``."""
    _check_subobject(A, B)
    G = B.group
    for b in members(B.carrier):
        if _conj_set(G, b, A.carrier) != A.carrier:
            return False
    phi = lambda a, b: G.conj(G.inv(b), a)  # noqa: E731
    return is_continuous_from_product(phi, A, B.topology, A)


def normal_by_open_conditions(A: FiniteTopology, B: TopGroup) -> bool:
    """Conditions (a) and (b) over every open ``U`` of ``A``."""
    _check_subobject(A, B)
    return condition_a(A, B) and condition_b(A, B)


def condition_a(A: FiniteTopology, B: TopGroup) -> bool:
    G = B.group
    for U in A.opens:
        for b in members(B.carrier):
            c = _conj_set(G, b, U)
            if c & ~A.carrier or not A.is_open(c):
                return False
    return True


def condition_b(A: FiniteTopology, B: TopGroup) -> bool:
    G = B.group
    Vs = [V for V in B.topology.opens if V & 1]
    for U in A.opens:
        for a in members(U):
            Uas = [W for W in A.opens if W >> a & 1]
            if not any(
                all(_conj_set(G, G.inv(b), Ua) & ~U == 0 for b in members(V))
                for V in Vs
                for Ua in Uas
            ):
                return False
    return True


def is_normal_topsub(A: FiniteTopology, B: TopGroup) -> bool:
    r1 = normal_by_conjugation_map(A, B)
    r2 = normal_by_open_conditions(A, B)
    if r1 != r2:
        raise RouteMismatch(f"normality criteria disagree: {r1} vs {r2}")
    return r1


@dataclass(frozen=True, eq=False)
class TopNormalizer:
    A: FiniteTopology
    B: TopGroup
    N: TopGroup


def top_normalizer(A: FiniteTopology, B: TopGroup) -> TopNormalizer:
    """``{b : b U b^-1 and b^-1 U b open in A for all open U}`` with the subspace topology."""
    _check_subobject(A, B)
    if not condition_b(A, B):
        raise ConditionBFails("condition (b) fails for this pair")
    G = B.group
    keep = []
    for b in members(B.carrier):
        ok = True
        for U in A.opens:
            for c in (_conj_set(G, b, U), _conj_set(G, G.inv(b), U)):
                if c & ~A.carrier or not A.is_open(c):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            keep.append(b)
    carrier = bits(keep)
    N = TopGroup(G, subspace(B.topology, carrier))
    if not is_normal_topsub(A, N):
        raise RouteMismatch("A is not normal in the computed normalizer")
    return TopNormalizer(A, B, N)


def maximality_violation(res: TopNormalizer) -> list[int] | None:
    """A subgroup of B containing A, normal-topologically with the subspace
    topology, that escapes the normalizer; None when there is none."""
    A, B, N = res.A, res.B, res.N
    for H in subgroups(B.group):
        hm = bits(H.elements)
        if hm & ~B.carrier or A.carrier & ~hm:
            continue
        HG = try_top_group(B.group, subspace(B.topology, hm))
        if HG is None:
            continue
        if is_normal_topsub(A, HG) and hm & ~N.carrier:
            return list(H.elements)
    return None


def coset_topology(G: FiniteGroup, H: Subgroup) -> FiniteTopology:
    """Opens are unions of left cosets ``gH``."""
    blocks = {bits(G.table[g, list(H.elements)]) for g in range(G.order)}
    return generated((1 << G.order) - 1, blocks)


def group_topologies(G: FiniteGroup) -> list[FiniteTopology]:
    """Discrete, indiscrete and coset topologies that make ``G`` a topological group."""
    full = (1 << G.order) - 1
    cands = {discrete(full), indiscrete(full)}
    for H in subgroups(G):
        cands.add(coset_topology(G, H))
    out = [t for t in cands if try_top_group(G, t) is not None]
    return sorted(out, key=lambda t: (len(t.opens), t.opens))


def sub_topologies(B: TopGroup, H: Subgroup) -> dict[str, FiniteTopology]:
    m = bits(H.elements)
    return {"discrete": discrete(m), "indiscrete": indiscrete(m), "subspace": subspace(B.topology, m)}


def topology_from_json(carrier, opens) -> FiniteTopology:
    return FiniteTopology(bits(carrier), [bits(o) for o in opens])


def classical_normalizer_mask(G: FiniteGroup, A: int) -> int:
    els = members(A)
    amask = np.zeros(G.order, dtype=bool)
    amask[els] = True
    return bits(t for t in range(G.order) if all(amask[G.conj(t, a)] for a in els))


__all__ = [
    "FiniteTopology",
    "TopGroup",
    "TopNormalizer",
    "bits",
    "members",
    "discrete",
    "indiscrete",
    "subspace",
    "generated",
    "is_continuous",
    "is_continuous_from_product",
    "normal_by_conjugation_map",
    "normal_by_open_conditions",
    "condition_a",
    "condition_b",
    "is_normal_topsub",
    "top_normalizer",
    "maximality_violation",
    "coset_topology",
    "group_topologies",
    "sub_topologies",
    "classical_normalizer_mask",
]
