"""Groups internal to finite M-sets: a finite group with a monoid acting by
endomorphisms.  The normalizer of an M-stable subgroup is built from the
right adjoint to pulling back along a product projection."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (
    MalformedTable,
    NoIdentity,
    NotAHomomorphism,
    NotAssociative,
    NotASubgroup,
    NotStable,
    ValidationError,
)
from .finalg import (
    Congruence,
    FiniteGroup,
    GroupHom,
    Subgroup,
    direct_product,
    hom_maps,
    is_normal_to,
    subgroups,
)


class FiniteMonoid:
    """A finite monoid by multiplication table, identity at index 0."""

    def __init__(self, table, name: str | None = None):
        t = np.asarray(table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise MalformedTable("monoid table must be a non-empty square array")
        n = t.shape[0]
        if not np.issubdtype(t.dtype, np.integer) or t.min() < 0 or t.max() >= n:
            raise MalformedTable("monoid table entries must be indices 0..n-1")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise NoIdentity("element 0 must be a two-sided identity")
        t = np.ascontiguousarray(t, dtype=np.int32)
        if not _kernels.is_associative(t):
            raise NotAssociative("monoid table is not associative")
        t.setflags(write=False)
        self.table = t
        self.order = n
        self.name = name

    def __repr__(self) -> str:
        return f"FiniteMonoid({self.name or '?'}, order={self.order})"


def _monoid(rows, name):
    return FiniteMonoid(np.asarray(rows), name=name)


def monoid_catalog() -> list[FiniteMonoid]:
    """Small monoids: groups C1..C3, an idempotent, a nilpotent and a band."""
    return [
        _monoid([[0]], "M1"),
        _monoid([[0, 1], [1, 0]], "C2"),
        _monoid([[0, 1, 2], [1, 2, 0], [2, 0, 1]], "C3"),
        _monoid([[0, 1], [1, 1]], "I2"),  # {1, e}, e e = e
        _monoid([[0, 1, 2], [1, 2, 2], [2, 2, 2]], "N3"),  # {1, a, 0}, a a = 0
        _monoid([[0, 1, 2], [1, 1, 1], [2, 2, 2]], "L3"),  # {1, a, b}, x y = x
    ]


class InternalGroup:
    """A group ``T`` with ``M`` acting by endomorphisms: ``act[m]`` is a map on T."""

    def __init__(self, group: FiniteGroup, monoid: FiniteMonoid, act, *, check: bool = True):
        self.group = group
        self.monoid = monoid
        a = np.ascontiguousarray(act, dtype=np.int32)
        a.setflags(write=False)
        self.act = a
        if check:
            self.validate()

    def validate(self) -> "InternalGroup":
        T, M = self.group, self.monoid
        if self.act.shape != (M.order, T.order):
            raise MalformedTable("action table must have shape (|M|, |T|)")
        if self.act.min() < 0 or self.act.max() >= T.order:
            raise MalformedTable("action entries out of range")
        if not np.array_equal(self.act[0], np.arange(T.order)):
            raise ValidationError("the monoid identity must act trivially")
        gens = np.asarray(T.generators, dtype=np.int32)
        if not _kernels.hom_check(T.table, gens, T.table, self.act).all():
            raise NotAHomomorphism("every monoid element must act by an endomorphism")
        for m in range(M.order):
            for n in range(M.order):
                if not np.array_equal(self.act[M.table[m, n]], self.act[m][self.act[n]]):
                    raise ValidationError(f"action is not compatible with the product {m}*{n}")
        return self

    def __repr__(self) -> str:
        return f"InternalGroup({self.group.name}, {self.monoid.name})"

    def is_stable(self, mask: np.ndarray) -> bool:
        return bool(mask[self.act[:, mask]].all())

    def stable_hull(self, elements) -> np.ndarray:
        """Boolean mask of the smallest M-stable set containing ``elements``."""
        mask = np.zeros(self.group.order, dtype=bool)
        mask[list(elements)] = True
        return _orbit_union(self.act, mask)

    @cached_property
    def stable_subgroups(self) -> list[Subgroup]:
        return [H for H in subgroups(self.group) if self.is_stable(H.mask)]

    def restrict(self, H: Subgroup) -> "InternalGroup":
        Hg, inc = H.as_group()
        pos = np.full(self.group.order, -1, dtype=np.int64)
        pos[inc.map] = np.arange(Hg.order)
        return InternalGroup(Hg, self.monoid, pos[self.act[:, inc.map]], check=False)


def _orbit_union(act: np.ndarray, mask: np.ndarray) -> np.ndarray:
    # act[0] is the identity, so one pass of every act[m] already gives M.x
    out = np.zeros_like(mask)
    out[act[:, mask].ravel()] = True
    return out


def trivial_action(T: FiniteGroup, M: FiniteMonoid) -> InternalGroup:
    return InternalGroup(T, M, np.tile(np.arange(T.order), (M.order, 1)), check=False)


def actions(M: FiniteMonoid, T: FiniteGroup) -> list[InternalGroup]:
    """Every action of ``M`` on ``T`` by endomorphisms (backtracking over elements)."""
    ends = hom_maps(T, T)
    k = M.order
    out: list[InternalGroup] = []
    chosen: list[int] = [-1] * k

    def consistent(upto: int) -> bool:
        # every product of assigned elements that is itself assigned must agree
        for a in range(1, upto + 1):
            for b in range(1, upto + 1):
                if a != upto and b != upto:
                    continue
                c = int(M.table[a, b])
                if c <= upto:
                    lhs = ends[chosen[c]] if c else np.arange(T.order)
                    if not np.array_equal(lhs, ends[chosen[a]][ends[chosen[b]]]):
                        return False
        return True

    def rec(i: int):
        if i == k:
            act = np.stack([np.arange(T.order)] + [ends[chosen[m]] for m in range(1, k)])
            out.append(InternalGroup(T, M, act, check=False))
            return
        for e in range(len(ends)):
            chosen[i] = e
            if consistent(i):
                rec(i + 1)
        chosen[i] = -1

    if k == 1:
        return [trivial_action(T, M)]
    rec(1)
    return out


@dataclass(frozen=True, eq=False)
class MSubgroup:
    parent: InternalGroup
    elements: tuple

    def __post_init__(self):
        H = Subgroup(self.parent.group, self.elements, check=True)
        object.__setattr__(self, "elements", H.elements)
        if not self.parent.is_stable(H.mask):
            raise NotStable("subgroup is not closed under the monoid action")

    @property
    def subgroup(self) -> Subgroup:
        return Subgroup(self.parent.group, self.elements)


# ----------------------------------------------------------------------------
# right adjoint to pulling back along T x U -> T
# ----------------------------------------------------------------------------


def check_stable_relation(S: np.ndarray, G: InternalGroup, U: MSubgroup) -> None:
    """``S`` is a boolean array over ``T x U`` (columns follow U's sorted elements)."""
    T = G.group
    els = np.asarray(U.elements)
    if S.shape != (T.order, len(els)):
        raise MalformedTable("S must have shape (|T|, |U|)")
    pos = np.full(T.order, -1, dtype=np.int64)
    pos[els] = np.arange(len(els))
    ts, us = np.nonzero(S)
    for m in range(G.monoid.order):
        if not S[G.act[m, ts], pos[G.act[m, els[us]]]].all():
            raise NotStable(f"S is not closed under monoid element {m}")


def pi_along_projection(S: np.ndarray, G: InternalGroup, U: MSubgroup) -> tuple[int, ...]:
    """``{t : for all m and u, (m.t, u) in S}``; may be empty or not a subgroup."""
    check_stable_relation(S, G, U)
    full_rows = S.all(axis=1)  # t with (t, u) in S for every u
    ok = full_rows[G.act].all(axis=0)  # ... for every m.t
    return tuple(int(t) for t in np.flatnonzero(ok))


def stable_subsets(G: InternalGroup) -> np.ndarray:
    """Every M-stable subset of T, one boolean row per subset."""
    n = G.group.order
    if n > 16:
        raise ValidationError("stable subset enumeration is limited to |T| <= 16")
    bits = np.arange(1 << n, dtype=np.int64)
    masks = ((bits[:, None] >> np.arange(n)) & 1).astype(bool)
    ok = np.ones(len(masks), dtype=bool)
    for m in range(1, G.monoid.order):
        ok &= (~masks | masks[:, G.act[m]]).all(axis=1)
    return masks[ok]


def adjunction_violation(S: np.ndarray, G: InternalGroup, U: MSubgroup, subsets=None) -> dict | None:
    """First M-stable ``V`` with ``V <= pi(S)`` not equivalent to ``V x U <= S``."""
    pi = np.zeros(G.group.order, dtype=bool)
    pi[list(pi_along_projection(S, G, U))] = True
    rows = S.all(axis=1)
    V = stable_subsets(G) if subsets is None else subsets
    left = ~(V & ~pi).any(axis=1)
    right = ~(V & ~rows).any(axis=1)
    bad = np.flatnonzero(left != right)
    if len(bad):
        i = bad[0]
        return {"V": np.flatnonzero(V[i]).tolist(), "in_pi": bool(left[i]), "product_in_S": bool(right[i])}
    return None


def conjugation_relation(G: InternalGroup, U: MSubgroup, *, inverse: bool = False) -> np.ndarray:
    """``{(t, u) : t u t^-1 in U}`` (or ``t^-1 u t`` with ``inverse=True``)."""
    T = G.group
    t = np.arange(T.order)
    els = np.asarray(U.elements)
    if inverse:
        c = T.table[T.table[T.inverse[t][:, None], els[None, :]], t[:, None]]
    else:
        c = T.table[T.table[t[:, None], els[None, :]], T.inverse[t][:, None]]
    return U.subgroup.mask[c]


def sample_relations(G: InternalGroup, U: MSubgroup, rng: np.random.Generator, k: int = 4) -> list[np.ndarray]:
    """A family of M-stable relations on ``T x U`` for adjunction checks."""
    T = G.group
    nu = len(U.elements)
    rels = [
        np.ones((T.order, nu), dtype=bool),
        np.zeros((T.order, nu), dtype=bool),
        conjugation_relation(G, U),
        conjugation_relation(G, U, inverse=True),
    ]
    els = np.asarray(U.elements)
    pos = np.full(T.order, -1, dtype=np.int64)
    pos[els] = np.arange(nu)
    for _ in range(k):
        seed = rng.random((T.order, nu)) < 0.2
        S = seed.copy()
        while True:
            ts, us = np.nonzero(S)
            grown = S.copy()
            grown[G.act[:, ts].ravel(), pos[G.act[:, els[us]]].ravel()] = True
            if np.array_equal(grown, S):
                break
            S = grown
        rels.append(S)
        rels.append(S | rels[2])
        rels.append(S & rels[2])
    return rels


# ----------------------------------------------------------------------------
# the normalizer
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InternalNormalizer:
    v: MSubgroup
    X_v: tuple
    X_tilde: tuple
    X: MSubgroup
    X_group: InternalGroup
    u: GroupHom
    w: GroupHom
    R_v: Congruence


def internal_normalizer(v: MSubgroup) -> InternalNormalizer:
    G = v.parent
    X_v = pi_along_projection(conjugation_relation(G, v), G, v)
    X_t = pi_along_projection(conjugation_relation(G, v, inverse=True), G, v)
    X = sorted(set(X_v) & set(X_t))
    Xs = MSubgroup(G, tuple(X))
    XG = G.restrict(Xs.subgroup)
    _, w = Xs.subgroup.as_group()
    pos = np.full(G.group.order, -1, dtype=np.int64)
    pos[w.map] = np.arange(len(X))
    Ug, _ = v.subgroup.as_group()
    u = GroupHom(Ug, XG.group, pos[list(v.elements)])
    R_v = Congruence(u.image())
    return InternalNormalizer(v, X_v, X_t, Xs, XG, u, w, R_v)


def _is_submonoid(T: FiniteGroup, els) -> bool:
    els = list(els)
    if 0 not in els:
        return False
    mask = np.zeros(T.order, dtype=bool)
    mask[els] = True
    return bool(mask[T.table[np.ix_(els, els)]].all())


def verify_internal_closure(v: MSubgroup) -> dict:
    res = internal_normalizer(v)
    T = v.parent.group
    U = v.subgroup
    checks = {
        "X_v_submonoid": _is_submonoid(T, res.X_v),
        "X_tilde_submonoid": _is_submonoid(T, res.X_tilde),
        "conjugates_in_U": bool(
            all(T.conj(t, a) in U for t in res.X_v for a in U.elements)
        ),
        "X_subgroup": _is_subgroup(T, res.X.elements),
        "U_in_X": set(U.elements) <= set(res.X.elements),
        "U_normal_in_X": is_normal_to(res.u.image(), res.R_v) and res.u.image().is_normal(),
        "X_stable": v.parent.is_stable(res.X.subgroup.mask),
    }
    return {"checks": checks, "ok": all(checks.values())}


def _is_subgroup(T: FiniteGroup, els) -> bool:
    try:
        Subgroup(T, els, check=True)
    except NotASubgroup:
        return False
    return True


def largest_stable_normalizing(v: MSubgroup) -> Subgroup:
    """Brute force: the largest M-stable subgroup in which ``U`` is normal."""
    U = v.subgroup
    T = v.parent.group
    best = None
    for H in v.parent.stable_subgroups:
        if U <= H and all(T.conj(h, a) in U for h in H.elements for a in U.elements):
            if best is None or H.order > best.order:
                best = H
    return best


def equivariant_homs(A: InternalGroup, B: InternalGroup) -> np.ndarray:
    rows = hom_maps(A.group, B.group)
    if len(rows) == 0:
        return rows
    ok = np.ones(len(rows), dtype=bool)
    for m in range(A.monoid.order):
        ok &= (rows[:, A.act[m]] == B.act[m][rows]).all(axis=1)
    return rows[ok]


def verify_internal_universal(v: MSubgroup, res: InternalNormalizer | None = None) -> dict:
    """Decompositions through every M-stable subgroup ``H >= U``, alone and
    times a trivially acted Z2; each must factor uniquely iff U is normal in H."""
    from .catalog import cyclic

    res = res or internal_normalizer(v)
    G = v.parent
    U = v.subgroup
    bad = []
    checked = 0
    Z2 = trivial_action(cyclic(2), G.monoid)
    for H in G.stable_subgroups:
        if not U <= H:
            continue
        HG = G.restrict(H)
        _, inc = H.as_group()
        U_in_H = inc.preimage(U)
        if not U_in_H.is_normal():
            continue
        candidates = [(HG, inc.map, U_in_H)]
        P = direct_product(HG.group, Z2.group)
        act = HG.act[:, :, None] * 2 + Z2.act[:, None, :]
        PG = InternalGroup(P, G.monoid, act.reshape(G.monoid.order, -1), check=False)
        proj = inc.map[np.arange(P.order) // 2]
        U_in_P = Subgroup(P, np.asarray(U_in_H.elements) * 2)
        candidates.append((PG, proj, U_in_P))
        for XG, h, U2 in candidates:
            checked += 1
            facts = [
                r for r in equivariant_homs(XG, res.X_group)
                if np.array_equal(res.w.map[r], h)
            ]
            if len(facts) != 1:
                bad.append({"H": list(H.elements), "order": XG.group.order, "factorizations": len(facts)})
    return {"checked": checked, "violations": bad, "ok": not bad}


def internal_group_to_json(G: InternalGroup) -> dict:
    return {
        "group": {"order": G.group.order, "table": G.group.table.tolist()},
        "monoid": {"table": G.monoid.table.tolist()},
        "action": G.act.tolist(),
    }


def internal_group_from_json(doc: dict) -> InternalGroup:
    from .errors import ParseError
    from .finalg import group_from_json

    try:
        T = group_from_json(doc["group"])
        M = FiniteMonoid(doc["monoid"]["table"], name=doc["monoid"].get("name"))
        act = doc["action"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"internal group document is missing {exc}") from None
    if not np.array_equal(T.table, np.asarray(doc["group"]["table"])):
        raise ParseError("internal group tables must already have the identity at index 0")
    return InternalGroup(T, M, act)


__all__ = [
    "FiniteMonoid",
    "InternalGroup",
    "MSubgroup",
    "InternalNormalizer",
    "monoid_catalog",
    "actions",
    "trivial_action",
    "pi_along_projection",
    "adjunction_violation",
    "stable_subsets",
    "sample_relations",
    "conjugation_relation",
    "internal_normalizer",
    "verify_internal_closure",
    "verify_internal_universal",
    "largest_stable_normalizing",
    "equivariant_homs",
]
