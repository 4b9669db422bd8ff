"""Normalizers of subgroups, their K-cartesian lifts into ``J(T)``, and the
brute-force certificates for the universal property and for fibrancy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AmbientMismatch, NoFactorization, NotReflexive, ValidationError
from .finalg import (
    Congruence,
    FiniteGroup,
    GroupHom,
    Subgroup,
    congruences,
    hom_maps,
    identity_hom,
    is_normal_to,
    normal_subgroups,
    normalization,
    subgroups,
)
from .ptcat import (
    J,
    J_map,
    SEMorphism,
    SplitExtension,
    k_cartesian_violation,
    pullback_se,
    relation_extension,
    relation_to_congruence,
    square,
)


@dataclass(frozen=True, eq=False)
class NormalizerResult:
    """``v = w o u`` with ``u`` normal to ``R_v``.

    ``N`` is the normalizer as a subgroup of ``T``; ``N_group`` is the same
    group materialized on ``0..|N|-1``, the domain of ``w`` and ``R_v``.
    """

    v: Subgroup
    N: Subgroup
    N_group: FiniteGroup
    u: GroupHom
    w: GroupHom
    R_v: Congruence

    @property
    def U_in_N(self) -> Subgroup:
        return self.u.image()


def normalizer(v: Subgroup) -> NormalizerResult:
    T = v.ambient
    els = np.asarray(v.elements, dtype=np.int32)
    mask = _kernels.normalizer_scan(T.table, T.inverse, v.mask, els)
    N = Subgroup(T, np.flatnonzero(mask))
    Ng, w = N.as_group()
    pos = np.full(T.order, -1, dtype=np.int64)
    pos[w.map] = np.arange(Ng.order)
    Ug, _ = v.as_group()
    u = GroupHom(Ug, Ng, pos[els], check=False)
    R_v = Congruence(u.image())
    return NormalizerResult(v, N, Ng, u, w, R_v)


def k_cartesian_lift(v: Subgroup, res: NormalizerResult | None = None) -> SEMorphism:
    """``(v, (w d0, w d1), w)`` from the extension ``d0: R_v -> N`` into ``J(T)``."""
    res = res or normalizer(v)
    T = v.ambient
    E, d1 = relation_extension(res.R_v)
    n = T.order
    w = res.w.map.astype(np.int64)
    tot = w[E.f.map] * n + w[d1.map]
    on_kernel = w[d1.map[E.k.map]]  # kernel element (e, u) |-> u
    return SEMorphism(
        E,
        J(T),
        GroupHom(E.K, T, on_kernel, check=False),
        GroupHom(E.X, square(T), tot, check=False),
        res.w,
    )


def is_lift_cartesian(m: SEMorphism, cat) -> bool:
    return k_cartesian_violation(m, cat) is None


# ----------------------------------------------------------------------------
# universal property
# ----------------------------------------------------------------------------


def maximal_normalizing_subgroup(v: Subgroup) -> Subgroup:
    """The largest subgroup ``H`` of ``T`` with ``U`` normal in ``H``, by subgroup scan."""
    best = None
    for H in subgroups(v.ambient):
        if not v <= H:
            continue
        if all(v.ambient.conj(h, a) in v for h in H.elements for a in v.elements):
            if best is None or H.order > best.order:
                best = H
    for H in subgroups(v.ambient):
        if v <= H and all(v.ambient.conj(h, a) in v for h in H.elements for a in v.elements):
            if not H <= best:
                raise ValidationError("normalizing subgroups have no greatest element")
    return best


def _factorizations(h: np.ndarray, res: NormalizerResult, X2: FiniteGroup) -> list[np.ndarray]:
    cands = hom_maps(X2, res.N_group)
    return [row for row in cands if np.array_equal(res.w.map[row], h)]


def _check_factor(h2: np.ndarray, U2: Subgroup, iso: np.ndarray, res: NormalizerResult, S: Congruence) -> bool:
    # h' o (U' -> X') == u o (U' ~ U), and h' maps S-related pairs into R_v
    if not np.array_equal(h2[list(U2.elements)], res.u.map[iso]):
        return False
    cls = res.R_v.class_of
    img = cls[h2]
    sc = S.class_of
    for c in range(S.n_classes):
        if len(np.unique(img[sc == c])) != 1:
            return False
    return True


def verify_normalizer_universal(v: Subgroup, res: NormalizerResult, cat=None) -> dict:
    """Exhaustive check of the universal property of ``res``.

    Decompositions are (1) inclusions of every intermediate subgroup
    ``U <= H <= T`` and (2) for every catalog group ``X'`` every hom
    ``h: X' -> T`` and normal ``U' <= X'`` mapped isomorphically onto ``U``.
    A congruence on ``X'`` to which ``U'`` is normal has ``U'`` as identity
    class, so each ``(h, U')`` carries exactly one ``S``.
    """
    T = v.ambient
    U_order = v.order
    Ug, _ = v.as_group()
    pos_u = np.full(T.order, -1, dtype=np.int64)
    pos_u[list(v.elements)] = np.arange(U_order)
    violations = []
    checked = 0

    for H in subgroups(T):
        if not v <= H:
            continue
        Hg, inc = H.as_group()
        U2 = inc.preimage(v)
        S_cands = [S for S in congruences(Hg) if is_normal_to(U2, S)]
        for S in S_cands:
            checked += 1
            iso = pos_u[inc.map[list(U2.elements)]]
            facts = [h2 for h2 in _factorizations(inc.map, res, Hg) if _check_factor(h2, U2, iso, res, S)]
            if len(facts) != 1:
                violations.append({"kind": "intermediate", "H": list(H.elements), "factorizations": len(facts)})
        expected = U2.is_normal()
        if expected != bool(S_cands):
            violations.append({"kind": "normal-to-mismatch", "H": list(H.elements)})

    groups = [] if cat is None else getattr(cat, "groups", cat)
    for X2 in groups:
        normals = [U2 for U2 in normal_subgroups(X2) if U2.order == U_order]
        if not normals:
            continue
        ncands = hom_maps(X2, res.N_group)
        by_image: dict[bytes, list[np.ndarray]] = {}
        for row in ncands:
            by_image.setdefault(np.ascontiguousarray(res.w.map[row]).tobytes(), []).append(row)
        for h in hom_maps(X2, T):
            for U2 in normals:
                img = h[list(U2.elements)]
                if not v.mask[img].all() or len(np.unique(img)) != U_order:
                    continue
                checked += 1
                S = Congruence(U2, check=False)
                iso = pos_u[img]
                facts = [
                    h2 for h2 in by_image.get(np.ascontiguousarray(h).tobytes(), [])
                    if _check_factor(h2, U2, iso, res, S)
                ]
                if len(facts) != 1:
                    violations.append({
                        "kind": "catalog",
                        "group": X2.name,
                        "h": h.tolist(),
                        "U'": list(U2.elements),
                        "factorizations": len(facts),
                    })
    return {"checked": checked, "violations": violations, "ok": not violations}


# ----------------------------------------------------------------------------
# lifts along restrictions and fibrancy
# ----------------------------------------------------------------------------


def restrict_lift(m: SEMorphism, t) -> SEMorphism:
    """Restrict a K-cartesian ``m`` along ``t`` and return the lift above the factor.

    ``t`` is either an injective hom ``T' -> K(target)`` when the target of
    ``m`` is some ``J(T)`` (restriction along ``J(t)``), or a morphism of
    split extensions into the target with injective kernel component.
    """
    if isinstance(t, GroupHom):
        if m.target is not J(t.target):
            raise AmbientMismatch("restriction by a hom needs a lift into J(T)")
        if not t.is_injective():
            raise NoFactorization("restriction map is not injective")
        t = J_map(t)
    _, lift, _ = pullback_se(m, t)
    return lift


def embed_in_J(E: SplitExtension) -> SEMorphism:
    """``E -> J(X)`` with total ``x |-> (s f x, x)``, base ``s`` and kernel ``k``."""
    X = E.X
    n = X.order
    sf = E.s.map[E.f.map].astype(np.int64)
    tot = sf * n + np.arange(n)
    return SEMorphism(E, J(X), E.k, GroupHom(X, square(X), tot, check=False), E.s)


def lift_into(E: SplitExtension, U: Subgroup) -> SEMorphism:
    """K-cartesian lift above ``U -> K(E)``: embed ``E`` in ``J(X)``, lift, restrict."""
    if U.ambient != E.K:
        raise AmbientMismatch("U must be a subgroup of K(E)")
    e = embed_in_J(E)
    kU = Subgroup(E.X, E.k.map[list(U.elements)])
    return restrict_lift(k_cartesian_lift(kU), e)


@dataclass(frozen=True, eq=False)
class SubExtension:
    """A sub split extension given by subgroups of the total and the base."""

    total: Subgroup
    base: Subgroup
    kernel: Subgroup


def fibrant_lift(E: SplitExtension, U: Subgroup) -> SubExtension:
    """Closed form of :func:`lift_into` as subgroups of ``E``.

    With ``N`` the normalizer of ``k(U)`` in ``X``, the total is the set of
    ``x`` in ``N`` with ``s f x`` in ``N`` and ``(s f x) x^-1`` in ``k(U)``;
    the base is ``{y : s y in N}``.
    """
    X = E.X
    kU = Subgroup(X, E.k.map[list(U.elements)])
    N = normalizer(kU).N
    sf = E.s.map[E.f.map]
    xs = np.arange(X.order)
    diff = X.table[sf, X.inverse[xs]]
    total = np.flatnonzero(N.mask & N.mask[sf] & kU.mask[diff])
    base = np.flatnonzero(N.mask[E.s.map])
    return SubExtension(Subgroup(X, total), Subgroup(E.Y, base), kU)


def fibrancy_suite(cat, *, targets=None) -> list[dict]:
    """One case per (catalog extension, subgroup of its kernel): build the lift
    by embedding and restriction, check it against :func:`fibrant_lift`, then
    certify it K-cartesian over the catalog."""
    cases = []
    ids = cat.extension_ids
    for eid, E in zip(ids, cat.extensions):
        if targets is not None and eid not in targets:
            continue
        for U in subgroups(E.K):
            lift = lift_into(E, U)
            closed = fibrant_lift(E, U)
            same = (
                lift.on_total.image() == closed.total
                and lift.on_base.image() == closed.base
                and lift.on_kernel.image() == U
                and lift.on_total.is_injective()
            )
            bad = k_cartesian_violation(lift, cat)
            cases.append({
                "case_id": f"fibrancy/{eid}/U{list(U.elements)}",
                "verdict": "pass" if same and bad is None else "fail",
                "witness": bad if bad is not None else (None if same else "closed form disagrees"),
            })
    return cases


def reflexive_cartesian_check(R, cat, X: FiniteGroup | None = None) -> bool:
    """Whether ``(d0, d1)`` from the ``d0``-extension of ``R`` into ``J(X)`` is
    K-cartesian, and ``R`` is the only congruence its normalization is normal to.

    ``R`` is a :class:`Congruence`, or a subgroup of ``X x X`` (pass ``X``).
    """
    if not isinstance(R, Congruence):
        if X is None:
            raise ValidationError("a relation given as a subgroup needs its carrier X")
        R = relation_to_congruence(X, R)
    X = R.ambient
    M = R.relation_matrix()
    if not M[np.arange(X.order), np.arange(X.order)].all():
        raise NotReflexive("relation is not reflexive")
    E, d1 = relation_extension(R)
    n = X.order
    tot = E.f.map.astype(np.int64) * n + d1.map
    m = SEMorphism(E, J(X), GroupHom(E.K, X, d1.map[E.k.map], check=False),
                   GroupHom(E.X, square(X), tot, check=False), identity_hom(X))
    if k_cartesian_violation(m, cat) is not None:
        return False
    U = normalization(R)
    others = [S for S in congruences(X) if is_normal_to(U, S)]
    return others == [R]


def normalizer_cases(T: FiniteGroup, cat, *, universal: bool = True) -> list[dict]:
    """Per-subgroup normalizer checks used by the universality and monicity suites."""
    out = []
    for v in subgroups(T):
        res = normalizer(v)
        maxi = maximal_normalizing_subgroup(v)
        witness = {}
        ok = res.w.is_injective() and res.N == maxi
        ok &= normalization(res.R_v) == res.U_in_N and is_normal_to(res.U_in_N, res.R_v)
        ok &= res.w @ res.u == v.as_group()[1]
        if universal:
            rep = verify_normalizer_universal(v, res, cat)
            ok &= rep["ok"]
            witness = {"checked": rep["checked"], "violations": rep["violations"][:3]}
        out.append({
            "case_id": f"normalizer/{T.name}/U{list(v.elements)}",
            "verdict": "pass" if ok else "fail",
            "witness": {"N": list(res.N.elements), **witness},
        })
    return out


__all__ = [
    "NormalizerResult",
    "normalizer",
    "k_cartesian_lift",
    "maximal_normalizing_subgroup",
    "verify_normalizer_universal",
    "restrict_lift",
    "embed_in_J",
    "lift_into",
    "fibrant_lift",
    "fibrancy_suite",
    "reflexive_cartesian_check",
    "normalizer_cases",
]
