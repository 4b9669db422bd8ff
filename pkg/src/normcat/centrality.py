"""Commuting maps, centralizers, distinctive equivalence relations and faithful
covers of points of finite groups.

Most operations are computed along two independent routes and raise
:class:`RouteMismatch` when they disagree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    CatalogInsufficient,
    FactorizationMissing,
    NotCommuting,
    NotNormal,
    RouteMismatch,
)
from .finalg import (
    Congruence,
    FiniteGroup,
    GroupHom,
    Subgroup,
    closure,
    direct_product,
    hom_maps,
    is_normal_to,
    normal_subgroups,
    normalization,
    quotient,
)
from .normalizer import normalizer
from .ptcat import (
    Point,
    PtMorphism,
    is_P_cartesian,
    make_split_extension,
    relation_extension,
    square,
)


# ----------------------------------------------------------------------------
# cooperators
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Cooperator:
    """``phi[x, i] = t(x) * u_i`` for the elements ``u_i`` of ``v`` in sorted order."""

    t: GroupHom
    v: Subgroup
    phi: np.ndarray

    def as_hom(self) -> GroupHom:
        """``phi`` as a hom out of ``source(t) x U`` (pair ``(x, i)`` at ``x * |U| + i``)."""
        Ug, _ = self.v.as_group()
        return GroupHom(direct_product(self.t.source, Ug), self.v.ambient, self.phi.ravel())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cooperator)
            and self.t == other.t
            and self.v == other.v
            and np.array_equal(self.phi, other.phi)
        )

    __hash__ = None


def commutes(t: GroupHom, v: Subgroup) -> Cooperator | None:
    T = v.ambient
    cent = _kernels.centralizer_scan(T.table, np.asarray(v.elements, dtype=np.int32))
    if not cent[t.map].all():
        return None
    phi = T.table[np.ix_(t.map, np.asarray(v.elements))]
    return Cooperator(t, v, phi)


def cooperator_to_psi(c: Cooperator, R: Congruence) -> GroupHom:
    """``psi(x, u) = (t x, t x * u)`` into the relation ``R`` seen as a group.

    ``psi`` composed with ``d1`` is ``phi``, it sends ``(e, u)`` to ``(e, u)``
    and ``(x, e)`` to ``(t x, t x)``.
    """
    if R.ambient != c.v.ambient or not is_normal_to(c.v, R):
        raise NotNormal("v is not normal to R")
    X = R.ambient
    E, _ = relation_extension(R)
    n = X.order
    tx = c.t.map.astype(np.int64)
    pairs = tx[:, None] * n + c.phi
    pos = np.full(n * n, -1, dtype=np.int64)
    M = R.relation_matrix().ravel()
    pos[np.flatnonzero(M)] = np.arange(int(M.sum()))
    img = pos[pairs.ravel()]
    if (img < 0).any():
        raise NotCommuting("cooperator leaves the relation")
    Ug, _ = c.v.as_group()
    return GroupHom(direct_product(c.t.source, Ug), E.X, img)


def psi_to_cooperator(psi: GroupHom, R: Congruence, v: Subgroup | None = None) -> Cooperator:
    X = R.ambient
    v = v if v is not None else normalization(R)
    E, d1 = relation_extension(R)
    if psi.target != E.X:
        raise NotNormal("psi does not land in R")
    nu = v.order
    phi = d1.map[psi.map].reshape(-1, nu)
    tbar = psi.source.order // nu
    t_map = E.f.map[psi.map[np.arange(tbar) * nu]]
    Tsrc = _first_factor(psi.source, tbar, nu)
    return Cooperator(GroupHom(Tsrc, X, t_map, check=False), v, phi)


def _first_factor(P: FiniteGroup, na: int, nb: int) -> FiniteGroup:
    """Recover ``A`` from ``A x B`` built by :func:`direct_product`."""
    idx = np.arange(na) * nb
    table = P.table[np.ix_(idx, idx)] // nb
    labels = None
    if P.labels is not None:
        labels = [P.labels[i][0] for i in idx]
    return FiniteGroup(table, labels=labels, trusted=True)


# ----------------------------------------------------------------------------
# centralizers
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CentralizerResult:
    v: Subgroup
    Z: Subgroup
    zeta: GroupHom


def _centralizer_via_diagonal(v: Subgroup) -> Subgroup:
    """Normalizer of ``{(u, u)}`` in ``T x T`` pulled back along ``(0, 1)``."""
    T = v.ambient
    n = T.order
    els = np.asarray(v.elements, dtype=np.int64)
    diag = Subgroup(square(T), els * n + els)
    N = normalizer(diag).N
    return Subgroup(T, np.flatnonzero(N.mask[np.arange(n)]))  # (e, t) sits at index t


def _centralizer_scan(v: Subgroup) -> Subgroup:
    T = v.ambient
    mask = _kernels.centralizer_scan(T.table, np.asarray(v.elements, dtype=np.int32))
    return Subgroup(T, np.flatnonzero(mask))


def centralizer_mono(v: Subgroup) -> CentralizerResult:
    a = _centralizer_via_diagonal(v)
    b = _centralizer_scan(v)
    if a != b:
        raise RouteMismatch(f"centralizer routes disagree: {a} vs {b}")
    _, zeta = a.as_group()
    return CentralizerResult(v, a, zeta)


def verify_centralizer_universal(v: Subgroup, groups) -> dict:
    """Every hom commuting with ``v`` factors uniquely through the centralizer,
    and homs that do not commute do not factor."""
    res = centralizer_mono(v)
    Zg = res.zeta.source
    T = v.ambient
    bad = []
    checked = 0
    for G in groups:
        through = {}
        for row in hom_maps(G, Zg):
            key = np.ascontiguousarray(res.zeta.map[row]).tobytes()
            through[key] = through.get(key, 0) + 1
        for t in hom_maps(G, T):
            checked += 1
            c = commutes(GroupHom(G, T, t, check=False), v)
            n = through.get(np.ascontiguousarray(t).tobytes(), 0)
            if (c is not None and n != 1) or (c is None and n != 0):
                bad.append({"group": G.name, "t": t.tolist(), "factorizations": n})
    return {"checked": checked, "violations": bad, "ok": not bad}


def smith_centralizer(R: Congruence) -> Congruence:
    """Largest congruence whose normal subgroup commutes elementwise with R's."""
    X = R.ambient
    M = np.asarray(R.normal_subgroup.elements, dtype=np.int32)
    cent = _kernels.centralizer_scan(X.table, M)
    passing = [N for N in normal_subgroups(X) if cent[list(N.elements)].all()]
    best = max(passing, key=lambda N: N.order)
    if any(not N <= best for N in passing):
        raise RouteMismatch("commuting normal subgroups have no greatest element")
    return Congruence(best, check=False)


def smith_centralizer_via_distinctive(R: Congruence) -> Congruence:
    """Lower level of the distinctive relation of ``(d0, s0): R -> X``."""
    E, _ = relation_extension(R)
    D = distinctive_relation(E.point)
    return D.D_Y


# ----------------------------------------------------------------------------
# distinctive equivalence relations
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistinctiveRelation:
    point: Point
    D_X: Congruence
    D_Y: Congruence

    def is_discrete(self) -> bool:
        return self.D_X.is_discrete() and self.D_Y.is_discrete()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DistinctiveRelation)
            and self.D_X == other.D_X
            and self.D_Y == other.D_Y
        )

    __hash__ = None


_BOUNDED: dict[tuple[FiniteGroup, int], list[Subgroup]] = {}


def normal_subgroups_of_order(G: FiniteGroup, k: int) -> list[Subgroup]:
    """Normal subgroups of order ``k``, growing products of normal closures
    but never past order ``k``; small groups reuse the full lattice."""
    if G.order <= 16 or k == G.order:
        return [N for N in normal_subgroups(G) if N.order == k]
    key = (G, k)
    if key in _BOUNDED:
        return _BOUNDED[key]
    t = G.table
    closures = set()
    for g in range(G.order):
        c = closure(G, {G.conj(x, g) for x in range(G.order)})
        if len(c) <= k:
            closures.add(c)
    minimal = sorted(closures, key=lambda e: (len(e), e))
    arrs = [np.asarray(m) for m in minimal]
    found = set(minimal)
    frontier = list(minimal)
    while frontier:
        nxt = []
        for N in frontier:
            narr = np.asarray(N)
            nmask = np.zeros(G.order, dtype=bool)
            nmask[narr] = True
            for Mr in arrs:
                if nmask[Mr].all() or len(N) * 2 > k:
                    continue
                prod = tuple(np.unique(t[np.ix_(narr, Mr)]).tolist())
                if len(prod) <= k and prod not in found:
                    found.add(prod)
                    nxt.append(prod)
        frontier = nxt
    out = sorted((Subgroup(G, e) for e in found if len(e) == k), key=lambda H: H.elements)
    _BOUNDED[key] = out
    return out


def _is_cartesian_relation(p: Point, A: Subgroup, B: Subgroup) -> bool:
    """Whether ``(R_A on X, R_B on Y)`` is an equivalence relation on ``p``
    whose two legs are pullback squares, checked on element pairs."""
    _X, Y = p.X, p.Y
    f, s = p.f.map, p.s.map
    if not B.mask[f[list(A.elements)]].all():
        return False
    if not A.mask[s[list(B.elements)]].all():
        return False
    RA = Congruence(A, check=False)
    RB = Congruence(B, check=False)
    x1, x2 = np.nonzero(RA.relation_matrix())
    n_pairs = len(x1)
    ny = Y.order
    # leg d0: (x1, x2) |-> (x1, (f x1, f x2)) onto {(x, (y1, y2)) : f x = y1, y1 ~ y2}
    for keep, other in ((x1, x2), (x2, x1)):
        keys = keep.astype(np.int64) * ny + f[other]
        if len(np.unique(keys)) != n_pairs:
            return False
        fiber = np.bincount(RB.class_of, minlength=RB.n_classes)
        target = int(fiber[RB.class_of[f]].sum())  # sum over x of |class of f x|
        if target != n_pairs:
            return False
    return True


def _distinctive_brute(p: Point, exhaustive: bool = False) -> tuple[Subgroup, Subgroup]:
    X, Y = p.X, p.Y
    Bs = sorted(normal_subgroups(Y), key=lambda B: (-B.order, B.elements))
    valid = []
    for B in Bs:
        for A in normal_subgroups_of_order(X, B.order):
            if _is_cartesian_relation(p, A, B):
                if not exhaustive:
                    return A, B
                valid.append((A, B))
    if not valid:  # the discrete pair always qualifies
        raise RouteMismatch("no cartesian equivalence relation found")
    A, B = valid[0]
    for A2, B2 in valid:
        if not (A2 <= A and B2 <= B):
            raise RouteMismatch("cartesian equivalence relations have no greatest element")
    return A, B


def _distinctive_via_lift(p: Point) -> tuple[Subgroup, Subgroup]:
    """Relations cut out by the K-cartesian lift above the kernel diagonal.

    This is the closed form of the lift into the product extension
    ``f x f: X x X -> Y x Y``, evaluated on pairs: ``(y1, y2)`` is related
    iff ``s y1`` and ``s y2`` act alike on the kernel, and ``(x1, x2)`` iff
    their images are related and their kernel parts coincide.
    """
    X, Y = p.X, p.Y
    E = make_split_extension(p)
    kk = np.asarray(E.k.map)
    xs = np.arange(X.order)
    conj = X.table[X.table[np.ix_(xs, kk)], X.inverse[xs][:, None]]  # x k x^-1
    sy = p.s.map
    same_y = (conj[sy][:, None, :] == conj[sy][None, :, :]).all(axis=2)
    B = Subgroup(Y, np.flatnonzero(same_y[0]))
    kpart, base = E.decomposition
    # x1 ~ x2 iff kernel parts agree and bases are related, i.e. x1 x2^-1 in s(B)
    A = Subgroup(X, np.flatnonzero((kpart == kpart[0]) & B.mask[base]))
    return A, B


def distinctive_relation(p: Point, *, exhaustive: bool = False) -> DistinctiveRelation:
    a = _distinctive_brute(p, exhaustive=exhaustive)
    b = _distinctive_via_lift(p)
    if a != b:
        raise RouteMismatch(f"distinctive relation routes disagree: {a} vs {b}")
    return DistinctiveRelation(p, Congruence(a[0], check=False), Congruence(b[1], check=False))


def product_point(T: FiniteGroup, X: FiniteGroup) -> Point:
    """``(p_T, (1, 0)): T x X -> T``."""
    P = direct_product(T, X)
    nx = X.order
    f = GroupHom(P, T, np.arange(P.order) // nx, check=False)
    s = GroupHom(T, P, np.arange(T.order) * nx, check=False)
    return Point(f, s)


# ----------------------------------------------------------------------------
# eccentric and faithful points
# ----------------------------------------------------------------------------


def _kernel_congruence(p: Point) -> Congruence:
    return Congruence(p.kernel(), check=False)


def is_eccentric(p: Point) -> bool:
    by_relation = distinctive_relation(p).is_discrete()
    Z = smith_centralizer(_kernel_congruence(p))
    by_centralizer = p.s.preimage(Z.normal_subgroup).order == 1
    if by_relation != by_centralizer:
        raise RouteMismatch("eccentricity routes disagree")
    return by_relation


def action_hom_injective(p: Point) -> bool:
    """Injectivity of ``Y -> Aut(K)``, ``y |-> (k |-> s(y) k s(y)^-1)``."""
    X = p.X
    K = np.asarray(p.kernel().elements)
    sy = p.s.map
    act = X.table[X.table[np.ix_(sy, K)], X.inverse[sy][:, None]]
    return len(np.unique(act, axis=0)) == p.Y.order


def faithful_violation(p: Point, cat) -> dict | None:
    """Two distinct parallel P-cartesian maps from a catalog point into ``p``
    that agree on kernels, or None when none exists in the catalog."""
    E = make_split_extension(p)
    kpart_e, _ = E.decomposition
    for eid, E2 in zip(cat.extension_ids, cat.extensions):
        if E2.K.order != E.K.order:
            continue
        hk = hom_maps(E2.K, E.K)
        hk = hk[[len(np.unique(r)) == len(r) for r in hk]]
        if len(hk) == 0:
            continue
        hy = hom_maps(E2.Y, E.Y)
        kpart, base = E2.decomposition
        kk = E.k.map[hk[:, kpart]]
        ss = E.s.map[hy[:, base]]
        tot = E.X.table[kk[None, :, :], ss[:, None, :]].reshape(-1, E2.X.order)
        gens = np.asarray(E2.X.generators, dtype=np.int32)
        ok = _kernels.hom_check(E2.X.table, gens, E.X.table, tot)
        iy, ik = np.divmod(np.flatnonzero(ok), len(hk))
        seen: dict[bytes, bytes] = {}
        for a, b in zip(iy, ik):
            sq = PtMorphism(
                E2.point,
                E.point,
                GroupHom(E2.X, E.X, tot[a * len(hk) + b], check=False),
                GroupHom(E2.Y, E.Y, hy[a], check=False),
            )
            if not is_P_cartesian(sq):
                continue
            key = hk[b].tobytes()
            val = tot[a * len(hk) + b].tobytes()
            if key in seen and seen[key] != val:
                return {"extension": eid, "kernel_map": hk[b].tolist()}
            seen.setdefault(key, val)
    return None


def is_faithful(p: Point, cat=None) -> bool:
    exact = action_hom_injective(p)
    if cat is None:
        return exact
    categorical = faithful_violation(p, cat) is None
    if categorical != exact:
        raise CatalogInsufficient(
            f"catalog check says faithful={categorical} but Y -> Aut(K) injective={exact}"
        )
    return exact


def faithful_cover(p: Point) -> tuple[Point, PtMorphism]:
    """Quotient of ``p`` by its distinctive relation and the quotient square."""
    D = distinctive_relation(p)
    QX, qx = quotient(p.X, D.D_X.normal_subgroup)
    QY, qy = quotient(p.Y, D.D_Y.normal_subgroup)
    reps_y = np.array([int(np.flatnonzero(qy.map == c)[0]) for c in range(QY.order)])
    reps_x = np.array([int(np.flatnonzero(qx.map == c)[0]) for c in range(QX.order)])
    fbar = GroupHom(QX, QY, qy.map[p.f.map[reps_x]])
    sbar = GroupHom(QY, QX, qx.map[p.s.map[reps_y]])
    cover = Point(fbar, sbar)
    sq = PtMorphism(p, cover, qx, qy)
    return cover, sq


# ----------------------------------------------------------------------------
# normal subobjects and their centralizers
# ----------------------------------------------------------------------------


def normcent_check(u: Subgroup, R: Congruence) -> bool:
    if not is_normal_to(u, R):
        raise NotNormal("u is not normal to R")
    lhs = normalization(smith_centralizer(R))
    rhs = centralizer_mono(u).Z
    return lhs == rhs and rhs.is_normal()


def acc_factor_check(v: Subgroup, t: GroupHom) -> GroupHom:
    """The factorization of a map commuting with ``v`` through its normalizer."""
    if commutes(t, v) is None:
        raise NotCommuting("t does not commute with v")
    res = normalizer(v)
    pos = np.full(v.ambient.order, -1, dtype=np.int64)
    pos[res.w.map] = np.arange(res.N_group.order)
    img = pos[t.map]
    if (img < 0).any():
        raise FactorizationMissing("a map commuting with v leaves the normalizer of v")
    h = GroupHom(t.source, res.N_group, img)
    if not np.array_equal(res.w.map[h.map], t.map):
        raise FactorizationMissing("factorization does not compose back to t")
    return h

