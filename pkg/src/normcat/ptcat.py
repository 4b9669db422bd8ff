"""Points and split extensions of finite groups, their morphisms, and the
brute-force checkers for K-cartesian and P-cartesian maps.

A *point* is a split epimorphism ``f: X -> Y`` with section ``s``; a *split
extension* additionally fixes an injective ``k: K -> X`` onto the kernel of
``f``.  ``K`` is the kernel functor ``SplitExtension -> Group`` and ``J`` its
canonical section ``T |-> (p0: T x T -> T, s0, (0, 1))``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import (
    AmbientMismatch,
    CodomainMismatch,
    NoFactorization,
    NotCartesianInput,
    NotReflexive,
    NotSplit,
    NotSurjective,
    ValidationError,
)
from .finalg import (
    Congruence,
    FiniteGroup,
    GroupHom,
    Subgroup,
    automorphism_group,
    direct_product,
    hom_maps,
    identity_hom,
)

_SQUARES: dict[FiniteGroup, FiniteGroup] = {}


def square(X: FiniteGroup) -> FiniteGroup:
    """Cached ``X x X``; the pair ``(a, b)`` is element ``a * |X| + b``."""
    sq = _SQUARES.get(X)
    if sq is None:
        sq = direct_product(X, X)
        _SQUARES[X] = sq
    return sq


@dataclass(frozen=True, eq=False)
class Point:
    f: GroupHom
    s: GroupHom

    def __post_init__(self):
        if self.f.source != self.s.target or self.f.target != self.s.source:
            raise NotSplit("f: X -> Y and s: Y -> X do not match up")
        if not np.array_equal(self.f.map[self.s.map], np.arange(self.Y.order)):
            raise NotSplit("f o s is not the identity")

    @property
    def X(self) -> FiniteGroup:
        return self.f.source

    @property
    def Y(self) -> FiniteGroup:
        return self.f.target

    def kernel(self) -> Subgroup:
        return self.f.kernel()


@dataclass(frozen=True, eq=False)
class PtMorphism:
    """A commutative square between points: ``on_total: X' -> X`` over ``on_base``."""

    source: Point
    target: Point
    on_total: GroupHom
    on_base: GroupHom

    def __post_init__(self):
        src, tgt = self.source, self.target
        if self.on_total.source != src.X or self.on_total.target != tgt.X:
            raise AmbientMismatch("on_total has the wrong domain or codomain")
        if self.on_base.source != src.Y or self.on_base.target != tgt.Y:
            raise AmbientMismatch("on_base has the wrong domain or codomain")
        if not np.array_equal(tgt.f.map[self.on_total.map], self.on_base.map[src.f.map]):
            raise ValidationError("square with the split epimorphisms does not commute")
        if not np.array_equal(self.on_total.map[src.s.map], tgt.s.map[self.on_base.map]):
            raise ValidationError("square with the sections does not commute")


class SplitExtension:
    """A point together with a chosen kernel ``k: K -> X``."""

    def __init__(self, point: Point, k: GroupHom, name: str | None = None):
        if k.target != point.X:
            raise AmbientMismatch("kernel inclusion does not land in X")
        if not k.is_injective():
            raise ValidationError("kernel map is not injective")
        if k.image() != point.kernel():
            raise ValidationError("k is not onto the kernel of f")
        self.point = point
        self.k = k
        self.name = name

    f = property(lambda self: self.point.f)
    s = property(lambda self: self.point.s)
    X = property(lambda self: self.point.X)
    Y = property(lambda self: self.point.Y)
    K = property(lambda self: self.k.source)

    def __repr__(self) -> str:
        return f"SplitExtension({self.name or '?'}: |K|={self.K.order}, |X|={self.X.order}, |Y|={self.Y.order})"

    @property
    def kernel(self) -> Subgroup:
        return self.k.image()

    @cached_property
    def kernel_index(self) -> np.ndarray:
        """X element -> index in K, or -1 off the kernel."""
        idx = np.full(self.X.order, -1, dtype=np.int64)
        idx[self.k.map] = np.arange(self.K.order)
        return idx

    @cached_property
    def decomposition(self) -> tuple[np.ndarray, np.ndarray]:
        """``x = k(kpart[x]) * s(base[x])`` for every x, as two index arrays."""
        X = self.X
        base = self.f.map.astype(np.int64)
        sx = self.s.map[base]
        kx = X.table[np.arange(X.order), X.inverse[sx]]
        return self.kernel_index[kx], base


@dataclass(frozen=True, eq=False)
class SEMorphism:
    """A morphism of split extensions (kernel, total and base components)."""

    source: SplitExtension
    target: SplitExtension
    on_kernel: GroupHom
    on_total: GroupHom
    on_base: GroupHom

    def __post_init__(self):
        src, tgt = self.source, self.target
        PtMorphism(src.point, tgt.point, self.on_total, self.on_base)
        if self.on_kernel.source != src.K or self.on_kernel.target != tgt.K:
            raise AmbientMismatch("on_kernel has the wrong domain or codomain")
        if not np.array_equal(self.on_total.map[src.k.map], tgt.k.map[self.on_kernel.map]):
            raise ValidationError("square with the kernels does not commute")

    @property
    def pt(self) -> PtMorphism:
        return PtMorphism(self.source.point, self.target.point, self.on_total, self.on_base)

    def __matmul__(self, other: "SEMorphism") -> "SEMorphism":
        return SEMorphism(
            other.source,
            self.target,
            self.on_kernel @ other.on_kernel,
            self.on_total @ other.on_total,
            self.on_base @ other.on_base,
        )

    def same_as(self, other: "SEMorphism") -> bool:
        return (
            self.on_kernel == other.on_kernel
            and self.on_total == other.on_total
            and self.on_base == other.on_base
        )


def identity_se(E: SplitExtension) -> SEMorphism:
    return SEMorphism(E, E, identity_hom(E.K), identity_hom(E.X), identity_hom(E.Y))


@dataclass(frozen=True, eq=False)
class Action:
    base: FiniteGroup
    kernel_group: FiniteGroup
    act: GroupHom

    def __post_init__(self):
        aut, _ = automorphism_group(self.kernel_group)
        if self.act.source != self.base or self.act.target != aut:
            raise AmbientMismatch("act must be a hom base -> Aut(kernel_group)")

    def automorphism(self, y: int) -> np.ndarray:
        _, autos = automorphism_group(self.kernel_group)
        return autos[self.act(y)].map


# ----------------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------------


def make_split_extension(p: Point) -> SplitExtension:
    if not p.f.is_surjective():
        raise NotSurjective("f is not surjective")
    _, k = p.kernel().as_group()
    return SplitExtension(p, k)


def semidirect(action: Action) -> SplitExtension:
    """``K x| Y`` on pairs ``(k, y)`` stored at ``k * |Y| + y``."""
    K, Y = action.kernel_group, action.base
    nk, ny = K.order, Y.order
    autos = np.stack([action.automorphism(y) for y in range(ny)])  # (ny, nk)
    k1 = np.repeat(np.arange(nk), ny)
    y1 = np.tile(np.arange(ny), nk)
    # (k1, y1)(k2, y2) = (k1 * a_{y1}(k2), y1 y2)
    kk = K.table[k1[:, None], autos[y1][:, k1]]
    yy = Y.table[y1[:, None], y1[None, :]]
    table = kk.astype(np.int64) * ny + yy
    kl = K.labels if K.labels is not None else range(nk)
    yl = Y.labels if Y.labels is not None else range(ny)
    labels = [(a, b) for a in kl for b in yl]
    X = FiniteGroup(table, name=f"{K.name}x|{Y.name}", labels=labels, trusted=True)
    f = GroupHom(X, Y, np.arange(nk * ny) % ny, check=False)
    s = GroupHom(Y, X, np.arange(ny), check=False)
    k = GroupHom(K, X, np.arange(nk) * ny, check=False)
    return SplitExtension(Point(f, s), k, name=X.name)


def enumerate_points_with_kernel(K: FiniteGroup, Y: FiniteGroup) -> list[SplitExtension]:
    """One semidirect product per hom ``Y -> Aut(K)``."""
    if Y.order == 1:
        # only the trivial action exists; skip building Aut(K)
        return [_trivial_base_extension(K)]
    aut, _ = automorphism_group(K)
    return [semidirect(Action(Y, K, GroupHom(Y, aut, row, check=False))) for row in hom_maps(Y, aut)]


def _trivial_base_extension(K: FiniteGroup) -> SplitExtension:
    from .catalog import cyclic

    one = cyclic(1)
    f = GroupHom(K, one, np.zeros(K.order), check=False)
    s = GroupHom(one, K, [0], check=False)
    return SplitExtension(Point(f, s), identity_hom(K), name=f"{K.name}x|Z1")


_J_CACHE: dict[FiniteGroup, SplitExtension] = {}


def J(T: FiniteGroup) -> SplitExtension:
    """``(0, 1): T -> T x T``, ``p0: T x T -> T``, ``s0`` the diagonal."""
    E = _J_CACHE.get(T)
    if E is None:
        n = T.order
        TT = square(T)
        idx = np.arange(n * n)
        f = GroupHom(TT, T, idx // n, check=False)
        s = GroupHom(T, TT, np.arange(n) * (n + 1), check=False)
        k = GroupHom(T, TT, np.arange(n), check=False)
        E = SplitExtension(Point(f, s), k, name=f"J({T.name})")
        _J_CACHE[T] = E
    return E


def J_map(h: GroupHom) -> SEMorphism:
    """J on arrows: ``(h, h x h, h)``."""
    A, B = h.source, h.target
    na, nb = A.order, B.order
    idx = np.arange(na * na)
    tot = h.map[idx // na].astype(np.int64) * nb + h.map[idx % na]
    return SEMorphism(J(A), J(B), h, GroupHom(square(A), square(B), tot, check=False), h)


def relation_extension(R: Congruence) -> tuple[SplitExtension, GroupHom]:
    """The split extension ``d0: R -> X`` with section ``s0`` and kernel
    ``(0, u): N -> R`` where N is the normalization; also returns ``d1``."""
    X = R.ambient
    n = X.order
    M = R.relation_matrix()
    pairs = np.flatnonzero(M.ravel())  # a * n + b, sorted
    Rg, inc = Subgroup(square(X), pairs).as_group()
    d0 = GroupHom(Rg, X, inc.map // n, check=False)
    d1 = GroupHom(Rg, X, inc.map % n, check=False)
    pos = np.full(n * n, -1, dtype=np.int64)
    pos[pairs] = np.arange(len(pairs))
    s0 = GroupHom(X, Rg, pos[np.arange(n) * (n + 1)], check=False)
    N = R.normal_subgroup
    Ng, _ = N.as_group()
    k = GroupHom(Ng, Rg, pos[np.asarray(N.elements)], check=False)  # u |-> (0, u)
    return SplitExtension(Point(d0, s0), k, name="Rel"), d1


def relation_to_congruence(X: FiniteGroup, rel: Subgroup) -> Congruence:
    """Read a reflexive relation given as a subgroup of ``X x X`` as a congruence.

    In groups every reflexive relation that is a subgroup is an equivalence
    relation; symmetry and transitivity are checked anyway.
    """
    n = X.order
    if rel.ambient != square(X):
        raise AmbientMismatch("relation is not a subgroup of X x X")
    M = rel.mask.reshape(n, n)
    if not M[np.arange(n), np.arange(n)].all():
        raise NotReflexive("relation does not contain the diagonal")
    if not np.array_equal(M, M.T):
        raise ValidationError("reflexive subgroup relation is not symmetric")
    Mi = M.astype(np.int64)
    if not np.array_equal((Mi @ Mi) > 0, M):
        raise ValidationError("reflexive subgroup relation is not transitive")
    normal = Subgroup(X, np.flatnonzero(M[0]))
    R = Congruence(normal)
    if not np.array_equal(R.relation_matrix(), M):
        raise ValidationError("relation is not the coset relation of its identity class")
    return R


# ----------------------------------------------------------------------------
# morphism enumeration and universal-property oracles
# ----------------------------------------------------------------------------

_SE_CACHE: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def se_morphism_arrays(E1: SplitExtension, E2: SplitExtension, *, cache: bool = False):
    """All morphisms ``E1 -> E2`` as arrays ``(kernel maps, total maps, base maps)``.

    A morphism is fixed by its base and kernel components because every
    ``x`` in ``X1`` is ``k1(a) * s1(y)``; each (base, kernel) pair of homs is
    extended by ``k2(phi_K(a)) * s2(phi_Y(y))`` and kept iff that is a hom.
    """
    key = (id(E1), id(E2))
    if cache and key in _SE_CACHE:
        return _SE_CACHE[key]
    hy = hom_maps(E1.Y, E2.Y)
    hk = hom_maps(E1.K, E2.K)
    kpart, base = E1.decomposition
    kk = E2.k.map[hk[:, kpart]]  # (Pk, n1)
    ss = E2.s.map[hy[:, base]]  # (Py, n1)
    tot = E2.X.table[kk[None, :, :], ss[:, None, :]]  # k2(.) * s2(.)
    n1 = E1.X.order
    tot = tot.reshape(-1, n1)
    gens = np.asarray(E1.X.generators, dtype=np.int32)
    ok = _kernels.hom_check(E1.X.table, gens, E2.X.table, tot)
    iy, ik = np.divmod(np.flatnonzero(ok), len(hk))
    out = (np.ascontiguousarray(hk[ik]), np.ascontiguousarray(tot[ok]), np.ascontiguousarray(hy[iy]))
    if cache:
        _SE_CACHE[key] = out
        # keep both objects alive for as long as the cache entry uses their ids
        _SE_KEEP.append((E1, E2))
    return out


_SE_KEEP: list = []


def clear_caches() -> None:
    _SE_CACHE.clear()
    _SE_KEEP.clear()


def se_morphisms(E1: SplitExtension, E2: SplitExtension) -> list[SEMorphism]:
    ker, tot, base = se_morphism_arrays(E1, E2)
    return [
        SEMorphism(
            E1,
            E2,
            GroupHom(E1.K, E2.K, a, check=False),
            GroupHom(E1.X, E2.X, b, check=False),
            GroupHom(E1.Y, E2.Y, c, check=False),
        )
        for a, b, c in zip(ker, tot, base)
    ]


def _extensions_of(cat) -> Iterable[tuple[str, SplitExtension]]:
    if hasattr(cat, "extensions"):
        ids = getattr(cat, "extension_ids", None) or [str(i) for i in range(len(cat.extensions))]
        return zip(ids, cat.extensions)
    return ((str(i), E) for i, E in enumerate(cat))


def k_cartesian_violation(m: SEMorphism, cat, *, strict: bool = False) -> dict | None:
    """First witness against ``m`` being K-cartesian relative to ``cat``, or None.

    For every ``E`` in the catalog, every morphism ``psi: E -> target`` and
    every ``g: K(E) -> K(source)`` with ``K(m) o g == K(psi)``, there must be
    exactly one ``theta: E -> source`` with ``K(theta) == g`` and
    ``m o theta == psi``.  By default ``g`` ranges over isomorphisms, which
    is the kernel-preserving form used when lifting normalizers; with
    ``strict=True`` it ranges over every hom.
    """
    src, tgt = m.source, m.target
    mk, mx = m.on_kernel.map, m.on_total.map
    for eid, E in _extensions_of(cat):
        if not strict and E.K.order != src.K.order:
            continue
        gs_all = hom_maps(E.K, src.K)
        if not strict:
            gs_all = gs_all[[len(np.unique(g)) == len(g) for g in gs_all]]
        if len(gs_all) == 0:
            continue
        ps_ker, ps_tot, _ = se_morphism_arrays(E, tgt, cache=True)
        if len(ps_tot) == 0:
            continue
        factors: dict[bytes, list[bytes]] = defaultdict(list)
        for g in gs_all:
            factors[np.ascontiguousarray(mk[g]).tobytes()].append(g.tobytes())
        wanted = [i for i in range(len(ps_tot)) if ps_ker[i].tobytes() in factors]
        if not wanted:
            continue
        th_ker, th_tot, _ = se_morphism_arrays(E, src)
        buckets: dict[bytes, list[bytes]] = defaultdict(list)
        for kr, tr in zip(th_ker, mx[th_tot]):
            buckets[np.ascontiguousarray(tr).tobytes()].append(kr.tobytes())
        for i in wanted:
            lifts = buckets.get(ps_tot[i].tobytes(), [])
            for g in factors[ps_ker[i].tobytes()]:
                c = lifts.count(g)
                if c != 1:
                    return {
                        "extension": eid,
                        "psi_total": ps_tot[i].tolist(),
                        "kernel_factor": np.frombuffer(g, dtype=np.int32).tolist(),
                        "lifts": c,
                    }
    return None


def is_K_cartesian(m: SEMorphism, cat, *, strict: bool = False) -> bool:
    """K-cartesianness of ``m``, certified relative to the catalog ``cat``."""
    return k_cartesian_violation(m, cat, strict=strict) is None


def is_P_cartesian(square_: PtMorphism) -> bool:
    """Whether the square is a pullback: ``X' -> X x_Y Y'`` is bijective."""
    src, tgt = square_.source, square_.target
    x = square_.on_total.map.astype(np.int64)
    yb = src.f.map.astype(np.int64)
    ny = src.Y.order
    pairs = x * ny + yb
    if len(np.unique(pairs)) != src.X.order:
        return False
    fiber = np.bincount(tgt.f.map, minlength=tgt.Y.order)
    return int(fiber[square_.on_base.map].sum()) == src.X.order


def pullback_point(p: GroupHom, pt: Point) -> tuple[Point, PtMorphism]:
    """Pull ``pt`` back along ``p: Y' -> Y``; returns the point and the cartesian square."""
    if p.target != pt.Y:
        raise CodomainMismatch("p does not land in the base of the point")
    X, Y2 = pt.X, p.source
    n2 = Y2.order
    XY = direct_product(X, Y2)
    xs = np.repeat(np.arange(X.order), n2)
    ys = np.tile(np.arange(n2), X.order)
    members = np.flatnonzero(pt.f.map[xs] == p.map[ys])
    P, inc = Subgroup(XY, members).as_group()
    pos = np.full(XY.order, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))
    f2 = GroupHom(P, Y2, inc.map % n2, check=False)
    s2 = GroupHom(Y2, P, pos[pt.s.map[p.map].astype(np.int64) * n2 + np.arange(n2)], check=False)
    new = Point(f2, s2)
    sq = PtMorphism(new, pt, GroupHom(P, X, inc.map // n2, check=False), p)
    return new, sq


def _fiber_product(a: np.ndarray, b: np.ndarray, A: FiniteGroup, B: FiniteGroup):
    """Subgroup ``{(x, y) : a(x) == b(y)}`` of ``A x B`` with projections."""
    AB = direct_product(A, B)
    nb = B.order
    members = np.flatnonzero((a[:, None] == b[None, :]).ravel())
    P, inc = Subgroup(AB, members).as_group()
    pos = np.full(AB.order, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))
    return P, inc.map // nb, inc.map % nb, pos


def pullback_se(m: SEMorphism, c: SEMorphism) -> tuple[SplitExtension, SEMorphism, SEMorphism]:
    """Pullback of ``m: E1 -> E2`` along ``c: E3 -> E2`` computed levelwise.

    ``K(c)`` must be injective and ``K(m)`` must factor through it (by
    ``w``); the kernel of the pullback is then ``K(E1)`` itself.  Returns the
    pullback and its projections to ``E3`` (above ``w``) and to ``E1``.
    """
    if m.target is not c.target and not (
        m.target.X == c.target.X and np.array_equal(m.target.k.map, c.target.k.map)
    ):
        raise AmbientMismatch("m and c have different codomains")
    if not c.on_kernel.is_injective():
        raise NoFactorization("kernel component of the second map is not injective")
    E1, E3 = m.source, c.source
    where = np.full(c.target.K.order, -1, dtype=np.int64)
    where[c.on_kernel.map] = np.arange(E3.K.order)
    w_map = where[m.on_kernel.map]
    if (w_map < 0).any():
        raise NoFactorization("K(m) does not factor through K(c)")
    w = GroupHom(E1.K, E3.K, w_map, check=False)

    PX, pr1x, pr2x, posx = _fiber_product(m.on_total.map, c.on_total.map, E1.X, E3.X)
    PY, pr1y, pr2y, posy = _fiber_product(m.on_base.map, c.on_base.map, E1.Y, E3.Y)
    n3x, n3y = E3.X.order, E3.Y.order
    fP = posy[E1.f.map[pr1x].astype(np.int64) * n3y + E3.f.map[pr2x]]
    sP = posx[E1.s.map[pr1y].astype(np.int64) * n3x + E3.s.map[pr2y]]
    kP = posx[E1.k.map.astype(np.int64) * n3x + E3.k.map[w_map]]
    P = SplitExtension(
        Point(GroupHom(PX, PY, fP, check=False), GroupHom(PY, PX, sP, check=False)),
        GroupHom(E1.K, PX, kP, check=False),
        name="pullback",
    )
    to3 = SEMorphism(P, E3, w, GroupHom(PX, E3.X, pr2x, check=False), GroupHom(PY, E3.Y, pr2y, check=False))
    to1 = SEMorphism(P, E1, identity_hom(E1.K), GroupHom(PX, E1.X, pr1x, check=False), GroupHom(PY, E1.Y, pr1y, check=False))
    return P, to3, to1


def kernel_component(sq: PtMorphism, src: SplitExtension, tgt: SplitExtension) -> GroupHom:
    """The map induced on chosen kernels by a square between their points."""
    img = sq.on_total.map[src.k.map]
    ki = tgt.kernel_index[img]
    if (ki < 0).any():
        raise ValidationError("square does not map kernel into kernel")
    return GroupHom(src.K, tgt.K, ki, check=False)


def pullback_se_along_cartesian(m: SEMorphism, cart: PtMorphism, cat=None) -> SEMorphism:
    """Pull a K-cartesian ``m`` back along a P-cartesian square into its target.

    The square ``cart: p' -> point(target)`` becomes the morphism of split
    extensions ``(xi, x, y)`` with ``p'`` given its canonical chosen kernel;
    the result is the projection of the pullback onto ``p'``.
    """
    if cart.target.X != m.target.X or not np.array_equal(cart.target.f.map, m.target.f.map):
        raise CodomainMismatch("square does not land in the target of m")
    if not is_P_cartesian(cart):
        raise NotCartesianInput("square is not P-cartesian")
    if cat is not None and not is_K_cartesian(m, cat):
        raise NotCartesianInput("m is not K-cartesian over the catalog")
    E3 = make_split_extension(cart.source)
    c = SEMorphism(E3, m.target, kernel_component(cart, E3, m.target), cart.on_total, cart.on_base)
    _, to3, _ = pullback_se(m, c)
    return to3


def point_identity_square(p: Point) -> PtMorphism:
    return PtMorphism(p, p, identity_hom(p.X), identity_hom(p.Y))
