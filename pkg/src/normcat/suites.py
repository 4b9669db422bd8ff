"""Named verification suites over the built-in catalog.

Each suite returns a list of case records ``{case_id, verdict, witness}``.
Every suite has its own natural order bound; the configured maximum order
only ever lowers it.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .catalog import build_catalog, builtin_groups
from .centrality import (
    _distinctive_brute,
    _distinctive_via_lift,
    action_hom_injective,
    centralizer_mono,
    faithful_cover,
    faithful_violation,
    normcent_check,
    product_point,
    smith_centralizer,
    smith_centralizer_via_distinctive,
    verify_centralizer_universal,
)
from .errors import NormcatError, UnknownSuite, ValidationError
from .finalg import Congruence, hom_maps, GroupHom, normal_subgroups, normalization, subgroups
from .mset import (
    MSubgroup,
    actions,
    adjunction_violation,
    internal_normalizer,
    largest_stable_normalizing,
    monoid_catalog,
    sample_relations,
    stable_subsets,
    trivial_action,
    verify_internal_closure,
    verify_internal_universal,
)
from .normalizer import fibrancy_suite, k_cartesian_lift, normalizer, normalizer_cases
from .ptcat import (
    J,
    PtMorphism,
    is_P_cartesian,
    k_cartesian_violation,
    pullback_point,
    pullback_se_along_cartesian,
    se_morphism_arrays,
)
from .reports import case
from .topgrp import (
    TopGroup,
    classical_normalizer_mask,
    group_topologies,
    is_normal_topsub,
    maximality_violation,
    members,
    sub_topologies,
    top_normalizer,
)
from .errors import ConditionBFails

# Upper bounds per suite; see the acceptance suite for where they come from.
FIBRANCY_ORDER = 12
EXTENSION_ORDER = 16
PRODUCT_ORDER = 8
MSET_ORDER = 8
TOPOLOGICAL_ORDER = 6
STUCB_SAMPLES = 200
# Per (monoid, group) pair the adjunction check visits at most this many
# actions, spread evenly over the enumeration order.
ACTION_CAP = 64


@dataclass(frozen=True)
class SuiteConfig:
    max_order: int = 16
    suites: tuple[str, ...] = ()
    seed: int = 0
    output_format: str = "json"
    out: str | None = None
    timings: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.max_order < 1:
            raise ValidationError("max_order must be at least 1")
        if self.output_format not in ("json", "text"):
            raise ValidationError(f"unknown format {self.output_format!r}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise UnknownSuite(f"unknown suite(s): {', '.join(unknown)}")


def suite_rng(name: str, seed: int) -> np.random.Generator:
    """Independent stream per suite so that suite selection does not shift samples."""
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


def _guard(case_id: str, fn) -> dict:
    try:
        return fn()
    except NormcatError as exc:
        return case(case_id, False, {"error": type(exc).__name__, "message": str(exc)})


# ----------------------------------------------------------------------------
# normalizers
# ----------------------------------------------------------------------------


def run_fibrancy(max_order: int, rng=None) -> list[dict]:
    bound = min(max_order, FIBRANCY_ORDER)
    cat = build_catalog(bound)
    out = []
    for T in builtin_groups(bound):
        for v in subgroups(T):
            cid = f"fibrancy/{T.name}/U{list(v.elements)}"

            def one(v=v, cid=cid):
                bad = k_cartesian_violation(k_cartesian_lift(v), cat)
                return case(cid, bad is None, bad)

            out.append(_guard(cid, one))
    return out


def run_fibrant_lifts(max_order: int, rng=None) -> list[dict]:
    return fibrancy_suite(build_catalog(min(max_order, FIBRANCY_ORDER)))


def run_monicity(max_order: int, rng=None) -> list[dict]:
    out = []
    for T in builtin_groups(min(max_order, FIBRANCY_ORDER)):
        for v in subgroups(T):
            res = normalizer(v)
            out.append(case(f"monicity/{T.name}/U{list(v.elements)}", res.w.is_injective(),
                            {"N_order": res.N.order}))
    return out


def run_universality(max_order: int, rng=None) -> list[dict]:
    bound = min(max_order, FIBRANCY_ORDER)
    cat = build_catalog(bound)
    out = []
    for T in builtin_groups(bound):
        out.extend(normalizer_cases(T, cat, universal=True))
    return out


# ----------------------------------------------------------------------------
# points: eccentricity, faithfulness, distinctive relations
# ----------------------------------------------------------------------------


def _extension_points(max_order: int):
    bound = min(max_order, EXTENSION_ORDER)
    cat = build_catalog(bound, bound)
    return cat, [(eid, E) for eid, E in zip(cat.extension_ids, cat.extensions) if E.X.order <= bound]


def eccentric_faithful_verdicts(p, cat) -> dict:
    """The independent verdicts on a point that must all coincide."""
    A, B = _distinctive_brute(p, exhaustive=True)
    A2, B2 = _distinctive_via_lift(p)
    Z = smith_centralizer(Congruence(p.kernel(), check=False))
    return {
        "distinctive_discrete": A.order == 1 and B.order == 1,
        "distinctive_routes_agree": A == A2 and B == B2,
        "centralizer_trivial": p.s.preimage(Z.normal_subgroup).order == 1,
        "action_injective": action_hom_injective(p),
        "no_parallel_cartesian_pair": faithful_violation(p, cat) is None,
    }


def run_eccentric_faithful(max_order: int, rng=None) -> list[dict]:
    cat, pts = _extension_points(max_order)
    out = []
    for eid, E in pts:
        cid = f"eccentric-faithful/{eid}"

        def one(E=E, cid=cid):
            v = eccentric_faithful_verdicts(E.point, cat)
            routes = v.pop("distinctive_routes_agree")
            return case(cid, routes and len(set(v.values())) == 1, v)

        out.append(_guard(cid, one))
    return out


def run_faithful_cover(max_order: int, rng=None) -> list[dict]:
    cat, pts = _extension_points(max_order)
    out = []
    for eid, E in pts:
        cid = f"faithful-cover/{eid}"

        def one(E=E, cid=cid):
            cover, sq = faithful_cover(E.point)
            w = {
                "cover_order": [cover.X.order, cover.Y.order],
                "p_cartesian": is_P_cartesian(sq),
                "action_injective": action_hom_injective(cover),
                "no_parallel_cartesian_pair": faithful_violation(cover, cat) is None,
            }
            ok = w["p_cartesian"] and w["action_injective"] and w["no_parallel_cartesian_pair"]
            return case(cid, ok, w)

        out.append(_guard(cid, one))
    return out


def run_indis(max_order: int, rng=None) -> list[dict]:
    groups = builtin_groups(min(max_order, PRODUCT_ORDER))
    out = []
    for T in groups:
        for X in groups:
            cid = f"indis/{T.name}x{X.name}"

            def one(T=T, X=X, cid=cid):
                p = product_point(T, X)
                A, B = _distinctive_brute(p, exhaustive=True)
                A2, B2 = _distinctive_via_lift(p)
                expected_x = tuple(range(0, T.order * X.order, X.order))  # T x {e}
                ok = A == A2 and B == B2 and B.order == T.order and A.elements == expected_x
                return case(cid, ok, {"D_X": A, "D_Y": B})

            out.append(_guard(cid, one))
    return out


# ----------------------------------------------------------------------------
# centralizers
# ----------------------------------------------------------------------------


def run_centralizers(max_order: int, rng=None) -> list[dict]:
    groups = builtin_groups(min(max_order, EXTENSION_ORDER))
    small = builtin_groups(min(max_order, 6))
    out = []
    for T in groups:
        for u in normal_subgroups(T):
            cid = f"centralizers/{T.name}/U{list(u.elements)}"

            def one(T=T, u=u, cid=cid):
                R = Congruence(u, check=False)
                Z = smith_centralizer(R)
                res = centralizer_mono(u)
                w = {
                    "Z": res.Z,
                    "normalization_matches": normalization(Z) == res.Z,
                    "normcent": normcent_check(u, R),
                    "distinctive_matches": smith_centralizer_via_distinctive(R) == Z,
                }
                if T.order <= 8:
                    w["universal"] = verify_centralizer_universal(u, small)["ok"]
                ok = all(v for k, v in w.items() if k != "Z")
                return case(cid, ok, w)

            out.append(_guard(cid, one))
    return out


# ----------------------------------------------------------------------------
# pullback stability of K-cartesian lifts
# ----------------------------------------------------------------------------


def _cartesian_squares_into(T, cat, rng):
    """P-cartesian squares into ``J(T)``: pullbacks along sampled homs and
    squares from catalog extensions whose kernel has order ``|T|``."""
    target = J(T).point
    out = []
    for Y in cat.groups:
        hs = hom_maps(Y, T)
        if len(hs):
            h = hs[rng.integers(len(hs))]
            _, sq = pullback_point(GroupHom(Y, T, h, check=False), target)
            out.append(("pullback", Y.name, sq))
    for eid, E in zip(cat.extension_ids, cat.extensions):
        if E.K.order != T.order:
            continue
        _, tot, base = se_morphism_arrays(E, J(T))
        for i in range(len(tot)):
            sq = PtMorphism(E.point, target, GroupHom(E.X, J(T).X, tot[i], check=False),
                            GroupHom(E.Y, T, base[i], check=False))
            if is_P_cartesian(sq):
                out.append(("catalog", eid, sq))
    return out


def run_stucb(max_order: int, rng=None, samples: int = STUCB_SAMPLES) -> list[dict]:
    rng = rng if rng is not None else suite_rng("stucb", 0)
    bound = min(max_order, FIBRANCY_ORDER)
    cat = build_catalog(bound)
    bases = [T for T in builtin_groups(min(bound, 6))]
    pool = []
    for T in bases:
        squares = _cartesian_squares_into(T, cat, rng)
        for v in subgroups(T):
            for sq in squares:
                pool.append((T, v, sq))
    if not pool:
        return []
    picks = rng.choice(len(pool), size=min(samples, len(pool)), replace=False)
    out = []
    for i in sorted(int(x) for x in picks):
        T, v, (kind, src, sq) = pool[i]
        cid = f"stucb/{T.name}/U{list(v.elements)}/{kind}:{src}#{i}"

        def one(T=T, v=v, sq=sq, cid=cid):
            lift = k_cartesian_lift(v)
            pulled = pullback_se_along_cartesian(lift, sq)
            bad = k_cartesian_violation(pulled, cat)
            return case(cid, bad is None, bad)

        out.append(_guard(cid, one))
    return out


# ----------------------------------------------------------------------------
# internal groups in M-sets
# ----------------------------------------------------------------------------


def _capped(acts: list, cap: int) -> list:
    if len(acts) <= cap:
        return acts
    return [acts[i] for i in np.linspace(0, len(acts) - 1, cap).astype(int)]


def run_mset(max_order: int, rng=None, cap: int = ACTION_CAP) -> list[dict]:
    rng = rng if rng is not None else suite_rng("mset", 0)
    out = []
    # reduction: trivial monoid gives back the classical normalizer
    M1 = monoid_catalog()[0]
    for T in builtin_groups(min(max_order, EXTENSION_ORDER)):
        G = trivial_action(T, M1)
        for v in subgroups(T):
            r = internal_normalizer(MSubgroup(G, v.elements))
            N = normalizer(v).N
            out.append(case(f"mset-trivial/{T.name}/U{list(v.elements)}", r.X.subgroup == N,
                            {"X": r.X.elements, "N": N}))
    # adjunction and normalizer properties under genuine actions
    for M in monoid_catalog():
        for T in builtin_groups(min(max_order, MSET_ORDER)):
            all_acts = actions(M, T)
            for ai, G in enumerate(_capped(all_acts, cap)):
                subs = stable_subsets(G)
                for H in G.stable_subgroups:
                    U = MSubgroup(G, H.elements)
                    cid = f"mset/{M.name}/{T.name}/a{ai}/U{list(H.elements)}"

                    def one(G=G, U=U, subs=subs, cid=cid):
                        rels = sample_relations(G, U, rng, 2)
                        bad = [adjunction_violation(S, G, U, subs) for S in rels]
                        bad = [b for b in bad if b is not None]
                        r = internal_normalizer(U)
                        closure = verify_internal_closure(U)["ok"]
                        largest = r.X.subgroup == largest_stable_normalizing(U)
                        universal = verify_internal_universal(U, r)["ok"] if T.order <= 4 else True
                        ok = not bad and closure and largest and universal
                        return case(cid, ok, {"relations": len(rels), "adjunction": bad[:1],
                                              "closure": closure, "largest": largest, "universal": universal})

                    out.append(_guard(cid, one))
    return out


# ----------------------------------------------------------------------------
# topological groups
# ----------------------------------------------------------------------------


def run_topological(max_order: int, rng=None) -> list[dict]:
    out = []
    for G in builtin_groups(min(max_order, TOPOLOGICAL_ORDER)):
        for ti, top in enumerate(group_topologies(G)):
            B = TopGroup(G, top)
            for H in subgroups(G):
                for kind, At in sub_topologies(B, H).items():
                    cid = f"topological/{G.name}/t{ti}/A{list(H.elements)}/{kind}"

                    def one(G=G, B=B, At=At, top=top, cid=cid):
                        w = {"normal": is_normal_topsub(At, B)}
                        ok = True
                        try:
                            r = top_normalizer(At, B)
                        except ConditionBFails:
                            w["normalizer"] = None
                        else:
                            cl = classical_normalizer_mask(G, At.carrier)
                            w["normalizer"] = members(r.N.carrier)
                            ok &= r.N.carrier & ~cl == 0
                            if top.is_discrete():
                                ok &= r.N.carrier == cl
                            ok &= maximality_violation(r) is None
                        return case(cid, ok, w)

                    out.append(_guard(cid, one))
    return out


SUITES = {
    "fibrancy": run_fibrancy,
    "fibrant-lifts": run_fibrant_lifts,
    "monicity": run_monicity,
    "universality": run_universality,
    "eccentric-faithful": run_eccentric_faithful,
    "indis": run_indis,
    "faithful-cover": run_faithful_cover,
    "centralizers": run_centralizers,
    "stucb": run_stucb,
    "mset": run_mset,
    "topological": run_topological,
}


def run_suite(name: str, max_order: int, seed: int = 0) -> list[dict]:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite: {name}")
    return SUITES[name](max_order, suite_rng(name, seed))


__all__ = ["SuiteConfig", "SUITES", "run_suite", "suite_rng", "eccentric_faithful_verdicts"]
