"""Property-based checks of algebraic laws over randomly drawn catalog data."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from normcat.catalog import builtin_groups
from normcat.centrality import action_hom_injective, centralizer_mono, distinctive_relation, is_eccentric, product_point
from normcat.finalg import Congruence, GroupHom, hom_maps, normal_subgroups, normalization, subgroups
from normcat.mset import MSubgroup, actions, adjunction_violation, internal_normalizer, largest_stable_normalizing, monoid_catalog, sample_relations
from normcat.normalizer import normalizer
from normcat.ptcat import enumerate_points_with_kernel, is_P_cartesian, make_split_extension, pullback_point
from normcat.topgrp import TopGroup, group_topologies, is_normal_topsub, sub_topologies

SMALL = builtin_groups(12)
TINY = builtin_groups(6)
SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

groups = st.sampled_from(SMALL)


@st.composite
def group_and_subgroup(draw, pool=SMALL):
    G = draw(st.sampled_from(pool))
    H = draw(st.sampled_from(subgroups(G)))
    return G, H


@SETTINGS
@given(group_and_subgroup())
def test_subgroup_is_normal_in_its_normalizer(gh):
    G, H = gh
    res = normalizer(H)
    assert H <= res.N
    assert all(G.conj(n, h) in H for n in res.N.elements for h in H.elements)
    assert normalization(res.R_v) == res.U_in_N


@SETTINGS
@given(group_and_subgroup())
def test_centralizer_inside_normalizer(gh):
    _, H = gh
    assert centralizer_mono(H).Z <= normalizer(H).N


@SETTINGS
@given(group_and_subgroup())
def test_normalizer_is_idempotent_on_normal_subgroups(gh):
    G, H = gh
    N = normalizer(H).N
    Ng, inc = N.as_group()
    H_in_N = inc.preimage(H)
    assert H_in_N.is_normal()
    assert normalizer(H_in_N).N == Ng.whole()


@SETTINGS
@given(groups, groups, groups)
def test_hom_composition_closed(A, B, C):
    ab, bc = hom_maps(A, B), hom_maps(B, C)
    ac = {r.tobytes() for r in hom_maps(A, C)}
    for f in ab[:5]:
        for g in bc[:5]:
            assert np.ascontiguousarray(g[f]).tobytes() in ac


@SETTINGS
@given(groups)
def test_congruence_relation_is_equivalence(G):
    for N in normal_subgroups(G):
        M = Congruence(N, check=False).relation_matrix()
        assert M.diagonal().all() and (M == M.T).all()
        assert ((M.astype(int) @ M.astype(int)) > 0).sum() == M.sum()


@SETTINGS
@given(st.sampled_from(builtin_groups(4)), st.sampled_from(builtin_groups(4)), st.data())
def test_pullbacks_of_points_are_cartesian(Y2, Y, data):
    p = product_point(Y, Y)
    rows = hom_maps(Y2, Y)
    h = rows[data.draw(st.integers(0, len(rows) - 1))]
    P, sq = pullback_point(GroupHom(Y2, Y, h), p)
    assert is_P_cartesian(sq) and make_split_extension(P).K.order == Y.order


@SETTINGS
@given(st.sampled_from(builtin_groups(8)), st.sampled_from(builtin_groups(8)))
def test_eccentric_iff_action_injective(K, Y):
    if K.order * Y.order > 16:
        return
    for E in enumerate_points_with_kernel(K, Y):
        assert is_eccentric(E.point) == action_hom_injective(E.point)
        D = distinctive_relation(E.point)
        assert E.s.preimage(D.D_X.normal_subgroup) == D.D_Y.normal_subgroup


@SETTINGS
@given(st.sampled_from(monoid_catalog()), st.sampled_from(builtin_groups(6)), st.data())
def test_internal_normalizer_is_largest(M, T, data):
    acts = actions(M, T)
    G = acts[data.draw(st.integers(0, len(acts) - 1))]
    H = data.draw(st.sampled_from(G.stable_subgroups))
    U = MSubgroup(G, H.elements)
    assert internal_normalizer(U).X.subgroup == largest_stable_normalizing(U)
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    for S in sample_relations(G, U, rng, 1):
        assert adjunction_violation(S, G, U) is None


@SETTINGS
@given(st.sampled_from(TINY), st.data())
def test_topological_routes_agree(G, data):
    top = data.draw(st.sampled_from(group_topologies(G)))
    B = TopGroup(G, top)
    H = data.draw(st.sampled_from(subgroups(G)))
    for A in sub_topologies(B, H).values():
        verdict = is_normal_topsub(A, B)
        if verdict:
            assert H.is_normal()
