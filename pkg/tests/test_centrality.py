import pytest

import oracle
from normcat.catalog import builtin_groups, cyclic, quaternion, symmetric
from normcat.centrality import (
    _distinctive_brute,
    _distinctive_via_lift,
    acc_factor_check,
    action_hom_injective,
    centralizer_mono,
    commutes,
    cooperator_to_psi,
    distinctive_relation,
    faithful_cover,
    faithful_violation,
    is_eccentric,
    is_faithful,
    normcent_check,
    product_point,
    psi_to_cooperator,
    smith_centralizer,
    smith_centralizer_via_distinctive,
    verify_centralizer_universal,
)
from normcat.errors import NotCommuting, NotNormal
from normcat.finalg import Congruence, GroupHom, Subgroup, identity_hom, normal_subgroups, quotient, subgroups, zero_hom
from normcat.ptcat import Point, is_P_cartesian


@pytest.fixture(scope="module")
def A3(S3):
    return next(N for N in normal_subgroups(S3) if N.order == 3)


@pytest.fixture(scope="module")
def sign_point(S3, A3, transposition):
    Q, q = quotient(S3, A3)
    return Point(q, GroupHom(Q, S3, [0, transposition]))


def _inclusion(H):
    return H.as_group()[1]


# cooperators ---------------------------------------------------------------


def test_abelian_targets_always_commute():
    Z6 = cyclic(6)
    for v in subgroups(Z6):
        for h in [identity_hom(Z6), zero_hom(Z6, Z6)]:
            assert commutes(h, v) is not None


def test_three_cycles_do_not_commute_with_transposition(S3, A3, transposition):
    assert commutes(_inclusion(A3), Subgroup(S3, [0, transposition])) is None


def test_zero_map_commutes(S3, transposition):
    assert commutes(zero_hom(cyclic(4), S3), Subgroup(S3, [0, transposition])) is not None


def test_center_cooperates_with_whole_group():
    Q = quaternion()
    c = commutes(_inclusion(Q.center()), Q.whole())
    psi = cooperator_to_psi(c, Congruence.indiscrete(Q))
    assert psi_to_cooperator(psi, Congruence.indiscrete(Q)) == c


def test_trivial_subgroup_psi_is_forced(S3):
    c = commutes(identity_hom(S3), S3.trivial_subgroup())
    psi = cooperator_to_psi(c, Congruence.discrete(S3))
    assert psi.source.order == 6 and psi.is_injective()


@pytest.mark.parametrize("T", builtin_groups(8), ids=lambda g: g.name)
def test_cooperator_round_trip(T):
    for u in normal_subgroups(T):
        R = Congruence(u, check=False)
        C = centralizer_mono(u).Z
        c = commutes(_inclusion(C), u)
        assert c is not None
        assert psi_to_cooperator(cooperator_to_psi(c, R), R, u) == c


def test_cooperator_requires_normality(S3, transposition):
    c = commutes(zero_hom(cyclic(2), S3), Subgroup(S3, [0, transposition]))
    with pytest.raises(NotNormal):
        cooperator_to_psi(c, Congruence.discrete(S3))


# centralizers ----------------------------------------------------------------


def test_centralizer_examples(S3, A3, three_cycle):
    assert centralizer_mono(S3.trivial_subgroup()).Z == S3.whole()
    C3 = Subgroup(S3, [0, three_cycle, S3.mul(three_cycle, three_cycle)])
    assert centralizer_mono(C3).Z == C3
    Q = quaternion()
    Z = centralizer_mono(Q.whole()).Z
    assert Z.order == 2 and Z == Q.center()


@pytest.mark.parametrize("G", builtin_groups(12), ids=lambda g: g.name)
def test_centralizer_matches_oracle(G):
    t = oracle.tolist(G)
    for v in subgroups(G):
        assert centralizer_mono(v).Z.elements == oracle.centralizer(t, v.elements)


def test_centralizer_universal_small(S3, transposition):
    rep = verify_centralizer_universal(Subgroup(S3, [0, transposition]), builtin_groups(6))
    assert rep["ok"] and rep["checked"] > 0


def test_smith_centralizer_examples(S3, A3):
    assert smith_centralizer(Congruence.discrete(S3)).is_indiscrete()
    assert smith_centralizer(Congruence.indiscrete(S3)).is_discrete()
    assert smith_centralizer(Congruence(A3)).normal_subgroup == A3


@pytest.mark.parametrize("G", builtin_groups(12), ids=lambda g: g.name)
def test_smith_centralizer_two_routes(G):
    for N in normal_subgroups(G):
        R = Congruence(N, check=False)
        assert smith_centralizer(R) == smith_centralizer_via_distinctive(R)


def test_normcent_examples(S3, A3):
    assert normcent_check(A3, Congruence(A3))
    assert normcent_check(S3.trivial_subgroup(), Congruence.discrete(S3))
    Z4 = cyclic(4)
    assert normcent_check(Z4.whole(), Congruence.indiscrete(Z4))


def test_normcent_requires_normal(S3, transposition):
    with pytest.raises(NotNormal):
        normcent_check(Subgroup(S3, [0, transposition]), Congruence.indiscrete(S3))


def test_acc_factorization(S3, A3, three_cycle):
    h = acc_factor_check(A3, zero_hom(cyclic(3), S3))
    assert (h.map == 0).all()
    h = acc_factor_check(A3, _inclusion(A3))
    assert h.is_injective() and h.target.order == 6


def test_acc_rejects_non_commuting(S3, A3, transposition):
    with pytest.raises(NotCommuting):
        acc_factor_check(Subgroup(S3, [0, transposition]), _inclusion(A3))


# distinctive relations, eccentricity, faithfulness -----------------------------


def test_product_point_distinctive():
    D = distinctive_relation(product_point(symmetric(3), cyclic(2)), exhaustive=True)
    assert D.D_Y.is_indiscrete() and D.D_X.normal_subgroup.elements == (0, 2, 4, 6, 8, 10)


def test_identity_point_on_z2_is_indiscrete():
    Z2 = cyclic(2)
    D = distinctive_relation(Point(identity_hom(Z2), identity_hom(Z2)), exhaustive=True)
    assert D.D_Y.is_indiscrete()


def test_sign_point(sign_point, cat12):
    assert distinctive_relation(sign_point, exhaustive=True).is_discrete()
    assert is_eccentric(sign_point)
    assert is_faithful(sign_point, cat12)


def test_direct_product_z6_not_eccentric(cat12):
    p = product_point(cyclic(2), cyclic(3))
    assert not is_eccentric(p)
    assert not is_faithful(p, cat12)


def test_trivial_base_points_are_eccentric_and_faithful(cat12):
    for K in builtin_groups(6):
        p = product_point(cyclic(1), K)
        assert is_eccentric(p) and is_faithful(p, cat12)


def test_faithful_cover_examples(sign_point):
    cover, sq = faithful_cover(sign_point)
    assert cover.X.order == 6 and cover.Y.order == 2 and is_P_cartesian(sq)
    cover, sq = faithful_cover(product_point(cyclic(2), cyclic(3)))
    assert (cover.X.order, cover.Y.order) == (3, 1) and is_P_cartesian(sq)
    Z4 = cyclic(4)
    cover, _ = faithful_cover(Point(identity_hom(Z4), identity_hom(Z4)))
    assert (cover.X.order, cover.Y.order) == (1, 1)


def test_closed_form_matches_exhaustive_relation_scan(cat12):
    for E in cat12.extensions:
        if E.X.order > 8:
            continue
        A, B = _distinctive_via_lift(E.point)
        A2, B2 = _distinctive_brute(E.point, exhaustive=True)
        assert (A, B) == (A2, B2)


def test_action_injectivity_matches_catalog_faithfulness(cat12):
    for E in cat12.extensions:
        assert action_hom_injective(E.point) == (faithful_violation(E.point, cat12) is None)
