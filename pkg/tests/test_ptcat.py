import numpy as np
import pytest

import oracle
from normcat.catalog import cyclic, product_of, symmetric
from normcat.errors import CodomainMismatch, NotCartesianInput, NotSplit
from normcat.finalg import GroupHom, Subgroup, automorphism_group, homs, identity_hom, normal_subgroups, quotient, zero_hom
from normcat.normalizer import k_cartesian_lift
from normcat.ptcat import (
    J,
    Action,
    Point,
    PtMorphism,
    SEMorphism,
    enumerate_points_with_kernel,
    identity_se,
    is_K_cartesian,
    is_P_cartesian,
    k_cartesian_violation,
    make_split_extension,
    pullback_point,
    pullback_se_along_cartesian,
    point_identity_square,
    se_morphisms,
    semidirect,
    square,
)
from normcat.centrality import product_point


@pytest.fixture(scope="module")
def sign_point(S3, transposition):
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    Q, q = quotient(S3, A3)
    return Point(q, GroupHom(Q, S3, [0, transposition]))


def test_identity_point_has_trivial_kernel():
    Z4 = cyclic(4)
    E = make_split_extension(Point(identity_hom(Z4), identity_hom(Z4)))
    assert E.K.order == 1


def test_product_point_kernel_is_second_factor():
    E = make_split_extension(product_point(cyclic(2), cyclic(3)))
    assert E.K.order == 3 and oracle.isomorphic(oracle.tolist(E.K), oracle.tolist(cyclic(3)))


def test_sign_point_kernel_is_a3(sign_point, S3):
    E = make_split_extension(sign_point)
    assert E.kernel == next(N for N in normal_subgroups(S3) if N.order == 3)


def test_point_must_split(S3):
    Z2 = cyclic(2)
    with pytest.raises(NotSplit):
        Point(zero_hom(Z2, Z2), identity_hom(Z2))


def test_section_must_be_right_inverse():
    Z1, Z2 = cyclic(1), cyclic(2)
    with pytest.raises(NotSplit):
        Point(zero_hom(Z1, Z2), zero_hom(Z2, Z1))


def _action(Y, K, index):
    aut, _ = automorphism_group(K)
    return Action(Y, K, homs(Y, aut)[index])


def test_semidirect_trivial_and_inversion_actions():
    Z2, Z3 = cyclic(2), cyclic(3)
    totals = [semidirect(a).X for a in (_action(Z2, Z3, i) for i in range(2))]
    cyc = [oracle.is_cyclic(oracle.tolist(X)) for X in totals]
    assert sorted(cyc) == [False, True]
    nonab = totals[cyc.index(False)]
    assert oracle.isomorphic(oracle.tolist(nonab), oracle.tolist(symmetric(3)))


def test_semidirect_with_trivial_kernel_is_base():
    E = semidirect(_action(cyclic(4), cyclic(1), 0))
    assert oracle.isomorphic(oracle.tolist(E.X), oracle.tolist(cyclic(4)))


def test_enumerate_points_counts():
    assert len(enumerate_points_with_kernel(cyclic(3), cyclic(2))) == 2
    assert len(enumerate_points_with_kernel(symmetric(3), cyclic(1))) == 1
    assert len(enumerate_points_with_kernel(product_of(cyclic(2), cyclic(2)), cyclic(3))) == 3


def test_J_orders():
    assert J(cyclic(1)).X.order == 1
    E = J(cyclic(2))
    assert E.X.order == 4 and E.K.order == 2 and E.Y.order == 2


def test_se_morphism_counts_match_triple_scan():
    # frozen from an exhaustive scan of (kernel, total, base) hom triples
    assert len(se_morphisms(J(cyclic(2)), J(cyclic(2)))) == 4
    assert len(se_morphisms(J(cyclic(3)), J(cyclic(2)))) == 1
    assert len(se_morphisms(J(cyclic(2)), J(cyclic(4)))) == 4


def test_everything_maps_uniquely_to_J_of_trivial(cat12):
    for E in cat12.extensions[::7]:
        assert len(se_morphisms(E, J(cyclic(1)))) == 1


def test_identity_is_K_cartesian(cat12, S3):
    assert is_K_cartesian(identity_se(J(S3)), cat12)


def test_transposition_lift_is_K_cartesian(cat12, S3, transposition):
    assert is_K_cartesian(k_cartesian_lift(Subgroup(S3, [0, transposition])), cat12)


def test_collapse_to_trivial_is_not_K_cartesian(cat12):
    Z1, Z2 = cyclic(1), cyclic(2)
    m = SEMorphism(J(Z2), J(Z1), zero_hom(Z2, Z1), zero_hom(square(Z2), square(Z1)), zero_hom(Z2, Z1))
    bad = k_cartesian_violation(m, cat12)
    assert bad is not None and bad["lifts"] != 1


def test_strict_reading_rejects_transposition_lift(cat12, S3, transposition):
    # With kernel factorizations that are not isomorphisms the lift fails on
    # the identity point of Z2, whose base image leaves the normalizer.
    m = k_cartesian_lift(Subgroup(S3, [0, transposition]))
    bad = k_cartesian_violation(m, cat12, strict=True)
    assert bad is not None and bad["extension"].startswith("Z1|Z2")


def test_pullback_along_identity_is_isomorphic(sign_point):
    P, sq = pullback_point(identity_hom(sign_point.Y), sign_point)
    assert is_P_cartesian(sq) and P.X.order == sign_point.X.order
    assert sq.on_total.is_injective()


def test_pullback_of_sign_along_trivial_base(sign_point):
    P, sq = pullback_point(zero_hom(cyclic(1), sign_point.Y), sign_point)
    assert P.Y.order == 1 and P.X.order == 3 and is_P_cartesian(sq)
    assert oracle.is_cyclic(oracle.tolist(P.X))


def test_pullback_of_product_point_is_product():
    p = product_point(cyclic(4), cyclic(3))
    y = GroupHom(cyclic(2), cyclic(4), [0, 2])
    P, sq = pullback_point(y, p)
    assert P.X.order == 6 and make_split_extension(P).K.order == 3 and is_P_cartesian(sq)


def test_pullback_codomain_checked(sign_point):
    with pytest.raises(CodomainMismatch):
        pullback_point(identity_hom(cyclic(3)), sign_point)


def test_non_cartesian_square_detected(S3):
    Z2 = cyclic(2)
    p = product_point(Z2, Z2)
    q = Point(identity_hom(Z2), identity_hom(Z2))
    sq = PtMorphism(p, q, GroupHom(p.X, Z2, p.f.map), identity_hom(Z2))
    assert not is_P_cartesian(sq)


def test_pullback_along_identity_gives_m(cat12, S3):
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    m = k_cartesian_lift(A3)
    pulled = pullback_se_along_cartesian(m, point_identity_square(J(S3).point), cat12)
    assert pulled.source.X.order == m.source.X.order
    assert np.array_equal(np.sort(pulled.on_total.map), np.sort(m.on_total.map))
    assert is_K_cartesian(pulled, cat12)


def test_a3_lift_pulled_back_over_trivial_base(cat12, S3):
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    _, sq = pullback_point(zero_hom(cyclic(1), S3), J(S3).point)
    assert is_K_cartesian(pullback_se_along_cartesian(k_cartesian_lift(A3), sq), cat12)


def test_transposition_lift_pulled_back_along_sign_section(cat12, S3, transposition, sign_point):
    _, sq = pullback_point(sign_point.s, J(S3).point)
    m = k_cartesian_lift(Subgroup(S3, [0, transposition]))
    assert is_K_cartesian(pullback_se_along_cartesian(m, sq), cat12)


def test_pullback_rejects_non_cartesian_square(S3):
    Z2 = cyclic(2)
    m = k_cartesian_lift(S3.whole())
    p = product_point(S3, Z2)
    bad = PtMorphism(p, J(S3).point, GroupHom(p.X, square(S3), J(S3).s.map[p.f.map]), identity_hom(S3))
    with pytest.raises(NotCartesianInput):
        pullback_se_along_cartesian(m, bad)
