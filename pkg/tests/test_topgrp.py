import pytest

from normcat.catalog import builtin_groups, cyclic
from normcat.errors import ConditionBFails, NotSubgroup, ValidationError
from normcat.finalg import Subgroup, normal_subgroups, subgroups
from normcat.topgrp import (
    FiniteTopology,
    TopGroup,
    bits,
    classical_normalizer_mask,
    condition_b,
    coset_topology,
    discrete,
    group_topologies,
    indiscrete,
    is_continuous,
    is_normal_topsub,
    maximality_violation,
    members,
    normal_by_conjugation_map,
    normal_by_open_conditions,
    sub_topologies,
    subspace,
    top_normalizer,
)

FULL6 = (1 << 6) - 1


def test_topology_validation():
    with pytest.raises(ValidationError):
        FiniteTopology(0b11, [0b01])
    with pytest.raises(ValidationError):
        FiniteTopology(0b111, [0, 0b001, 0b010, 0b111])
    assert FiniteTopology(0b111, [0, 0b001, 0b010, 0b011, 0b111]).neighbourhood[2] == 0b111


def test_continuity_examples():
    d, i = discrete(0b111), indiscrete(0b111)
    assert is_continuous([0, 1, 2], d, d)
    assert is_continuous([2, 0, 0], d, i) and is_continuous([1, 1, 0], i, i)
    assert not is_continuous([0, 1, 1], i, d)


def test_multiplication_continuity_filters_coset_topologies(S3, transposition):
    H = Subgroup(S3, [0, transposition])
    with pytest.raises(ValidationError):
        TopGroup(S3, coset_topology(S3, H))
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    TopGroup(S3, coset_topology(S3, A3))
    assert len(group_topologies(S3)) == 3


def test_whole_group_is_normal_in_itself():
    for G in builtin_groups(6):
        for top in group_topologies(G):
            assert is_normal_topsub(top, TopGroup(G, top))


def test_a3_discrete_in_s3_discrete(S3):
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    assert is_normal_topsub(discrete(bits(A3.elements)), TopGroup(S3, discrete(FULL6)))


def test_transposition_discrete_in_s3_discrete(S3, transposition):
    A = discrete(bits([0, transposition]))
    B = TopGroup(S3, discrete(FULL6))
    assert not normal_by_conjugation_map(A, B)
    assert not is_normal_topsub(A, B)


def test_non_subgroup_rejected(S3, transposition, three_cycle):
    with pytest.raises(NotSubgroup):
        is_normal_topsub(discrete(bits([0, transposition, three_cycle])), TopGroup(S3, discrete(FULL6)))


def test_discrete_a3_in_indiscrete_s3_fails_condition_b(S3):
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    B = TopGroup(S3, indiscrete(FULL6))
    A = discrete(bits(A3.elements))
    assert not condition_b(A, B)
    with pytest.raises(ConditionBFails):
        top_normalizer(A, B)


def test_discrete_subgroup_of_abelian_indiscrete_group():
    r = top_normalizer(discrete(0b0101), TopGroup(cyclic(4), indiscrete(0b1111)))
    assert r.N.carrier == 0b1111 and r.N.topology.is_indiscrete()


@pytest.mark.parametrize("G", builtin_groups(6), ids=lambda g: g.name)
def test_discrete_normalizer_is_classical(G):
    full = (1 << G.order) - 1
    B = TopGroup(G, discrete(full))
    for H in subgroups(G):
        r = top_normalizer(discrete(bits(H.elements)), B)
        assert r.N.carrier == classical_normalizer_mask(G, bits(H.elements))
        assert r.N.topology.is_discrete()


def test_whole_group_normalizer_is_whole():
    for G in builtin_groups(6):
        for top in group_topologies(G):
            r = top_normalizer(top, TopGroup(G, top))
            assert r.N.carrier == top.carrier


def test_indiscrete_in_indiscrete(S3):
    # With B indiscrete the only neighbourhood of 1 is B, so condition (b)
    # on U = A forces A to be normal; the normalizer is then all of B.
    B = TopGroup(S3, indiscrete(FULL6))
    for H in subgroups(S3):
        A = indiscrete(bits(H.elements))
        if not H.is_normal():
            with pytest.raises(ConditionBFails):
                top_normalizer(A, B)
            continue
        r = top_normalizer(A, B)
        assert r.N.carrier == classical_normalizer_mask(S3, bits(H.elements)) == FULL6
        assert r.N.topology.is_indiscrete()


@pytest.mark.parametrize("G", builtin_groups(6), ids=lambda g: g.name)
def test_routes_agree_and_normalizer_is_maximal(G):
    for top in group_topologies(G):
        B = TopGroup(G, top)
        for H in subgroups(G):
            for A in sub_topologies(B, H).values():
                assert normal_by_conjugation_map(A, B) == normal_by_open_conditions(A, B)
                try:
                    r = top_normalizer(A, B)
                except ConditionBFails:
                    continue
                assert r.N.carrier & ~classical_normalizer_mask(G, A.carrier) == 0
                assert maximality_violation(r) is None


def test_subspace_of_coset_topology(S3):
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    top = coset_topology(S3, A3)
    sub = subspace(top, bits(A3.elements))
    assert sub.is_indiscrete() and members(sub.carrier) == list(A3.elements)
