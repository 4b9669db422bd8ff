import numpy as np
import pytest

import oracle
from normcat.catalog import builtin_groups, cyclic, dihedral, quaternion
from normcat.finalg import Congruence, Subgroup, direct_product, normal_subgroups, subgroups
from normcat.normalizer import (
    fibrancy_suite,
    fibrant_lift,
    is_lift_cartesian,
    k_cartesian_lift,
    lift_into,
    maximal_normalizing_subgroup,
    normalizer,
    reflexive_cartesian_check,
    restrict_lift,
    verify_normalizer_universal,
)
from normcat.ptcat import J, identity_se, is_K_cartesian


@pytest.fixture(scope="module")
def A3(S3):
    return next(N for N in normal_subgroups(S3) if N.order == 3)


def test_trivial_subgroup_normalizer_is_everything(S3):
    res = normalizer(S3.trivial_subgroup())
    assert res.N == S3.whole() and res.R_v.is_discrete()


def test_transposition_normalizer(S3, transposition):
    res = normalizer(Subgroup(S3, [0, transposition]))
    # frozen from oracle.normalizer on the S3 table
    assert res.N.elements == (0, 2)
    assert res.N.order == 2


def test_a3_normalizer_is_s3_with_sign_congruence(S3, A3):
    res = normalizer(A3)
    assert res.N == S3.whole()
    assert res.R_v.normal_subgroup == A3
    assert res.R_v.n_classes == 2


@pytest.mark.parametrize("G", builtin_groups(8), ids=lambda g: g.name)
def test_normalizer_matches_conjugation_oracle(G):
    t = oracle.tolist(G)
    for v in subgroups(G):
        res = normalizer(v)
        assert res.N.elements == oracle.normalizer(t, v.elements)
        assert res.N == maximal_normalizing_subgroup(v)
        assert res.w.is_injective()


def test_whole_group_lift_has_identity_kernel_component(S3):
    m = k_cartesian_lift(S3.whole())
    assert np.array_equal(m.on_kernel.map, np.arange(6))
    assert m.source.X.order == 36 and m.target is J(S3)


def test_transposition_lift_sizes(S3, transposition, cat12):
    m = k_cartesian_lift(Subgroup(S3, [0, transposition]))
    # R_v on N of order 2 with U = N: the indiscrete relation, 4 pairs
    assert m.source.X.order == 4 and m.on_total.is_injective()
    assert is_lift_cartesian(m, cat12)


def test_a3_lift_total_is_sign_congruence(S3, A3, cat12):
    m = k_cartesian_lift(A3)
    pairs = {divmod(int(x), 6) for x in m.on_total.map}
    assert pairs == {(a, b) for a in range(6) for b in range(6) if (a in A3) == (b in A3)}
    assert is_lift_cartesian(m, cat12)


@pytest.mark.parametrize("T", [cyclic(4), dihedral(4), quaternion()], ids=lambda g: g.name)
def test_every_subgroup_lift_is_K_cartesian(T, cat12):
    for v in subgroups(T):
        assert is_K_cartesian(k_cartesian_lift(v), cat12), v


def test_universal_property_for_all_s3_subgroups(S3, cat12):
    for v in subgroups(S3):
        rep = verify_normalizer_universal(v, normalizer(v), cat12)
        assert rep["ok"] and rep["checked"] > 0, rep["violations"][:2]


def test_degenerate_decomposition(S3):
    v = S3.whole()
    rep = verify_normalizer_universal(v, normalizer(v), [S3])
    assert rep["ok"]


def test_decomposition_through_product_with_z2(S3, transposition):
    v = Subgroup(S3, [0, transposition])
    Ug, _ = v.as_group()
    X2 = direct_product(Ug, cyclic(2), name="UxZ2")
    rep = verify_normalizer_universal(v, normalizer(v), [X2])
    assert rep["ok"] and rep["checked"] >= 1


def test_restrict_along_identity_returns_m(S3, A3):
    m = k_cartesian_lift(A3)
    r = restrict_lift(m, identity_se(J(S3)))
    assert r.source.X.order == m.source.X.order
    assert sorted(r.on_kernel.map.tolist()) == sorted(m.on_kernel.map.tolist())


def test_restrict_a3_lift_to_a3(S3, A3, cat12):
    Ag, inc = A3.as_group()
    r = restrict_lift(k_cartesian_lift(A3), inc)
    assert r.on_kernel.is_injective() and r.on_kernel.is_surjective()
    assert is_K_cartesian(r, cat12)


def test_restrict_trivial_lift_to_three_cycles(S3, three_cycle, cat12):
    C3 = Subgroup(S3, [0, three_cycle, S3.mul(three_cycle, three_cycle)])
    _, inc = C3.as_group()
    r = restrict_lift(k_cartesian_lift(S3.trivial_subgroup()), inc)
    assert r.source.K.order == 1 and r.target.Y.order == 3
    assert is_K_cartesian(r, cat12)


def test_fibrancy_suite_on_semidirect_z3_by_z2(cat12):
    cases = fibrancy_suite(cat12, targets={"Z3|Z2|a0", "Z3|Z2|a1"})
    assert len(cases) == 4 and all(c["verdict"] == "pass" for c in cases)


def test_fibrant_lift_of_whole_kernel_is_whole(cat12):
    for E in cat12.extensions[:20]:
        sub = fibrant_lift(E, E.K.whole())
        assert sub.total.order == E.X.order and sub.base.order == E.Y.order


def test_lift_into_identity_subgroup_is_identity_like(cat12):
    E = cat12.extensions[cat12.extension_ids.index("Z3|Z2|a1")]
    m = lift_into(E, E.K.whole())
    assert m.on_total.is_injective() and m.on_total.is_surjective()


def test_reflexive_cartesian_examples(S3, A3, cat12):
    assert reflexive_cartesian_check(Congruence.discrete(S3), cat12)
    assert reflexive_cartesian_check(Congruence(A3), cat12)
