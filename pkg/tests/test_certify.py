import numpy as np
import pytest

from cpdunique import catalog
from cpdunique.certify import (
    Options,
    Tier,
    certify,
    certify_sfs,
    check_common_one,
    check_common_two,
    necessary_conditions,
    rule_kruskal,
    rule_one_factor_path,
    rule_two_k,
    rule_two_of_three_U,
)
from cpdunique.conditions import Verdict
from cpdunique.generic import sample_matrix


def test_kruskal_three_term():
    cert = certify(catalog.three_term())
    assert cert.tier is Tier.UNIQUE
    assert "kruskal" in cert.fired
    assert cert.conditions["kruskal"].detail == "8 vs 8"


def test_two_of_three_only():
    F = catalog.two_of_three()
    cert = certify(F)
    assert cert.fired == ["two_of_three_U"]
    assert rule_kruskal(F) == [] and rule_two_k(F) == []
    assert rule_two_of_three_U(F) == ["two_of_three_U"]


def test_two_k_not_kruskal():
    F = catalog.two_k()
    assert rule_kruskal(F) == []
    assert rule_two_k(F)
    assert certify(F).tier is Tier.UNIQUE


def test_one_factor_rank_five_pair():
    F = catalog.rank_five_pair()
    cert = certify(F)
    assert "one_factor(C)" in cert.fired
    assert "two_of_three_U" not in cert.fired
    assert cert.conditions["U4(B,C)"].verdict is Verdict.NOT_APPLICABLE
    assert rule_one_factor_path(F)


def test_one_factor_through_H():
    cert = certify(catalog.one_factor_h())
    assert cert.fired == ["one_factor(C)"]
    assert cert.conditions["U2(A,B)"].detail == "via C2, H2"
    assert cert.conditions["H5(B,C)"].fails


def test_w_fails_is_inconclusive():
    cert = certify(catalog.w_fails(1))
    assert cert.tier is Tier.INCONCLUSIVE
    assert cert.necessary is Verdict.HOLDS


def test_necessary_violation():
    A = np.array([[1, 1, 0], [0, 0, 1]])  # k-rank 1
    B = np.array([[1, 0, 1], [0, 1, 1]])
    C = np.array([[1, 0, 2], [0, 1, 1]])
    verdict, table = necessary_conditions((A, B, C))
    assert verdict is Verdict.FAILS
    assert table["kmin>=2"].fails
    assert certify((A, B, C)).tier is Tier.NECESSARY_VIOLATED


def test_rank_one_has_no_necessary_verdict():
    a = np.array([[1], [2]])
    cert = certify((a, a, a))
    assert cert.necessary is Verdict.NOT_APPLICABLE
    assert cert.tier is Tier.UNIQUE


def test_third_factor_tier():
    # four-term decomposition: not canonical, but the third factor is pinned
    # down once the first is shared; here the cascade cannot conclude more
    cert = certify(catalog.four_term())
    assert cert.tier in (Tier.INCONCLUSIVE, Tier.THIRD_FACTOR_UNIQUE)
    assert cert.fired == []


def test_common_factor_inequalities_on_four_term():
    F = catalog.four_term()
    assert check_common_one(F, "C").holds
    assert check_common_one(F, "B").holds
    assert check_common_one(F, "A").fails


def test_common_two_matches_hand_count():
    F = catalog.two_of_three()
    # k = 3 and r = 4 everywhere: spread(3, 3) + 4 = 6 >= R + 1 = 6
    assert check_common_two(F, "B").holds


def test_fixed_roles_option_is_no_stronger():
    for F in (catalog.three_term(), catalog.two_of_three(), catalog.one_factor_h()):
        fixed = certify(F, options=Options(roles="fixed"))
        full = certify(F)
        assert set(fixed.fired) <= set(full.fired)


def test_float_certificate_agrees_on_examples():
    for F in (catalog.three_term(), catalog.two_of_three(), catalog.rank_five_pair()):
        exact = certify(F)
        flt = certify(tuple(M.astype(float) for M in F))
        assert flt.mode == "float"
        assert flt.tier is exact.tier


def test_sfs_table_entry_fires():
    for seed in range(3):
        A = sample_matrix("dense", 4, 6, seed)
        C = sample_matrix("dense", 8, 6, seed + 100)
        cert = certify_sfs(A, C)
        assert cert.sfs and cert.tier is Tier.UNIQUE
        assert "sfs_compound(C)" in cert.fired


def test_sfs_identity_slab_does_not_fire():
    A, E = catalog.identity_slab(4, 3)
    cert = certify_sfs(A, E)
    assert cert.fired == []
    assert cert.tier is not Tier.UNIQUE


def test_sfs_inherits_unsymmetric_rules():
    rng = np.random.default_rng(4)
    for _ in range(5):
        A = rng.integers(-5, 6, (3, 3))
        C = rng.integers(-5, 6, (3, 3))
        if (A == 0).all(axis=0).any() or (C == 0).all(axis=0).any():
            continue
        plain = certify((A, A, C))
        sfs = certify_sfs(A, C)
        if plain.tier is Tier.UNIQUE:
            assert sfs.tier is Tier.UNIQUE


def test_certificate_is_deterministic():
    F = catalog.one_factor_h()
    a, b = certify(F), certify(F)
    assert a.fired == b.fired
    assert a.conditions == b.conditions


def test_bad_input():
    with pytest.raises(ValueError):
        certify((np.ones((2, 2), int), np.ones((2, 3), int), np.ones((2, 2), int)))
