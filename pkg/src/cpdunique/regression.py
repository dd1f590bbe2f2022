"""Built-in regression suite over the named examples in :mod:`cpdunique.catalog`.

Each check returns a list of :class:`Check` results; :func:`run` gathers
them.  Everything runs in exact arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import catalog
from .certify import Tier, certify, certify_sfs, rule_kruskal, rule_two_k
from .conditions import analyze_U, check_C, check_W, h_profile, krank, one_nonzero_directions
from .linalg import full_column_rank, kernel_basis, khatri_rao, compound
from .tensor import equals, from_factors


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _c(suite, name, ok, detail=""):
    return Check(suite, name, bool(ok), detail)


def check_kruskal():
    s = "kruskal"
    three, four = catalog.three_term(), catalog.four_term()
    cert = certify(three)
    return [
        _c(s, "three- and four-term tensors equal", equals(from_factors(*three), from_factors(*four))),
        _c(s, "k-ranks (2, 3, 3)", [cert.kranks[r] for r in "ABC"] == [2, 3, 3]),
        _c(s, "kruskal fires", "kruskal" in cert.fired and cert.tier is Tier.UNIQUE,
           ", ".join(cert.fired)),
    ]


def check_sharpness(tamper=False):
    s = "sharpness"
    T = from_factors(*catalog.three_term())
    A, B, C = catalog.four_term()
    out = []
    for alpha, beta in ((1, 1), (Fraction(-2, 5), Fraction(1, 15)), (3, -7)):
        Bb, Cb = catalog.sharpness_family(alpha, beta)
        if tamper:
            Bb = Bb.copy()
            Bb[0, 0] += 1
        out.append(_c(s, f"alpha={alpha}, beta={beta}: same tensor", equals(from_factors(A, Bb, Cb), T)))
    Bb, Cb = catalog.sharpness_family(Fraction(-2, 5), Fraction(1, 15))
    if tamper:
        Bb = Bb.copy()
        Bb[0, 0] += 1
    out.append(_c(s, "alpha=-2/5, beta=1/15: columns proportional",
                  catalog.columns_proportional(Bb, B) and catalog.columns_proportional(Cb, C)))
    Bb, Cb = catalog.sharpness_family(1, 1)
    out.append(_c(s, "alpha=beta=1: columns not proportional",
                  not catalog.columns_proportional(Bb, B)))
    return out


def check_rank_five_pair():
    s = "rank_five_pair"
    A, B, C = catalog.rank_five_pair()
    M = khatri_rao(compound(A, 2), compound(B, 2))
    K = kernel_basis(M)
    v = np.array(catalog.RANK_FIVE_PAIR_KERNEL, dtype=object)
    spans = len(K) == 1 and catalog.columns_proportional(np.array([K[0]]).T, v.reshape(-1, 1))
    u = analyze_U(A, B, 2)
    cert = certify((A, B, C))
    return [
        _c(s, "product matches the listed 9x10 matrix",
           M.tolist() == catalog.RANK_FIVE_PAIR_PRODUCT),
        _c(s, "kernel is one-dimensional, spanned by the listed vector", spans),
        _c(s, "U2 holds", u.outcome.holds, u.outcome.detail),
        _c(s, "one-factor rule fires", "one_factor(C)" in cert.fired and cert.tier is Tier.UNIQUE,
           ", ".join(cert.fired)),
        _c(s, "two-of-three not applicable (order 4 compounds undefined)",
           "two_of_three_U" not in cert.fired
           and cert.conditions["U4(B,C)"].verdict.value == "n/a"),
    ]


def check_two_of_three():
    s = "two_of_three"
    F = catalog.two_of_three()
    cert = certify(F)
    pairs = ((0, 1), (1, 2), (2, 0))
    return [
        _c(s, "C3 products 16x10 full column rank",
           all(check_C(F[i], F[j], 3).holds for i, j in pairs)),
        _c(s, "H profiles equal min(delta, 3)",
           all(h_profile(F[i], F[j]) == [min(d, 3) for d in range(1, 6)] for i, j in pairs)),
        _c(s, "kruskal and two-k do not fire", rule_kruskal(F) == [] and rule_two_k(F) == []),
        _c(s, "two-of-three fires", "two_of_three_U" in cert.fired, ", ".join(cert.fired)),
    ]


def check_two_k():
    s = "two_k"
    F = catalog.two_k()
    return [
        _c(s, "k-ranks 4", [krank(M) for M in F] == [4, 4, 4]),
        _c(s, "two-k fires", bool(rule_two_k(F))),
        _c(s, "kruskal does not fire", rule_kruskal(F) == []),
    ]


def check_one_factor_h():
    s = "one_factor_h"
    A, B, C = catalog.one_factor_h()
    cert = certify((A, B, C))
    return [
        _c(s, "H_AB = (1,2,3,4,3,2,2,2)", h_profile(A, B) == [1, 2, 3, 4, 3, 2, 2, 2]),
        _c(s, "H_BC(5) = 4", h_profile(B, C)[4] == 4),
        _c(s, "one-factor inequality holds", cert.conditions["common1(C)"].holds),
        _c(s, "one-factor rule fires through H2",
           "one_factor(C)" in cert.fired and "H2" in cert.conditions["U2(A,B)"].detail,
           cert.conditions["U2(A,B)"].detail),
        _c(s, "two-of-three does not fire", "two_of_three_U" not in cert.fired),
    ]


def check_w_fails(alpha=1):
    s = "w_fails"
    F = catalog.w_fails(alpha)
    pairs = ((0, 1), (1, 2), (2, 0))
    out = []
    for i, j in pairs:
        out.append(_c(s, f"{'ABC'[i]} kr {'ABC'[j]} full column rank", full_column_rank(khatri_rao(F[i], F[j]))))
    for i, j in pairs:
        out.append(_c(s, f"C2({'ABC'[i]}) kr C2({'ABC'[j]}) full column rank", check_C(F[i], F[j], 2).holds))
    for role, M in zip("ABC", F):
        dirs = [tuple(int(x != 0) for x in v) for col in one_nonzero_directions(M) for v in col]
        expected = {tuple(int(k == e) for k in range(4)) for e in catalog.W_FAILS_DIRECTIONS[role]}
        out.append(_c(s, f"single-entry directions of {role}", set(dirs) == expected
                      and all(sum(d) == 1 for d in dirs), str(sorted(set(dirs)))))
    for X, Y, Z in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        w = check_W(F[X], F[Y], F[Z], 3)
        out.append(_c(s, f"W3 fails for ({'ABC'[X]},{'ABC'[Y]};{'ABC'[Z]})", w.fails, w.detail))
    return out


def check_masked(seeds=range(5)):
    s = "masked"
    out = []
    for seed in seeds:
        A, B, C = catalog.structured_perturbation(seed)
        zeros_ok = all(M[catalog.PERTURBATION_ZEROS[r], 4] == 0 for r, M in zip("ABC", (A, B, C)))
        ok = zeros_ok and check_C(A, B, 3).holds and check_C(B, C, 3).holds
        out.append(_c(s, f"seed {seed}: C3 holds for (A,B) and (B,C)", ok))
    return out


def check_sfs():
    s = "sfs"
    A, E = catalog.identity_slab(3, 4)
    cert = certify_sfs(A, E)
    return [_c(s, "stacked identities: nothing fires", cert.fired == [], cert.tier.value)]


SUITES = {
    "kruskal": check_kruskal,
    "sharpness": check_sharpness,
    "rank_five_pair": check_rank_five_pair,
    "two_of_three": check_two_of_three,
    "two_k": check_two_k,
    "one_factor_h": check_one_factor_h,
    "w_fails": check_w_fails,
    "masked": check_masked,
    "sfs": check_sfs,
}


def run(only=None, alpha=1, tamper=False):
    """Run all suites (or just ``only``) and return the list of checks."""
    names = list(SUITES) if only is None else [only]
    out = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown example {name!r}; choose from {', '.join(SUITES)}")
        if name == "w_fails":
            out += check_w_fails(alpha)
        elif name == "sharpness":
            out += check_sharpness(tamper)
        else:
            out += SUITES[name]()
    return out
