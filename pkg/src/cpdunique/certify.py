"""Uniqueness certificates for a polyadic decomposition [A, B, C].

:func:`certify` evaluates every implemented sufficient condition for
uniqueness (plus the necessary conditions) and reports the strongest
conclusion in a :class:`Certificate`.  All rules are evaluated; the tier is
the best one reached, so the certificate documents which rules do and do not
apply.

Conditions on pairs are symmetric in the two factors, so evaluating the
three cyclic pairs (A, B), (B, C), (C, A) covers all six role assignments.
"""

from dataclasses import dataclass, field
from enum import Enum

from .conditions import (
    SUPPORT_SEARCH_MAX_R,
    Outcome,
    Verdict,
    analyze_U,
    check_C,
    check_H,
    check_K,
    check_W,
    h_profile,
    krank,
)
from .linalg import rank
from .tensor import ROLES, FactorTriple

CYCLIC = (("A", "B", "C"), ("B", "C", "A"), ("C", "A", "B"))


class Tier(str, Enum):
    UNIQUE = "unique"
    THIRD_FACTOR_UNIQUE = "third-factor-unique"
    NECESSARY_VIOLATED = "necessary-violated"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Options:
    """Knobs for :func:`certify`.

    roles: "all" evaluates every role assignment, "fixed" only the stored
    order (C as third factor, A as the k-rank factor of the two-k rule).
    h_max_r: largest R for which the exhaustive H profile is computed.
    support_search_max_r: largest R for the exact witness-support search.
    """

    roles: str = "all"
    h_max_r: int = 12
    support_search_max_r: int = SUPPORT_SEARCH_MAX_R


@dataclass
class Certificate:
    dims: tuple
    R: int
    mode: str
    ranks: dict
    kranks: dict
    m_values: dict
    conditions: dict
    fired: list
    tier: Tier
    unique_factors: list = field(default_factory=list)
    necessary: Verdict = Verdict.UNKNOWN
    sfs: bool = False
    tol: float | None = None

    @property
    def unique(self):
        return self.tier is Tier.UNIQUE


def _common_one(kX, kY, kZ, R):
    """One-common-factor inequality with Z the shared factor."""
    return max(min(kX, kY - 1), min(kX - 1, kY)) + kZ >= R + 1


class _Evaluator:
    """Memoised condition evaluation over the roles of one triple."""

    def __init__(self, F, tol, options):
        self.F = F
        self.tol = tol
        self.options = options
        self.R = F.R
        self.table = {}
        self.r = {x: rank(F.factor(x), tol) for x in ROLES}
        self.k = {x: krank(F.factor(x), tol) for x in ROLES}
        self.m = {x: self.R - self.r[x] + 2 for x in ROLES}
        self._profiles = {}
        self._analyses = {}

    def rec(self, key, outcome):
        self.table.setdefault(key, outcome)
        return self.table[key]

    def flag(self, key, ok, detail):
        return self.rec(key, Outcome(Verdict.HOLDS if ok else Verdict.FAILS, None, detail))

    def K(self, X, Y, m):
        key = f"K{m}({X},{Y})"
        if key not in self.table:
            self.rec(key, check_K(self.F.factor(X), self.F.factor(Y), m, self.tol,
                                  ranks=(self.r[X], self.r[Y]), kranks=(self.k[X], self.k[Y])))
        return self.table[key]

    def C(self, X, Y, m):
        key = f"C{m}({X},{Y})"
        if key not in self.table:
            self.rec(key, check_C(self.F.factor(X), self.F.factor(Y), m, self.tol))
        return self.table[key]

    def H(self, X, Y, m):
        key = f"H{m}({X},{Y})"
        if key not in self.table:
            if self.R > self.options.h_max_r:
                return self.rec(key, Outcome(Verdict.UNKNOWN, None, f"skipped: R > {self.options.h_max_r}"))
            if (X, Y) not in self._profiles:
                self._profiles[(X, Y)] = h_profile(self.F.factor(X), self.F.factor(Y), self.tol)
            self.rec(key, check_H(None, None, m, profile=self._profiles[(X, Y)]))
        return self.table[key]

    def analysis(self, X, Y, m):
        if (X, Y, m) not in self._analyses:
            self._analyses[(X, Y, m)] = analyze_U(self.F.factor(X), self.F.factor(Y), m, self.tol,
                                                  self.options.support_search_max_r)
        return self._analyses[(X, Y, m)]

    def U(self, X, Y, m):
        key = f"U{m}({X},{Y})"
        if key in self.table:
            return self.table[key]
        routes = []
        if self.K(X, Y, m).holds:
            routes.append(f"K{m}")
        c = self.C(X, Y, m)
        if c.verdict is Verdict.NOT_APPLICABLE:
            return self.rec(key, c)
        if c.holds:
            routes.append(f"C{m}")
        if self.H(X, Y, m).holds:
            routes.append(f"H{m}")
        if routes:
            return self.rec(key, Outcome(Verdict.HOLDS, None, "via " + ", ".join(routes)))
        return self.rec(key, self.analysis(X, Y, m).outcome)

    def W(self, X, Y, Z, m):
        key = f"W{m}({X},{Y};{Z})"
        if key in self.table:
            return self.table[key]
        u = self.U(X, Y, m)
        if u.verdict is Verdict.NOT_APPLICABLE:
            return self.rec(key, u)
        if u.holds:
            return self.rec(key, Outcome(Verdict.HOLDS, None, f"via U{m}"))
        F = self.F
        return self.rec(key, check_W(F.factor(X), F.factor(Y), F.factor(Z), m, self.tol,
                                     analysis=self.analysis(X, Y, m)))

    def w_chain(self, X, Y, Z, m):
        """W at orders m, m-1, ..., 1, via the k-rank shortcut when it applies."""
        key = f"W{m}..1({X},{Y};{Z})"
        if key in self.table:
            return self.table[key]
        top = self.W(X, Y, Z, m)
        if not top.holds:
            return self.rec(key, Outcome(top.verdict, None, f"W{m} {top.verdict.value}"))
        if min(self.k[X], self.k[Y]) >= m - 1:
            return self.rec(key, Outcome(Verdict.HOLDS, None, f"W{m} and min k >= {m - 1}"))
        for j in range(m - 1, 0, -1):
            w = self.W(X, Y, Z, j)
            if not w.holds:
                return self.rec(key, Outcome(w.verdict, None, f"W{j} {w.verdict.value}"))
        return self.rec(key, Outcome(Verdict.HOLDS, None, "each order checked"))


# ------------------------------------------------------------------ rules

def _necessary(ev):
    """Necessary conditions for uniqueness of a decomposition with R >= 2 terms."""
    if ev.R < 2:
        return Verdict.NOT_APPLICABLE
    kmin = min(ev.k.values())
    verdicts = [ev.flag("kmin>=2", kmin >= 2, f"min k-rank {kmin}").verdict]
    for X, Y, _ in CYCLIC:
        verdicts.append(ev.C(X, Y, 1).verdict)
    for X, Y, _ in CYCLIC:
        verdicts.append(ev.U(X, Y, 2).verdict)
    if Verdict.FAILS in verdicts:
        return Verdict.FAILS
    if all(v is Verdict.HOLDS for v in verdicts):
        return Verdict.HOLDS
    return Verdict.UNKNOWN


def _rule_kruskal(ev):
    k = ev.k
    total = k["A"] + k["B"] + k["C"]
    ok = ev.flag("kruskal", total >= 2 * ev.R + 2, f"{total} vs {2 * ev.R + 2}").holds
    return ["kruskal"] if ok else []


def _rule_two_k(ev):
    fired = []
    rotations = CYCLIC if ev.options.roles == "all" else CYCLIC[:1]
    for X, Y, Z in rotations:
        r, k, R = ev.r, ev.k, ev.R
        first = k[X] + r[Y] + r[Z]
        second = min(r[Z] + k[Y], k[Z] + r[Y])
        ok = first >= 2 * R + 2 and second >= R + 2
        if ev.flag(f"two_k({X})", ok, f"{first} vs {2 * R + 2}; {second} vs {R + 2}").holds:
            fired.append(f"two_k({X})")
    return fired


def _rule_two_of_three(ev):
    held = 0
    for X, Y, Z in CYCLIC:
        # the condition for factor Z lives on the other two
        if ev.U(X, Y, ev.m[Z]).holds:
            held += 1
    return ["two_of_three_U"] if held >= 2 else []


def _third_roles(ev):
    return CYCLIC if ev.options.roles == "all" else CYCLIC[:1]


def _rule_one_factor(ev):
    fired = []
    for X, Y, Z in _third_roles(ev):
        k = ev.k
        ineq = ev.flag(f"common1({Z})", _common_one(k[X], k[Y], k[Z], ev.R),
                       f"k=({k[X]},{k[Y]},{k[Z]}) R+1={ev.R + 1}")
        if not ineq.holds:
            continue
        if not ev.C(X, Y, 1).holds:
            continue
        if ev.W(X, Y, Z, ev.m[Z]).holds:
            fired.append(f"one_factor({Z})")
    return fired


def _third_factor(ev):
    """Roles Z whose factor is pinned down alone.

    Needs full column rank of the Khatri-Rao product of the other two
    factors and the W chain on that pair.
    """
    roles = []
    for X, Y, Z in _third_roles(ev):
        m = ev.m[Z]
        dims = ev.F.dims
        I_X, I_Y = dims[ROLES.index(X)], dims[ROLES.index(Y)]
        if ev.k[Z] < 1 or m > min(I_X, I_Y):
            continue
        if not ev.C(X, Y, 1).holds:
            continue
        if ev.w_chain(X, Y, Z, m).holds:
            roles.append(Z)
    return roles


def _rule_rank_one(ev):
    # a single nonzero rank-1 term is trivially its own unique decomposition
    return ["rank_one"] if ev.R == 1 else []


def _cascade(ev):
    necessary = _necessary(ev)
    fired = _rule_rank_one(ev)
    fired += _rule_kruskal(ev)
    fired += _rule_two_k(ev)
    fired += _rule_two_of_three(ev)
    fired += _rule_one_factor(ev)
    third = _third_factor(ev)
    return necessary, fired, third


def _tier(necessary, fired, third):
    if fired:
        if necessary is Verdict.FAILS:
            raise AssertionError("a sufficient rule fired while a necessary condition fails")
        return Tier.UNIQUE
    if third:
        return Tier.THIRD_FACTOR_UNIQUE
    if necessary is Verdict.FAILS:
        return Tier.NECESSARY_VIOLATED
    return Tier.INCONCLUSIVE


def _as_triple(F):
    return F if isinstance(F, FactorTriple) else FactorTriple(*F)


def _certificate(ev, necessary, fired, third, sfs=False):
    return Certificate(
        dims=ev.F.dims,
        R=ev.R,
        mode=ev.F.mode,
        ranks=dict(ev.r),
        kranks=dict(ev.k),
        m_values=dict(ev.m),
        conditions=dict(ev.table),
        fired=fired,
        tier=_tier(necessary, fired, third),
        unique_factors=third,
        necessary=necessary,
        sfs=sfs,
        tol=ev.tol,
    )


def certify(F, tol=None, options=None):
    """Certificate for the decomposition with factors F = (A, B, C)."""
    ev = _Evaluator(_as_triple(F), tol, options or Options())
    necessary, fired, third = _cascade(ev)
    return _certificate(ev, necessary, fired, third)


def necessary_conditions(F, tol=None):
    """Verdict and condition table of the necessary conditions alone."""
    ev = _Evaluator(_as_triple(F), tol, Options())
    verdict = _necessary(ev)
    return verdict, dict(ev.table)


def rule_kruskal(F, tol=None):
    return _rule_kruskal(_Evaluator(_as_triple(F), tol, Options()))


def rule_two_k(F, tol=None):
    return _rule_two_k(_Evaluator(_as_triple(F), tol, Options()))


def rule_two_of_three_U(F, tol=None):
    return _rule_two_of_three(_Evaluator(_as_triple(F), tol, Options()))


def rule_one_factor_path(F, tol=None):
    return _rule_one_factor(_Evaluator(_as_triple(F), tol, Options()))


def check_common_one(F, common="C", tol=None):
    """Inequality for two decompositions sharing the factor in role ``common``."""
    F = _as_triple(F)
    X, Y = [x for x in ROLES if x != common]
    k = {x: krank(F.factor(x), tol) for x in ROLES}
    ok = _common_one(k[X], k[Y], k[common], F.R)
    return Outcome(Verdict.HOLDS if ok else Verdict.FAILS, None,
                   f"k=({k['A']},{k['B']},{k['C']}) R+1={F.R + 1}")


def check_common_two(F, free="B", tol=None):
    """Inequality for two decompositions sharing every factor except ``free``."""
    F = _as_triple(F)
    i = ROLES.index(free)
    X, Z = ROLES[(i - 1) % 3], ROLES[(i + 1) % 3]
    k = {x: krank(F.factor(x), tol) for x in ROLES}
    r = {x: rank(F.factor(x), tol) for x in ROLES}
    R = F.R

    def spread(a, b):
        return max(min(a, b - 1), min(a - 1, b))

    first = k[Z] >= 2 and spread(k[X], k[free]) + r[Z] >= R + 1
    second = k[X] >= 2 and spread(k[free], k[Z]) + r[X] >= R + 1
    return Outcome(Verdict.HOLDS if first or second else Verdict.FAILS, None,
                   f"k=({k['A']},{k['B']},{k['C']}) r=({r['A']},{r['B']},{r['C']})")


def certify_sfs(A, C, tol=None, options=None):
    """Certificate for the symmetric-frontal-slice decomposition [A, A, C].

    Runs the unsymmetric cascade on (A, A, C) and the three compound-matrix
    rules specific to symmetric factors.  Any firing marks the decomposition
    unique (as a CPD, hence also among SFS decompositions).
    """
    ev = _Evaluator(FactorTriple(A, A, C), tol, options or Options())
    necessary, fired, third = _cascade(ev)
    R, k, m = ev.R, ev.k, ev.m
    kA, kC = k["A"], k["C"]

    ineq_c = ev.flag("sfs_kranks(C)", kA + kC >= R + 2, f"{kA + kC} vs {R + 2}")
    full_c = ev.C("A", "B", m["C"])
    if ineq_c.holds and full_c.holds:
        fired.append("sfs_compound(C)")

    spread = max(min(kC - 1, kA), min(kC, kA - 1))
    ineq_a = ev.flag("sfs_kranks(A)", kA + spread >= R + 1, f"{kA + spread} vs {R + 1}")
    full_a = ev.C("C", "A", m["A"])
    if ineq_a.holds and full_a.holds:
        fired.append("sfs_compound(A)")

    if full_a.holds and full_c.holds:
        fired.append("sfs_both_compounds")
    return _certificate(ev, necessary, fired, third, sfs=True)
