"""Rank-type conditions on a pair of factor matrices (A, B) at an order m.

Every check returns an :class:`Outcome` with one of four verdicts.  A failing
outcome carries a witness where one exists: a violating column subset size,
or a vector ``d`` whose order-m product vector lies in the kernel of the
compound Khatri-Rao product.

The conditions, for A (I x R), B (J x R) and 1 <= m:

K   rank/k-rank inequality: (r_A + k_B >= R + m and k_A >= m) or the same
    with A and B swapped.
C   the compound product ``C_m(A) kr C_m(B)`` has full column rank.
H   for every delta, the minimum over delta-column subsets S of
    r(A_S) + r(B_S) - delta is at least min(delta, m).
U   no d with at least m nonzero entries has its product vector
    ``hat_m(d)`` in the kernel of the compound product.
W   like U, but only d in the row space of a third factor C count.

K implies C and H, C or H implies U, and U implies W.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, prod

import numpy as np

from .linalg import (
    FLOAT,
    as_matrix,
    compound,
    in_range_of,
    kernel_basis,
    khatri_rao,
    mode_of,
    rank,
)
from .subsets import positions, subsets

SUPPORT_SEARCH_MAX_R = 12


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class Outcome:
    verdict: Verdict
    witness: tuple | None = None
    detail: str = ""

    @property
    def holds(self):
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self):
        return self.verdict is Verdict.FAILS


def _na(detail):
    return Outcome(Verdict.NOT_APPLICABLE, None, detail)


# ------------------------------------------------------------ basic quantities

def krank(M, tol=None):
    """Largest k such that every k columns of M are linearly independent."""
    M = as_matrix(M)
    rows, R = M.shape
    if R == 0:
        return 0
    top = min(rows, R)
    if rank(M, tol) == R:
        return R
    for k in range(1, top + 1):
        for S in combinations(range(R), k):
            if rank(M[:, S], tol) < k:
                return k - 1
    return top


def h_profile(A, B, tol=None):
    """H(delta) for delta = 1..R, as a list indexed by delta - 1.

    H(delta) is the minimum over delta-column subsets S of
    rank(A[:, S]) + rank(B[:, S]) - delta.  Exhaustive over subsets.
    """
    mode_of(A, B)
    A, B = as_matrix(A), as_matrix(B)
    R = A.shape[1]
    out = []
    for delta in range(1, R + 1):
        best = None
        for S in combinations(range(R), delta):
            value = rank(A[:, S], tol) + rank(B[:, S], tol) - delta
            if best is None or value < best:
                best = value
        out.append(best)
    return out


def hat_vector(d, m):
    """Products of every m distinct entries of d, subsets in lexicographic order."""
    d = list(d)
    exact = not any(isinstance(x, (float, np.floating)) for x in d)
    values = [prod((d[i] for i in S), start=1) for S in subsets(len(d), m)]
    return np.array(values, dtype=object if exact else np.float64)


def _nonzero_mask(v, tol):
    v = np.asarray(v)
    if v.dtype == object:
        return np.array([x != 0 for x in v], dtype=bool)
    scale = np.max(np.abs(v)) if v.size else 0.0
    thresh = (1e-9 if tol is None else tol) * scale
    return np.abs(v) > thresh


def reconstruct_from_hat(v, R, m, tol=None):
    """Find d with ``hat_vector(d, m)`` proportional to v, or None.

    v has length C(R, m).  Its support must be exactly the family of all
    m-subsets of some set T with at least m members; then d is supported
    on T, its ratios follow from entries sharing m - 1 indices, and the
    first member of T gets weight 1.  Float vectors use ``tol`` relative to
    the largest entry (default 1e-9) both for the support and for the final
    proportionality check.
    """
    v = np.asarray(v)
    if v.shape != (comb(R, m),) or m < 1:
        raise ValueError(f"expected a vector of length C({R},{m})")
    exact = v.dtype == object
    mask = _nonzero_mask(v, tol)
    if not mask.any():
        return None
    subs = subsets(R, m)
    T = sorted({i for s, on in zip(subs, mask) if on for i in s})
    family = subsets(len(T), m)
    idx = positions(R, m, [tuple(T[i] for i in s) for s in family])
    if mask.sum() != len(idx) or not mask[idx].all():
        return None
    lookup = dict(zip(subs, v))
    zero = Fraction(0) if exact else 0.0
    d = [zero] * R
    first = T[0]
    d[first] = Fraction(1) if exact else 1.0
    if len(T) > m:
        for a in T[1:]:
            rest = [t for t in T if t not in (first, a)][: m - 1]
            num = lookup[tuple(sorted(rest + [a]))]
            den = lookup[tuple(sorted(rest + [first]))]
            d[a] = Fraction(num) / Fraction(den) if exact else num / den
    else:
        for a in T[1:]:
            d[a] = Fraction(1) if exact else 1.0
    h = hat_vector(d, m)
    k0 = idx[0]
    c = (Fraction(v[k0]) / Fraction(h[k0])) if exact else v[k0] / h[k0]
    if exact:
        if any(x != c * y for x, y in zip(v, h)):
            return None
    else:
        scale = np.max(np.abs(v))
        t = (1e-9 if tol is None else tol) * scale
        if np.max(np.abs(v.astype(np.float64) - c * h.astype(np.float64))) > t:
            return None
    return np.array(d, dtype=object if exact else np.float64)


def compound_pair_product(A, B, m):
    """``C_m(A) kr C_m(B)``, the matrix behind the C, U and W conditions."""
    return khatri_rao(compound(A, m), compound(B, m))


def _order_defined(A, B, m):
    (I, R), J = A.shape, B.shape[0]
    return 1 <= m <= min(I, J, R)


# ------------------------------------------------------------ the conditions

def check_K(A, B, m, tol=None, *, ranks=None, kranks=None):
    if m < 1:
        return _na(f"order {m} < 1")
    mode_of(A, B)
    R = as_matrix(A).shape[1]
    rA, rB = ranks if ranks is not None else (rank(A, tol), rank(B, tol))
    kA, kB = kranks if kranks is not None else (krank(A, tol), krank(B, tol))
    ok = (rA + kB >= R + m and kA >= m) or (rB + kA >= R + m and kB >= m)
    detail = f"r=({rA},{rB}) k=({kA},{kB}) R+m={R + m}"
    return Outcome(Verdict.HOLDS if ok else Verdict.FAILS, None, detail)


def check_C(A, B, m, tol=None):
    mode_of(A, B)
    A, B = as_matrix(A), as_matrix(B)
    if not _order_defined(A, B, m):
        return _na(f"compound of order {m} undefined")
    (I, R), J = A.shape, B.shape[0]
    rows, cols = comb(I, m) * comb(J, m), comb(R, m)
    if rows < cols:
        return Outcome(Verdict.FAILS, None, f"{rows}x{cols}: fewer rows than columns")
    r = rank(compound_pair_product(A, B, m), tol)
    if r == cols:
        return Outcome(Verdict.HOLDS, None, f"{rows}x{cols} full column rank")
    return Outcome(Verdict.FAILS, None, f"{rows}x{cols} rank {r}")


def check_H(A, B, m, tol=None, *, profile=None):
    if m < 1:
        return _na(f"order {m} < 1")
    if profile is None:
        profile = h_profile(A, B, tol)
    for delta, value in enumerate(profile, start=1):
        if value < min(delta, m):
            return Outcome(Verdict.FAILS, (delta,), f"H({delta})={value} < {min(delta, m)}")
    return Outcome(Verdict.HOLDS, None, "H=" + ",".join(map(str, profile)))


@dataclass
class WitnessFamily:
    """Vectors d with hat_m(d) in the kernel, all sharing support T.

    With |T| > m the vector d is unique up to scale.  With |T| = m any d
    supported exactly on T qualifies (``free`` is True).
    """

    support: tuple
    d: np.ndarray
    free: bool


@dataclass
class UAnalysis:
    outcome: Outcome
    kernel_dim: int | None = None
    families: list = field(default_factory=list)
    complete: bool = False


def _family_from(v, R, m, tol):
    d = reconstruct_from_hat(v, R, m, tol)
    if d is None:
        return None
    support = tuple(int(i) for i in np.flatnonzero(_nonzero_mask(d, tol)))
    return WitnessFamily(support, d, len(support) == m)


def _integer_columns(vectors):
    cols = []
    for v in vectors:
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        cols.append([int(x * den) for x in v])
    return np.array(cols, dtype=object).T


def _support_search(K, R, m):
    """All witness families reachable from an exact kernel basis K (Q x kdim).

    Enumerates supports T whose m-subsets are all live coordinates of the
    kernel.  Returns ``(families, complete)``; complete is False when some
    support admits a kernel subspace of dimension two or more.
    """
    subs = subsets(R, m)
    kdim = K.shape[1]
    live = {s for s, row in zip(subs, K) if any(x != 0 for x in row)}
    all_rows = np.arange(len(subs))
    families = []
    complete = True

    def visit(T):
        nonlocal complete
        if len(T) >= m:
            inside = positions(R, m, list(combinations(T, m)))
            outside = np.setdiff1d(all_rows, inside)
            dim = kdim - (rank(K[outside]) if outside.size else 0)
            if dim >= 2:
                complete = False
            elif dim == 1:
                y = kernel_basis(K[outside])[0] if outside.size else np.array([1], dtype=object)
                fam = _family_from(K.dot(y), R, m, None)
                if fam is not None and fam.support == tuple(T):
                    families.append(fam)
        start = T[-1] + 1 if T else 0
        for x in range(start, R):
            if len(T) + 1 >= m and not all(c + (x,) in live for c in combinations(T, m - 1)):
                continue
            visit(T + (x,))

    visit(())
    return families, complete


def analyze_U(A, B, m, tol=None, support_search_max_r=SUPPORT_SEARCH_MAX_R):
    """Kernel analysis behind check_U and check_W."""
    mode = mode_of(A, B)
    A, B = as_matrix(A), as_matrix(B)
    if not _order_defined(A, B, m):
        return UAnalysis(_na(f"compound of order {m} undefined"))
    R = A.shape[1]
    M = compound_pair_product(A, B, m)
    basis = kernel_basis(M, tol)
    kdim = len(basis)
    shape = f"{M.shape[0]}x{M.shape[1]}"
    if kdim == 0:
        return UAnalysis(Outcome(Verdict.HOLDS, None, f"{shape} full column rank"), 0, [], True)
    families = []
    for v in basis:
        fam = _family_from(v, R, m, tol)
        if fam is not None and all(f.support != fam.support for f in families):
            families.append(fam)
    complete = kdim == 1
    if not complete and mode != FLOAT and R <= support_search_max_r:
        K = _integer_columns(basis)
        found, complete = _support_search(K, R, m)
        for fam in found:
            if all(f.support != fam.support for f in families):
                families.append(fam)
    detail = f"{shape} kernel dim {kdim}"
    if families:
        return UAnalysis(Outcome(Verdict.FAILS, tuple(families[0].d), detail), kdim, families, complete)
    if complete:
        return UAnalysis(Outcome(Verdict.HOLDS, None, detail + ", no product vector"), kdim, [], True)
    return UAnalysis(Outcome(Verdict.UNKNOWN, None, detail + ", unresolved"), kdim, [], False)


def check_U(A, B, m, tol=None):
    return analyze_U(A, B, m, tol).outcome


def _range_vector_on_support(C, T, tol):
    """A vector of the row space of C supported exactly on T, or None."""
    C = as_matrix(C)
    R = C.shape[1]
    others = [j for j in range(R) if j not in T]
    if others:
        for i in T:
            if in_range_of(C[:, i], C[:, others], tol):
                return None
        Z = kernel_basis(C[:, others].T, tol)
    else:
        Z = list(np.eye(C.shape[0], dtype=int).astype(C.dtype))
    for t in range(1, 4 * R + 8):
        z = sum(z_k * t**k for k, z_k in enumerate(Z))
        d = C.T.dot(z)
        if all(not _is_tiny(d[i], tol) for i in T):
            return d
    return None


def _is_tiny(x, tol):
    if isinstance(x, (float, np.floating)):
        return abs(x) <= (1e-12 if tol is None else tol)
    return x == 0


def check_W(A, B, C, m, tol=None, analysis=None):
    """The U condition restricted to vectors d in the row space of C."""
    mode_of(A, B, C)
    if analysis is None:
        analysis = analyze_U(A, B, m, tol)
    u = analysis.outcome
    if u.verdict is Verdict.NOT_APPLICABLE:
        return u
    if u.holds:
        return Outcome(Verdict.HOLDS, None, "via U: " + u.detail)
    C = as_matrix(C)
    for fam in analysis.families:
        if fam.free:
            d = _range_vector_on_support(C, fam.support, tol)
            if d is not None:
                return Outcome(Verdict.FAILS, tuple(d), f"support {fam.support} reachable from the third factor")
        elif in_range_of(fam.d, C.T, tol):
            return Outcome(Verdict.FAILS, tuple(fam.d), f"witness in row space of the third factor ({u.detail})")
    if analysis.complete:
        return Outcome(Verdict.HOLDS, None, f"no witness in row space of the third factor ({u.detail})")
    return Outcome(Verdict.UNKNOWN, None, u.detail)


def one_nonzero_directions(M, tol=None):
    """For each column r, the vectors x with M^T x nonzero only at r.

    Returns a list with, per column, a basis of the solution space
    ``{x : x orthogonal to every other column}`` if column r lies outside the
    span of the others, and an empty list otherwise (no such x).
    """
    M = as_matrix(M)
    R = M.shape[1]
    out = []
    for r in range(R):
        others = M[:, [j for j in range(R) if j != r]]
        if others.shape[1] and in_range_of(M[:, r], others, tol):
            out.append([])
        elif others.shape[1] == 0:
            out.append([row for row in np.eye(M.shape[0], dtype=M.dtype)])
        else:
            out.append(kernel_basis(others.T, tol))
    return out
