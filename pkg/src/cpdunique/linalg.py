"""Rank, kernels, Khatri-Rao products and compound matrices in two modes.

A matrix is either *exact* (integer dtype, or object dtype holding ints and
Fractions) or *float* (float dtype).  Exact results are certified; float
results depend on a singular-value tolerance.  Mixing the two in one call
raises :class:`ModeError`.

Float tolerance: a value counts as nonzero when it exceeds
``max(rows, cols) * eps * scale`` where ``scale`` is the largest singular
value (SVD path) or the largest entry of the triangular factor (LU path,
used for matrices too large for an SVD).
"""

from fractions import Fraction
from math import comb, gcd
from numbers import Integral

import numpy as np
import scipy.linalg

from . import _modular
from .subsets import drop_tables

EXACT = "exact"
FLOAT = "float"

# Exact problems up to this many entries go through fraction-free elimination
# directly; larger ones through the modular engine.
_SMALL_EXACT = 400
# Float ranks above this many entries use a pivoted LU instead of an SVD.
_SVD_LIMIT = 4_000_000


class ModeError(TypeError):
    """Raised when exact and float operands meet in one computation."""


class NotDefinedError(ValueError):
    """Raised when a compound matrix of the requested order does not exist."""


_EXACT_TYPES = (Integral, Fraction, np.integer, np.bool_)
_FLOAT_TYPES = (float, np.floating)


def _type_mode(t):
    if issubclass(t, _EXACT_TYPES):
        return EXACT
    if issubclass(t, _FLOAT_TYPES):
        return FLOAT
    raise TypeError(f"unsupported matrix entry type {t.__name__}")


def _entry_modes(M):
    types = {type(x) for x in M.flat}
    return types, {_type_mode(t) for t in types}


def as_matrix(M):
    """Normalise to an exact object array or a float64 array."""
    M = np.asarray(M)
    kind = M.dtype.kind
    if kind in "biu":
        return np.array(M.tolist(), dtype=object).reshape(M.shape)
    if kind == "f":
        return M.astype(np.float64, copy=False)
    if kind == "O":
        types, modes = _entry_modes(M)
        if modes == {FLOAT}:
            return M.astype(np.float64)
        if len(modes) > 1:
            raise ModeError("matrix mixes exact and floating-point entries")
        if any(issubclass(t, (np.integer, np.bool_)) for t in types):
            return np.array([x if isinstance(x, Fraction) else int(x) for x in M.flat],
                            dtype=object).reshape(M.shape)
        return M
    raise TypeError(f"unsupported dtype {M.dtype}")


def mode_of(*arrays):
    """Common mode of the arguments; raises ModeError if they disagree."""
    modes = set()
    for M in arrays:
        M = np.asarray(M)
        if M.dtype.kind in "biu":
            modes.add(EXACT)
        elif M.dtype.kind == "f":
            modes.add(FLOAT)
        elif M.dtype.kind == "O":
            modes.update(_entry_modes(M)[1])
        else:
            raise TypeError(f"unsupported dtype {M.dtype}")
    if len(modes) > 1:
        raise ModeError("exact and floating-point operands cannot be mixed")
    return modes.pop() if modes else EXACT


def is_zero(x, tol=None):
    if isinstance(x, (float, np.floating)):
        return abs(x) <= (0.0 if tol is None else tol)
    return x == 0


def _lcm(a, b):
    return a * b // gcd(a, b)


def integer_rows(M):
    """Scale each row of an exact matrix to integers (same rank and kernel)."""
    M = as_matrix(M)
    if all(type(x) is int for x in M.flat):
        return M
    out = np.empty(M.shape, dtype=object)
    for i, row in enumerate(M):
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = _lcm(den, x.denominator)
        out[i] = [int(x * den) for x in row]
    return out


def _common_denominator(M):
    den = 1
    for x in M.flat:
        if isinstance(x, Fraction):
            den = _lcm(den, x.denominator)
    return den


# ---------------------------------------------------------------- exact core

def bareiss_echelon(rows):
    """Fraction-free row echelon form of a list of integer rows.

    Returns ``(echelon_rows, pivot_columns)``.  Every intermediate entry is a
    minor of the input, so all divisions are exact.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        top = a[r]
        p = top[c]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            for j in range(c + 1, n):
                row[j] = (p * row[j] - f * top[j]) // prev
            row[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _rref_fraction(rows):
    ech, pivots = bareiss_echelon(rows)
    R = [[Fraction(x) for x in row] for row in ech]
    for i in reversed(range(len(R))):
        c = pivots[i]
        lead = R[i][c]
        R[i] = [x / lead for x in R[i]]
        for k in range(i):
            f = R[k][c]
            if f:
                R[k] = [x - f * y for x, y in zip(R[k], R[i])]
    return R, pivots


def _exact_kernel_small(Mi, cols):
    R, pivots = _rref_fraction(Mi.tolist())
    pivset = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        basis.append(v)
    return len(pivots), basis


def _exact_rank(M):
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return 0
    Mi = integer_rows(M)
    if rows * cols <= _SMALL_EXACT:
        return len(bareiss_echelon(Mi.tolist())[1])
    # orient so that any certifying kernel is the smaller side
    if rows < cols:
        Mi = np.ascontiguousarray(Mi.T)
        rows, cols = cols, rows
    p = _modular.primes(1)[0]
    r = _modular.rank_mod(_modular.reduce_mod(Mi, p), p)
    if r == cols:
        return r
    got = _modular.kernel_exact(Mi)
    if got is not None:
        return got[0]
    return len(bareiss_echelon(Mi.tolist())[1])


def _exact_kernel(M):
    rows, cols = M.shape
    if cols == 0:
        return 0, []
    if rows == 0:
        return 0, [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    Mi = integer_rows(M)
    if rows * cols <= _SMALL_EXACT:
        return _exact_kernel_small(Mi, cols)
    got = _modular.kernel_exact(Mi)
    if got is None:
        return _exact_kernel_small(Mi, cols)
    return got


# ---------------------------------------------------------------- float core

def default_tolerance(shape, scale):
    return max(shape) * np.finfo(np.float64).eps * scale


def _lu_pivots(M):
    """Absolute diagonal of the U factor of a partially pivoted LU, plus max |U|."""
    if M.shape[0] < M.shape[1]:
        M = M.T
    A = np.asfortranarray(M)
    lu, _ = scipy.linalg.lu_factor(A, overwrite_a=True, check_finite=False)
    diag = np.abs(np.diagonal(lu)).copy()
    umax = 0.0
    for j in range(lu.shape[1]):
        col = lu[: min(j + 1, lu.shape[0]), j]
        if col.size:
            umax = max(umax, float(np.max(np.abs(col))))
    del lu
    return diag, umax


def float_rank_report(M, tol=None):
    """Float rank with the threshold used and the smallest counted pivot.

    Returns ``(rank, tol, smallest_kept)``.
    """
    M = np.asarray(M, dtype=np.float64)
    if min(M.shape) == 0:
        return 0, 0.0, None
    if M.size <= _SVD_LIMIT:
        s = np.linalg.svd(M, compute_uv=False)
        t = default_tolerance(M.shape, s[0]) if tol is None else tol
        kept = s[s > t]
    else:
        diag, umax = _lu_pivots(M)
        t = default_tolerance(M.shape, umax) if tol is None else tol
        kept = diag[diag > t]
    return int(kept.size), float(t), (float(kept.min()) if kept.size else None)


def _float_kernel(M, tol):
    rows, cols = M.shape
    if cols == 0:
        return 0, []
    if rows == 0:
        return 0, list(np.eye(cols))
    _, s, vh = np.linalg.svd(M)
    t = default_tolerance(M.shape, s[0] if s.size else 0.0) if tol is None else tol
    r = int((s > t).sum())
    return r, [vh[i].copy() for i in range(r, cols)]


# ---------------------------------------------------------------- public API

def rank(M, tol=None):
    """Rank of M.  Exact matrices give the rank over Q; floats use ``tol``."""
    M = as_matrix(M)
    if M.ndim != 2:
        raise ValueError("rank expects a 2-D matrix")
    if M.dtype == object:
        return _exact_rank(M)
    return float_rank_report(M, tol)[0]


def kernel_basis(M, tol=None):
    """Basis of the right kernel as a list of 1-D arrays.

    Exact mode returns Fraction vectors normalised with a 1 in each free
    column of the reduced row echelon form, so the basis is canonical.
    Float mode returns orthonormal right singular vectors.
    """
    M = as_matrix(M)
    if M.dtype == object:
        _, basis = _exact_kernel(M)
        return [np.array(v, dtype=object) for v in basis]
    return _float_kernel(M, tol)[1]


def full_column_rank(M, tol=None):
    M = as_matrix(M)
    return M.shape[0] >= M.shape[1] and rank(M, tol) == M.shape[1]


def in_range_of(v, M, tol=None):
    """Whether vector v lies in the column space of M."""
    mode_of(v, M)
    M = as_matrix(M)
    v = as_matrix(np.asarray(v).reshape(-1, 1))
    if v.shape[0] != M.shape[0]:
        raise ValueError("vector length does not match the number of rows")
    joined = np.concatenate([M, v], axis=1)
    return rank(joined, tol) == rank(M, tol)


def khatri_rao(A, B):
    """Column-wise Kronecker product: column r is kron(A[:, r], B[:, r])."""
    mode_of(A, B)
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"column counts differ: {A.shape[1]} and {B.shape[1]}")
    return (A[:, None, :] * B[None, :, :]).reshape(A.shape[0] * B.shape[0], A.shape[1])


def _compound_dp(M, m, combine):
    """Shared dynamic programme: order-k minors from order-(k-1) minors.

    Expands each k x k minor along its last column.  ``combine(acc, sign,
    left, right)`` accumulates ``sign * left * right``.
    """
    rows, cols = M.shape
    C = M
    for k in range(2, m + 1):
        row_rest, row_drop = drop_tables(rows, k)
        col_rest, col_drop = drop_tables(cols, k)
        last = col_drop[:, k - 1]
        prev_cols = col_rest[:, k - 1]
        acc = None
        for j in range(k):
            left = M[row_drop[:, j]][:, last]
            right = C[row_rest[:, j]][:, prev_cols]
            sign = 1 if (j + k - 1) % 2 == 0 else -1
            acc = combine(acc, sign, left, right)
        C = acc
    return C


def _check_order(shape, m):
    if not (isinstance(m, Integral) and 1 <= m <= min(shape)):
        raise NotDefinedError(f"compound of order {m} undefined for a {shape[0]}x{shape[1]} matrix")


def compound(M, m):
    """m-th compound matrix: all m x m minors, rows and columns in lexicographic order.

    The result has shape (C(rows, m), C(cols, m)).
    """
    M = as_matrix(M)
    _check_order(M.shape, m)
    if M.dtype != object:
        def combine(acc, sign, left, right):
            term = left * right
            return sign * term if acc is None else (acc + term if sign > 0 else acc - term)
        return _compound_dp(M, m, combine)

    den = _common_denominator(M)
    Mi = np.array([int(x * den) for x in M.flat], dtype=object).reshape(M.shape)

    def combine(acc, sign, left, right):
        term = left * right
        if acc is None:
            return term if sign > 0 else -term
        return acc + term if sign > 0 else acc - term

    C = _compound_dp(Mi, m, combine)
    if den == 1:
        return C
    scale = den**m
    return np.array([Fraction(int(x), scale) for x in C.flat], dtype=object).reshape(C.shape)


def compound_mod(M, m, p):
    """m-th compound of an integer matrix reduced modulo prime p (int64)."""
    M = _modular.reduce_mod(M, p)
    _check_order(M.shape, m)

    def combine(acc, sign, left, right):
        term = (left * right) % p
        if acc is None:
            return term if sign > 0 else (-term) % p
        return (acc + term) % p if sign > 0 else (acc - term) % p

    return _compound_dp(M, m, combine)


def compound_shape(rows, cols, m):
    return comb(rows, m), comb(cols, m)
