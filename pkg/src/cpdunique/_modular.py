"""Exact integer linear algebra through reduction modulo word-size primes.

Rank over Q is bounded below by the rank modulo any prime.  Kernels are
recovered by Chinese remaindering of reduced row echelon forms over several
primes followed by rational reconstruction, and every recovered kernel vector
is verified by an exact integer product before it is returned.  A verified
kernel of dimension ``cols - r`` together with a modular rank ``r`` pins the
rank over Q exactly.
"""

from fractions import Fraction
from math import gcd, isqrt

import numpy as np


def _is_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES = []


def primes(count):
    """The ``count`` largest primes below 2**31, descending.

    Products of two residues stay below 2**62, so int64 arithmetic is exact.
    """
    n = _PRIMES[-1] - 2 if _PRIMES else 2**31 - 1
    while len(_PRIMES) < count:
        if _is_prime(n):
            _PRIMES.append(n)
        n -= 2
    return tuple(_PRIMES[:count])


def iter_primes(limit):
    for i in range(limit):
        yield primes(i + 1)[i]


def reduce_mod(M, p):
    """Reduce an integer (object or int) array modulo p into int64."""
    M = np.asarray(M)
    if M.dtype == object:
        flat = [int(x) % p for x in M.flat]
        return np.array(flat, dtype=np.int64).reshape(M.shape)
    return np.mod(M.astype(np.int64), p)


def rank_mod(A, p):
    """Rank of an int64 matrix with entries in [0, p)."""
    A = np.array(A, dtype=np.int64, copy=True)
    rows, cols = A.shape
    if rows < cols:
        A = np.ascontiguousarray(A.T)
        rows, cols = cols, rows
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        pivot_row = (A[r, c + 1:] * inv) % p
        below = A[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            rows_hit = r + 1 + hit
            A[rows_hit, c + 1:] = (A[rows_hit, c + 1:] - below[hit, None] * pivot_row) % p
        r += 1
    return r


def rref_mod(A, p):
    """Reduced row echelon form modulo p.

    Returns ``(R, pivots)`` where R holds only the nonzero rows.
    """
    A = np.array(A, dtype=np.int64, copy=True)
    rows, cols = A.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit, c:] = (A[hit, c:] - col[hit, None] * A[r, c:]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _kernel_mod(R, pivots, cols, p):
    free = [c for c in range(cols) if c not in set(pivots)]
    K = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        K[k, f] = 1
        K[k, pivots] = (-R[:, f]) % p
    return K, free


def rational_reconstruction(a, modulus):
    """Smallest n/d with n = a*d mod modulus and |n|, d <= sqrt(modulus/2), or None."""
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, a % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return r1, s1


def _reconstruct_vector(residues, modulus):
    """Rational vector from residues, sharing a running common denominator."""
    den = 1
    out = []
    for a in residues:
        got = rational_reconstruction(a * den % modulus, modulus)
        if got is None:
            return None
        n, d = got
        out.append(Fraction(n, d * den))
        den *= d
    return out


def _integer_vector(vec):
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def _verify(M, vectors):
    if not vectors:
        return True
    V = np.array([_integer_vector(v) for v in vectors], dtype=object).T
    P = M.dot(V)
    return not any(x != 0 for x in P.flat)


def kernel_exact(M, max_primes=4096):
    """Exact right kernel of an integer matrix (object array of Python ints).

    Returns ``(rank, basis)`` with basis a list of Fraction lists in the
    normalised form of the reduced row echelon kernel (a 1 in each free
    column), or None if ``max_primes`` primes did not suffice.
    """
    M = np.asarray(M, dtype=object)
    rows, cols = M.shape
    best = None  # (pivots, residue matrix, modulus)
    for p in iter_primes(max_primes):
        R, piv = rref_mod(reduce_mod(M, p), p)
        if best is not None:
            bpiv = best[0]
            if len(piv) < len(bpiv) or (len(piv) == len(bpiv) and piv > bpiv):
                continue  # unlucky prime
            if len(piv) > len(bpiv) or piv < bpiv:
                best = None
        K, _ = _kernel_mod(R, piv, cols, p)
        if best is None:
            best = (piv, np.array(K.tolist(), dtype=object), p)
            count = 1
            schedule = 1
        else:
            bpiv, X, mod = best
            inv = pow(mod % p, p - 2, p)
            Xp = reduce_mod(X, p)
            t = ((K - Xp) % p * inv) % p
            X = X + mod * np.array(t.tolist(), dtype=object)
            best = (bpiv, X, mod * p)
            count += 1
        if len(best[0]) == cols:
            return cols, []
        if count < schedule:
            continue
        schedule *= 2
        piv, X, mod = best
        cand = []
        for row in X:
            vec = _reconstruct_vector([int(x) for x in row], mod)
            if vec is None:
                break
            cand.append(vec)
        else:
            if _verify(M, cand):
                return cols - len(cand), cand
    return None
