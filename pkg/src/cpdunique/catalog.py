"""Named example factorizations with known uniqueness behaviour.

Every function returns exact matrices (object arrays of ints or Fractions)
so that checks on them run in exact arithmetic.  Indices in docstrings are
0-based.
"""

from fractions import Fraction

import numpy as np

from .generic import Sampler, sample_matrix


def exact(rows):
    """Object array of ints/Fractions from nested lists (strings "p/q" allowed)."""
    def conv(x):
        if isinstance(x, str):
            return Fraction(x)
        return x
    return np.array([[conv(x) for x in row] for row in rows], dtype=object)


def identity(n):
    return exact([[int(i == j) for j in range(n)] for i in range(n)])


# ---------------------------------------------------------------- 2 x 3 x 3

def three_term():
    """Rank-3 factors of a 2 x 3 x 3 tensor; k-ranks 2, 3, 3 meet Kruskal's bound."""
    A = exact([[1, 1, 1], [-1, -2, 3]])
    B = exact([[6, 12, 2], [3, 4, -1], [4, 6, -4]])
    return A, B, identity(3)


def four_term():
    """A second, 4-term decomposition of the same tensor as :func:`three_term`."""
    A = exact([[1, 0, 1, 1], [0, 1, 1, 2]])
    B = exact([[1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]])
    C = exact([[6, -6, -3, -2], [12, -24, -8, -6], [2, 6, -3, -6]])
    return A, B, C


# Unscaled third-factor base of the sharpness family.  With the mixing matrix
# below it reproduces the tensor only after scaling its columns by
# (3/4, -1/4, 3/2, -1/2); that product, SHARPNESS_C, is the unique solution.
SHARPNESS_C_UNSCALED = [[6, -6, -3, -2], ["-24/5", "48/5", "16/5", "12/5"], ["2/15", "2/5", "-1/5", "-2/5"]]
SHARPNESS_C = [["9/2", "3/2", "-9/2", 1], ["-18/5", "-12/5", "24/5", "-6/5"], ["1/10", "-1/10", "-3/10", "1/5"]]
SHARPNESS_MIX = [[1, 1, 1, 1], [1, 2, "4/3", "3/2"], [1, -3, 3, 9]]


def sharpness_family(alpha, beta, c_base=SHARPNESS_C):
    """Alternative (B, C) for :func:`four_term` sharing its A, for nonzero alpha, beta.

    The tensor does not depend on alpha and beta; the columns match those of
    the four-term B and C up to scaling only at alpha = -2/5, beta = 1/15.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 0 or beta == 0:
        raise ValueError("alpha and beta must be nonzero")
    B_hat = three_term()[1]
    scale = exact([[1, 0, 0], [0, alpha, 0], [0, 0, beta]])
    inv = exact([[1, 0, 0], [0, 1 / alpha, 0], [0, 0, 1 / beta]])
    return B_hat.dot(scale).dot(exact(SHARPNESS_MIX)), inv.dot(exact(c_base))


def columns_proportional(X, Y):
    """Whether column r of X is a nonzero multiple of column r of Y for every r."""
    X, Y = np.asarray(X, dtype=object), np.asarray(Y, dtype=object)
    if X.shape != Y.shape:
        return False
    for r in range(X.shape[1]):
        x, y = X[:, r], Y[:, r]
        i = next((i for i in range(len(y)) if y[i] != 0), None)
        if i is None or x[i] == 0:
            return False
        c = Fraction(x[i]) / Fraction(y[i])
        if any(Fraction(a) != c * Fraction(b) for a, b in zip(x, y)):
            return False
    return True


# ---------------------------------------------------------------- 3 x 3 x 5

def rank_five_pair():
    """3 x 3 x 5 factors with m = 4 compounds undefined but a one-dimensional U2 kernel."""
    A = exact([[1, 0, 0, 1, 1], [0, 1, 0, 1, 2], [0, 0, 1, 1, 3]])
    B = exact([[1, 0, 0, 1, 1], [0, 1, 0, 1, 3], [0, 0, 1, 1, 5]])
    return A, B, identity(5)


RANK_FIVE_PAIR_PRODUCT = [
    [1, 0, 1, 6, 0, 1, 1, 0, 0, 2],
    [0, 0, 1, 10, 0, 0, 0, 0, 0, 4],
    [0, 0, 0, 0, 0, -1, -5, 0, 0, 2],
    [0, 0, 1, 9, 0, 0, 0, 0, 0, 4],
    [0, 1, 1, 15, 0, 0, 0, 1, 1, 8],
    [0, 0, 0, 0, 0, 0, 0, 1, 3, 4],
    [0, 0, 0, 0, 0, -1, -3, 0, 0, 2],
    [0, 0, 0, 0, 0, 0, 0, 1, 2, 4],
    [0, 0, 0, 0, 1, 1, 15, 1, 6, 2],
]

# Spans the kernel of C_2(A) kr C_2(B) for rank_five_pair.  The variant with
# the last sign flipped is not in the kernel.
RANK_FIVE_PAIR_KERNEL = [0, 0, -4, 0, 0, 2, 0, -4, 0, 1]
RANK_FIVE_PAIR_KERNEL_SIGN_FLIPPED = [0, 0, -4, 0, 0, 2, 0, -4, 0, -1]


# ---------------------------------------------------------------- 4 x 4 x 4

def two_of_three():
    """4 x 4 x 4, R = 5, k-ranks 3: Kruskal fails, C3 holds for all three pairs."""
    A = exact([[1, 0, 0, 0, 1], [0, 1, 0, 0, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 0]])
    B = exact([[1, 0, 0, 0, 1], [0, 1, 0, 0, 1], [0, 0, 1, 0, 0], [0, 0, 0, 1, 1]])
    C = exact([[1, 0, 0, 0, 1], [0, 1, 0, 0, 0], [0, 0, 1, 0, 1], [0, 0, 0, 1, 1]])
    return A, B, C


# ---------------------------------------------------------------- 5 x 5 x 5

def two_k(stars=(1, 1, 1)):
    """5 x 5 x 5, R = 6 with identity blocks and one free last column per factor.

    ``stars`` gives the nonzero value used for every free entry of A, B, C.
    """
    zero_row = {"A": 4, "B": 3, "C": 2}
    out = []
    for role, s in zip("ABC", stars):
        M = [[int(i == j) for j in range(5)] + [0 if i == zero_row[role] else s] for i in range(5)]
        out.append(exact(M))
    return tuple(out)


# ---------------------------------------------------------------- 5 x 5 x 8

def one_factor_h():
    """5 x 5 x 8 Vandermonde-based factors with C = I_8.

    H_AB is (1,2,3,4,3,2,2,2), enough for the one-factor path through H2;
    H_BC(5) = 4 blocks the two-of-three path.
    """
    A_hat = [[(j + 1) ** i for j in range(8)] for i in range(4)]
    B_hat = [[(j - 4) ** i for j in range(8)] for i in range(4)]
    A = exact(A_hat + [[int(j == 0) for j in range(8)]])
    B = exact(B_hat + [[int(j == 7) for j in range(8)]])
    return A, B, identity(8)


# ---------------------------------------------------------------- 4 x 4 x 4, W fails

def w_fails(alpha=1):
    """4 x 4 x 4, R = 5 family (alpha != 0) for which W3 fails for every pair."""
    alpha = Fraction(alpha)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if alpha.denominator == 1:
        alpha = int(alpha)
    A = exact([[0, alpha, 0, 0, 0], [1, 0, 1, 0, 0], [1, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    B = exact([[0, 1, 0, 0, 0], [1, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 0, 0, 0, 1]])
    C = exact([[1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 0, 0, 0, 1]])
    return A, B, C


# Directions x with exactly one nonzero entry in X^T x, as unit-vector indices.
W_FAILS_DIRECTIONS = {"A": (0, 3), "B": (0, 2), "C": (1, 2)}


# ---------------------------------------------------------------- structured perturbation

# Zero coordinate of the extra column of A, B, C (keeps one slice of I_4 fixed).
PERTURBATION_ZEROS = {"A": 3, "B": 2, "C": 1}


def structured_perturbation(seed):
    """I_4 plus a random rank-1 term whose vectors have one forced zero each."""
    out = []
    for t, role in enumerate("ABC"):
        col = sample_matrix(Sampler("masked", ((PERTURBATION_ZEROS[role], 0),)), 4, 1, seed * 3 + t)
        M = np.hstack([np.eye(4, dtype=np.int64), col])
        out.append(exact(M.tolist()))
    return tuple(out)


# ---------------------------------------------------------------- SFS

def identity_slab(I, K):
    """SFS tensor of K stacked identities as [A, A, E] with A = I_I and E all ones."""
    return identity(I), exact([[1] * I for _ in range(K)])
