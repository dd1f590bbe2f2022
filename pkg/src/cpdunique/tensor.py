"""Third-order tensors built from factor matrices, and their unfoldings.

A tensor with dimensions I x J x K is stored as an array of shape (I, J, K).
The decomposition with factors A (I x R), B (J x R), C (K x R) is
``T[i, j, k] = sum_r A[i, r] * B[j, r] * C[k, r]``.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, khatri_rao, mode_of

ROLES = ("A", "B", "C")


@dataclass(frozen=True, eq=False)
class FactorTriple:
    """Three factor matrices sharing the column count R.

    Exact factors are object arrays of ints/Fractions, float factors are
    float64 arrays; the three always share one mode.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        mode = mode_of(self.A, self.B, self.C)
        mats = [as_matrix(M) for M in (self.A, self.B, self.C)]
        for role, M in zip(ROLES, mats):
            if M.ndim != 2:
                raise ValueError(f"factor {role} must be a matrix")
            if M.shape[0] == 0:
                raise ValueError(f"factor {role} has no rows")
        R = {M.shape[1] for M in mats}
        if len(R) != 1:
            raise ValueError(f"factors disagree on the number of columns: {[M.shape[1] for M in mats]}")
        for role, M in zip(ROLES, mats):
            if R == {0}:
                break
            zero = [r for r in range(M.shape[1]) if not np.any(M[:, r] != 0)]
            if zero:
                raise ValueError(f"factor {role} has zero column(s) {zero}")
        for role, M in zip(ROLES, mats):
            object.__setattr__(self, role, M)
        object.__setattr__(self, "mode", mode)

    @property
    def R(self):
        return self.A.shape[1]

    @property
    def dims(self):
        return (self.A.shape[0], self.B.shape[0], self.C.shape[0])

    def factor(self, role):
        return getattr(self, role)

    def permuted(self, order):
        """New triple with the factors in the given role order, e.g. "BCA"."""
        return FactorTriple(*(self.factor(r) for r in order))


def from_factors(A, B, C):
    """Dense I x J x K tensor of the decomposition [A, B, C]."""
    F = FactorTriple(A, B, C)
    return np.einsum("ir,jr,kr->ijk", F.A, F.B, F.C)


def unfold(T, k):
    """Matrix unfolding number k (1..6) of an I x J x K tensor.

    The six unfoldings equal, in order, (A kr B) C^T, (B kr C) A^T,
    (C kr A) B^T, (A kr C) B^T, (B kr A) C^T and (C kr B) A^T, where
    ``kr`` is the Khatri-Rao product.  Row index of the first is i*J + j.
    """
    T = np.asarray(T)
    # axes order (row-major pair, column axis)
    layouts = {1: (0, 1, 2), 2: (1, 2, 0), 3: (2, 0, 1), 4: (0, 2, 1), 5: (1, 0, 2), 6: (2, 1, 0)}
    if k not in layouts:
        raise ValueError("unfolding index must be in 1..6")
    a, b, c = layouts[k]
    P = np.transpose(T, (a, b, c))
    return P.reshape(P.shape[0] * P.shape[1], P.shape[2])


def unfolding_factors(A, B, C, k):
    """The Khatri-Rao form of unfolding k, computed from the factors."""
    pairs = {1: (A, B, C), 2: (B, C, A), 3: (C, A, B), 4: (A, C, B), 5: (B, A, C), 6: (C, B, A)}
    X, Y, Z = pairs[k]
    return khatri_rao(X, Y).dot(as_matrix(Z).T)


def equals(T1, T2, tol=None):
    """Entrywise equality; exact for exact tensors, absolute ``tol`` for floats."""
    T1, T2 = np.asarray(T1), np.asarray(T2)
    if T1.shape != T2.shape:
        return False
    if T1.dtype == object or T2.dtype == object:
        mode_of(T1, T2)
        return bool(np.all(T1 == T2))
    diff = np.max(np.abs(T1 - T2)) if T1.size else 0.0
    if tol is None:
        tol = max(T1.shape) * np.finfo(np.float64).eps * max(np.max(np.abs(T1)), np.max(np.abs(T2)), 1.0) * 10
    return bool(diff <= tol)


def is_sfs(T, tol=None):
    """Whether every frontal slice T[:, :, k] is symmetric."""
    T = np.asarray(T)
    if T.ndim != 3 or T.shape[0] != T.shape[1]:
        return False
    return equals(T, np.transpose(T, (1, 0, 2)), tol)
