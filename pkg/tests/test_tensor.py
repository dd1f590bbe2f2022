import numpy as np
import pytest
from hypothesis import given, strategies as st

from cpdunique.linalg import ModeError
from cpdunique.tensor import FactorTriple, equals, from_factors, is_sfs, unfold, unfolding_factors

from conftest import int_matrix


def test_from_factors_rank_one():
    a, b, c = (np.array([[1], [2]]), np.array([[3], [4], [5]]), np.array([[1], [-1]]))
    T = from_factors(a, b, c)
    assert T.shape == (2, 3, 2)
    assert T[1, 2, 1] == 2 * 5 * -1


def test_factor_triple_validation():
    with pytest.raises(ValueError, match="columns"):
        FactorTriple(np.ones((2, 2), int), np.ones((2, 3), int), np.ones((2, 2), int))
    with pytest.raises(ValueError, match="zero column"):
        FactorTriple(np.array([[1, 0], [1, 0]]), np.ones((2, 2), int), np.ones((2, 2), int))
    with pytest.raises(ModeError):
        FactorTriple(np.ones((2, 2), int), np.ones((2, 2)), np.ones((2, 2), int))


def test_permuted_roles():
    rng = np.random.default_rng(0)
    F = FactorTriple(*(int_matrix(rng, n, 3, 1, 3) for n in (2, 3, 4)))
    G = F.permuted("CAB")
    assert G.dims == (4, 2, 3)
    assert np.array_equal(G.A, F.C)


def test_unfold_first_row_index():
    T = np.arange(24).reshape(2, 3, 4)
    U = unfold(T, 1)
    assert U.shape == (6, 4)
    assert U[1 * 3 + 2, 3] == T[1, 2, 3]
    with pytest.raises(ValueError):
        unfold(T, 7)


@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_all_unfoldings_match_khatri_rao_form(seed, I, J, K, R):
    rng = np.random.default_rng(seed)
    A, B, C = (int_matrix(rng, n, R, 1, 4) for n in (I, J, K))
    T = from_factors(A, B, C)
    for k in range(1, 7):
        assert np.array_equal(unfold(T, k), unfolding_factors(A, B, C, k))


def test_equals_exact_and_float():
    T = np.arange(8, dtype=object).reshape(2, 2, 2)
    assert equals(T, T.copy())
    S = T.copy()
    S[0, 0, 0] = 1
    assert not equals(T, S)
    F = np.arange(8.0).reshape(2, 2, 2)
    assert equals(F, F + 1e-15)
    assert not equals(F, F + 1e-3)
    assert not equals(F, F[:1])


def test_is_sfs():
    A = np.array([[1, 2], [3, 4], [5, 6]])
    C = np.array([[1, 1], [2, -1]])
    assert is_sfs(from_factors(A, A, C))
    assert not is_sfs(from_factors(A, A[::-1], C))
    assert not is_sfs(np.zeros((2, 3, 2)))
