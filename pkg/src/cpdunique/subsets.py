"""Lexicographic enumeration of fixed-size index subsets.

Subsets are tuples of strictly increasing 0-based indices.  The position of a
subset in the lexicographic list of all m-subsets of ``range(n)`` is its rank;
compound matrices and hat vectors index their rows and columns this way.
"""

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np


@lru_cache(maxsize=256)
def subsets(n, m):
    """All m-subsets of range(n) in lexicographic order, as a tuple of tuples."""
    return tuple(combinations(range(n), m))


def subset_rank(members, n):
    """Lexicographic position of ``members`` among the len(members)-subsets of range(n)."""
    m = len(members)
    index = 0
    prev = -1
    for i, c in enumerate(members):
        if not prev < c < n:
            raise ValueError(f"not a strictly increasing subset of range({n}): {members}")
        for v in range(prev + 1, c):
            index += comb(n - v - 1, m - i - 1)
        prev = c
    return index


def subset_unrank(index, n, m):
    """Inverse of :func:`subset_rank`."""
    if not 0 <= index < comb(n, m):
        raise ValueError(f"rank {index} out of range for {m}-subsets of {n}")
    out = []
    v = 0
    for i in range(m):
        while True:
            block = comb(n - v - 1, m - i - 1)
            if index < block:
                break
            index -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


@lru_cache(maxsize=128)
def _position_map(n, m):
    return {s: i for i, s in enumerate(subsets(n, m))}


@lru_cache(maxsize=128)
def drop_tables(n, m):
    """Index tables for removing one member from each m-subset of range(n).

    Returns ``(rest, dropped)``, two int arrays of shape (C(n, m), m).
    ``rest[s, j]`` is the rank of subset ``s`` with its j-th member removed
    (as an (m-1)-subset) and ``dropped[s, j]`` is that removed member.
    """
    subs = subsets(n, m)
    lower = _position_map(n, m - 1)
    rest = np.empty((len(subs), m), dtype=np.intp)
    dropped = np.empty((len(subs), m), dtype=np.intp)
    for s, members in enumerate(subs):
        for j in range(m):
            rest[s, j] = lower[members[:j] + members[j + 1:]]
            dropped[s, j] = members[j]
    return rest, dropped


def positions(n, m, family):
    """Ranks of the given m-subsets of range(n), in the order given."""
    pos = _position_map(n, m)
    return [pos[tuple(s)] for s in family]
