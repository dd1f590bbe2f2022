from itertools import permutations
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record a one-line acceptance verdict, printed in the terminal summary."""
    def emit(number, passed, text):
        line = f"[criterion {number:>2}] {'PASS' if passed else 'FAIL'}  {text}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


# ---- independent oracles: Leibniz determinants on small exact matrices

def leibniz_det(M):
    n = len(M)
    total = Fraction(0)
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = Fraction(1)
        for i in range(n):
            term *= M[i][p[i]]
            if term == 0:
                break
        total += -term if inv % 2 else term
    return total


def oracle_rank(M):
    """Largest k with a nonzero k x k minor."""
    from itertools import combinations
    M = [list(r) for r in np.asarray(M, dtype=object)]
    rows, cols = len(M), (len(M[0]) if M else 0)
    for k in range(min(rows, cols), 0, -1):
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                if leibniz_det([[M[i][j] for j in cs] for i in rs]) != 0:
                    return k
    return 0


def int_matrix(rng, rows, cols, lo=-3, hi=3):
    M = np.empty((rows, cols), dtype=object)
    M[:] = rng.integers(lo, hi + 1, (rows, cols)).tolist()
    return M
