"""Generic uniqueness by random witnesses, closed-form bounds, and tables.

A compound Khatri-Rao product ``C_m(A0) kr C_m(B0)`` having full column rank
for one choice of factors implies it has full column rank for almost all
factors, which in turn gives generic uniqueness of the decomposition.  So a
single exact full-rank witness certifies a whole dimension/rank cell.  Exact
witnesses are integer matrices whose rank is checked modulo a large prime
(rank mod p never exceeds the rank over Q).  Cells too large for exact
elimination fall back to floating point and are flagged as not certified.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import _modular
from .conditions import analyze_U, check_W
from .linalg import compound, compound_mod, float_rank_report, khatri_rao

SAMPLE_RANGE = 20
EXACT_GUARD = 6_000_000
MEMORY_GUARD = 260_000_000
DEFAULT_TRIALS = 3
_PRIME = 2**31 - 1

# Largest R with guaranteed generic uniqueness of I x I x I tensors, I = 2..10,
# from the algebraic-geometry literature.
CUBIC_BOUND = {2: 2, 3: 3, 4: 5, 5: 9, 6: 13, 7: 18, 8: 22, 9: 27, 10: 32}


class GuardError(ValueError):
    """Raised when a requested computation exceeds the desk-scale guards."""


# ------------------------------------------------------------------ sampling

@dataclass(frozen=True)
class Sampler:
    """How to draw a random factor matrix.

    kind is one of "dense", "toeplitz", "hankel", "masked".  For "masked",
    ``zeros`` lists (row, col) positions forced to zero.
    """

    kind: str = "dense"
    zeros: tuple = ()


def _nonzero_ints(rng, n):
    return rng.integers(1, SAMPLE_RANGE + 1, n) * rng.choice(np.array([-1, 1]), n)


def sample_matrix(kind, rows, cols, seed):
    """Random integer matrix with entries in [-20, 20] minus {0}.

    Deterministic in ``seed``.  Toeplitz and Hankel samples draw the
    rows + cols - 1 generating values; masked samples zero the given
    positions and must leave every column with a free entry.
    """
    sampler = kind if isinstance(kind, Sampler) else Sampler(kind)
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = np.random.default_rng(seed)
    if sampler.kind in ("dense", "masked", "sfs"):
        M = _nonzero_ints(rng, rows * cols).reshape(rows, cols)
    elif sampler.kind in ("toeplitz", "hankel"):
        g = _nonzero_ints(rng, rows + cols - 1)
        i, j = np.indices((rows, cols))
        M = g[i - j + cols - 1] if sampler.kind == "toeplitz" else g[i + j]
    else:
        raise ValueError(f"unknown sampler kind {sampler.kind!r}")
    if sampler.kind == "masked":
        for (i, j) in sampler.zeros:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"mask position {(i, j)} outside a {rows}x{cols} matrix")
            M[i, j] = 0
        empty = [j for j in range(cols) if not M[:, j].any()]
        if empty:
            raise ValueError(f"mask leaves column(s) {empty} without a free entry")
    return M.astype(np.int64)


def _derived_seed(*parts):
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


# ------------------------------------------------------------------ witnesses

@dataclass(frozen=True)
class GenericVerdict:
    """A successful generic-uniqueness witness.

    exact=True means the rank was certified over Q; otherwise the float
    result comes with ``margin``, the smallest counted pivot over the
    tolerance.
    """

    R: int
    condition: str
    m: int
    seed: int
    exact: bool
    shape: tuple
    margin: float | None = None


def compound_product_shape(rows_a, rows_b, R, m, symmetric=False):
    n_a, n_b = comb(rows_a, m), comb(rows_b, m)
    rows = n_a * (n_a + 1) // 2 if symmetric else n_a * n_b
    return rows, comb(R, m)


def _feasible(rows_a, rows_b, R, m, symmetric=False):
    if not 1 <= m <= min(rows_a, rows_b, R):
        return False
    rows, cols = compound_product_shape(rows_a, rows_b, R, m, symmetric)
    return rows >= cols


def compound_full_rank(A, B, m, mode="auto"):
    """Full column rank test of ``C_m(A) kr C_m(B)`` for integer A, B.

    Returns ``(full, exact, margin)``.  Exact mode works modulo a prime;
    float mode uses an SVD or a pivoted LU with the default tolerance.
    """
    rows = comb(A.shape[0], m) * comb(B.shape[0], m)
    cols = comb(A.shape[1], m)
    size = rows * cols
    if mode == "exact" or (mode == "auto" and size <= EXACT_GUARD):
        ca = compound_mod(A, m, _PRIME)
        cb = compound_mod(B, m, _PRIME)
        M = (ca[:, None, :] * cb[None, :, :] % _PRIME).reshape(rows, cols)
        return _modular.rank_mod(M, _PRIME) == cols, True, None
    if size > MEMORY_GUARD:
        raise GuardError(f"{rows}x{cols} matrix ({size:.3g} entries) exceeds the memory guard")
    ca = compound(A.astype(np.float64), m)
    cb = compound(B.astype(np.float64), m)
    # build the product column-contiguous so the LU can run in place
    X = ca.T[:, :, None] * cb.T[:, None, :]
    M = X.reshape(cols, rows).T
    del X
    r, tol, smallest = float_rank_report(M)
    margin = smallest / tol if smallest is not None and tol > 0 else None
    return r == cols, False, margin


def _try(cond, R, m, dims_pair, samplers, symmetric, trials, seed, cell, mode):
    for t in range(trials):
        s = _derived_seed(seed, *cell, R, ord(cond[-1]), t)
        X = sample_matrix(samplers[0], dims_pair[0], R, _derived_seed(s, 0))
        Y = X if symmetric else sample_matrix(samplers[1], dims_pair[1], R, _derived_seed(s, 1))
        full, exact, margin = compound_full_rank(X, Y, m, mode)
        if full:
            shape = compound_product_shape(dims_pair[0], dims_pair[1], R, m, symmetric)
            return GenericVerdict(R, cond, m, s, exact, shape, margin)
    return None


def generic_conditions(I, J, K, R):
    """The three rotations as (label, m, (rows of first, rows of second), roles)."""
    return [
        ("i", R - min(K, R) + 2, (I, J), ("A", "B")),
        ("ii", R - min(I, R) + 2, (J, K), ("B", "C")),
        ("iii", R - min(J, R) + 2, (K, I), ("C", "A")),
    ]


def generic_unique_cpd(I, J, K, R, kinds=None, trials=DEFAULT_TRIALS, seed=0, mode="auto",
                       conditions=("i", "ii", "iii")):
    """Witness for generic uniqueness of rank-R decompositions of I x J x K tensors.

    kinds maps roles "A", "B", "C" to samplers (default dense).  Returns a
    :class:`GenericVerdict` for the first condition with a full-rank
    witness, or None ("no witness found", which is not a proof of
    non-uniqueness).
    """
    if R < 1:
        raise ValueError("R must be positive")
    kinds = kinds or {}
    for label, m, dims_pair, roles in generic_conditions(I, J, K, R):
        if label not in conditions or not _feasible(*dims_pair, R, m):
            continue
        samplers = [kinds.get(r, "dense") for r in roles]
        got = _try(label, R, m, dims_pair, samplers, False, trials, seed, (I, J, K), mode)
        if got is not None:
            return got
    return None


def generic_sfs_conditions(I, K, R):
    return [
        ("sfs-C", R - min(K, R) + 2, (I, I), True),
        ("sfs-A", R - min(I, R) + 2, (I, K), False),
    ]


def generic_unique_sfs(I, K, R, trials=DEFAULT_TRIALS, seed=0, mode="auto"):
    """Witness for generic uniqueness of rank-R SFS decompositions of I x I x K tensors."""
    if R < 1:
        raise ValueError("R must be positive")
    for label, m, dims_pair, symmetric in generic_sfs_conditions(I, K, R):
        if not _feasible(*dims_pair, R, m, symmetric):
            continue
        got = _try(label, R, m, dims_pair, ("dense", "dense"), symmetric, trials, seed,
                   (I, I, K), mode)
        if got is not None:
            return got
    return None


# ------------------------------------------------------------------ bounds

def kruskal_generic_bound(I, J, K):
    """Largest R with min(I,R) + min(J,R) + min(K,R) >= 2R + 2, or 0."""
    best = 0
    for R in range(1, I + J + K + 1):
        if min(I, R) + min(J, R) + min(K, R) >= 2 * R + 2:
            best = R
    return best


def order_two_bound(I, J, K):
    """Largest R with K >= R and C(I,2) C(J,2) >= C(R,2), or 0."""
    best = 0
    for R in range(1, K + 1):
        if comb(I, 2) * comb(J, 2) >= comb(R, 2):
            best = R
    return best


def ag_bounds(I, J, K):
    """Closed-form generic-uniqueness bounds with their applicability guards.

    Dimensions are sorted first.  Returns a dict with keys "strassen",
    "power_of_two", "fcr" and "cubic"; an inapplicable bound maps to None.
    """
    I, J, K = sorted((I, J, K))
    out = {"strassen": None, "power_of_two": None, "fcr": None, "cubic": None}
    if I >= 3 and K - 1 <= (I - 1) * (J - 1) and K % 2 == 1:
        bound = (I * J * K) // (I + J + K - 2) - K
        if bound >= 1:
            out["strassen"] = bound
    if I >= 1 and J >= 1:
        alpha = I.bit_length() - 1
        beta = J.bit_length() - 1
        if alpha + beta >= 2:
            out["power_of_two"] = 2 ** (alpha + beta - 2)
    if I >= 2:
        out["fcr"] = min((I - 1) * (J - 1), K)
    if I == J == K and I in CUBIC_BOUND:
        out["cubic"] = CUBIC_BOUND[I]
    return out


# ------------------------------------------------------------------ tables

@dataclass
class Table:
    """A regenerated table: ``cells`` are dicts, ``csv_rows`` follow the CSV schema."""

    which: str
    seed: int
    trials: int
    cells: list = field(default_factory=list)
    csv_rows: list = field(default_factory=list)

    def to_csv(self):
        lines = ["I,J,K,R,verdict,condition,mode,seed"]
        for row in self.csv_rows:
            lines.append(",".join(str(row[k]) for k in ("I", "J", "K", "R", "verdict", "condition",
                                                          "mode", "seed")))
        return "\n".join(lines) + "\n"

    def to_text(self):
        header = f"# table {self.which}  seed={self.seed} trials={self.trials}"
        if self.which == "2":
            body = _table2_text(self.cells)
        elif self.which == "3":
            body = _table3_text(self.cells)
        else:
            body = _umwm_text(self.cells)
        return header + "\n" + body


def _mode_label(v):
    if v is None:
        return "-"
    return "exact" if v.exact else "float"


def _check_guard(shape, mode):
    rows, cols = shape
    if rows * cols > MEMORY_GUARD:
        raise GuardError(f"cell needs a {rows}x{cols} matrix ({rows * cols:.3g} entries, "
                         f"about {rows * cols * 8 / 2**30:.1f} GiB in float); outside the guard")
    if mode == "exact" and rows * cols > EXACT_GUARD:
        raise GuardError(f"cell needs a {rows}x{cols} matrix ({rows * cols:.3g} entries), "
                         f"above the exact guard of {EXACT_GUARD:.3g}")


def table2(Is=range(4, 10), trials=DEFAULT_TRIALS, seed=0, mode="auto"):
    """Generic uniqueness of I x I x (2I-1) tensors through the first condition."""
    t = Table("2", seed, trials)
    for I in Is:
        K = 2 * I - 1
        m = 2
        while True:
            R = 2 * I - 3 + m
            if not _feasible(I, I, R, m):
                break
            _check_guard(compound_product_shape(I, I, R, m), mode)
            m += 1
        for m_ in range(2, m):
            R = 2 * I - 3 + m_
            v = generic_unique_cpd(I, I, K, R, trials=trials, seed=seed, mode=mode, conditions=("i",))
            cell = {"I": I, "K": K, "m": m_, "R": R, "verdict": v}
            t.cells.append(cell)
            t.csv_rows.append({"I": I, "J": I, "K": K, "R": R,
                               "verdict": "unique" if v else "no-witness",
                               "condition": f"i(m={m_})", "mode": _mode_label(v),
                               "seed": v.seed if v else seed})
    return t


def _table2_text(cells):
    by_I = {}
    for c in cells:
        by_I.setdefault(c["I"], []).append(c)
    lines = [f"{'dims':>10}  " + "  ".join(f"m={m:<3}" for m in range(2, 6))]
    for I, cs in by_I.items():
        vals = {c["m"]: (str(c["R"]) + ("" if c["verdict"] is None or c["verdict"].exact else "*"))
                if c["verdict"] else "-" for c in cs}
        lines.append(f"{f'{I}x{I}x{2 * I - 1}':>10}  " + "  ".join(f"{vals.get(m, ''):<5}" for m in range(2, 6)))
    lines.append("(* = float fallback, not certified)")
    return "\n".join(lines)


def _count_feasible_cpd(I, J, K, R):
    return any(_feasible(*dp, R, m) for _, m, dp, _ in generic_conditions(I, J, K, R))


def _count_feasible_sfs(I, K, R):
    return any(_feasible(*dp, R, m, sym) for _, m, dp, sym in generic_sfs_conditions(I, K, R))


def _scan(test, feasible, cap):
    """Largest R such that every R' in 2..R has a witness.

    Every feasible R above the first gap is still probed; successes beyond
    the gap are returned separately so a non-contiguous pattern is visible.
    """
    best, last, gap, beyond = 1, None, False, []
    for R in range(2, cap + 1):
        if not feasible(R):
            gap = True
            continue
        v = test(R)
        if v is None:
            gap = True
        elif gap:
            beyond.append(R)
        else:
            best, last = R, v
    return best, last, beyond


def _rank_cap(I, J, K):
    # every condition needs m <= min dimension, which bounds R well below this
    return max([1] + [R for R in range(2, 2 * (I + J + K) + 1)
                      if _count_feasible_cpd(I, J, K, R)
                      or (I == J and _count_feasible_sfs(I, K, R))])


def max_rank_cpd(I, J, K, kinds=None, trials=DEFAULT_TRIALS, seed=0, mode="auto"):
    """Largest R such that every R' in 2..R has a generic-uniqueness witness.

    Returns ``(R, verdict_at_R, beyond)`` where ``beyond`` lists larger
    ranks that also succeeded after a gap.  R = 1 means no witness at R = 2.
    """
    return _scan(lambda R: generic_unique_cpd(I, J, K, R, kinds, trials, seed, mode),
                 lambda R: _count_feasible_cpd(I, J, K, R), _rank_cap(I, J, K))


def max_rank_sfs(I, K, trials=DEFAULT_TRIALS, seed=0, mode="auto"):
    """As :func:`max_rank_cpd` for decompositions with symmetric frontal slices."""
    return _scan(lambda R: generic_unique_sfs(I, K, R, trials, seed, mode),
                 lambda R: _count_feasible_sfs(I, K, R), _rank_cap(I, I, K))


def table3_cell(I, K, trials=DEFAULT_TRIALS, seed=0, mode="auto"):
    """Left (CPD), middle (SFS) and right (Kruskal) values for I x I x K."""
    left, left_v, left_beyond = max_rank_cpd(I, I, K, None, trials, seed, mode)
    middle, mid_v, mid_beyond = max_rank_sfs(I, K, trials, seed, mode)
    right = kruskal_generic_bound(I, I, K)
    known = max(right, order_two_bound(I, I, K))
    return {"I": I, "K": K, "left": left, "middle": middle, "right": right,
            "left_bold": left > known, "middle_bold": middle > known,
            "left_verdict": left_v, "middle_verdict": mid_v,
            "left_beyond": left_beyond, "middle_beyond": mid_beyond}


def check_guards(I, J, K, mode="auto", ranks=None, sfs=False):
    """Raise :class:`GuardError` if any count-feasible cell needs too large a matrix."""
    for R in (ranks if ranks is not None else range(2, _rank_cap(I, J, K) + 1)):
        if sfs:
            conds = [(m, dp, sym) for _, m, dp, sym in generic_sfs_conditions(I, K, R)]
        else:
            conds = [(m, dp, False) for _, m, dp, _ in generic_conditions(I, J, K, R)]
        for m, dp, sym in conds:
            if _feasible(*dp, R, m, sym):
                _check_guard(compound_product_shape(*dp, R, m, sym), mode)


def table3(Is=(4, 5), Ks=range(2, 34), trials=DEFAULT_TRIALS, seed=0, mode="auto"):
    """Upper bounds on R for generic uniqueness of I x I x K tensors."""
    for I in Is:
        for K in Ks:
            check_guards(I, I, K, mode)
            check_guards(I, I, K, mode, sfs=True)
    t = Table("3", seed, trials)
    for I in Is:
        for K in Ks:
            c = table3_cell(I, K, trials, seed, mode)
            t.cells.append(c)
            for kind, value, v in (("cpd", c["left"], c["left_verdict"]),
                                   ("sfs", c["middle"], c["middle_verdict"]),
                                   ("kruskal", c["right"], None)):
                t.csv_rows.append({"I": I, "J": I, "K": K, "R": value, "verdict": kind,
                                   "condition": (f"{v.condition}(m={v.m})" if v else
                                                 ("closed-form" if kind == "kruskal" else "-")),
                                   "mode": "exact" if kind == "kruskal" else _mode_label(v),
                                   "seed": v.seed if v else seed})
    return t


def _table3_text(cells):
    Is = sorted({c["I"] for c in cells})
    Ks = sorted({c["K"] for c in cells})
    look = {(c["I"], c["K"]): c for c in cells}
    width = 14
    lines = ["K \\ I " + "".join(f"{I:>{width}}" for I in Is)]
    for K in Ks:
        parts = []
        for I in Is:
            c = look.get((I, K))
            if c is None:
                parts.append(" " * width)
                continue
            left = f"{c['left']}{'!' if c['left_bold'] else ''}"
            mid = f"{c['middle']}{'!' if c['middle_bold'] else ''}"
            parts.append(f"{left + ', ' + mid + ', ' + str(c['right']):>{width}}")
        lines.append(f"{K:<6}" + "".join(parts))
    lines.append("(left, middle, right = CPD witness, SFS witness, Kruskal bound; ! = beyond known bounds)")
    return "\n".join(lines)


UMWM_ROWS = ((4, 5, 6, 7), (4, 6, 14, 14), (5, 7, 7, 9), (6, 9, 8, 11), (7, 7, 7, 10))


def umwm_row(I, J, K, R, seed=0, mode="auto"):
    """Kernel analysis of ``C_m(A) kr C_m(B)`` with m = R - K + 2 for random factors.

    Reports the kernel dimension, the U and W verdicts for a random third
    factor C, and the witness d when U fails.
    """
    m = R - K + 2
    rows, cols = compound_product_shape(I, J, R, m)
    exact = mode == "exact" or (mode == "auto" and rows * cols <= EXACT_GUARD)
    s = _derived_seed(seed, I, J, K, R)
    A = sample_matrix("dense", I, R, _derived_seed(s, 0))
    B = sample_matrix("dense", J, R, _derived_seed(s, 1))
    C = sample_matrix("dense", K, R, _derived_seed(s, 2))
    if not exact:
        A, B, C = (X.astype(np.float64) for X in (A, B, C))
    analysis = analyze_U(A, B, m)
    w = check_W(A, B, C, m, analysis=analysis)
    return {"I": I, "J": J, "K": K, "R": R, "m": m, "shape": (rows, cols),
            "kernel_dim": analysis.kernel_dim, "U": analysis.outcome.verdict.value,
            "W": w.verdict.value, "witness": analysis.outcome.witness, "exact": exact,
            "seed": s, "factors": (A, B, C)}


def umwm_table(rows=UMWM_ROWS, seed=0, mode="auto"):
    t = Table("umwm", seed, 1)
    for (I, J, K, R) in rows:
        c = umwm_row(I, J, K, R, seed, mode)
        t.cells.append(c)
        t.csv_rows.append({"I": I, "J": J, "K": K, "R": R,
                           "verdict": f"U:{c['U']} W:{c['W']}",
                           "condition": f"m={c['m']} kernel={c['kernel_dim']}",
                           "mode": "exact" if c["exact"] else "float", "seed": c["seed"]})
    return t


def _umwm_text(cells):
    lines = [f"{'dims':>8} {'R':>3} {'m':>2} {'matrix':>10} {'ker':>4}  {'U':<8} {'W':<8} mode"]
    for c in cells:
        shape = f"{c['shape'][0]}x{c['shape'][1]}"
        lines.append(f"{c['I']}x{c['J']}x{c['K']:<4} {c['R']:>3} {c['m']:>2} {shape:>10} "
                     f"{c['kernel_dim']:>4}  {c['U']:<8} {c['W']:<8} {'exact' if c['exact'] else 'float'}")
    return "\n".join(lines)


def make_table(which, ranges=None, trials=DEFAULT_TRIALS, seed=0, mode="auto"):
    """Regenerate table "2", "3" or "umwm".

    ranges: for "2" an iterable of I; for "3" a pair (Is, Ks).
    """
    which = str(which)
    if which == "2":
        return table2(ranges if ranges is not None else range(4, 10), trials, seed, mode)
    if which == "3":
        Is, Ks = ranges if ranges is not None else ((4, 5), range(2, 34))
        return table3(Is, Ks, trials, seed, mode)
    if which == "umwm":
        return umwm_table(seed=seed, mode=mode)
    raise ValueError(f"unknown table {which!r}; expected 2, 3 or umwm")
