"""Certify a handful of small decompositions and print what each rule says.

Run with ``python demos/certify_examples.py``.
"""

from cpdunique import catalog, io
from cpdunique.certify import certify
from cpdunique.tensor import equals, from_factors

EXAMPLES = [
    ("three rank-1 terms, Kruskal's inequality is tight", catalog.three_term),
    ("4x4x4 with five terms, needs two of the three pairs", catalog.two_of_three),
    ("5x5x5 with six terms, the two-k rule", catalog.two_k),
    ("3x5 factor pair with a one-dimensional kernel", catalog.rank_five_pair),
    ("5x5x8, one factor pinned down through the H profile", catalog.one_factor_h),
    ("4x4x4 with five terms where no implemented rule decides", catalog.w_fails),
]


def show(title, F):
    print(f"== {title}")
    for line in io.summarize(certify(F)):
        print("   " + line)
    print()


def main():
    for title, build in EXAMPLES:
        show(title, build())

    # the three-term triple and a four-term one give the same tensor, so the
    # four-term triple cannot be a canonical decomposition
    three, four = catalog.three_term(), catalog.four_term()
    print("three-term and four-term tensors equal:", equals(from_factors(*three), from_factors(*four)))


if __name__ == "__main__":
    main()
