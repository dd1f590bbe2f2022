"""How far does generic uniqueness reach for small I x I x K tensors?

Each table cell is backed by one integer witness whose compound product has
full column rank.  Small cells are checked modulo a prime, so the answer is
exact; larger ones would fall back to floating point and be flagged.
"""

from cpdunique import generic


def main():
    print("I x I x (2I-1), largest R per compound order:")
    print(generic.make_table("2", range(4, 7)).to_text())
    print()

    print("I x I x K for I = 4, 5 and K = 2..12 (left: general, middle: symmetric slices,")
    print("right: Kruskal; '!' marks values beyond both closed-form bounds):")
    print(generic.make_table("3", ((4, 5), range(2, 13))).to_text())
    print()

    v = generic.generic_unique_cpd(6, 6, 11, 12)
    print(f"6x6x11 at R=12: condition {v.condition} with m={v.m}, "
          f"{v.shape[0]}x{v.shape[1]} product, seed {v.seed}")
    print("closed-form bounds for 6x6x11:", generic.ag_bounds(6, 6, 11))

    # a toeplitz-structured family behaves like a dense one here
    kinds = dict.fromkeys("ABC", "toeplitz")
    print("5x5x9 at R=9 with Toeplitz factors:", generic.generic_unique_cpd(5, 5, 9, 9, kinds=kinds) is not None)


if __name__ == "__main__":
    main()
