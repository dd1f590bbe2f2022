"""Uniqueness checks for third-order canonical polyadic decompositions."""
