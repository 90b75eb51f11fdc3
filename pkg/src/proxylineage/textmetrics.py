"""Edit distance and LCS-length primitives used by the pairing heuristics."""

from __future__ import annotations

from typing import Hashable, Sequence


def levenshtein(a: str, b: str) -> int:
    """Classic edit distance (insert/delete/substitute, unit costs)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a):
        current = [i + 1]
        for j, cb in enumerate(b):
            current.append(
                min(previous[j + 1] + 1, current[j] + 1, previous[j] + (ca != cb))
            )
        previous = current
    return previous[-1]


def lcs_length(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Length of the longest common subsequence of two sequences.

    Bit-parallel row encoding (Allison-Dix); items only need to be hashable,
    so it serves both character and line sequences.
    """
    if not a or not b:
        return 0
    masks: dict[Hashable, int] = {}
    bit = 1
    for item in a:
        masks[item] = masks.get(item, 0) | bit
        bit <<= 1
    full = bit - 1
    row = 0
    for item in b:
        x = row | masks.get(item, 0)
        row = x & ~(x - ((row << 1) | 1)) & full
    return bin(row).count("1")
