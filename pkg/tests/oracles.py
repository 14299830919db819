"""Independent brute-force oracles used to freeze expected test values.

Everything here is deliberately written from scratch against the raw table,
without calling the package's own search or enumeration code paths.
"""

from __future__ import annotations

import itertools


def assoc_least_violation(table) -> tuple[int, int, int] | None:
    """First non-associative triple by a plain triple loop."""
    n = len(table)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    return (a, b, c)
    return None


def brute_closure(table, gens) -> set[int]:
    """Fixpoint closure by repeated full product scans."""
    out = set(gens)
    while True:
        new = {table[a][b] for a in out for b in out} - out
        if not new:
            return out
        out |= new


def fold(table, elems) -> int:
    value = elems[0]
    for x in elems[1:]:
        value = table[value][x]
    return value


def fp_values(table, seq) -> set[int]:
    """Values of all increasing-word products, by direct enumeration."""
    out = set()
    for m in range(1, len(seq) + 1):
        for combo in itertools.combinations(seq, m):
            out.add(fold(table, combo))
    return out


def fphat_values(table, seq) -> set[int]:
    """Values of all duplicate-free-word products, by direct enumeration."""
    out = set()
    for m in range(1, len(seq) + 1):
        for word in itertools.permutations(seq, m):
            out.add(fold(table, word))
    return out


def gf2_rank(vectors, width: int = 8) -> int:
    """Rank of integer bit vectors over the two-element field, by elimination."""
    work = list(vectors)
    rank = 0
    row = 0
    for col in range(width):
        pivot = None
        for r in range(row, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        for r in range(len(work)):
            if r != row and ((work[r] >> col) & 1):
                work[r] ^= work[row]
        rank += 1
        row += 1
        if row == len(work):
            break
    return rank


def least_mono_clique(color_fn, v: int, target: int) -> tuple[int, ...] | None:
    """Lexicographically least monochromatic clique by exhaustive enumeration."""
    if target == 1:
        return (0,)
    for combo in itertools.combinations(range(v), target):
        colors = {color_fn(i, j) for i, j in itertools.combinations(combo, 2)}
        if len(colors) == 1:
            return combo
    return None


def min_fp_exceptions(table, color_of, palette: int, ids, n: int) -> int:
    """Smallest off-majority count over all ordered distinct n-tuples."""
    best = None
    for seq in itertools.permutations(ids, n):
        values = fp_values(table, seq)
        counts = [0] * palette
        for value in values:
            counts[color_of(value)] += 1
        exc = len(values) - max(counts)
        if best is None or exc < best:
            best = exc
    return best
