"""Finite-products machinery: FP and FP-hat enumeration, searches, refinement."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import perm
from typing import Iterable, Sequence

import numpy as np

from .coloring import Coloring, MonoVerdict, mono_check
from .core import FiniteSemigroup, LazyFamily, closure, group_identity, group_inverses, is_group
from .errors import CapExceeded, NotAGroup, StuckAt
from .families import whymodfin
from .kernels import batch_fold

FP_CAP = 20
FPHAT_CAP = 8
REFINE_CAP = 16

_AUDIT_CHUNK = 1 << 16


@dataclass(frozen=True)
class FpFamily:
    """All products of a sequence over increasing (FP) or duplicate-free (FP-hat) words.

    products maps index words (positions into seq) to the left-to-right fold
    of the corresponding elements, in depth-first prefix order.
    """

    seq: tuple[int, ...]
    products: dict[tuple[int, ...], int]
    hat: bool

    @cached_property
    def value_set(self) -> frozenset[int]:
        return frozenset(self.products.values())

    @property
    def word_count(self) -> int:
        return len(self.products)


def fp_word_count(n: int) -> int:
    """Number of nonempty strictly increasing index words over n positions."""
    return 2**n - 1


def fphat_word_count(n: int) -> int:
    """Number of nonempty duplicate-free index words over n positions."""
    return sum(perm(n, m) for m in range(1, n + 1))


def _mul_of(s: FiniteSemigroup | LazyFamily):
    if isinstance(s, FiniteSemigroup):
        rows = s.rows
        return lambda a, b: rows[a][b]
    if isinstance(s, LazyFamily):
        return s.op
    raise TypeError(f"expected FiniteSemigroup or LazyFamily, got {type(s).__name__}")


def _check_seq(s, seq: Sequence[int]) -> tuple[int, ...]:
    seq = tuple(seq)
    if not seq:
        raise ValueError("seq must be nonempty")
    if len(seq) != len(set(seq)):
        raise ValueError("seq elements must be distinct")
    if isinstance(s, FiniteSemigroup):
        for x in seq:
            if not 0 <= x < s.n:
                raise ValueError(f"element id {x} out of range 0..{s.n - 1}")
    return seq


def fp(s: FiniteSemigroup | LazyFamily, seq: Sequence[int], cap: int = FP_CAP) -> FpFamily:
    """Products over all 2^n - 1 strictly increasing index words."""
    seq = _check_seq(s, seq)
    if len(seq) > cap:
        raise CapExceeded(f"FP over {len(seq)} elements exceeds the cap {cap}")
    mul = _mul_of(s)
    n = len(seq)
    products: dict[tuple[int, ...], int] = {}

    def extend(start: int, value: int, word: tuple[int, ...]) -> None:
        for i in range(start, n):
            v = mul(value, seq[i]) if word else seq[i]
            w = word + (i,)
            products[w] = v
            extend(i + 1, v, w)

    extend(0, 0, ())
    return FpFamily(seq=seq, products=products, hat=False)


def fphat(s: FiniteSemigroup | LazyFamily, seq: Sequence[int], cap: int = FPHAT_CAP) -> FpFamily:
    """Products over all duplicate-free index words (every order, no repeats)."""
    seq = _check_seq(s, seq)
    if len(seq) > cap:
        raise CapExceeded(f"FP-hat over {len(seq)} elements exceeds the cap {cap}")
    mul = _mul_of(s)
    n = len(seq)
    products: dict[tuple[int, ...], int] = {}

    def extend(used: int, value: int, word: tuple[int, ...]) -> None:
        for i in range(n):
            bit = 1 << i
            if used & bit:
                continue
            v = mul(value, seq[i]) if word else seq[i]
            w = word + (i,)
            products[w] = v
            extend(used | bit, v, w)

    extend(0, 0, ())
    return FpFamily(seq=seq, products=products, hat=True)


def fphat_value_set(s: FiniteSemigroup, elements: Sequence[int]) -> frozenset[int]:
    """Values of all duplicate-free words over `elements`, via subset folding."""
    elems = tuple(elements)
    if len(elems) != len(set(elems)):
        raise ValueError("elements must be distinct")
    if len(elems) > REFINE_CAP:
        raise CapExceeded(f"value-set fold over {len(elems)} elements exceeds {REFINE_CAP}")
    if not elems:
        return frozenset()
    rows = s.rows
    n = len(elems)
    by_mask: list[set[int]] = [set() for _ in range(1 << n)]
    for i in range(n):
        by_mask[1 << i] = {elems[i]}
    for mask in range(1, 1 << n):
        if mask & (mask - 1) == 0:
            continue
        acc = by_mask[mask]
        for i in range(n):
            bit = 1 << i
            if mask & bit:
                last = elems[i]
                for u in by_mask[mask ^ bit]:
                    acc.add(rows[u][last])
    out: set[int] = set()
    for mask in range(1, 1 << n):
        out |= by_mask[mask]
    return frozenset(out)


@dataclass(frozen=True)
class FpWitness:
    seq: tuple[int, ...]
    majority_color: int
    exceptions: frozenset[int]
    value_set: frozenset[int]


def _require_total(s: FiniteSemigroup, c: Coloring) -> None:
    for x in range(s.n):
        if not c.colored(x):
            raise ValueError(f"coloring misses element {x}")


def search_fp_mod_finite(
    s: FiniteSemigroup,
    c: Coloring,
    n: int,
    budget: int,
    cap: int = FP_CAP,
) -> FpWitness | None:
    """Least tuple of n distinct elements whose FP set is one color up to `budget`.

    Depth-first over element ids; a branch is cut as soon as every color class
    already misses more than `budget` of the accumulated product values.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapExceeded(f"FP search over {n} elements exceeds the cap {cap}")
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if n > s.n:
        return None
    _require_total(s, c)
    rows = s.rows
    color = [c.color(x) for x in range(s.n)]
    palette = c.palette_size

    counts = [0] * palette
    values: set[int] = set()
    chosen: list[int] = []
    used = [False] * s.n

    def add_products(a: int) -> list[int]:
        added = []
        for v in [a] + [rows[v0][a] for v0 in list(values)]:
            if v not in values:
                values.add(v)
                counts[color[v]] += 1
                added.append(v)
        return added

    def undo(added: list[int]) -> None:
        for v in added:
            values.remove(v)
            counts[color[v]] -= 1

    def best_color() -> int:
        return max(range(palette), key=lambda col: (counts[col], -col))

    def dfs() -> FpWitness | None:
        if len(chosen) == n:
            col = best_color()
            exceptions = frozenset(v for v in values if color[v] != col)
            if len(exceptions) <= budget:
                return FpWitness(tuple(chosen), col, exceptions, frozenset(values))
            return None
        for a in range(s.n):
            if used[a]:
                continue
            added = add_products(a)
            if len(values) - counts[best_color()] > budget:
                undo(added)
                continue
            chosen.append(a)
            used[a] = True
            hit = dfs()
            if hit is not None:
                return hit
            used[a] = False
            chosen.pop()
            undo(added)
        return None

    return dfs()


@dataclass(frozen=True)
class MonoSubsemigroup:
    generators: tuple[int, ...]
    elements: tuple[int, ...]
    verdict: MonoVerdict


def search_mono_subsemigroup(
    s: FiniteSemigroup,
    c: Coloring,
    budget: int,
    max_gens: int = 3,
) -> MonoSubsemigroup | None:
    """Largest closure of <= max_gens generators that is almost-mono at `budget`.

    Ties go to the lexicographically least element tuple. Exponential in
    max_gens; meant for desk-scale inputs.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if max_gens < 1:
        raise ValueError("max_gens must be >= 1")
    _require_total(s, c)
    best: MonoSubsemigroup | None = None
    seen: set[frozenset[int]] = set()
    for size in range(1, max_gens + 1):
        for combo in itertools.combinations(range(s.n), size):
            cl = closure(s, combo)
            key = frozenset(cl)
            if key in seen:
                continue
            seen.add(key)
            verdict = mono_check(cl, c)
            if len(verdict.exceptions) > budget:
                continue
            candidate = MonoSubsemigroup(combo, tuple(cl), verdict)
            if (
                best is None
                or len(candidate.elements) > len(best.elements)
                or (
                    len(candidate.elements) == len(best.elements)
                    and candidate.elements < best.elements
                )
            ):
                best = candidate
    return best


def refine_fphat(
    g: FiniteSemigroup,
    c: Coloring,
    seq: Sequence[int],
    trap: Iterable[int],
) -> tuple[int, ...]:
    """Greedy subsequence of `seq` whose FP-hat set avoids `trap` entirely.

    Walk the sequence in order; an element is kept when no p, q among the
    products of previously kept elements (identity included) satisfy
    p*a*q in trap. Kept output therefore satisfies FP-hat(out) disjoint from
    trap regardless of the coloring; when trap is exactly the off-majority
    part of FP-hat(seq) under c, the output's FP-hat set is monochromatic.
    The coloring states that precondition and is the caller's obligation;
    only trap drives the walk. Raises StuckAt(1) when not even a first
    element is admissible.
    """
    seq = _check_seq(g, seq)
    if len(seq) > REFINE_CAP:
        raise CapExceeded(f"refinement over {len(seq)} elements exceeds {REFINE_CAP}")
    if not is_group(g):
        raise NotAGroup("refinement needs a group")
    _require_total(g, c)
    trap_set = {int(x) for x in trap}
    for x in trap_set:
        if not 0 <= x < g.n:
            raise ValueError(f"trap element {x} out of range")
    rows = g.rows
    e = group_identity(g)
    inv = group_inverses(g)

    chosen: list[int] = []
    pool = {e}  # FP-hat values of the kept prefix, plus the identity
    # a is bad iff p*a*q lands in trap for some p, q in pool, i.e. p*a in
    # {f*q^-1}; keep that right-hand set in step with the pool.
    wall = {rows[f][inv[q]] for f in trap_set for q in pool}
    for a in seq:
        if any(rows[p][a] in wall for p in pool):
            continue
        chosen.append(a)
        pool = set(fphat_value_set(g, chosen))
        pool.add(e)
        wall = {rows[f][inv[q]] for f in trap_set for q in pool}
    if not chosen:
        raise StuckAt(1)
    return tuple(chosen)


@dataclass(frozen=True)
class WhyModFinAudit:
    """Exhaustive FP color audit over one residue family."""

    k: int
    m_count: int
    subset_size: int
    total_subsets: int
    all_colors_realized: bool
    failing_subset: tuple[int, ...] | None

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "m_count": self.m_count,
            "subset_size": self.subset_size,
            "total_subsets": self.total_subsets,
            "all_colors_realized": self.all_colors_realized,
            "failing_subset": list(self.failing_subset) if self.failing_subset else None,
        }


def fp_words_array(size: int) -> np.ndarray:
    """All nonempty increasing index words over `size` positions, -1 padded."""
    words = []
    for m in range(1, size + 1):
        words.extend(itertools.combinations(range(size), m))
    out = np.full((len(words), size), -1, dtype=np.int32)
    for r, w in enumerate(words):
        out[r, : len(w)] = w
    return out


def whymodfin_fp_audit(k: int, m_count: int, subset_size: int | None = None) -> WhyModFinAudit:
    """Check every subset of the residue family's kN+1 part realizes all k colors.

    Exhausts all C(m_count, subset_size) subsets, computes their FP values
    through the Cayley table in bulk, and verifies every color appears.
    """
    size = k if subset_size is None else subset_size
    if size < k:
        raise ValueError("subsets shorter than k cannot realize all k colors")
    if size > m_count:
        raise ValueError(f"cannot draw {size} distinct elements from a part of {m_count}")
    s = whymodfin(k, m_count)
    if k > 30:
        raise ValueError("palette too wide for the bitmask audit")
    part = list(range(k, k + m_count))
    words = fp_words_array(size)
    color = np.array([int(s.labels[x]) % k for x in range(s.n)], dtype=np.int64)
    want = (1 << k) - 1
    total = 0
    combos = itertools.combinations(part, size)
    while True:
        block = list(itertools.islice(combos, _AUDIT_CHUNK))
        if not block:
            break
        seqs = np.fromiter(
            itertools.chain.from_iterable(block),
            dtype=np.int32,
            count=len(block) * size,
        ).reshape(len(block), size)
        values = batch_fold(s.table, seqs, words)
        bits = np.zeros(len(block), dtype=np.int64)
        for w in range(values.shape[1]):
            bits |= np.int64(1) << color[values[:, w]]
        bad = np.nonzero(bits != want)[0]
        if bad.size:
            failing = tuple(int(x) for x in seqs[bad[0]])
            return WhyModFinAudit(k, m_count, size, total + len(block), False, failing)
        total += len(block)
    return WhyModFinAudit(k, m_count, size, total, True, None)
