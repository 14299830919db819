"""Finite semigroups on Cayley tables, plus lazily enumerated infinite families.

Elements of a FiniteSemigroup are ids 0..n-1; the table is the whole
structure. Lazy families carry a computable operation on canonical integer
encodings and can be truncated: if the closure of an enumerated prefix is
finite the truncation is an honest FiniteSemigroup, otherwise escaping
products are marked rather than wrapped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .errors import (
    AssocViolation,
    EscapesTruncation,
    NotAGroup,
    NotIdempotent,
    OrderViolation,
    RangeError,
)
from .kernels import assoc_violation

ESCAPED = -1

# Full n^3 associativity scan up to this size; above it, construction checks a
# deterministic lattice sample and verify_associativity() runs the full scan.
EAGER_ASSOC_LIMIT = 512
_SAMPLE_TRIPLES = 200_000


def _as_table(table) -> np.ndarray:
    arr = np.asarray(table, dtype=np.int32)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise RangeError(f"table must be square, got shape {arr.shape}")
    return arr


class FiniteSemigroup:
    """A finite semigroup: n elements, display labels, and a total table."""

    def __init__(self, labels: Sequence[str], table) -> None:
        arr = _as_table(table)
        n = arr.shape[0]
        if len(labels) != n:
            raise RangeError(f"{len(labels)} labels for a table of size {n}")
        if n == 0:
            raise RangeError("empty semigroup")
        if arr.min() < 0 or arr.max() >= n:
            bad = np.argwhere((arr < 0) | (arr >= n))[0]
            raise RangeError(
                f"table[{bad[0]}][{bad[1]}] = {arr[bad[0], bad[1]]} out of range 0..{n - 1}"
            )
        self.n = n
        self.labels = tuple(str(x) for x in labels)
        arr.setflags(write=False)
        self.table = arr
        if n <= EAGER_ASSOC_LIMIT:
            self._check_assoc_full()
        else:
            self._check_assoc_sampled()

    def _check_assoc_full(self) -> None:
        hit = assoc_violation(self.table)
        if hit is not None:
            a, b, c = hit
            t = self.table
            raise AssocViolation(a, b, c, int(t[t[a, b], c]), int(t[a, t[b, c]]))

    def _check_assoc_sampled(self) -> None:
        # Deterministic lattice of triples; full coverage stays opt-in.
        n = self.n
        total = n * n * n
        stride = max(1, total // _SAMPLE_TRIPLES)
        flat = np.arange(0, total, stride, dtype=np.int64)
        a, rest = np.divmod(flat, n * n)
        b, c = np.divmod(rest, n)
        t = self.table
        lhs = t[t[a, b], c]
        rhs = t[a, t[b, c]]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            i = bad[0]
            raise AssocViolation(int(a[i]), int(b[i]), int(c[i]), int(lhs[i]), int(rhs[i]))

    def verify_associativity(self) -> None:
        """Full n^3 scan regardless of size; raises AssocViolation on failure."""
        self._check_assoc_full()

    @cached_property
    def rows(self) -> list[list[int]]:
        """Plain nested lists for fast scalar products in search loops."""
        return self.table.tolist()

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def elements(self) -> range:
        return range(self.n)

    def label(self, a: int) -> str:
        return self.labels[a]

    def index_of_label(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"no element labelled {label!r}")

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteSemigroup)
            and self.labels == other.labels
            and np.array_equal(self.table, other.table)
        )

    def __repr__(self) -> str:
        return f"FiniteSemigroup(n={self.n})"


def build_cayley(labels: Sequence[str], table) -> FiniteSemigroup:
    """Validate a square table (range + associativity) and wrap it."""
    return FiniteSemigroup(labels, table)


class PartialTruncation:
    """Prefix of a lazy family whose closure is not finite at this size.

    The table holds element ids where the product stays inside the prefix and
    ESCAPED (-1) where it leaves. Deliberately not a FiniteSemigroup.
    """

    def __init__(self, name: str, encodings: Sequence[int], labels: Sequence[str], table) -> None:
        arr = _as_table(table)
        self.name = name
        self.n = arr.shape[0]
        self.encodings = tuple(int(x) for x in encodings)
        self.labels = tuple(str(x) for x in labels)
        arr.setflags(write=False)
        self.table = arr

    @cached_property
    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    @property
    def escape_count(self) -> int:
        return int((self.table == ESCAPED).sum())

    def __repr__(self) -> str:
        return f"PartialTruncation(name={self.name!r}, n={self.n}, escapes={self.escape_count})"


@dataclass(frozen=True)
class LazyFamily:
    """An infinite semigroup given by an injective enumeration and an operation.

    Encodings are family-specific canonical integers (documented per family)
    so that witnesses are stable across runs.
    """

    name: str
    enumerate_fn: Callable[[int], int]
    op: Callable[[int, int], int]
    label_fn: Callable[[int], str] = field(default=str)

    def element(self, i: int) -> int:
        return self.enumerate_fn(i)

    def elements(self, count: int) -> list[int]:
        return [self.enumerate_fn(i) for i in range(count)]

    def truncate(self, count: int, growth_cap: int | None = None) -> FiniteSemigroup | PartialTruncation:
        """Close the first `count` elements; fall back to a marked partial table."""
        if count < 1:
            raise ValueError("truncation size must be >= 1")
        cap = growth_cap if growth_cap is not None else max(4 * count, count + 64)
        base = self.elements(count)
        known = list(dict.fromkeys(base))
        index = {v: i for i, v in enumerate(known)}
        frontier = list(known)
        closed = True
        while frontier:
            new_vals: set[int] = set()
            for a in known:
                for b in frontier:
                    p = self.op(a, b)
                    if p not in index and p not in new_vals:
                        new_vals.add(p)
            for a in frontier:
                for b in known:
                    if b in frontier:
                        continue  # already covered above
                    p = self.op(a, b)
                    if p not in index and p not in new_vals:
                        new_vals.add(p)
            if not new_vals:
                break
            if len(known) + len(new_vals) > cap:
                closed = False
                break
            for v in sorted(new_vals):
                index[v] = len(known)
                known.append(v)
            frontier = sorted(new_vals)
        if closed:
            n = len(known)
            table = np.empty((n, n), dtype=np.int32)
            for i, a in enumerate(known):
                row = table[i]
                for j, b in enumerate(known):
                    row[j] = index[self.op(a, b)]
            return FiniteSemigroup([self.label_fn(v) for v in known], table)
        n = len(base)
        idx = {v: i for i, v in enumerate(base)}
        table = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(base):
            row = table[i]
            for j, b in enumerate(base):
                row[j] = idx.get(self.op(a, b), ESCAPED)
        return PartialTruncation(self.name, base, [self.label_fn(v) for v in base], table)


@dataclass(frozen=True)
class Orbit:
    """Powers of one element: s, s^2, ..., with index h and period d."""

    base: int
    elements: tuple[int, ...]
    index_h: int
    period_d: int
    group_part: frozenset[int]


@dataclass(frozen=True)
class SubgroupInfo:
    """Maximal subgroup G(e) around an idempotent e, inside a parent semigroup."""

    parent: FiniteSemigroup
    idempotent: int
    elements: frozenset[int]
    exponent_le_2: bool


@dataclass(frozen=True)
class PeriodicVerdict:
    """Outcome of a bounded periodicity check.

    "false" is reserved: an infinite orbit can never be certified from a
    finite prefix, so lazy families only ever yield "true" or
    "unknown-at-bound" (with the least unresolved element as witness).
    """

    status: Literal["true", "false", "unknown-at-bound"]
    witness: int | None = None


@dataclass(frozen=True)
class MovingEvidence:
    """Best k-tuple found and how many prefix elements it failed to move."""

    best: tuple[int, ...]
    trapped_count: int
    k: int
    horizon: int


def _check_ids(s: FiniteSemigroup | PartialTruncation, ids: Iterable[int]) -> None:
    for x in ids:
        if not 0 <= x < s.n:
            raise RangeError(f"element id {x} out of range 0..{s.n - 1}")


def closure(s: FiniteSemigroup, gens: Iterable[int]) -> list[int]:
    """Least subset containing gens and closed under the table, sorted."""
    start = sorted(set(gens))
    if not start:
        raise ValueError("gens must be nonempty")
    _check_ids(s, start)
    rows = s.rows
    found = set(start)
    frontier = start
    while frontier:
        new: set[int] = set()
        for a in found:
            row = rows[a]
            for b in frontier:
                p = row[b]
                if p not in found:
                    new.add(p)
        for a in frontier:
            row = rows[a]
            for b in found:
                p = row[b]
                if p not in found:
                    new.add(p)
        found |= new
        frontier = sorted(new)
    return sorted(found)


def orbit(s: FiniteSemigroup | PartialTruncation, base: int) -> Orbit:
    """Minimal h >= 1, d >= 1 with base^h = base^(h+d), plus the cycle group."""
    _check_ids(s, [base])
    rows = s.rows
    seen = {base: 1}
    powers = [base]
    x = base
    k = 1
    while True:
        x = rows[x][base]
        k += 1
        if x == ESCAPED:
            raise EscapesTruncation(base, k)
        if x in seen:
            h = seen[x]
            d = k - h
            return Orbit(
                base=base,
                elements=tuple(powers),
                index_h=h,
                period_d=d,
                group_part=frozenset(powers[h - 1 :]),
            )
        seen[x] = k
        powers.append(x)


def idempotents(s: FiniteSemigroup) -> list[int]:
    rows = s.rows
    return [e for e in range(s.n) if rows[e][e] == e]


def maximal_subgroup(s: FiniteSemigroup, e: int) -> SubgroupInfo:
    """Largest subgroup with identity e: units of the local monoid at e."""
    _check_ids(s, [e])
    rows = s.rows
    if rows[e][e] != e:
        raise NotIdempotent(f"element {e} is not idempotent")
    local = [x for x in range(s.n) if rows[e][x] == x and rows[x][e] == x]
    members = []
    for x in local:
        row = rows[x]
        if any(row[y] == e and rows[y][x] == e for y in local):
            members.append(x)
    exponent_le_2 = all(rows[g][g] == e for g in members)
    return SubgroupInfo(
        parent=s,
        idempotent=e,
        elements=frozenset(members),
        exponent_le_2=exponent_le_2,
    )


def is_group(s: FiniteSemigroup) -> bool:
    """Unique idempotent acting as a two-sided identity, every element invertible."""
    ids = idempotents(s)
    if len(ids) != 1:
        return False
    e = ids[0]
    rows = s.rows
    if any(rows[e][x] != x or rows[x][e] != x for x in range(s.n)):
        return False
    for x in range(s.n):
        row = rows[x]
        if not any(row[y] == e and rows[y][x] == e for y in range(s.n)):
            return False
    return True


def group_identity(s: FiniteSemigroup) -> int:
    ids = idempotents(s)
    if len(ids) != 1:
        raise NotAGroup("no unique idempotent")
    return ids[0]


def group_inverses(s: FiniteSemigroup) -> list[int]:
    """Inverse of every element; raises NotAGroup when one is missing."""
    e = group_identity(s)
    rows = s.rows
    inv = [-1] * s.n
    for x in range(s.n):
        row = rows[x]
        for y in range(s.n):
            if row[y] == e and rows[y][x] == e:
                inv[x] = y
                break
        if inv[x] < 0:
            raise NotAGroup(f"element {x} has no inverse")
    return inv


def element_order(s: FiniteSemigroup, e: int, x: int) -> int:
    """Least k >= 1 with x^k = e; raises if the orbit misses e."""
    orb = orbit(s, x)
    try:
        return orb.elements.index(e) + 1
    except ValueError:
        raise NotAGroup(f"powers of {x} never reach the identity {e}")


def is_periodic(obj, bound: int | None = None) -> PeriodicVerdict:
    """Finite input is always periodic; lazy input is probed up to a bound.

    For a LazyFamily each of the first `bound` elements is raised to at most
    `bound` successive powers; an unresolved orbit yields unknown-at-bound
    with the least such element as witness.
    """
    if isinstance(obj, FiniteSemigroup):
        return PeriodicVerdict("true")
    if isinstance(obj, PartialTruncation):
        limit = obj.n if bound is None else min(bound, obj.n)
        for i in range(limit):
            try:
                orbit(obj, i)
            except EscapesTruncation:
                return PeriodicVerdict("unknown-at-bound", witness=obj.encodings[i])
        return PeriodicVerdict("true")
    if isinstance(obj, LazyFamily):
        if bound is None or bound < 1:
            raise ValueError("a positive bound is required for lazy families")
        for i in range(bound):
            s = obj.element(i)
            seen = {s}
            x = s
            resolved = False
            for _ in range(bound):
                x = obj.op(x, s)
                if x in seen:
                    resolved = True
                    break
                seen.add(x)
            if not resolved:
                return PeriodicVerdict("unknown-at-bound", witness=s)
        return PeriodicVerdict("true")
    raise TypeError(f"cannot check periodicity of {type(obj).__name__}")


def synchronizing_check(s: FiniteSemigroup) -> tuple[int, int] | None:
    """None when ab is always one of {a, b}; else the least violating pair."""
    rows = s.rows
    for a in range(s.n):
        row = rows[a]
        for b in range(s.n):
            p = row[b]
            if p != a and p != b:
                return (a, b)
    return None


def finitely_synchronizing_check(s: FiniteSemigroup, max_f: int) -> list[int] | None:
    """Forced exception set F = {ab outside {a,b}} when |F| <= max_f, else None."""
    if max_f < 0:
        raise ValueError("max_f must be >= 0")
    rows = s.rows
    forced: set[int] = set()
    for a in range(s.n):
        row = rows[a]
        for b in range(s.n):
            p = row[b]
            if p != a and p != b:
                forced.add(p)
    if len(forced) <= max_f:
        return sorted(forced)
    return None


def moving_evidence(
    fam: LazyFamily,
    candidates: Sequence[int],
    trap: Iterable[int],
    k: int,
    horizon: int,
) -> MovingEvidence:
    """Bounded evidence for the moving property; never a claim about infinity.

    Scans k-subsets of `candidates` for one minimizing the number of s among
    the first `horizon` enumerated elements with every product a_i*s inside
    `trap`. Lexicographically least minimizer wins.
    """
    pool = sorted(set(candidates))
    if k < 1 or k > len(pool):
        raise ValueError(f"k must be in 1..{len(pool)}")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    trap_set = set(trap)
    scope = fam.elements(horizon)
    best: tuple[int, ...] | None = None
    best_count = horizon + 1
    for combo in itertools.combinations(pool, k):
        count = 0
        for s in scope:
            if all(fam.op(a, s) in trap_set for a in combo):
                count += 1
                if count >= best_count:
                    break
        if count < best_count:
            best = combo
            best_count = count
            if count == 0:
                break
    assert best is not None
    return MovingEvidence(best=best, trapped_count=best_count, k=k, horizon=horizon)


def _resolve_group(g) -> tuple[FiniteSemigroup, int, list[int]]:
    if isinstance(g, SubgroupInfo):
        return g.parent, g.idempotent, sorted(g.elements)
    if isinstance(g, FiniteSemigroup):
        if not is_group(g):
            raise NotAGroup("input semigroup is not a group")
        return g, group_identity(g), list(range(g.n))
    raise TypeError(f"expected FiniteSemigroup or SubgroupInfo, got {type(g).__name__}")


def boolean_group_basis(g: FiniteSemigroup | SubgroupInfo) -> list[int]:
    """Greedy independent generating list of a group of exponent <= 2.

    Keeps an element when it lies outside the span of those already kept;
    the result has size log2 |G|. Raises OrderViolation(x) on the least
    element of order > 2, and certifies commutativity on the way.
    """
    parent, e, members = _resolve_group(g)
    rows = parent.rows
    for x in members:
        if x != e and rows[x][x] != e:
            raise OrderViolation(x)
    idx = np.array(members, dtype=np.intp)
    sub = parent.table[np.ix_(idx, idx)]
    if not np.array_equal(sub, sub.T):
        a, b = np.argwhere(sub != sub.T)[0]
        raise NotAGroup(f"exponent-2 input fails commutativity at ({members[a]}, {members[b]})")
    span = {e}
    basis: list[int] = []
    for x in members:
        if x in span:
            continue
        basis.append(x)
        row = rows[x]
        span |= {row[t] for t in span}
    if len(span) != len(members):
        raise NotAGroup("members are not closed under the operation")
    return basis


def restrict(s: FiniteSemigroup, elements: Iterable[int]) -> tuple[FiniteSemigroup, list[int]]:
    """Sub-semigroup on a closed subset, re-indexed; returns (sub, old_ids)."""
    old = sorted(set(elements))
    _check_ids(s, old)
    pos = {x: i for i, x in enumerate(old)}
    rows = s.rows
    n = len(old)
    table = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(old):
        row = rows[a]
        for j, b in enumerate(old):
            p = row[b]
            if p not in pos:
                raise ValueError(f"subset not closed: {a}*{b}={p} escapes")
            table[i, j] = pos[p]
    return FiniteSemigroup([s.labels[x] for x in old], table), old


def lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
