"""Finite colorings, three adversarial constructions, and monochromaticity checks."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterable, Mapping

from .core import (
    FiniteSemigroup,
    Orbit,
    group_inverses,
    idempotents,
    is_group,
    maximal_subgroup,
    orbit,
)
from .errors import NotAGroup


class Coloring:
    """Assignment of a color id to each element of its domain.

    Total on whatever domain it was built over; constructions that only color
    some elements (inverse pairing) simply have a smaller domain.
    """

    __slots__ = ("_assign", "palette_size")

    def __init__(self, assign: Mapping[int, int], palette_size: int):
        if palette_size < 1:
            raise ValueError("palette_size must be >= 1")
        for x, col in assign.items():
            if not 0 <= col < palette_size:
                raise ValueError(f"color {col} of element {x} outside 0..{palette_size - 1}")
        self._assign = dict(assign)
        self.palette_size = palette_size

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self._assign)

    def color(self, x: int) -> int:
        try:
            return self._assign[x]
        except KeyError:
            raise KeyError(f"element {x} is not in the coloring's domain")

    def colored(self, x: int) -> bool:
        return x in self._assign

    def items(self):
        return self._assign.items()

    def classes(self) -> dict[int, list[int]]:
        """Color id -> sorted elements of that class."""
        out: dict[int, list[int]] = {c: [] for c in range(self.palette_size)}
        for x in sorted(self._assign):
            out[self._assign[x]].append(x)
        return out

    def __len__(self) -> int:
        return len(self._assign)

    def __repr__(self) -> str:
        return f"Coloring(|domain|={len(self._assign)}, palette={self.palette_size})"


def constant_coloring(domain: Iterable[int], color: int = 0, palette_size: int = 2) -> Coloring:
    return Coloring({x: color for x in domain}, palette_size)


def coloring_from_fn(domain: Iterable[int], fn: Callable[[int], int], palette_size: int) -> Coloring:
    return Coloring({x: fn(x) for x in domain}, palette_size)


@dataclass(frozen=True)
class MonoVerdict:
    is_mono: bool
    majority_color: int
    exceptions: frozenset[int]


def mono_check(elements: Iterable[int], c: Coloring) -> MonoVerdict:
    """Majority color (ties -> lowest id) and the off-majority exceptions."""
    elems = sorted(set(elements))
    counts: dict[int, int] = {}
    for x in elems:
        counts[c.color(x)] = counts.get(c.color(x), 0) + 1
    if not counts:
        return MonoVerdict(True, 0, frozenset())
    best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))[0]
    exceptions = frozenset(x for x in elems if c.color(x) != best)
    return MonoVerdict(not exceptions, best, exceptions)


def almost_mono_check(elements: Iterable[int], c: Coloring, budget: int) -> bool:
    """True when at most `budget` elements miss the majority color."""
    if budget < 0:
        raise ValueError("budget must be >= 0")
    return len(mono_check(elements, c).exceptions) <= budget


def block_index(t: int) -> int:
    """1-based index of the block containing t when block j has length j."""
    if t < 1:
        raise ValueError("elements start at 1")
    j = (isqrt(8 * t) - 1) // 2
    while j * (j + 1) // 2 < t:
        j += 1
    while j > 1 and (j - 1) * j // 2 >= t:
        j -= 1
    return j


def ncolor_color(t: int) -> int:
    """Color of t under runs of lengths 1,2,3,... alternating red(0)/green(1)."""
    return (block_index(t) - 1) % 2


def ncolor(n: int) -> Coloring:
    """The block coloring of {1..n}: runs 1,2,3,... starting red(0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Coloring({t: ncolor_color(t) for t in range(1, n + 1)}, 2)


@dataclass(frozen=True)
class NcolorRow:
    n: int
    blocks_checked: int
    ok: bool
    failing_block: tuple[int, int] | None


@dataclass(frozen=True)
class NcolorReport:
    n_max: int
    domain_size: int
    rows: tuple[NcolorRow, ...]

    @property
    def all_pass(self) -> bool:
        return all(r.ok for r in self.rows)


def verify_ncolor_property(domain_size: int, max_n: int) -> NcolorReport:
    """Check every full monochromatic block of length >= n holds a multiple of n.

    Blocks are exactly the construction runs; only blocks fully inside
    {1..domain_size} are considered.
    """
    if not 1 <= max_n <= domain_size:
        raise ValueError("need 1 <= max_n <= domain_size")
    blocks: list[tuple[int, int]] = []
    j = 1
    while j * (j + 1) // 2 <= domain_size:
        blocks.append(((j - 1) * j // 2 + 1, j * (j + 1) // 2))
        j += 1
    rows = []
    for n in range(1, max_n + 1):
        failing = None
        checked = 0
        for start, end in blocks:
            if end - start + 1 < n:
                continue
            checked += 1
            if (end // n) * n < start:
                failing = (start, end)
                break
        rows.append(NcolorRow(n=n, blocks_checked=checked, ok=failing is None, failing_block=failing))
    return NcolorReport(n_max=max_n, domain_size=domain_size, rows=tuple(rows))


def gcolor(g: FiniteSemigroup) -> Coloring:
    """2-coloring of the order>2 elements of a group: g and g^-1 get 0 and 1.

    The pairing is deterministic: the lower id of each inverse pair gets 0.
    Elements of order <= 2 stay uncolored (outside the domain).
    """
    if not is_group(g):
        raise NotAGroup("gcolor needs a group")
    inv = group_inverses(g)
    assign: dict[int, int] = {}
    for x in range(g.n):
        if inv[x] == x:
            continue  # order <= 2
        lo, hi = min(x, inv[x]), max(x, inv[x])
        assign[lo] = 0
        assign[hi] = 1
    return Coloring(assign, 2)


@dataclass(frozen=True)
class TruecolorPlan:
    """A truecolor coloring plus the raw material its checks need."""

    coloring: Coloring
    selected_orbits: tuple[Orbit, ...]
    inverse_pairs: tuple[tuple[int, int], ...]


def truecolor_plan(s: FiniteSemigroup, long_orbit_threshold: int) -> TruecolorPlan:
    """Greedy finite analog of the adversarial two-coloring of a semigroup.

    Scan elements in id order and keep a maximal family of pairwise-disjoint
    orbits of size >= long_orbit_threshold; color each along its powers by the
    block pattern. Then, per idempotent e, color still-uncolored order>2
    elements of G(e) by inverse pairing, and extend by color 0 everywhere else.
    """
    if long_orbit_threshold < 1:
        raise ValueError("long_orbit_threshold must be >= 1")
    assign: dict[int, int] = {}
    taken: set[int] = set()
    selected: list[Orbit] = []
    for x in range(s.n):
        orb = orbit(s, x)
        if len(orb.elements) < long_orbit_threshold:
            continue
        if taken.intersection(orb.elements):
            continue
        selected.append(orb)
        taken.update(orb.elements)
        for power, el in enumerate(orb.elements, start=1):
            assign[el] = ncolor_color(power)
    pairs: list[tuple[int, int]] = []
    rows = s.rows
    for e in idempotents(s):
        sub = maximal_subgroup(s, e)
        members = sorted(sub.elements)
        inv_in_g = {}
        for x in members:
            for y in members:
                if rows[x][y] == e and rows[y][x] == e:
                    inv_in_g[x] = y
                    break
        for x in members:
            y = inv_in_g[x]
            if y == x:
                continue  # order <= 2
            if x > y:
                continue  # handle each pair once, from its lower id
            # Only pairs this stage touches carry the opposite-color guarantee;
            # pairs fully colored by orbit transport are left alone.
            if x not in assign and y not in assign:
                assign[x] = 0
                assign[y] = 1
                pairs.append((x, y))
            elif x not in assign:
                assign[x] = 1 - assign[y]
                pairs.append((x, y))
            elif y not in assign:
                assign[y] = 1 - assign[x]
                pairs.append((x, y))
    for x in range(s.n):
        if x not in assign:
            assign[x] = 0
    return TruecolorPlan(Coloring(assign, 2), tuple(selected), tuple(pairs))


def truecolor(s: FiniteSemigroup, long_orbit_threshold: int) -> Coloring:
    return truecolor_plan(s, long_orbit_threshold).coloring


def mod_coloring(s: FiniteSemigroup, k: int) -> Coloring:
    """Color each element by its numeric label mod k (residue-family coloring)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    assign = {}
    for x in range(s.n):
        try:
            value = int(s.labels[x])
        except ValueError:
            raise ValueError(f"element {x} has non-numeric label {s.labels[x]!r}")
        assign[x] = value % k
    return Coloring(assign, k)


@dataclass(frozen=True)
class RelationFlag:
    ok: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class TruecolorInvariantReport:
    orbits_selected: int
    pairs_colored: int
    pattern_transport: RelationFlag
    suborbits_two_colored: RelationFlag
    inverse_pairs_differ: RelationFlag

    @property
    def all_pass(self) -> bool:
        return (
            self.pattern_transport.ok
            and self.suborbits_two_colored.ok
            and self.inverse_pairs_differ.ok
        )

    def as_dict(self) -> dict:
        return {
            "orbits_selected": self.orbits_selected,
            "pairs_colored": self.pairs_colored,
            "pattern_transport": self.pattern_transport.ok,
            "suborbits_two_colored": self.suborbits_two_colored.ok,
            "inverse_pairs_differ": self.inverse_pairs_differ.ok,
        }


def verify_truecolor_invariants(s: FiniteSemigroup, long_orbit_threshold: int) -> TruecolorInvariantReport:
    """Check the construction-level guarantees of a truecolor coloring.

    (1) Each selected orbit, read along increasing powers, carries exactly the
    block pattern. (2) For each selected orbit and every j whose two witness
    blocks fit inside the unwrapped positions, i.e. (j+1)(j+2)/2 <= orbit
    size, the sub-orbit generated by the j-th power meets both colors; at the
    wrap boundary this is the strongest finite statement that holds. (3)
    Inverse pairs handled at the pairing stage received different colors
    whenever both sides were free.
    """
    from .core import closure

    plan = truecolor_plan(s, long_orbit_threshold)
    c = plan.coloring

    transport = RelationFlag(True)
    for orb in plan.selected_orbits:
        for position, el in enumerate(orb.elements, start=1):
            if c.color(el) != ncolor_color(position):
                transport = RelationFlag(False, (orb.base, position, el))
                break
        if not transport.ok:
            break

    suborbits = RelationFlag(True)
    for orb in plan.selected_orbits:
        size = len(orb.elements)
        j = 1
        while (j + 1) * (j + 2) // 2 <= size:
            sub = closure(s, [orb.elements[j - 1]])
            if len({c.color(x) for x in sub}) < 2:
                suborbits = RelationFlag(False, (orb.base, j))
                break
            j += 1
        if not suborbits.ok:
            break

    pairs_ok = RelationFlag(True)
    for x, y in plan.inverse_pairs:
        if c.color(x) == c.color(y):
            pairs_ok = RelationFlag(False, (x, y))
            break

    return TruecolorInvariantReport(
        orbits_selected=len(plan.selected_orbits),
        pairs_colored=len(plan.inverse_pairs),
        pattern_transport=transport,
        suborbits_two_colored=suborbits,
        inverse_pairs_differ=pairs_ok,
    )
