"""Ramsey clique search, the pair-coloring extraction pipeline, and pattern scans."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .coloring import Coloring, mono_check
from .core import FiniteSemigroup, closure, idempotents, maximal_subgroup, orbit, restrict
from .errors import CaseInapplicable, NotOutsideS2, PrecondViolation, RamseyFail
from .families import HDReport, hd_report
from .fpsets import search_mono_subsemigroup


class EdgeColoring:
    """Symmetric coloring of the edges of a complete graph on 0..v-1.

    Colors are arbitrary hashables (here usually 4-tuples of element ids),
    stored once per unordered pair.
    """

    __slots__ = ("v", "_colors")

    def __init__(self, v: int, colors: Sequence[Hashable]):
        if v < 1:
            raise ValueError("need at least one vertex")
        expected = v * (v - 1) // 2
        if len(colors) != expected:
            raise ValueError(f"expected {expected} edge colors, got {len(colors)}")
        self.v = v
        self._colors = tuple(colors)

    @classmethod
    def from_fn(cls, v: int, fn: Callable[[int, int], Hashable]) -> "EdgeColoring":
        colors = [fn(i, j) for i in range(v) for j in range(i + 1, v)]
        return cls(v, colors)

    def pair_index(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if i == j or not 0 <= i < self.v or not 0 <= j < self.v:
            raise ValueError(f"bad vertex pair ({i},{j})")
        return i * (2 * self.v - i - 1) // 2 + (j - i - 1)

    def color(self, i: int, j: int) -> Hashable:
        return self._colors[self.pair_index(i, j)]

    def distinct_colors(self) -> int:
        return len(set(self._colors))


def ramsey_find(edges: EdgeColoring, target: int) -> tuple[int, ...] | None:
    """Lexicographically least monochromatic clique of the target size, or None.

    Exact depth-first branch and bound: once two vertices fix the candidate
    color, only color-compatible vertices extend the clique, and branches
    without enough remaining vertices are cut.
    """
    v = edges.v
    if not 1 <= target <= v:
        raise ValueError(f"target must be in 1..{v}")
    if target == 1:
        return (0,)
    colors = edges._colors
    idx = edges.pair_index

    def extend(members: list[int], col: Hashable, start: int) -> tuple[int, ...] | None:
        if len(members) == target:
            return tuple(members)
        limit = v - (target - len(members)) + 1
        for w in range(start, limit):
            if len(members) == 1:
                new_col = colors[idx(members[0], w)]
            else:
                if any(colors[idx(u, w)] != col for u in members):
                    continue
                new_col = col
            members.append(w)
            hit = extend(members, new_col, w + 1)
            if hit is not None:
                return hit
            members.pop()
        return None

    for first in range(v - target + 1):
        hit = extend([first], None, first + 1)
        if hit is not None:
            return hit
    return None


def shevrin_pair_coloring(s: FiniteSemigroup, seq: Sequence[int]) -> EdgeColoring:
    """Edge {i,j} (i<j) colored by (seq_i^3, seq_i^2, seq_i seq_j, seq_j seq_i).

    Every sequence element must lie outside S*S.
    """
    seq = tuple(seq)
    if len(seq) < 2:
        raise PrecondViolation("need at least two sequence elements")
    if len(seq) != len(set(seq)):
        raise PrecondViolation("sequence elements must be distinct")
    rows = s.rows
    for x in seq:
        if not 0 <= x < s.n:
            raise PrecondViolation(f"element id {x} out of range")
    s2 = {rows[a][b] for a in range(s.n) for b in range(s.n)}
    for x in seq:
        if x in s2:
            raise NotOutsideS2(x)
    sq = [rows[x][x] for x in seq]
    cube = [rows[sq_i][x] for sq_i, x in zip(sq, seq)]

    def fn(i: int, j: int):
        return (cube[i], sq[i], rows[seq[i]][seq[j]], rows[seq[j]][seq[i]])

    return EdgeColoring.from_fn(len(seq), fn)


@dataclass(frozen=True)
class TypeHDCertificate:
    """Everything the extraction pipeline verified about one subsequence.

    The extracted elements are labelled b2, b3, ... in order; h and d are the
    minimal index and period of the first of them. prefix_length records how
    much material the Ramsey step had to work with, so a failure elsewhere is
    attributable to a short prefix rather than a broken relation.
    """

    source_seq: tuple[int, ...]
    prefix_length: int
    target: int
    extracted: tuple[int, ...]
    shared_color: tuple[int, int, int, int]
    h: int
    d: int
    relations: HDReport
    structure_set: tuple[int, ...]
    structure_matches_closure: bool
    idempotent: int
    idempotent_unique: bool
    equality_audit: dict[str, bool]

    @property
    def all_checks_pass(self) -> bool:
        return (
            self.relations.all_pass
            and self.structure_matches_closure
            and self.idempotent_unique
            and self.equality_audit["biconditional_ab"]
            and self.equality_audit["biconditional_ba"]
        )

    def to_dict(self) -> dict:
        cube, square, ab, ba = self.shared_color
        return {
            "subsequence": list(self.extracted),
            "prefix_length": self.prefix_length,
            "target": self.target,
            "color": {"cube": cube, "square": square, "ab": ab, "ba": ba},
            "h": self.h,
            "d": self.d,
            "relations": self.relations.as_dict(),
            "structure_set": list(self.structure_set),
            "structure_matches_closure": self.structure_matches_closure,
            "idempotent": self.idempotent,
            "idempotent_unique": self.idempotent_unique,
            "equality_audit": dict(self.equality_audit),
            "all_checks_pass": self.all_checks_pass,
        }


def _power(rows: list[list[int]], x: int, k: int) -> int:
    out = x
    for _ in range(k - 1):
        out = rows[out][x]
    return out


def extract_typehd(s: FiniteSemigroup, seq: Sequence[int], target: int) -> TypeHDCertificate:
    """Run the full pipeline: pair-color, extract a monochromatic subsequence,
    derive (h, d), verify the relations, and audit the residual equalities.

    Raises RamseyFail when the finite prefix holds no monochromatic subset of
    the target size, and NotOutsideS2/PrecondViolation on bad input.
    """
    seq = tuple(seq)
    if target < 2:
        raise PrecondViolation("target must be >= 2 to fix the pair products")
    if target > len(seq):
        raise RamseyFail(target)
    edges = shevrin_pair_coloring(s, seq)
    verts = ramsey_find(edges, target)
    if verts is None:
        raise RamseyFail(target)
    extracted = tuple(seq[i] for i in verts)
    shared = edges.color(verts[0], verts[1])

    rows = s.rows
    b = extracted[0]
    orb = orbit(s, b)
    h, d = orb.index_h, orb.period_d
    if h <= 1:
        raise PrecondViolation(f"element {b} has index 1; it cannot sit outside S*S")

    relations = hd_report(s, extracted, h, d)

    sq_val = rows[b][b]
    ab_val = rows[extracted[0]][extracted[1]]
    ba_val = rows[extracted[1]][extracted[0]]
    structure = set(extracted) | {sq_val, ab_val, ba_val}
    structure |= {_power(rows, b, p) for p in range(3, h + d)}
    closure_set = set(closure(s, extracted))
    structure_sorted = tuple(sorted(structure))

    idems = [e for e in sorted(closure_set) if rows[e][e] == e]
    e = idems[0]
    be = rows[b][e]
    bee = rows[be][be]
    powers = {_power(rows, b, p) for p in range(2, h + d)}
    ab_is_power = ab_val in powers
    ba_is_power = ba_val in powers
    audit = {
        "ab_eq_square": ab_val == sq_val,
        "ab_eq_be2": ab_val == bee,
        "ab_is_power": ab_is_power,
        "ba_eq_square": ba_val == sq_val,
        "ba_eq_be2": ba_val == bee,
        "ba_is_power": ba_is_power,
        "ab_eq_ba": ab_val == ba_val,
        "biconditional_ab": ab_is_power == (ab_val == sq_val or ab_val == bee),
        "biconditional_ba": ba_is_power == (ba_val == sq_val or ba_val == bee),
    }
    return TypeHDCertificate(
        source_seq=seq,
        prefix_length=len(seq),
        target=target,
        extracted=extracted,
        shared_color=shared,
        h=h,
        d=d,
        relations=relations,
        structure_set=structure_sorted,
        structure_matches_closure=structure == closure_set,
        idempotent=e,
        idempotent_unique=len(idems) == 1,
        equality_audit=audit,
    )


@dataclass(frozen=True)
class PatternHit:
    size: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class PatternReport:
    """Structural pattern sizes found in one semigroup, with witnesses."""

    right_zero: PatternHit
    left_zero: PatternHit
    max_chain: PatternHit
    min_chain: PatternHit
    fan: PatternHit
    subgroup: PatternHit
    s2_size: int

    def as_dict(self) -> dict:
        def hit(h: PatternHit) -> dict:
            return {"size": h.size, "witness": list(h.witness)}

        return {
            "right_zero": hit(self.right_zero),
            "left_zero": hit(self.left_zero),
            "max_chain": hit(self.max_chain),
            "min_chain": hit(self.min_chain),
            "fan": hit(self.fan),
            "subgroup": hit(self.subgroup),
            "s2_size": self.s2_size,
        }


def _greedy_compatible(candidates: list[int], compatible, bound: int) -> list[int]:
    chosen: list[int] = []
    for x in candidates:
        if len(chosen) >= bound:
            break
        if all(compatible(x, y) for y in chosen):
            chosen.append(x)
    return chosen


def classify_patterns(s: FiniteSemigroup, bound: int) -> PatternReport:
    """Greedy witnesses (in id order, capped at `bound`) for the named patterns.

    Chains are found exactly via longest-path over the absorption order; the
    max- and min-chain are the same subset read in opposite directions, since
    reversing an absorption chain swaps the two readings. Subgroups are exact.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rows = s.rows
    idems = idempotents(s)

    rz = _greedy_compatible(
        idems, lambda a, b: rows[a][b] == b and rows[b][a] == a, bound
    )
    lz = _greedy_compatible(
        idems, lambda a, b: rows[a][b] == a and rows[b][a] == b, bound
    )

    # absorption order on idempotents: a < b when ab = ba = b
    above = {
        a: [b for b in idems if b != a and rows[a][b] == b and rows[b][a] == b]
        for a in idems
    }
    memo: dict[int, tuple[int, tuple[int, ...]]] = {}

    def longest_from(start: int) -> tuple[int, tuple[int, ...]]:
        # explicit stack: chains can be as long as the idempotent count
        stack = [start]
        while stack:
            x = stack[-1]
            if x in memo:
                stack.pop()
                continue
            pending = [b for b in above[x] if b not in memo]
            if pending:
                stack.extend(pending)
                continue
            best = (1, (x,))
            for b in above[x]:
                size, tail = memo[b]
                cand = (size + 1, (x,) + tail)
                if cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                    best = cand
            memo[x] = best
            stack.pop()
        return memo[start]

    chain: tuple[int, ...] = ()
    for a in idems:
        size, found = longest_from(a)
        if size > len(chain) or (size == len(chain) and found < chain):
            chain = found
    chain = chain[:bound]

    best_fan: list[int] = []
    for z in idems:
        candidates = [
            a for a in idems if a != z and rows[a][z] == z and rows[z][a] == z
        ]
        chosen = _greedy_compatible(
            candidates,
            lambda a, b, z=z: rows[a][b] == z and rows[b][a] == z,
            bound - 1,
        )
        fan_set = [z] + chosen
        if len(fan_set) > len(best_fan):
            best_fan = fan_set

    best_sub: tuple[int, ...] = ()
    for e in idems:
        members = tuple(sorted(maximal_subgroup(s, e).elements))
        if len(members) > len(best_sub):
            best_sub = members

    s2 = {rows[a][b] for a in range(s.n) for b in range(s.n)}

    return PatternReport(
        right_zero=PatternHit(len(rz), tuple(rz)),
        left_zero=PatternHit(len(lz), tuple(lz)),
        max_chain=PatternHit(len(chain), chain),
        min_chain=PatternHit(len(chain), tuple(reversed(chain))),
        fan=PatternHit(len(best_fan), tuple(best_fan)),
        subgroup=PatternHit(len(best_sub), best_sub),
        s2_size=len(s2),
    )


@dataclass(frozen=True)
class Thm35Report:
    """Desk-scale constructive run of one implication case."""

    case: str
    passed: bool
    details: dict

    def as_dict(self) -> dict:
        return {"case": self.case, "passed": self.passed, "details": self.details}


def verify_thm35_direction3to1(
    s: FiniteSemigroup,
    c: Coloring,
    case: str,
    budget: int = 1,
    max_gens: int = 3,
) -> Thm35Report:
    """Constructively realize an almost-monochromatic subsemigroup per case.

    finsync: pigeonhole construction inside a finitely synchronizing
    semigroup; the closure of the largest color class must stay inside the
    class plus its forced exception set. z2sum: locate an exponent-2
    subgroup of rank >= 2 and search it for an almost-monochromatic
    subsemigroup; CaseInapplicable when no such subgroup exists.
    """
    if case not in ("finsync", "z2sum"):
        raise ValueError(f"case must be 'finsync' or 'z2sum', got {case!r}")
    for x in range(s.n):
        if not c.colored(x):
            raise ValueError(f"coloring misses element {x}")
    rows = s.rows

    if case == "finsync":
        from .core import finitely_synchronizing_check

        forced = finitely_synchronizing_check(s, s.n)
        assert forced is not None
        classes = c.classes()
        cls_color = max(classes, key=lambda col: (len(classes[col]), -col))
        members = classes[cls_color]
        cl = closure(s, members)
        outside = sorted(set(cl) - set(members) - set(forced))
        verdict = mono_check(cl, c)
        passed = not outside
        return Thm35Report(
            case="finsync",
            passed=passed,
            details={
                "color_class": cls_color,
                "class_size": len(members),
                "subsemigroup": list(cl),
                "forced_exceptions": list(forced),
                "coloring_exceptions": sorted(verdict.exceptions),
                "escaped": outside,
            },
        )

    candidates: list[tuple[int, frozenset[int]]] = []
    for e in idempotents(s):
        sub = maximal_subgroup(s, e)
        boolean_part = {g for g in sub.elements if rows[g][g] == e}
        closed = all(
            rows[a][b] in boolean_part for a in boolean_part for b in boolean_part
        )
        if closed and len(boolean_part) >= 4:
            candidates.append((e, frozenset(boolean_part)))
    if not candidates:
        raise CaseInapplicable("no exponent-2 subgroup of rank >= 2")
    e, group = max(candidates, key=lambda pair: (len(pair[1]), -pair[0]))
    sub_sg, old_ids = restrict(s, group)
    sub_coloring = Coloring(
        {i: c.color(old) for i, old in enumerate(old_ids)}, c.palette_size
    )
    found = search_mono_subsemigroup(sub_sg, sub_coloring, budget, max_gens)
    details = {
        "idempotent": e,
        "subgroup": list(old_ids),
        "budget": budget,
        "found": None,
    }
    if found is not None:
        details["found"] = sorted(old_ids[i] for i in found.elements)
    return Thm35Report(case="z2sum", passed=found is not None, details=details)
