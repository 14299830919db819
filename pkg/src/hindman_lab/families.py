"""Constructors for the concrete semigroup families, including the [h,d] engine.

Lazy families enumerate the naturals starting at 1 and use the value itself
as the canonical encoding. Finite builders return validated FiniteSemigroups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    FiniteSemigroup,
    LazyFamily,
    closure,
    idempotents,
    lcm,
    orbit,
)
from .errors import AssocViolation, BadPattern, BadSpec, PremiseFailed

EQ_TOKENS = ("SQ", "AB", "BA", "X1E2")


# ---------------------------------------------------------------------------
# lazy families on the naturals


def natplus() -> LazyFamily:
    """(N, +). No finite truncation is closed; truncations carry escape marks."""
    return LazyFamily("natplus", lambda i: i + 1, lambda a, b: a + b)


def natmax() -> LazyFamily:
    return LazyFamily("natmax", lambda i: i + 1, lambda a, b: a if a >= b else b)


def natmin() -> LazyFamily:
    return LazyFamily("natmin", lambda i: i + 1, lambda a, b: a if a <= b else b)


def fan() -> LazyFamily:
    """Meet semilattice with bottom 1: distinct elements multiply to 1."""
    return LazyFamily("fan", lambda i: i + 1, lambda a, b: a if a == b else 1)


def natmax_truncation(n: int) -> FiniteSemigroup:
    if n < 1:
        raise BadSpec("natmax truncation needs N >= 1")
    ids = np.arange(n, dtype=np.int32)
    return FiniteSemigroup([str(v + 1) for v in range(n)], np.maximum.outer(ids, ids))


def natmin_truncation(n: int) -> FiniteSemigroup:
    if n < 1:
        raise BadSpec("natmin truncation needs N >= 1")
    ids = np.arange(n, dtype=np.int32)
    return FiniteSemigroup([str(v + 1) for v in range(n)], np.minimum.outer(ids, ids))


def fan_truncation(n: int) -> FiniteSemigroup:
    if n < 1:
        raise BadSpec("fan truncation needs N >= 1")
    table = np.zeros((n, n), dtype=np.int32)
    np.fill_diagonal(table, np.arange(n, dtype=np.int32))
    return FiniteSemigroup([str(v + 1) for v in range(n)], table)


# ---------------------------------------------------------------------------
# finite families


def right_zero(n: int) -> FiniteSemigroup:
    """ab = b for all a, b."""
    if n < 1:
        raise BadSpec("right zero semigroup needs n >= 1")
    table = np.tile(np.arange(n, dtype=np.int32), (n, 1))
    return FiniteSemigroup([str(i) for i in range(n)], table)


def left_zero(n: int) -> FiniteSemigroup:
    """ab = a for all a, b."""
    if n < 1:
        raise BadSpec("left zero semigroup needs n >= 1")
    table = np.tile(np.arange(n, dtype=np.int32).reshape(n, 1), (1, n))
    return FiniteSemigroup([str(i) for i in range(n)], table)


def z2sum(k: int) -> FiniteSemigroup:
    """Direct sum of k copies of the two-element group; ids are bit vectors."""
    if k < 1:
        raise BadSpec("z2sum needs k >= 1")
    if k > 12:
        raise BadSpec("z2sum is desk-scale; k <= 12 (the table is 4^k entries)")
    ids = np.arange(2**k, dtype=np.int32)
    table = np.bitwise_xor.outer(ids, ids)
    return FiniteSemigroup([format(v, f"0{k}b") for v in range(2**k)], table)


def cyclic_group(n: int) -> FiniteSemigroup:
    """Additive group of integers mod n."""
    if n < 1:
        raise BadSpec("cyclic group needs n >= 1")
    ids = np.arange(n, dtype=np.int32)
    return FiniteSemigroup([str(i) for i in range(n)], np.add.outer(ids, ids) % n)


def zero_semigroup(m: int) -> FiniteSemigroup:
    """m generators plus an absorbing z; every product equals z."""
    if m < 1:
        raise BadSpec("zero semigroup needs m >= 1")
    table = np.full((m + 1, m + 1), m, dtype=np.int32)
    return FiniteSemigroup([f"x{i + 1}" for i in range(m)] + ["z"], table)


def monogenic(h: int, d: int) -> FiniteSemigroup:
    """Single generator b with b^h = b^(h+d); elements b^1..b^(h+d-1)."""
    if h < 1 or d < 1:
        raise BadSpec("monogenic needs h >= 1 and d >= 1")
    n = h + d - 1
    table = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(n):
            table[i, j] = _reduce_exponent(i + j + 2, h, d) - 1
    return FiniteSemigroup([f"b^{p}" for p in range(1, n + 1)], table)


def whymodfin(k: int, m_count: int) -> FiniteSemigroup:
    """Residues {0..k-1} together with m_count members of kN+1, addition mod k."""
    if k < 2:
        raise BadSpec("whymodfin needs k >= 2")
    if m_count < 1:
        raise BadSpec("whymodfin needs M >= 1")
    values = list(range(k)) + [k * (j + 1) + 1 for j in range(m_count)]
    vals = np.array(values, dtype=np.int64)
    table = (np.add.outer(vals, vals) % k).astype(np.int32)
    return FiniteSemigroup([str(v) for v in values], table)


# ---------------------------------------------------------------------------
# the type [h,d] engine


def _reduce_exponent(p: int, h: int, d: int) -> int:
    return p if p < h else h + (p - h) % d


def parse_eqpattern(text: str | None) -> tuple[frozenset[str], ...]:
    """Parse pattern groups like "AB=BA;SQ" into a partition of the four tokens."""
    groups: list[set[str]] = []
    seen: set[str] = set()
    if text:
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                raise BadSpec("empty pattern group")
            names = [t.strip() for t in chunk.split("=")]
            group = set()
            for name in names:
                if name not in EQ_TOKENS:
                    raise BadSpec(f"unknown pattern token {name!r}; expected one of {EQ_TOKENS}")
                if name in seen:
                    raise BadSpec(f"pattern token {name} appears twice")
                seen.add(name)
                group.add(name)
            groups.append(group)
    for name in EQ_TOKENS:
        if name not in seen:
            groups.append({name})
    return tuple(sorted((frozenset(g) for g in groups), key=lambda g: sorted(g)))


def normalize_eqpattern(pattern) -> tuple[frozenset[str], ...]:
    if pattern is None or isinstance(pattern, str):
        return parse_eqpattern(pattern)
    groups = [frozenset(str(t) for t in g) for g in pattern]
    flat = [t for g in groups for t in g]
    if len(flat) != len(set(flat)):
        raise BadSpec("pattern token appears twice")
    for t in flat:
        if t not in EQ_TOKENS:
            raise BadSpec(f"unknown pattern token {t!r}")
    for name in EQ_TOKENS:
        if name not in flat:
            groups.append(frozenset({name}))
    return tuple(sorted(groups, key=lambda g: sorted(g)))


def eqpattern_text(pattern: tuple[frozenset[str], ...]) -> str:
    return ";".join("=".join(sorted(g)) for g in pattern)


@dataclass(frozen=True)
class TypeHDModel:
    """A finite model of the [h,d] presentation with its bookkeeping."""

    semigroup: FiniteSemigroup
    h: int
    d: int
    m: int
    generators: tuple[int, ...]
    eqpattern: tuple[frozenset[str], ...]
    idempotent: int
    tokens: dict[int, tuple[str, ...]]


def build_typehd(h: int, d: int, m: int, eqpattern=None) -> TypeHDModel:
    """Finite [h,d] model on m generators, quotiented by an equality pattern.

    Universe: generators x1..xm, powers x1^2..x1^(h+d-1), the two cross
    products x1x2 and x2x1; the (x1 e)^2 token resolves to its concrete power.
    Pattern groups are merged by representative products and the result is
    re-verified for associativity; failures raise BadPattern.
    """
    if h <= 1:
        raise BadSpec("typehd needs h > 1")
    if d < 1:
        raise BadSpec("typehd needs d >= 1")
    if m < 2:
        raise BadSpec("typehd needs m >= 2")
    pattern = normalize_eqpattern(eqpattern)
    n_pow = h + d - 2  # powers 2..h+d-1
    ab_id = m + n_pow
    ba_id = ab_id + 1
    n0 = m + n_pow + 2

    def pow_id(p: int) -> int:
        return m + (p - 2)

    length = [1] * m + list(range(2, h + d)) + [2, 2]

    def product0(u: int, v: int) -> int:
        if u < m and v < m:
            if u == v:
                return pow_id(2)
            return ab_id if u < v else ba_id
        return pow_id(_reduce_exponent(length[u] + length[v], h, d))

    # the unique exponent in [h, h+d-1] divisible by d marks the idempotent
    p_star = next(p for p in range(h, h + d) if p % d == 0)
    x1e2_id = pow_id(_reduce_exponent(2 * (p_star + 1), h, d))
    token_id = {"SQ": pow_id(2), "AB": ab_id, "BA": ba_id, "X1E2": x1e2_id}

    parent = list(range(n0))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for group in pattern:
        ids = sorted(token_id[t] for t in group)
        for other in ids[1:]:
            union(ids[0], other)

    for g in range(m):
        if find(g) != g:
            raise BadPattern(f"pattern collapses generator x{g + 1}")

    reps = sorted({find(x) for x in range(n0)})
    new_id = {rep: i for i, rep in enumerate(reps)}
    members: dict[int, list[int]] = {rep: [] for rep in reps}
    for x in range(n0):
        members[find(x)].append(x)

    base_labels = (
        [f"x{i + 1}" for i in range(m)]
        + [f"x1^{p}" for p in range(2, h + d)]
        + ["x1x2", "x2x1"]
    )
    base_tokens = (
        [f"x{i + 1}" for i in range(m)]
        + [f"pow{p}" for p in range(2, h + d)]
        + ["ab", "ba"]
    )

    n = len(reps)
    table = np.empty((n, n), dtype=np.int32)
    for i, ra in enumerate(reps):
        for j, rb in enumerate(reps):
            table[i, j] = new_id[find(product0(ra, rb))]
    labels = ["=".join(base_labels[x] for x in members[rep]) for rep in reps]
    try:
        semigroup = FiniteSemigroup(labels, table)
    except AssocViolation as exc:
        raise BadPattern(
            f"pattern {eqpattern_text(pattern)!r} breaks associativity at triple {exc.triple}"
        ) from exc

    tokens = {
        new_id[rep]: tuple(base_tokens[x] for x in members[rep])
        for rep in reps
        if rep >= m
    }
    return TypeHDModel(
        semigroup=semigroup,
        h=h,
        d=d,
        m=m,
        generators=tuple(range(m)),
        eqpattern=pattern,
        idempotent=new_id[find(pow_id(p_star))],
        tokens=tokens,
    )


# ---------------------------------------------------------------------------
# relation verification


@dataclass(frozen=True)
class RelationCheck:
    ok: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class HDReport:
    hd1: RelationCheck
    hd2: RelationCheck
    hd3: RelationCheck
    hd4: RelationCheck
    gens_outside_s2: RelationCheck

    @property
    def all_pass(self) -> bool:
        return all(
            c.ok for c in (self.hd1, self.hd2, self.hd3, self.hd4, self.gens_outside_s2)
        )

    def as_dict(self) -> dict[str, bool]:
        return {
            "hd1": self.hd1.ok,
            "hd2": self.hd2.ok,
            "hd3": self.hd3.ok,
            "hd4": self.hd4.ok,
            "gens_outside_s2": self.gens_outside_s2.ok,
        }


def _power(rows: list[list[int]], x: int, k: int) -> int:
    out = x
    for _ in range(k - 1):
        out = rows[out][x]
    return out


def hd_report(s: FiniteSemigroup, gens: Sequence[int], h: int, d: int) -> HDReport:
    """Exhaustively check the four defining relations over the given generators."""
    gens = list(gens)
    if len(gens) != len(set(gens)):
        raise ValueError("generators must be distinct")
    if not gens:
        raise ValueError("generators must be nonempty")
    rows = s.rows
    g0 = gens[0]

    sq = rows[g0][g0]
    hd1 = RelationCheck(True)
    for i, g in enumerate(gens):
        if rows[g][g] != sq:
            hd1 = RelationCheck(False, (i, rows[g][g], sq))
            break

    hd2 = RelationCheck(True)
    if len(gens) >= 2:
        ab = rows[gens[0]][gens[1]]
        ba = rows[gens[1]][gens[0]]
        for i, j in itertools.combinations(range(len(gens)), 2):
            if rows[gens[i]][gens[j]] != ab:
                hd2 = RelationCheck(False, (i, j, rows[gens[i]][gens[j]], ab))
                break
            if rows[gens[j]][gens[i]] != ba:
                hd2 = RelationCheck(False, (j, i, rows[gens[j]][gens[i]], ba))
                break

    cube = _power(rows, g0, 3)
    hd3 = RelationCheck(True)
    for i, j, k in itertools.product(range(len(gens)), repeat=3):
        val = rows[rows[gens[i]][gens[j]]][gens[k]]
        if val != cube:
            hd3 = RelationCheck(False, (i, j, k, val, cube))
            break

    hd4 = RelationCheck(True)
    for i, g in enumerate(gens):
        if _power(rows, g, h) != _power(rows, g, h + d):
            hd4 = RelationCheck(False, (i, _power(rows, g, h), _power(rows, g, h + d)))
            break

    s2 = {rows[a][b] for a in range(s.n) for b in range(s.n)}
    outside = RelationCheck(True)
    for i, g in enumerate(gens):
        if g in s2:
            outside = RelationCheck(False, (i, g))
            break

    return HDReport(hd1=hd1, hd2=hd2, hd3=hd3, hd4=hd4, gens_outside_s2=outside)


def verify_hd(model: TypeHDModel) -> HDReport:
    return hd_report(model.semigroup, model.generators, model.h, model.d)


def verify_s2_finite(model: TypeHDModel) -> tuple[int, int]:
    """(|S|, |S^2|) for a built model; checks generators stay outside S^2."""
    s = model.semigroup
    rows = s.rows
    s2 = {rows[a][b] for a in range(s.n) for b in range(s.n)}
    if s2.intersection(model.generators):
        raise BadPattern("a generator landed in S^2")
    bound = 3 + (model.h + model.d - 2)
    if len(s2) > bound:
        raise BadPattern(f"|S^2| = {len(s2)} exceeds the structural bound {bound}")
    return (s.n, len(s2))


@dataclass(frozen=True)
class SheReport:
    """Premises and conclusions of the generated-semigroup collapse criterion."""

    h: int
    d: int
    s3_size: int
    idempotent: int | None
    s3_equals_orbit_cubes: RelationCheck
    unique_idempotent: RelationCheck
    right_collapse: RelationCheck

    @property
    def all_pass(self) -> bool:
        return (
            self.s3_equals_orbit_cubes.ok
            and self.unique_idempotent.ok
            and self.right_collapse.ok
        )

    def as_dict(self) -> dict:
        return {
            "h": self.h,
            "d": self.d,
            "s3_size": self.s3_size,
            "idempotent": self.idempotent,
            "s3_equals_orbit_cubes": self.s3_equals_orbit_cubes.ok,
            "s3_finite": True,
            "unique_idempotent": self.unique_idempotent.ok,
            "right_collapse": self.right_collapse.ok,
        }


def verify_lemma_she(s: FiniteSemigroup, gens: Sequence[int]) -> SheReport:
    """Check the two premises over the generating set, then the four conclusions.

    Premise (a): every three-factor product over the generators is the same
    element; a violation raises PremiseFailed with two differing triples.
    Premise (b): a uniform pair h > 1, d >= 1 with a^h = a^(h+d) for all
    generators; always satisfiable in a finite semigroup, reported minimal.
    Conclusions: S^3 equals every generator's cube orbit, S^3 is finite, the
    idempotent is unique, and a*e is the same for every generator a.
    """
    gens = sorted(set(gens))
    if not gens:
        raise ValueError("gens must be nonempty")
    if closure(s, gens) != list(range(s.n)):
        raise ValueError("gens must generate the whole semigroup")
    rows = s.rows

    first_triple = (gens[0], gens[0], gens[0])
    first_val = rows[rows[gens[0]][gens[0]]][gens[0]]
    for a, b, c in itertools.product(gens, repeat=3):
        val = rows[rows[a][b]][c]
        if val != first_val:
            raise PremiseFailed(
                f"triple products differ: {first_triple} -> {first_val} "
                f"but ({a},{b},{c}) -> {val}",
                witness=((first_triple, first_val), ((a, b, c), val)),
            )

    orbits = {a: orbit(s, a) for a in gens}
    h = max(2, max(o.index_h for o in orbits.values()))
    d = lcm(o.period_d for o in orbits.values())

    everything = range(s.n)
    s2 = {rows[a][b] for a in everything for b in everything}
    s3 = {rows[u][v] for u in s2 for v in everything}

    c1 = RelationCheck(True)
    for a in gens:
        o = orbits[a]
        cube_orbit = set()
        x = _power(rows, a, 3)
        cube_orbit.add(x)
        for _ in range(o.index_h + o.period_d):
            x = rows[x][a]
            cube_orbit.add(x)
        if cube_orbit != s3:
            c1 = RelationCheck(False, (a, tuple(sorted(cube_orbit)), tuple(sorted(s3))))
            break

    idems = idempotents(s)
    c3 = RelationCheck(len(idems) == 1, tuple(idems))
    e = idems[0] if len(idems) == 1 else None

    c4 = RelationCheck(True)
    if e is not None:
        base = rows[gens[0]][e]
        for a in gens:
            if rows[a][e] != base:
                c4 = RelationCheck(False, (gens[0], a, base, rows[a][e]))
                break
    else:
        c4 = RelationCheck(False, ("no unique idempotent",))

    return SheReport(
        h=h,
        d=d,
        s3_size=len(s3),
        idempotent=e,
        s3_equals_orbit_cubes=c1,
        unique_idempotent=c3,
        right_collapse=c4,
    )


# ---------------------------------------------------------------------------
# spec strings


@dataclass(frozen=True)
class FamilySpec:
    """Parsed family spec: a kind plus its parameters."""

    kind: str
    size: int | None = None
    k: int | None = None
    m: int | None = None
    h: int | None = None
    d: int | None = None
    eqpattern: tuple[frozenset[str], ...] | None = None

    def text(self) -> str:
        if self.kind == "natplus":
            return "natplus"
        if self.kind in ("natmax", "natmin", "fan"):
            return self.kind if self.size is None else f"{self.kind}:{self.size}"
        if self.kind in ("rzero", "lzero"):
            return f"{self.kind}:{self.size}"
        if self.kind == "z2sum":
            return f"z2sum:{self.k}"
        if self.kind == "whymodfin":
            return f"whymodfin:{self.k},{self.m}"
        pattern = eqpattern_text(self.eqpattern) if self.eqpattern else ""
        tail = f",{pattern}" if pattern else ""
        return f"typehd:{self.h},{self.d},{self.m}{tail}"


def _int_arg(kind: str, text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise BadSpec(f"{kind}: {name} must be an integer, got {text!r}")


def parse_family_spec(text: str) -> FamilySpec:
    """Parse the CLI family grammar into a FamilySpec."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    kind = kind.lower()
    if kind == "natplus":
        if rest:
            raise BadSpec("natplus takes no parameters")
        return FamilySpec("natplus")
    if kind in ("natmax", "natmin", "fan"):
        if not rest:
            return FamilySpec(kind)
        return FamilySpec(kind, size=_int_arg(kind, rest, "N"))
    if kind in ("rzero", "lzero"):
        if not rest:
            raise BadSpec(f"{kind} needs a size, e.g. {kind}:5")
        return FamilySpec(kind, size=_int_arg(kind, rest, "n"))
    if kind == "z2sum":
        if not rest:
            raise BadSpec("z2sum needs a rank, e.g. z2sum:3")
        return FamilySpec(kind, k=_int_arg(kind, rest, "k"))
    if kind == "whymodfin":
        parts = rest.split(",")
        if len(parts) != 2:
            raise BadSpec("whymodfin needs two parameters, e.g. whymodfin:3,5")
        return FamilySpec(
            kind,
            k=_int_arg(kind, parts[0], "k"),
            m=_int_arg(kind, parts[1], "M"),
        )
    if kind == "typehd":
        parts = rest.split(",", 3)
        if len(parts) < 3:
            raise BadSpec("typehd needs h,d,m[,pattern]")
        h = _int_arg(kind, parts[0], "h")
        d = _int_arg(kind, parts[1], "d")
        m = _int_arg(kind, parts[2], "m")
        pattern = parse_eqpattern(parts[3]) if len(parts) == 4 else parse_eqpattern(None)
        return FamilySpec(kind, h=h, d=d, m=m, eqpattern=pattern)
    raise BadSpec(f"unknown family kind {kind!r}")


def build_family(spec: FamilySpec | str, n: int | None = None):
    """Build the family named by a spec; lazy kinds truncate when N is known.

    Returns a FiniteSemigroup for finite kinds and truncated lazy kinds, a
    LazyFamily when no truncation size applies, and a PartialTruncation when
    the requested prefix does not close (natplus).
    """
    if isinstance(spec, str):
        spec = parse_family_spec(spec)
    if spec.kind == "natplus":
        fam = natplus()
        return fam if n is None else fam.truncate(n)
    if spec.kind in ("natmax", "natmin", "fan"):
        size = n if n is not None else spec.size
        if size is None:
            return {"natmax": natmax, "natmin": natmin, "fan": fan}[spec.kind]()
        if size < 1:
            raise BadSpec(f"{spec.kind} truncation needs N >= 1")
        builder = {
            "natmax": natmax_truncation,
            "natmin": natmin_truncation,
            "fan": fan_truncation,
        }[spec.kind]
        return builder(size)
    if spec.kind == "rzero":
        if spec.size is None:
            raise BadSpec("rzero needs a size")
        return right_zero(spec.size)
    if spec.kind == "lzero":
        if spec.size is None:
            raise BadSpec("lzero needs a size")
        return left_zero(spec.size)
    if spec.kind == "z2sum":
        if spec.k is None:
            raise BadSpec("z2sum needs a rank")
        return z2sum(spec.k)
    if spec.kind == "whymodfin":
        if spec.k is None or spec.m is None:
            raise BadSpec("whymodfin needs k and M")
        return whymodfin(spec.k, spec.m)
    if spec.kind == "typehd":
        if spec.h is None or spec.d is None or spec.m is None:
            raise BadSpec("typehd needs h, d and m")
        return build_typehd(spec.h, spec.d, spec.m, spec.eqpattern).semigroup
    raise BadSpec(f"unknown family kind {spec.kind!r}")
