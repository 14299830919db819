"""FP / FP-hat enumeration, witness searches, and the greedy refinement."""

import itertools

import numpy as np
import pytest

import hindman_lab as hl

from oracles import fp_values, fphat_values, min_fp_exceptions


# ---------------------------------------------------------------------------
# enumeration


def test_fp_word_counts_match_closed_form():
    s = hl.z2sum(4)
    for n in range(1, 7):
        fam = hl.fp(s, list(range(1, n + 1)))
        assert fam.word_count == hl.fp_word_count(n) == 2**n - 1


def test_fphat_word_counts_match_closed_form():
    s = hl.z2sum(4)
    import math

    for n in range(1, 6):
        fam = hl.fphat(s, list(range(1, n + 1)))
        expected = sum(math.perm(n, m) for m in range(1, n + 1))
        assert fam.word_count == hl.fphat_word_count(n) == expected
    assert hl.fphat_word_count(3) == 15


def test_fp_basis_vectors_all_distinct():
    # independent supports give 2^n - 1 distinct sums; together they are
    # exactly the nonzero vectors supported on the chosen coordinates
    s = hl.z2sum(5)
    for n in (3, 4, 5):
        fam = hl.fp(s, [1 << i for i in range(n)])
        assert fam.value_set == frozenset(range(1, 2**n))


def test_fp_left_zero_keeps_first_factor():
    s = hl.left_zero(5)
    fam = hl.fp(s, [3, 1, 4])
    for word, value in fam.products.items():
        assert value == fam.seq[word[0]]
    assert fam.value_set == {3, 1, 4}


def test_fphat_right_zero_keeps_last_factor():
    s = hl.right_zero(5)
    fam = hl.fphat(s, [2, 0, 3])
    for word, value in fam.products.items():
        assert value == fam.seq[word[-1]]
    assert fam.value_set == {2, 0, 3}


def test_fp_whymodfin_sequence_from_the_example():
    s = hl.whymodfin(3, 5)
    seq = [s.index_of_label(v) for v in ("4", "7", "10")]
    fam = hl.fp(s, seq)
    by_len = {}
    for word, value in fam.products.items():
        by_len.setdefault(len(word), set()).add(s.labels[value])
    assert by_len[1] == {"4", "7", "10"}
    assert by_len[2] == {"2"}
    assert by_len[3] == {"0"}


def test_abelian_fp_equals_fphat_values():
    for s in (hl.z2sum(3), hl.cyclic_group(7), hl.whymodfin(4, 4)):
        seq = list(range(min(4, s.n)))
        assert hl.fp(s, seq).value_set == hl.fphat(s, seq).value_set


def test_fp_values_match_brute_force():
    s = hl.build_typehd(3, 2, 4).semigroup
    seq = [0, 1, 2, 3]
    assert hl.fp(s, seq).value_set == fp_values(s.rows, seq)
    assert hl.fphat(s, seq).value_set == fphat_values(s.rows, seq)


def test_fp_over_lazy_family():
    fam = hl.fp(hl.natplus(), [1, 2, 3])
    assert fam.value_set == {1, 2, 3, 4, 5, 6}


def test_caps_enforced():
    s = hl.z2sum(5)
    with pytest.raises(hl.CapExceeded):
        hl.fp(s, list(range(25)), cap=20)
    with pytest.raises(hl.CapExceeded):
        hl.fphat(s, list(range(9)), cap=8)
    with pytest.raises(ValueError):
        hl.fp(s, [1, 1])


def test_fphat_value_set_matches_enumeration():
    s = hl.build_typehd(2, 3, 3).semigroup
    for size in (1, 2, 3):
        elems = list(range(size))
        assert hl.fphat_value_set(s, elems) == fphat_values(s.rows, elems)


# ---------------------------------------------------------------------------
# FP search


def test_search_constant_coloring_takes_first_elements():
    s = hl.z2sum(3)
    c = hl.constant_coloring(range(8))
    hit = hl.search_fp_mod_finite(s, c, 3, 0)
    assert hit.seq == (0, 1, 2)
    assert hit.exceptions == frozenset()


def test_search_whymodfin_budget_zero_none():
    s = hl.whymodfin(3, 10)
    c = hl.mod_coloring(s, 3)
    assert hl.search_fp_mod_finite(s, c, 3, 0) is None
    # independent exhaustive oracle: the best any ordered triple achieves is 2
    best = min_fp_exceptions(
        s.rows, lambda v: int(s.labels[v]) % 3, 3, range(s.n), 3
    )
    assert best == 2
    assert hl.search_fp_mod_finite(s, c, 3, 1) is None


def test_search_whymodfin_budget_four_finds_least_triple():
    s = hl.whymodfin(3, 10)
    c = hl.mod_coloring(s, 3)
    hit = hl.search_fp_mod_finite(s, c, 3, 4)
    assert hit.seq == (0, 1, 2)
    assert hit.majority_color == 0
    assert hit.exceptions == frozenset({1, 2})


def test_search_fan_budget_zero_and_one():
    s = hl.fan_truncation(20)
    c = hl.coloring_from_fn(range(20), lambda x: x % 2, 2)
    level = hl.search_fp_mod_finite(s, c, 5, 0)
    # five same-colored elements whose pairwise products land on the bottom,
    # itself in the majority class
    assert level.seq == (0, 2, 4, 6, 8)
    assert level.exceptions == frozenset()
    loose = hl.search_fp_mod_finite(s, c, 5, 1)
    # with one exception allowed the least tuple spends it on an element
    assert loose.seq == (0, 1, 2, 4, 6)
    assert loose.exceptions == frozenset({1})


def test_search_never_none_at_full_budget():
    s = hl.monogenic(2, 3)
    c = hl.coloring_from_fn(range(s.n), lambda x: x % 2, 2)
    for n in (1, 2, 3):
        budget = hl.fp_word_count(n) - 1
        assert hl.search_fp_mod_finite(s, c, n, budget) is not None


def test_search_result_verifies_against_enumeration():
    s = hl.build_typehd(2, 1, 6).semigroup
    c = hl.coloring_from_fn(range(s.n), lambda x: 0 if x < 6 else 1, 2)
    hit = hl.search_fp_mod_finite(s, c, 3, 3)
    values = fp_values(s.rows, hit.seq)
    assert values == hit.value_set
    off = {v for v in values if c.color(v) != hit.majority_color}
    assert off == hit.exceptions


# ---------------------------------------------------------------------------
# mono subsemigroup search


def test_mono_search_right_zero_finds_largest_class():
    s = hl.right_zero(5)
    c = hl.Coloring({0: 0, 1: 1, 2: 0, 3: 0, 4: 1}, 2)
    best = hl.search_mono_subsemigroup(s, c, 0, max_gens=5)
    assert best.elements == (0, 2, 3)


def test_mono_search_z2sum3_whole_group_at_budget_one():
    s = hl.z2sum(3)
    c = hl.coloring_from_fn(range(8), lambda x: 0 if x == 0 else 1, 2)
    best = hl.search_mono_subsemigroup(s, c, 1, max_gens=3)
    assert best.elements == tuple(range(8))
    assert best.verdict.exceptions == frozenset({0})


def test_mono_search_monogenic_block_coloring():
    # under the transported block pattern the cycle's order-2 subgroup
    # {b^4, b^6} is red-monochromatic and is the largest budget-0 closure
    s = hl.monogenic(3, 4)
    c = hl.truecolor(s, 5)
    best = hl.search_mono_subsemigroup(s, c, 0, max_gens=2)
    assert best.elements == (3, 5)
    # exhaustive oracle over every closure of at most two generators
    sizes = []
    for r in (1, 2):
        for gens in itertools.combinations(range(6), r):
            cl = hl.closure(s, gens)
            if len({c.color(x) for x in cl}) == 1:
                sizes.append(tuple(cl))
    assert max(len(t) for t in sizes) == 2
    assert (3, 5) in sizes


def test_mono_search_none_when_budget_too_small():
    s = hl.cyclic_group(3)
    c = hl.Coloring({0: 0, 1: 1, 2: 2}, 3)
    # every nonempty closure contains 0 and some other color at budget 0,
    # except the identity singleton
    best = hl.search_mono_subsemigroup(s, c, 0, max_gens=2)
    assert best.elements == (0,)


# ---------------------------------------------------------------------------
# refinement


def test_refine_empty_trap_returns_whole_sequence():
    g = hl.z2sum(4)
    c = hl.constant_coloring(range(16))
    seq = [1, 2, 4, 8]
    assert hl.refine_fphat(g, c, seq, []) == (1, 2, 4, 8)


def test_refine_drops_elements_to_avoid_trap():
    g = hl.z2sum(8)
    basis = [1 << i for i in range(8)]
    trap = [3]  # the sum of the first two basis vectors
    c = hl.coloring_from_fn(range(256), lambda x: 1 if x == 3 else 0, 2)
    out = hl.refine_fphat(g, c, basis, trap)
    assert out == (1, 4, 8, 16, 32, 64, 128)
    values = hl.fphat_value_set(g, out)
    assert 3 not in values
    assert hl.mono_check(values, c).is_mono


def test_refine_stuck_when_everything_forbidden():
    g = hl.z2sum(2)
    c = hl.constant_coloring(range(4))
    with pytest.raises(hl.StuckAt) as exc:
        hl.refine_fphat(g, c, [1, 2, 3], [1, 2, 3])
    assert exc.value.step == 1


def test_refine_output_always_avoids_trap():
    rng = np.random.RandomState(5)
    g = hl.z2sum(6)
    for _ in range(25):
        seq = [int(x) for x in rng.choice(np.arange(1, 64), size=6, replace=False)]
        all_values = sorted(hl.fphat_value_set(g, seq))
        trap = [int(x) for x in rng.choice(all_values, size=2, replace=False)]
        c = hl.coloring_from_fn(range(64), lambda x, t=set(trap): 1 if x in t else 0, 2)
        try:
            out = hl.refine_fphat(g, c, seq, trap)
        except hl.StuckAt:
            continue
        values = hl.fphat_value_set(g, out)
        assert not (values & set(trap))
        assert hl.mono_check(values, c).is_mono
        assert list(out) == [x for x in seq if x in out]  # subsequence order kept


def test_refine_requires_group():
    c = hl.constant_coloring(range(3))
    with pytest.raises(hl.NotAGroup):
        hl.refine_fphat(hl.right_zero(3), c, [0, 1], [])


# ---------------------------------------------------------------------------
# residue family audit


def test_whymodfin_audit_small_exhaustive():
    audit = hl.whymodfin_fp_audit(3, 8)
    assert audit.all_colors_realized
    assert audit.total_subsets == 56  # C(8,3)


def test_whymodfin_audit_matches_itertools_oracle():
    k, m_count = 3, 7
    s = hl.whymodfin(k, m_count)
    part = range(k, k + m_count)
    for combo in itertools.combinations(part, k):
        colors = {int(s.labels[v]) % k for v in fp_values(s.rows, combo)}
        assert colors == set(range(k))
    audit = hl.whymodfin_fp_audit(k, m_count)
    assert audit.all_colors_realized


def test_whymodfin_audit_subset_size_guard():
    with pytest.raises(ValueError):
        hl.whymodfin_fp_audit(5, 10, subset_size=3)
