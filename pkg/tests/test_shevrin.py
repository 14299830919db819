"""Ramsey clique search, extraction certificates, pattern scans, case checks."""

import itertools

import numpy as np
import pytest

import hindman_lab as hl

from oracles import least_mono_clique


def parity_products_semigroup(m: int) -> hl.FiniteSemigroup:
    """m generators with two absorbing products: g_i g_j = z1 if i+j even else z2.

    Any product involving an absorber collapses to z1, so every triple product
    is z1 and the table is associative; the pair colors mix by index parity.
    """
    z1, z2 = m, m + 1
    n = m + 2
    table = np.full((n, n), z1, dtype=np.int32)
    for i in range(m):
        for j in range(m):
            table[i, j] = z1 if (i + j) % 2 == 0 else z2
    return hl.build_cayley([f"g{i}" for i in range(m)] + ["z1", "z2"], table)


# ---------------------------------------------------------------------------
# edge colorings and the clique search


def test_edge_coloring_indexing():
    ec = hl.EdgeColoring.from_fn(5, lambda i, j: (i, j))
    for i in range(5):
        for j in range(i + 1, 5):
            assert ec.color(i, j) == (i, j)
            assert ec.color(j, i) == (i, j)


def test_ramsey_constant_coloring_takes_prefix():
    ec = hl.EdgeColoring.from_fn(6, lambda i, j: 42)
    for target in (2, 3, 4, 6):
        assert hl.ramsey_find(ec, target) == tuple(range(target))


def test_ramsey_red_five_cycle_has_no_triangle():
    cyc = {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}
    ec = hl.EdgeColoring.from_fn(5, lambda i, j: 0 if (i, j) in cyc else 1)
    assert hl.ramsey_find(ec, 3) is None
    # exhaustive oracle over all ten triangles
    assert least_mono_clique(ec.color, 5, 3) is None


def test_ramsey_matches_exhaustive_oracle_on_seeded_colorings():
    rng = np.random.RandomState(23)
    for _ in range(60):
        v = int(rng.randint(4, 8))
        palette = int(rng.randint(2, 4))
        colors = rng.randint(0, palette, size=v * (v - 1) // 2)
        ec = hl.EdgeColoring(v, [int(x) for x in colors])
        for target in (2, 3, 4):
            if target > v:
                continue
            assert hl.ramsey_find(ec, target) == least_mono_clique(ec.color, v, target)


def test_ramsey_validates_target():
    ec = hl.EdgeColoring.from_fn(4, lambda i, j: 0)
    with pytest.raises(ValueError):
        hl.ramsey_find(ec, 0)
    with pytest.raises(ValueError):
        hl.ramsey_find(ec, 5)


# ---------------------------------------------------------------------------
# pair coloring


def test_pair_coloring_constant_on_typehd_generators():
    model = hl.build_typehd(2, 1, 6)
    s = model.semigroup
    ec = hl.shevrin_pair_coloring(s, model.generators)
    assert ec.distinct_colors() == 1
    sq = s.index_of_label("x1^2")
    ab = s.index_of_label("x1x2")
    ba = s.index_of_label("x2x1")
    assert ec.color(0, 1) == (sq, sq, ab, ba)  # the cube collapses onto the square


def test_pair_coloring_constant_on_zero_semigroup():
    s = hl.zero_semigroup(6)
    ec = hl.shevrin_pair_coloring(s, range(6))
    assert ec.distinct_colors() == 1
    assert ec.color(0, 1) == (6, 6, 6, 6)


def test_pair_coloring_rejects_products():
    s = hl.zero_semigroup(4)
    with pytest.raises(hl.NotOutsideS2) as exc:
        hl.shevrin_pair_coloring(s, [0, 1, 4])  # z is a product
    assert exc.value.element == 4


def test_pair_coloring_mixes_by_parity():
    s = parity_products_semigroup(6)
    ec = hl.shevrin_pair_coloring(s, range(6))
    assert ec.distinct_colors() == 2
    assert ec.color(0, 2) == (6, 6, 6, 6)
    assert ec.color(0, 1) == (6, 6, 7, 7)


# ---------------------------------------------------------------------------
# extraction pipeline


def test_extract_typehd_2_1_12():
    s = hl.build_typehd(2, 1, 12).semigroup
    cert = hl.extract_typehd(s, range(12), 5)
    assert cert.extracted == (0, 1, 2, 3, 4)
    assert (cert.h, cert.d) == (2, 1)
    assert cert.all_checks_pass
    assert cert.prefix_length == 12
    # h = 2, d = 1: no power block beyond the square
    assert set(cert.structure_set) == set(cert.extracted) | {
        s.index_of_label("x1^2"),
        s.index_of_label("x1x2"),
        s.index_of_label("x2x1"),
    }


def test_extract_zero_semigroup():
    s = hl.zero_semigroup(10)
    cert = hl.extract_typehd(s, range(10), 6)
    assert (cert.h, cert.d) == (2, 1)
    assert cert.all_checks_pass
    assert set(cert.structure_set) == set(range(6)) | {10}
    assert cert.idempotent == 10
    # every residual equality holds here: ab = ba = square = (be)^2 = z
    assert cert.equality_audit["ab_eq_square"]
    assert cert.equality_audit["ab_is_power"]


def test_extract_parity_semigroup_needs_parity_class():
    s = parity_products_semigroup(6)
    cert = hl.extract_typehd(s, range(6), 3)
    assert cert.extracted == (0, 2, 4)
    assert cert.all_checks_pass
    with pytest.raises(hl.RamseyFail):
        hl.extract_typehd(s, range(6), 4)


def test_extract_requires_sane_target():
    s = hl.zero_semigroup(5)
    with pytest.raises(hl.PrecondViolation):
        hl.extract_typehd(s, range(5), 1)
    with pytest.raises(hl.RamseyFail):
        hl.extract_typehd(s, range(5), 9)


def test_certificate_dict_schema():
    s = hl.build_typehd(3, 2, 8).semigroup
    cert = hl.extract_typehd(s, range(8), 4)
    payload = cert.to_dict()
    assert set(payload["color"]) == {"cube", "square", "ab", "ba"}
    assert set(payload["relations"]) == {"hd1", "hd2", "hd3", "hd4", "gens_outside_s2"}
    for key in ("subsequence", "h", "d", "structure_set", "idempotent", "equality_audit"):
        assert key in payload


def test_certificate_relations_hold_pointwise():
    s = hl.build_typehd(3, 2, 12).semigroup
    cert = hl.extract_typehd(s, range(12), 6)
    rows = s.rows
    b = cert.extracted
    for i in range(1, len(b)):
        assert rows[b[i]][b[i]] == rows[b[0]][b[0]]
    for i, j in itertools.combinations(range(len(b)), 2):
        assert rows[b[i]][b[j]] == rows[b[0]][b[1]]
        assert rows[b[j]][b[i]] == rows[b[1]][b[0]]
    cube = rows[rows[b[0]][b[0]]][b[0]]
    for i, j, k in itertools.product(range(len(b)), repeat=3):
        assert rows[rows[b[i]][b[j]]][b[k]] == cube


def test_certificate_structure_set_equals_closure():
    for h, d, m in ((2, 1, 10), (3, 2, 10), (2, 3, 9)):
        s = hl.build_typehd(h, d, m).semigroup
        cert = hl.extract_typehd(s, range(m), 5)
        assert cert.structure_matches_closure
        assert set(cert.structure_set) == set(hl.closure(s, cert.extracted))


# ---------------------------------------------------------------------------
# pattern classification


def test_classify_right_zero():
    report = hl.classify_patterns(hl.right_zero(7), 10)
    assert report.right_zero.size == 7
    assert report.left_zero.size == 1
    assert report.s2_size == 7


def test_classify_fan():
    report = hl.classify_patterns(hl.fan_truncation(9), 9)
    assert report.fan.size == 9
    assert report.fan.witness[0] == 0  # bottom is the element labelled 1
    assert report.max_chain.size == 2
    assert report.min_chain.size == 2


def test_classify_typehd():
    report = hl.classify_patterns(hl.build_typehd(2, 1, 10).semigroup, 12)
    assert report.s2_size == 3
    assert report.subgroup.size == 1
    assert report.right_zero.size == 1


def test_classify_chain_on_natmax():
    report = hl.classify_patterns(hl.natmax_truncation(6), 10)
    assert report.max_chain.size == 6
    assert report.min_chain.size == 6
    assert report.min_chain.witness == tuple(reversed(report.max_chain.witness))


def test_classify_bound_caps_witnesses():
    report = hl.classify_patterns(hl.right_zero(9), 4)
    assert report.right_zero.size == 4


def test_classify_witnesses_verify():
    for s in (hl.fan_truncation(7), hl.natmin_truncation(5), hl.right_zero(4)):
        report = hl.classify_patterns(s, 10)
        rows = s.rows
        rz = report.right_zero.witness
        for a in rz:
            for b in rz:
                assert rows[a][b] == b
        chain = report.max_chain.witness
        for i in range(len(chain)):
            for j in range(i + 1, len(chain)):
                assert rows[chain[i]][chain[j]] == chain[j]
                assert rows[chain[j]][chain[i]] == chain[j]
        if report.fan.size >= 2:
            z = report.fan.witness[0]
            for a in report.fan.witness[1:]:
                for b in report.fan.witness[1:]:
                    if a != b:
                        assert rows[a][b] == z


def test_classify_largest_subgroup():
    s = hl.monogenic(3, 4)
    report = hl.classify_patterns(s, 8)
    assert report.subgroup.size == 4
    assert set(report.subgroup.witness) == set(hl.orbit(s, 0).group_part)


# ---------------------------------------------------------------------------
# the two constructive cases


def test_thm35_finsync_on_fan():
    s = hl.fan_truncation(9)
    c = hl.coloring_from_fn(range(9), lambda x: x % 2, 2)
    report = hl.verify_thm35_direction3to1(s, c, "finsync")
    assert report.passed
    bottom = 0
    assert set(report.details["coloring_exceptions"]) <= {bottom}


def test_thm35_finsync_on_natmax_no_exceptions():
    s = hl.natmax_truncation(10)
    c = hl.coloring_from_fn(range(10), lambda x: x % 3, 3)
    report = hl.verify_thm35_direction3to1(s, c, "finsync")
    assert report.passed
    assert report.details["coloring_exceptions"] == []


def test_thm35_z2sum_case_inapplicable_on_z4():
    with pytest.raises(hl.CaseInapplicable):
        hl.verify_thm35_direction3to1(
            hl.cyclic_group(4), hl.constant_coloring(range(4)), "z2sum"
        )


def test_thm35_z2sum_runs_inside_boolean_subgroup():
    s = hl.z2sum(3)
    c = hl.coloring_from_fn(range(8), lambda x: 0 if x == 0 else 1, 2)
    report = hl.verify_thm35_direction3to1(s, c, "z2sum")
    assert report.passed
    assert report.details["found"] == list(range(8))


def test_thm35_unknown_case_rejected():
    with pytest.raises(ValueError):
        hl.verify_thm35_direction3to1(
            hl.z2sum(2), hl.constant_coloring(range(4)), "other"
        )
