"""Text formats round-trip and reject malformed input."""

import pytest

import hindman_lab as hl


def test_cayley_round_trip(tmp_path):
    s = hl.build_typehd(3, 2, 4).semigroup
    path = tmp_path / "model.cay"
    hl.write_cayley(s, path)
    back = hl.read_cayley(path)
    assert back == s


def test_cayley_format_shape():
    s = hl.right_zero(2)
    text = hl.dumps_cayley(s)
    lines = text.splitlines()
    assert lines[0] == "cayley v1"
    assert lines[1] == "n=2"
    assert lines[2] == "labels 0 1"
    assert lines[3] == "row 0: 0 1"
    assert lines[4] == "row 1: 0 1"


def test_cayley_comments_and_blank_lines():
    text = (
        "# a two-element group\n"
        "cayley v1\n"
        "n=2\n\n"
        "labels e a  # display names\n"
        "row 0: 0 1\n"
        "row 1: 1 0\n"
    )
    s = hl.loads_cayley(text)
    assert hl.is_group(s)


def test_cayley_rejects_non_associative_with_triple():
    text = "cayley v1\nn=2\nlabels a b\nrow 0: 1 0\nrow 1: 0 0\n"
    with pytest.raises(hl.AssocViolation) as exc:
        hl.loads_cayley(text)
    assert "(0,0,1)" in str(exc.value)


@pytest.mark.parametrize(
    "text",
    [
        "cayley v2\nn=1\nlabels a\nrow 0: 0\n",
        "cayley v1\nn=2\nlabels a\nrow 0: 0 0\nrow 1: 0 0\n",
        "cayley v1\nn=2\nlabels a b\nrow 0: 0\nrow 1: 0 0\n",
        "cayley v1\nn=2\nlabels a b\nrow 1: 0 0\nrow 0: 0 0\n",
        "cayley v1\nn=2\nlabels a b\nrow 0: 0 x\nrow 1: 0 0\n",
        "cayley v1\nn=0\nlabels\n",
    ],
)
def test_cayley_rejects_malformed(text):
    with pytest.raises(hl.FormatError):
        hl.loads_cayley(text)


def test_cayley_rejects_whitespace_labels():
    s = hl.build_cayley(["a b", "c"], [[0, 1], [0, 1]])
    with pytest.raises(hl.FormatError):
        hl.dumps_cayley(s)


def test_coloring_round_trip(tmp_path):
    c = hl.ncolor(25)
    path = tmp_path / "blocks.col"
    hl.write_coloring(c, path)
    back = hl.read_coloring(path, domain=range(1, 26))
    assert dict(back.items()) == dict(c.items())
    assert back.palette_size == 2


def test_coloring_domain_mismatch(tmp_path):
    c = hl.Coloring({0: 0, 1: 1}, 2)
    path = tmp_path / "two.col"
    hl.write_coloring(c, path)
    with pytest.raises(hl.FormatError):
        hl.read_coloring(path, domain=range(3))
    with pytest.raises(hl.FormatError):
        hl.read_coloring(path, domain=[0])


def test_coloring_rejects_double_assignment():
    text = "coloring v1\npalette=2\n0 0\n0 1\n"
    with pytest.raises(hl.FormatError):
        hl.loads_coloring(text)


def test_coloring_rejects_missing_header():
    with pytest.raises(hl.FormatError):
        hl.loads_coloring("palette=2\n0 0\n")
