import pytest
from hypothesis import given, strategies as st

from conftest import all_graphs
from genus_dp.embedding import euler_genus, genus
from genus_dp.errors import StructuralInputError
from genus_dp.formats import format_emb, parse_emb, read_emb, write_emb
from genus_dp.generators import generate, loop

K4 = """\
emb 4 6
v 0: 0 1 2
v 1: 0 4 3
v 2: 1 3 5
v 3: 2 5 4
e 0 0 1 +
e 1 0 2 +
e 2 0 3 +
e 3 1 2 +
e 4 1 3 +
e 5 2 3 +
"""


def test_parse_k4():
    g = parse_emb(K4)
    assert (g.n, g.m, len(g.faces), genus(g)) == (4, 6, 4, 0)


def test_whitespace_and_comments_tolerated():
    text = "# a comment\n\n" + K4.replace(" ", "   ").replace("\n", "  # trailing\n")
    assert parse_emb(text) == parse_emb(K4)


@pytest.mark.parametrize("name,g", all_graphs())
def test_round_trip(name, g):
    h = parse_emb(format_emb(g))
    assert (h.n, h.edges, h.rotation, h.sign) == (g.n, g.edges, g.rotation, g.sign)


def test_loop_slots():
    for s in (1, -1):
        g = loop(s)
        text = format_emb(g)
        assert "0.0" in text and "0.1" in text
        assert euler_genus(parse_emb(text)).euler_genus == (0 if s > 0 else 1)


def test_bare_loop_slots_resolve_in_order():
    g = parse_emb("emb 1 1\nv 0: 0 0\ne 0 0 0 -\n")
    assert euler_genus(g).euler_genus == 1


def test_file_round_trip(tmp_path):
    g = generate("toroidal-grid", 3, 0)
    path = tmp_path / "t.emb"
    write_emb(g, path)
    h = read_emb(path)
    assert h.rotation == g.rotation and genus(h) == genus(g)


@pytest.mark.parametrize(
    "text,line",
    [
        ("", None),
        ("graph 2 1\n", 1),
        ("emb 2 1\nv 0 0\n", 2),
        ("emb 2 1\nv 0: 0\nv 1: 0\ne 0 0 1 *\n", 4),
        ("emb 2 1\nv 0: 0\nv 1: 0\ne 0 0 x +\n", 4),
        ("emb 2 1\nv 0: 0\nv 1: 0\ne 0 0 5 +\n", 4),
        ("emb 2 1\nv 0: 0\nv 1: 7\ne 0 0 1 +\n", 3),
        ("emb 2 1\nv 0: 0 0\nv 1: 0\ne 0 0 1 +\n", 2),
        ("emb 2 1\nv 0: 0\nv 0: 0\ne 0 0 1 +\n", 3),
        ("emb 2 1\nv 0: 0\nv 1:\ne 0 0 1 +\n", 4),
        ("emb 2 1\nv 0: 0\nv 1: 0\nx 0 0 1 +\n", 4),
    ],
)
def test_malformed_input_reports_line(text, line):
    with pytest.raises(StructuralInputError) as info:
        parse_emb(text)
    assert info.value.line == line
    if line is not None:
        assert f"line {line}" in str(info.value)


def test_unreadable_file(tmp_path):
    with pytest.raises(StructuralInputError):
        read_emb(tmp_path / "missing.emb")


@given(st.sampled_from(["planar", "random", "triangulation", "wheel"]), st.integers(3, 8), st.integers(0, 10**6))
def test_generated_round_trip(family, size, seed):
    g = generate(family, size, seed)
    h = parse_emb(format_emb(g))
    assert euler_genus(h) == euler_genus(g)
