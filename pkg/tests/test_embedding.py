import networkx as nx
import pytest

from conftest import all_graphs
from oracles import orientable_face_count
from genus_dp.embedding import (
    EmbeddedGraph,
    Noose,
    classify_noose,
    cut_along_noose,
    dual,
    euler_genus,
    find_short_noose,
    genus,
    isomorphic,
    iter_short_nooses,
    medial,
    radial,
    trace_faces,
    validate_noose,
)
from genus_dp.errors import InvalidNooseError, StructuralInputError, UnsupportedInputError
from genus_dp.generators import (
    bowtie,
    clique,
    cycle,
    grid,
    k5_torus,
    loop,
    single_edge,
    single_vertex,
    toroidal_grid,
)

CONNECTED = [(n, g) for n, g in all_graphs() if g.m and g.is_connected()]


# face tracing and genus


def test_faces_of_small_planar_maps():
    assert len(trace_faces(cycle(3))) == 2
    assert len(trace_faces(clique(4))) == 4


def test_k5_torus_by_independent_face_walk():
    g = k5_torus()
    assert orientable_face_count(g) == 5
    assert len(trace_faces(g)) == 5
    assert genus(g) == 2


@pytest.mark.parametrize("g", [clique(4), grid(3, 4), toroidal_grid(3, 4), k5_torus()])
def test_face_count_matches_permutation_walk(g):
    assert len(g.faces) == orientable_face_count(g)


def test_every_side_used_once():
    for _, g in all_graphs():
        flags = sorted(d for f in g.faces for d in f.darts)
        # each dart bounds faces on both of its sides: 2m dart visits per side pair
        assert len(flags) == 2 * g.m


def test_loops():
    plus = euler_genus(loop(1))
    assert (plus.face_count, plus.euler_genus, plus.orientable) == (2, 0, True)
    minus = euler_genus(loop(-1))
    assert (minus.face_count, minus.euler_genus, minus.orientable) == (1, 1, False)


def test_k4_is_spherical():
    assert genus(clique(4)) == 0


def test_isolated_vertex_is_own_sphere():
    r = euler_genus(single_vertex())
    assert (r.component_count, r.face_count, r.euler_genus) == (1, 1, 0)


def test_euler_formula_and_parity():
    for name, g in all_graphs():
        r = euler_genus(g)
        assert r.vertex_count - r.edge_count + r.face_count == 2 * r.component_count - r.euler_genus, name
        assert r.euler_genus >= 0
        if r.orientable:
            assert r.euler_genus % 2 == 0


def test_report_dict():
    d = euler_genus(clique(4)).as_dict()
    assert d["faces"] == 4 and d["euler_genus"] == 0


# construction errors


def test_missing_slot_rejected():
    with pytest.raises(StructuralInputError):
        EmbeddedGraph(2, ((0, 1),), ((0,), ()), (1,))


def test_duplicated_slot_rejected():
    with pytest.raises(StructuralInputError):
        EmbeddedGraph(2, ((0, 1),), ((0, 0), (1,)), (1,))


# dual, radial, medial


def test_dual_of_triangle():
    d = dual(cycle(3))
    assert (d.n, d.m) == (2, 3)
    assert all({u, v} == {0, 1} for u, v in d.edges)


def test_k4_self_dual():
    assert isomorphic(dual(clique(4)), clique(4))


def test_dual_of_toroidal_k5():
    d = dual(k5_torus())
    assert (d.n, d.m, genus(d)) == (5, 10, 2)


def test_dual_needs_connected():
    g = EmbeddedGraph(4, ((0, 1), (2, 3)), ((0,), (1,), (2,), (3,)), (1, 1))
    with pytest.raises(UnsupportedInputError):
        dual(g)


def test_radial_examples():
    r = radial(cycle(3))
    assert (r.n, r.m, len(r.faces)) == (5, 6, 3)
    r = radial(clique(4))
    assert (r.n, r.m, len(r.faces)) == (8, 12, 6)
    r = radial(single_edge())
    assert (r.n, r.m, len(r.faces)) == (3, 2, 1)
    assert sorted(map(frozenset, r.edges)) == sorted([frozenset({0, 2}), frozenset({1, 2})])


def test_medial_examples():
    m = medial(cycle(3))
    assert (m.n, m.m) == (3, 6)
    assert all(m.degree(v) == 4 for v in range(m.n))
    m = medial(clique(4))
    assert nx.is_isomorphic(nx.Graph(m.to_networkx()), nx.octahedral_graph())
    m = medial(single_edge())
    assert (m.n, m.m) == (1, 2)
    assert all(u == v for u, v in m.edges) and m.degree(0) == 4


@pytest.mark.parametrize("name,g", CONNECTED)
def test_derived_maps(name, g):
    gam = genus(g)
    d = dual(g)
    assert (d.n, d.m) == (len(g.faces), g.m)
    assert len(d.faces) == g.n
    assert isomorphic(dual(d), g)
    r = radial(g)
    assert r.n == g.n + len(g.faces) and r.m == 2 * g.m
    assert nx.is_bipartite(nx.Graph(r.to_networkx()))
    assert all(len(f) == 4 for f in r.faces) and len(r.faces) == g.m
    m = medial(g)
    assert m.n == g.m and all(m.degree(v) == 4 for v in range(m.n))
    assert genus(d) == genus(r) == genus(m) == gam
    assert euler_genus(d).orientable == euler_genus(g).orientable


# nooses


def test_k4_has_no_short_noose():
    assert find_short_noose(clique(4)) is None


def test_bowtie_cut_vertex_noose():
    g = bowtie()
    n = find_short_noose(g)
    assert n.length == 1
    (v,) = n.vertices
    assert g.degree(v) == 4
    pieces = cut_along_noose(g, n)
    assert len(pieces) == 2
    assert all(p.n == 3 and p.m == 3 and genus(p) == 0 for p in pieces)


def test_c4_antipodal_noose():
    g = cycle(4)
    n = find_short_noose(g)
    assert n.length == 2
    u, v = n.vertices
    assert not any({u, v} == set(e) for e in g.edges)
    pieces = cut_along_noose(g, n)
    assert len(pieces) == 2 and all(genus(p) == 0 for p in pieces)


def test_cut_toroidal_k5_non_contractible():
    g = k5_torus()
    for n in iter_short_nooses(g):
        info = classify_noose(g, n)
        if not info.separating:
            pieces = cut_along_noose(g, n)
            assert len(pieces) == 1 and genus(pieces[0]) < genus(g)
            assert genus(pieces[0]) <= 1
            break
    else:
        pytest.fail("no non-separating short noose on the toroidal K5")


def test_cuts_never_raise_genus():
    # the pieces are the graph components, which can split even when the
    # surface does not (noose through a cut vertex), so only <= holds in general
    for name, g in CONNECTED:
        gam = genus(g)
        for n in iter_short_nooses(g):
            info = classify_noose(g, n)
            total = sum(genus(p) for p, _ in info.pieces)
            assert total <= gam, name
            if gam == 0:
                assert total == 0
            if info.separating:
                assert len(info.pieces) >= 2, name


def test_non_separating_cut_lowers_genus():
    for name, g in CONNECTED:
        for n in iter_short_nooses(g):
            info = classify_noose(g, n)
            if not info.separating:
                (p, _), = info.pieces
                assert genus(p) < genus(g), name


def test_noose_validation():
    g = cycle(4)
    good = find_short_noose(g)
    validate_noose(g, good)
    with pytest.raises(InvalidNooseError):
        validate_noose(g, Noose((0, 0), good.faces, good.corners))
    with pytest.raises(InvalidNooseError):
        validate_noose(g, Noose((0,), (0, 1), ((0, 1),)))
    with pytest.raises(InvalidNooseError):
        cut_along_noose(g, Noose(good.vertices, good.faces, ((99, 0), good.corners[1])))
