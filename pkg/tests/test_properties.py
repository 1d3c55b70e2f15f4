import networkx as nx
from hypothesis import assume, given, strategies as st

from oracles import mids_from_scratch
from genus_dp.decomposition import branchwidth_exact, branchwidth_heuristic, root
from genus_dp.dp import brute_force_cvc, brute_force_vc, run_dp
from genus_dp.embedding import dual, euler_genus, isomorphic, medial, radial
from genus_dp.generators import random_embedding
from genus_dp.packings import PartialPacking, enumerate_connected_packings
from genus_dp.polyhedral import expected_remainder, is_polyhedral, polyhedral_decomposition, replay_gluing
from genus_dp.surface_cut import surface_cut_decomposition, tree_cotree, verify_scd

seeds = st.integers(0, 10**6)


@st.composite
def embeddings(draw, max_n=9, twist=True):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(1, 2 * n))
    t = draw(st.sampled_from([0.0, 0.3])) if twist else 0.0
    return random_embedding(n, m, draw(seeds), twist=t)


@st.composite
def simple_graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    G = nx.Graph(chosen)
    G.add_nodes_from(range(n))
    return G


@given(embeddings())
def test_euler_characteristic(g):
    r = euler_genus(g)
    assert r.vertex_count - r.edge_count + r.face_count == 2 * r.component_count - r.euler_genus
    assert r.euler_genus >= 0 and (not r.orientable or r.euler_genus % 2 == 0)
    darts = sorted(d for f in g.faces for d in f.darts)
    assert len(darts) == 2 * g.m


@given(embeddings())
def test_derived_maps_keep_genus(g):
    assume(g.is_connected())
    gam = euler_genus(g).euler_genus
    assert isomorphic(dual(dual(g)), g)
    for h in (dual(g), radial(g), medial(g)):
        assert euler_genus(h).euler_genus == gam


@given(embeddings())
def test_tree_cotree_leftover_is_genus(g):
    assume(g.is_connected())
    assert len(tree_cotree(g).X) == euler_genus(g).euler_genus


@given(simple_graphs(max_n=8))
def test_middle_sets_and_rooting(G):
    assume(G.number_of_edges() >= 2)
    bd = branchwidth_heuristic(G)
    bd.validate()
    assert {k: set(v) for k, v in bd.middle_sets.items()} == mids_from_scratch(bd)
    rbd = root(bd)
    assert rbd.middle[rbd.root_node] == frozenset()
    for x, ch in rbd.children.items():
        if ch:
            a, b = ch
            assert rbd.edge_sets[x] == rbd.edge_sets[a] | rbd.edge_sets[b]
            assert not rbd.edge_sets[a] & rbd.edge_sets[b]


@given(simple_graphs(max_n=6))
def test_exact_at_most_heuristic(G):
    assume(G.number_of_edges() >= 1)
    assert branchwidth_exact(G)[0] <= branchwidth_heuristic(G).width


@given(simple_graphs(max_n=7))
def test_dp_matches_brute_force(G):
    n = G.number_of_nodes()
    vc = run_dp("vc", G)
    assert [vc.decide(b) for b in range(n + 1)] == [brute_force_vc(G, b) for b in range(n + 1)]
    if nx.is_connected(G):
        cvc = run_dp("cvc", G)
        assert [cvc.decide(b) for b in range(n + 1)] == [brute_force_cvc(G, b) for b in range(n + 1)]


@given(embeddings(max_n=8))
def test_pipeline_verifies(g):
    assume(g.is_connected() and g.m)
    pd = polyhedral_decomposition(g)
    assert all(is_polyhedral(c) for c in pd.components)
    assert replay_gluing(pd) == expected_remainder(pd)
    scd = surface_cut_decomposition(g)
    scd.bd.validate()
    assert verify_scd(scd).passed


@given(st.permutations(range(6)), st.integers(1, 5))
def test_packing_equality_is_structural(perm, cut):
    blocks = [perm[:cut], perm[cut:]]
    a = PartialPacking.make(range(6), blocks)
    b = PartialPacking.make(reversed(range(6)), [list(reversed(x)) for x in reversed(blocks)])
    assert a == b and hash(a) == hash(b)


@given(simple_graphs(max_n=5), st.data())
def test_packings_monotone_in_s(G, data):
    assume(G.number_of_edges() <= 8)
    nodes = sorted(G.nodes)
    S = data.draw(st.sets(st.sampled_from(nodes)))
    S2 = data.draw(st.sets(st.sampled_from(sorted(S)))) if S else set()
    assert len(enumerate_connected_packings(G, S2)) <= len(enumerate_connected_packings(G, S))
