"""Embedded graph families used by tests, benchmarks and ``genus-dp gen``."""

from __future__ import annotations

import itertools
import random

import networkx as nx

from .embedding import EmbeddedGraph, from_edge_rotations
from .errors import UnsupportedInputError


def from_neighbor_orders(orders):
    """Simple graph from cyclic neighbour lists (all signs +1)."""
    n = len(orders)
    edge_id = {}
    edges = []
    for u in range(n):
        for w in orders[u]:
            key = (min(u, w), max(u, w))
            if key not in edge_id:
                edge_id[key] = len(edges)
                edges.append(key)
    rotation = [[edge_id[(min(u, w), max(u, w))] for w in orders[u]] for u in range(n)]
    return from_edge_rotations(n, edges, rotation)


def from_planar_nx(G):
    """Planar embedding of a networkx graph via its combinatorial embedding."""
    ok, emb = nx.check_planarity(G)
    if not ok:
        raise UnsupportedInputError("graph is not planar")
    nodes = sorted(G.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    orders = [[index[w] for w in emb.neighbors_cw_order(v)] for v in nodes]
    return from_neighbor_orders(orders)


def single_edge():
    return from_edge_rotations(2, [(0, 1)], [[0], [0]])


def single_vertex():
    return EmbeddedGraph(1, (), ((),), ())


def loop(sign=1):
    """One vertex with one loop; ``sign=-1`` gives the projective plane."""
    return EmbeddedGraph(1, ((0, 0),), ((0, 1),), (sign,))


def cycle(n):
    if n < 3:
        raise UnsupportedInputError("cycle needs n >= 3")
    return from_neighbor_orders([[(v - 1) % n, (v + 1) % n] for v in range(n)])


def path(n):
    return from_neighbor_orders([[w for w in (v - 1, v + 1) if 0 <= w < n] for v in range(n)])


def star(k):
    return from_neighbor_orders([list(range(1, k + 1))] + [[0] for _ in range(k)])


def grid(rows, cols):
    """Planar grid; vertex ``(i, j)`` is ``i * cols + j``."""
    orders = []
    for i in range(rows):
        for j in range(cols):
            nb = []
            for di, dj in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                a, b = i + di, j + dj
                if 0 <= a < rows and 0 <= b < cols:
                    nb.append(a * cols + b)
            orders.append(nb)
    return from_neighbor_orders(orders)


def toroidal_grid(rows, cols):
    """Quadrangulation of the torus (rows, cols >= 3)."""
    if rows < 3 or cols < 3:
        raise UnsupportedInputError("toroidal grid needs both sides >= 3")
    orders = []
    for i in range(rows):
        for j in range(cols):
            orders.append([((i + di) % rows) * cols + (j + dj) % cols
                           for di, dj in ((0, 1), (1, 0), (0, -1), (-1, 0))])
    return from_neighbor_orders(orders)


def wheel(k):
    """Hub 0 and rim 1..k."""
    orders = [list(range(1, k + 1))]
    for i in range(1, k + 1):
        prev = k if i == 1 else i - 1
        nxt = 1 if i == k else i + 1
        orders.append([nxt, 0, prev])
    return from_neighbor_orders(orders)


def clique(k):
    """Planar K1..K4."""
    if k == 1:
        return single_vertex()
    if k == 2:
        return single_edge()
    if k == 3:
        return cycle(3)
    if k == 4:
        return from_neighbor_orders([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])
    raise UnsupportedInputError("only K1..K4 are planar")


def k5_torus():
    """K5 with a rotation system that has 5 faces (a torus embedding)."""
    base = list(range(5))
    choices = []
    for v in base:
        others = [w for w in base if w != v]
        first, rest = others[0], others[1:]
        choices.append([[first] + list(p) for p in itertools.permutations(rest)])
    for combo in itertools.product(*choices):
        g = from_neighbor_orders([list(c) for c in combo])
        if len(g.faces) == 5:
            return g
    raise AssertionError("no toroidal rotation found")


def two_cliques_at_vertex():
    """Two K4's sharing vertex 0."""
    return from_neighbor_orders([
        [1, 2, 3, 4, 5, 6],
        [0, 3, 2], [0, 1, 3], [0, 2, 1],
        [0, 6, 5], [0, 4, 6], [0, 5, 4],
    ])


def bowtie():
    """Two triangles sharing vertex 0."""
    return from_neighbor_orders([[1, 2, 3, 4], [0, 2], [1, 0], [0, 4], [3, 0]])


def stacked_triangulation(n, seed=0):
    """Random planar triangulation grown by inserting vertices into faces."""
    rng = random.Random(seed)
    G = nx.complete_graph(3)
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        G.add_edges_from([(v, a), (v, b), (v, c)])
        faces += [(a, b, v), (b, c, v), (c, a, v)]
    return from_planar_nx(G)


def random_planar(n, keep=0.7, seed=0):
    """Connected planar graph: a triangulation with random edges removed."""
    rng = random.Random(seed)
    base = stacked_triangulation(n, seed)
    G = base.to_networkx()
    G = nx.Graph(G)
    edges = sorted(G.edges())
    rng.shuffle(edges)
    for u, v in edges:
        if rng.random() > keep:
            G.remove_edge(u, v)
            if not nx.is_connected(G):
                G.add_edge(u, v)
    return from_planar_nx(G)


def random_embedding(n, m, seed=0, twist=0.0, simple=True):
    """Connected graph with a uniformly random rotation system.

    ``twist`` is the probability of a -1 signature on each edge.
    """
    rng = random.Random(seed)
    m = max(m, n - 1)
    if simple:
        m = min(m, n * (n - 1) // 2)
    edges = []
    present = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.append((u, v))
        present.add((min(u, v), max(u, v)))
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if simple and (u == v or (min(u, v), max(u, v)) in present):
            continue
        edges.append((u, v))
        present.add((min(u, v), max(u, v)))
    rotation = [[] for _ in range(n)]
    for e, (u, v) in enumerate(edges):
        rotation[u].append(e)
        rotation[v].append(e)
    for r in rotation:
        rng.shuffle(r)
    sign = [(-1 if rng.random() < twist else 1) for _ in edges]
    return from_edge_rotations(n, edges, rotation, sign)


FAMILIES = {
    "grid": lambda size, seed: grid(size, size),
    "toroidal-grid": lambda size, seed: toroidal_grid(size, size),
    "cycle": lambda size, seed: cycle(size),
    "path": lambda size, seed: path(size),
    "star": lambda size, seed: star(size),
    "wheel": lambda size, seed: wheel(size),
    "clique": lambda size, seed: clique(size),
    "k5-torus": lambda size, seed: k5_torus(),
    "triangulation": lambda size, seed: stacked_triangulation(size, seed),
    "planar": lambda size, seed: random_planar(size, seed=seed),
    "random": lambda size, seed: random_embedding(size, 2 * size, seed),
    "projective-loop": lambda size, seed: loop(-1),
}


def generate(family, size, seed=0):
    try:
        make = FAMILIES[family]
    except KeyError:
        raise UnsupportedInputError(f"unknown family {family!r}; choose from {', '.join(sorted(FAMILIES))}")
    return make(size, seed)


def planar_corpus(count=30, seed=0):
    """Deterministic mix of planar instances (names, graphs)."""
    out = [
        ("k3", cycle(3)), ("k4", clique(4)), ("c4", cycle(4)), ("c6", cycle(6)),
        ("p5", path(5)), ("star4", star(4)), ("wheel5", wheel(5)), ("wheel6", wheel(6)),
        ("grid3", grid(3, 3)), ("grid3x4", grid(3, 4)), ("grid4", grid(4, 4)),
        ("bowtie", bowtie()), ("two_k4", two_cliques_at_vertex()), ("edge", single_edge()),
    ]
    i = 0
    while len(out) < count:
        n = 5 + (i % 6)
        if i % 2 == 0:
            out.append((f"tri{n}_{i}", stacked_triangulation(n, seed + i)))
        else:
            out.append((f"planar{n}_{i}", random_planar(n, seed=seed + i)))
        i += 1
    return out[:count]


def toroidal_corpus():
    return [("k5_torus", k5_torus()), ("torus3", toroidal_grid(3, 3)),
            ("torus3x4", toroidal_grid(3, 4)), ("torus4", toroidal_grid(4, 4))]


def nonorientable_corpus():
    return [("projective_loop", loop(-1))] + [
        (f"twisted{i}", random_embedding(6, 9, seed=100 + i, twist=0.3)) for i in range(4)
    ]
