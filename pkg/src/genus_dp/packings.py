"""Connected packings, non-crossing partitions and the counting baselines."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import networkx as nx

from .decomposition import edge_triples
from .embedding import EmbeddedGraph
from .errors import GuardExceededError

MAX_PACKING_EDGES = 16
MAX_BELL = 20
MAX_NCP = 14
MAX_NCP_FILTER = 10


@dataclass(frozen=True)
class PartialPacking:
    """Disjoint nonempty blocks of ``ground``; blocks need not cover it."""

    ground: tuple
    blocks: tuple

    @classmethod
    def make(cls, ground, blocks):
        blocks = tuple(sorted(tuple(sorted(b)) for b in blocks if b))
        seen = [v for b in blocks for v in b]
        if len(seen) != len(set(seen)):
            raise ValueError("blocks of a packing must be disjoint")
        ground = tuple(sorted(ground))
        if not set(seen) <= set(ground):
            raise ValueError("blocks must lie inside the ground set")
        return cls(ground, blocks)

    @property
    def support(self):
        return frozenset(v for b in self.blocks for v in b)

    def covers(self):
        return self.support == frozenset(self.ground)


def vertices_and_edges(g):
    """``(vertex labels, (label, u, v) triples)`` for the accepted graph types."""
    if isinstance(g, EmbeddedGraph):
        return [g.vertex_label(v) for v in range(g.n)], list(edge_triples(g))
    if isinstance(g, nx.Graph):
        return sorted(g.nodes, key=repr), list(edge_triples(g))
    triples = list(edge_triples(g))
    verts = {x for _, u, v in triples for x in (u, v)}
    return sorted(verts, key=repr), triples


def _components(vertices, edges):
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    comps = {}
    for v in vertices:
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def enumerate_connected_packings(g, S):
    """Every packing of ``S`` induced by the components of a subgraph of ``g``."""
    _, triples = vertices_and_edges(g)
    if len(triples) > MAX_PACKING_EDGES:
        raise GuardExceededError(f"{len(triples)} edges exceeds the enumeration guard of {MAX_PACKING_EDGES}")
    S = frozenset(S)
    pairs = [(u, v) for _, u, v in triples]
    out = set()
    for r in range(len(pairs) + 1):
        for chosen in combinations(pairs, r):
            verts = {x for e in chosen for x in e}
            base = [set(c) & S for c in _components(verts, chosen)]
            base = [b for b in base if b]
            free = sorted(S - verts, key=repr)
            for k in range(len(free) + 1):
                for extra in combinations(free, k):
                    out.add(PartialPacking.make(S, base + [{x} for x in extra]))
    return out


def enumerate_partitions_via_subgraphs(g, S):
    """The packings that cover ``S`` exactly."""
    return {p for p in enumerate_connected_packings(g, S) if p.covers()}


def contract_edge(g, x, y):
    """Simple graph obtained by contracting ``xy`` into ``x``."""
    G = nx.Graph()
    verts, triples = vertices_and_edges(g)
    G.add_nodes_from(verts)
    G.add_edges_from((u, v) for _, u, v in triples if u != v)
    return nx.contracted_nodes(G, x, y, self_loops=False)


def small_graphs(max_edges):
    """One representative of every graph with ``1..max_edges`` edges and no isolated vertex."""
    found = {0: [nx.Graph()]}
    for m in range(1, max_edges + 1):
        layer = []
        for H in found[m - 1]:
            n = H.number_of_nodes()
            pool = list(range(n + 2))
            for u, v in combinations(pool, 2):
                if v > n + 1 or (u >= n and v >= n and u != n) or H.has_edge(u, v):
                    continue
                G = H.copy()
                G.add_edge(u, v)
                G = nx.convert_node_labels_to_integers(G)
                if not any(nx.is_isomorphic(G, K) for K in layer):
                    layer.append(G)
        found[m] = layer
    return [G for m in range(1, max_edges + 1) for G in found[m]]


# ---------------------------------------------------------------------------
# counting baselines


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def bell(k):
    """Bell number by the Bell triangle."""
    if k < 0:
        raise ValueError("negative index")
    if k > MAX_BELL:
        raise GuardExceededError(f"bell({k}) beyond the guard of {MAX_BELL}")
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def set_partitions(k):
    """All partitions of ``range(k)`` as restricted growth strings."""
    if k == 0:
        yield ()
        return
    a = [0] * k
    while True:
        yield tuple(a)
        i = k - 1
        while i > 0 and a[i] > max(a[:i]):
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, k):
            a[j] = 0


def _blocks(rgs):
    out = {}
    for pos, lab in enumerate(rgs):
        out.setdefault(lab, []).append(pos + 1)
    return [tuple(b) for b in out.values()]


def crossing(blocks):
    """True if some a < b < c < d has a, c in one block and b, d in another."""
    for X, Y in combinations(blocks, 2):
        if len(X) < 2 or len(Y) < 2:
            continue
        merged = sorted([(x, 0) for x in X] + [(y, 1) for y in Y])
        runs = 1 + sum(1 for i in range(1, len(merged)) if merged[i][1] != merged[i - 1][1])
        if runs >= 4:
            return True
    return False


def _ncp_direct(k):
    """Non-crossing partitions of ``1..k`` built by the block of element 1."""

    @lru_cache(maxsize=None)
    def build(lo, hi):
        if lo > hi:
            return ((),)
        out = []
        rest = list(range(lo + 1, hi + 1))
        for r in range(len(rest) + 1):
            for others in combinations(rest, r):
                block = (lo,) + others
                gaps = []
                bounds = list(block) + [hi + 1]
                for a, b in zip(bounds, bounds[1:]):
                    gaps.append(build(a + 1, b - 1))
                parts = [((block,),)]
                parts.extend(gaps)
                combos = [()]
                for choice in parts:
                    combos = [c + x for c in combos for x in choice]
                out.extend(combos)
        return tuple(out)

    return {tuple(sorted(p)) for p in build(1, k)}


def enumerate_ncp_disk(k, brute=None):
    """Non-crossing partitions of ``1..k``.

    With ``brute`` (the default for ``k <= 10``) every set partition is
    generated and the crossing ones are filtered out; above that the
    partitions are built directly, block by block.
    """
    if k > MAX_NCP:
        raise GuardExceededError(f"k={k} beyond the enumeration guard of {MAX_NCP}")
    if brute is None:
        brute = k <= MAX_NCP_FILTER
    if not brute:
        return _ncp_direct(k)
    out = set()
    for rgs in set_partitions(k):
        blocks = _blocks(rgs)
        if not crossing(blocks):
            out.add(tuple(sorted(blocks)))
    return out


def count_ncp_disk(k):
    """Non-crossing partitions of ``1..k`` counted by the block of element 1.

    That block splits the other points into gaps, each partitioned on its own:
    f(L) = h(L - 1) where h(R) counts "gap (element gap)*" over R points.
    Independent of the closed form, which the tests compare it against.
    """
    f = [1]
    h = []
    for L in range(1, k + 1):
        R = L - 1
        h.append(f[R] + sum(f[g] * h[R - g - 1] for g in range(R)))
        f.append(h[R])
    return f[k]


def noncrossing_packing_ceiling(k):
    """Partial non-crossing packings of ``k`` boundary points: sum_j C(k, j) Cat(j)."""
    return sum(comb(k, j) * catalan(j) for j in range(k + 1))
