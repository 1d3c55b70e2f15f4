"""Independent reference computations used to pin expected values."""

from itertools import combinations

import networkx as nx


def all_ternary_trees(m):
    """Every unrooted ternary tree with leaves 0..m-1 as an edge list (m >= 2).

    Grown by inserting leaf i on each edge of every tree over 0..i-1.
    """
    if m == 2:
        yield [(0, 1)]
        return
    # internal nodes are numbered from m upwards
    start = [(0, m), (1, m), (2, m)]
    trees = [(start, m + 1)]
    for leaf in range(3, m):
        nxt = []
        for edges, fresh in trees:
            for i, (a, b) in enumerate(edges):
                new = edges[:i] + edges[i + 1:] + [(a, fresh), (fresh, b), (leaf, fresh)]
                nxt.append((new, fresh + 1))
        trees = nxt
    for edges, _ in trees:
        yield edges


def brute_branchwidth(edges):
    """Branchwidth by trying every ternary tree (only for a handful of edges)."""
    m = len(edges)
    if m <= 1:
        return 0
    best = None
    for tree in all_ternary_trees(m):
        adj = {}
        for a, b in tree:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        width = 0
        for a, b in tree:
            side = set()
            stack, seen = [b], {a, b}
            while stack:
                x = stack.pop()
                if x < m:
                    side.add(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            vs1 = {v for i in side for v in edges[i]}
            vs2 = {v for i in range(m) if i not in side for v in edges[i]}
            width = max(width, len(vs1 & vs2))
        best = width if best is None else min(best, width)
    return best


def orientable_face_count(g):
    """Faces of an all-positive embedding: cycles of (next dart in rotation) o (reverse dart)."""
    assert all(x > 0 for x in g.sign)
    succ = {}
    for r in g.rotation:
        for i, d in enumerate(r):
            succ[d] = r[(i + 1) % len(r)]
    seen = set()
    faces = 0
    for d in succ:
        if d in seen:
            continue
        faces += 1
        while d not in seen:
            seen.add(d)
            d = succ[d ^ 1]
    return faces + sum(1 for r in g.rotation if not r)


def subsets(xs):
    for r in range(len(xs) + 1):
        yield from combinations(xs, r)


def mids_from_scratch(bd):
    """Middle sets by deleting each tree edge and intersecting the two sides."""
    T = nx.Graph(list(bd.tree))
    out = {}
    for a, b in bd.tree:
        T.remove_edge(a, b)
        side = nx.node_connected_component(T, b)
        T.add_edge(a, b)
        one = {x for lab, u, v in bd.graph if bd.leaf_of[lab] in side for x in (u, v)}
        two = {x for lab, u, v in bd.graph if bd.leaf_of[lab] not in side for x in (u, v)}
        out[(min(a, b), max(a, b))] = one & two
    return out
