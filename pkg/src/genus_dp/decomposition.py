"""Branch and carving decompositions: data types, widths, rooting and construction.

A decomposition is an unrooted tree given by its edge list plus a map from
leaf nodes to edge labels (branch) or vertex labels (carving).  The subject
graph is carried along as ``graph``: a tuple of ``(label, u, v)`` triples
using the caller's labels, so decompositions of sub-graphs can be merged by
label without re-indexing.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .embedding import EmbeddedGraph
from .errors import DegenerateInputError, StructuralInputError


def edge_triples(g):
    """``(label, u, v)`` for every edge of an EmbeddedGraph, networkx graph or triple list."""
    if isinstance(g, EmbeddedGraph):
        return tuple((g.edge_label(e), g.vertex_label(u), g.vertex_label(v)) for e, (u, v) in enumerate(g.edges))
    if isinstance(g, nx.Graph):
        if g.is_multigraph():
            return tuple((k, u, v) for k, (u, v, _) in enumerate(sorted(g.edges(keys=True), key=repr)))
        return tuple((i, u, v) for i, (u, v) in enumerate(sorted(g.edges(), key=repr)))
    return tuple((lab, u, v) for lab, u, v in g)


def _key(a, b):
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True, eq=False)
class _TreeDecomposition:
    tree: tuple
    leaf_map: dict
    graph: tuple

    kind = "?"

    @cached_property
    def adjacency(self):
        adj = {x: [] for x in self.leaf_map}
        for a, b in self.tree:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        for x in adj:
            adj[x].sort()
        return adj

    @property
    def nodes(self):
        return sorted(self.adjacency)

    @cached_property
    def leaf_of(self):
        return {lab: x for x, lab in self.leaf_map.items()}

    def validate(self):
        adj = self.adjacency
        nodes = list(adj)
        if len(self.tree) != max(0, len(nodes) - 1):
            raise StructuralInputError("decomposition tree has a cycle or is disconnected")
        if nodes and not nx.is_connected(nx.Graph(list(self.tree)) if self.tree else nx.empty_graph([nodes[0]])):
            raise StructuralInputError("decomposition tree is disconnected")
        for x, nb in adj.items():
            if x in self.leaf_map:
                if len(nb) > 1:
                    raise StructuralInputError(f"leaf {x} has degree {len(nb)}")
            elif len(nb) != 3:
                raise StructuralInputError(f"internal node {x} has degree {len(nb)}")
        return True

    def directed_sides(self):
        """For each tree edge ``(a, b)`` (sorted), the leaf labels on the ``b`` side."""
        adj = self.adjacency
        if not self.tree:
            return {}
        root = min(adj)
        order = []
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            for y in adj[x]:
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        below = {}
        for x in reversed(order):
            s = [self.leaf_map[x]] if x in self.leaf_map else []
            for y in adj[x]:
                if parent.get(y) == x:
                    s.extend(below[y])
            below[x] = s
        out = {}
        for x in order:
            p = parent[x]
            if p is not None:
                out[(p, x)] = below[x]
        return out

    def to_json(self):
        return {
            "tree": [list(e) for e in self.tree],
            "leaf_map": {str(x): lab for x, lab in sorted(self.leaf_map.items())},
            "kind": self.kind,
            "bond": getattr(self, "bond", False),
            "width": self.width,
            "graph": [list(t) for t in self.graph],
        }


@dataclass(frozen=True, eq=False)
class BranchDecomposition(_TreeDecomposition):
    kind = "branch"

    @cached_property
    def ends(self):
        return {lab: (u, v) for lab, u, v in self.graph}

    def _side_vertices(self, labels):
        c = Counter()
        for lab in labels:
            u, v = self.ends[lab]
            c[u] += 1
            if v != u:
                c[v] += 1
        return c

    @cached_property
    def middle_sets(self):
        """``{(a, b): frozenset}`` for every tree edge."""
        total = self._side_vertices(self.ends)
        out = {}
        for (p, x), labels in self.directed_sides().items():
            c = self._side_vertices(labels)
            out[_key(p, x)] = frozenset(v for v, k in c.items() if k < total[v])
        return out

    def middle_set(self, a, b):
        return self.middle_sets[_key(a, b)]

    @property
    def width(self):
        return max((len(s) for s in self.middle_sets.values()), default=0)

    def validate(self):
        super().validate()
        labels = sorted(map(repr, self.leaf_map.values()))
        if labels != sorted(repr(lab) for lab, _, _ in self.graph) or len(set(labels)) != len(labels):
            raise StructuralInputError("leaf map is not a bijection onto the edge set")
        return True


@dataclass(frozen=True, eq=False)
class CarvingDecomposition(_TreeDecomposition):
    bond: bool = False
    kind = "carving"

    @cached_property
    def vertices(self):
        return sorted(self.leaf_map.values())

    @cached_property
    def cut_sets(self):
        out = {}
        for (p, x), labels in self.directed_sides().items():
            side = set(labels)
            out[_key(p, x)] = frozenset(lab for lab, u, v in self.graph if (u in side) != (v in side))
        return out

    @property
    def width(self):
        return max((len(s) for s in self.cut_sets.values()), default=0)

    def is_bond(self):
        G = nx.MultiGraph()
        G.add_nodes_from(self.leaf_map.values())
        G.add_edges_from((u, v) for _, u, v in self.graph)
        allv = set(G.nodes)
        for labels in self.directed_sides().values():
            a = set(labels)
            b = allv - a
            if not a or not b:
                return False
            if not nx.is_connected(G.subgraph(a)) or not nx.is_connected(G.subgraph(b)):
                return False
        return True


def decomposition_from_json(data):
    kind = data.get("kind")
    tree = tuple(tuple(int(x) for x in e) for e in data["tree"])
    leaf_map = {int(k): v for k, v in data["leaf_map"].items()}
    graph = tuple(tuple(t) for t in data.get("graph", ()))
    if kind == "branch":
        d = BranchDecomposition(tree, leaf_map, graph)
    elif kind == "carving":
        d = CarvingDecomposition(tree, leaf_map, graph, bool(data.get("bond", False)))
    else:
        raise StructuralInputError(f"unknown decomposition kind {kind!r}")
    d.validate()
    return d


def dumps(d):
    return json.dumps(d.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# mutable tree used while building


class TreeBuilder:
    def __init__(self):
        self.adj = {}
        self.leaf = {}
        self._next = 0

    def node(self, label=None):
        x = self._next
        self._next += 1
        self.adj[x] = []
        if label is not None:
            self.leaf[x] = label
        return x

    def link(self, a, b):
        self.adj[a].append(b)
        self.adj[b].append(a)

    def unlink(self, a, b):
        self.adj[a].remove(b)
        self.adj[b].remove(a)

    def remove(self, x):
        for y in list(self.adj[x]):
            self.unlink(x, y)
        del self.adj[x]
        self.leaf.pop(x, None)

    def subdivide(self, a, b):
        self.unlink(a, b)
        w = self.node()
        self.link(a, w)
        self.link(w, b)
        return w

    def graft(self, other, mapping=None):
        """Copy ``other`` (a builder-like object or a decomposition) in; return node map."""
        mapping = {}
        if hasattr(other, "adj"):
            adj, leaf = other.adj, other.leaf
        else:
            adj, leaf = other.adjacency, other.leaf_map
        for x in sorted(adj):
            mapping[x] = self.node(leaf.get(x))
        for x in sorted(adj):
            for y in adj[x]:
                if x < y:
                    self.link(mapping[x], mapping[y])
        return mapping

    def cleanup(self):
        """Drop label-free dead ends, dissolve degree-2 nodes, split high degrees."""
        changed = True
        while changed:
            changed = False
            for x in sorted(self.adj):
                if x in self.leaf or x not in self.adj:
                    continue
                d = len(self.adj[x])
                if d <= 1 and len(self.adj) > 1:
                    self.remove(x)
                    changed = True
                elif d == 0:
                    self.remove(x)
                    changed = True
                elif d == 2:
                    a, b = self.adj[x]
                    self.remove(x)
                    self.link(a, b)
                    changed = True
        for x in sorted(self.adj):
            if x in self.leaf:
                continue
            while len(self.adj[x]) > 3:
                nb = sorted(self.adj[x])
                y = self.node()
                for z in nb[2:]:
                    self.unlink(x, z)
                    self.link(y, z)
                self.link(x, y)
                x = y

    def freeze(self, cls, graph, **kw):
        nodes = sorted(self.adj)
        index = {x: i for i, x in enumerate(nodes)}
        tree = tuple(sorted(_key(index[a], index[b]) for a in nodes for b in self.adj[a] if a < b))
        leaf_map = {index[x]: lab for x, lab in self.leaf.items()}
        return cls(tree, leaf_map, tuple(graph), **kw)


def branch_from_builder(tb, graph):
    tb.cleanup()
    return tb.freeze(BranchDecomposition, graph)


# ---------------------------------------------------------------------------
# rooting


@dataclass(frozen=True, eq=False)
class RootedBranchDecomposition:
    bd: BranchDecomposition
    root_leaf: int
    root_node: int  # neighbour of the root leaf; its table is the root edge table
    children: dict  # node -> tuple of child nodes (away from the root)
    middle: dict  # node -> middle set of the edge towards the parent
    edge_sets: dict = field(repr=False)  # node -> edge labels below

    @property
    def graph(self):
        return self.bd.graph

    def postorder(self):
        out = []
        stack = [(self.root_node, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in reversed(self.children[x]):
                stack.append((c, False))
        return out


def root(bd, at=None):
    """Subdivide tree edge ``at`` (default: the first) and hang a new root leaf there."""
    tb = TreeBuilder()
    nodes = tb.graft(bd)
    if bd.tree:
        a, b = at if at is not None else bd.tree[0]
        w = tb.subdivide(nodes[a], nodes[b])
    else:
        (w,) = nodes.values()
    r = tb.node("__root__")
    tb.link(w, r)
    adj = tb.adj
    children = {}
    parent = {w: r}
    stack = [w]
    order = []
    while stack:
        x = stack.pop()
        order.append(x)
        ch = tuple(y for y in sorted(adj[x]) if y != parent[x])
        children[x] = ch
        for y in ch:
            parent[y] = x
            stack.append(y)
    ends = bd.ends
    edge_sets = {}
    for x in reversed(order):
        if x in tb.leaf:
            edge_sets[x] = frozenset([tb.leaf[x]])
        else:
            edge_sets[x] = frozenset().union(*(edge_sets[c] for c in children[x]))
    total = Counter()
    for lab, u, v in bd.graph:
        total[u] += 1
        if u != v:
            total[v] += 1
    middle = {}
    for x in order:
        c = Counter()
        for lab in edge_sets[x]:
            u, v = ends[lab]
            c[u] += 1
            if u != v:
                c[v] += 1
        middle[x] = frozenset(v for v, k in c.items() if k < total[v])
    leaf_map = {x: lab for x, lab in tb.leaf.items() if lab != "__root__"}
    rb_bd = BranchDecomposition(tuple(sorted(_key(a, b) for a in adj for b in adj[a] if a < b and r not in (a, b))),
                                leaf_map, bd.graph)
    return RootedBranchDecomposition(rb_bd, r, w, children, middle, edge_sets)


# ---------------------------------------------------------------------------
# construction


def _single(graph):
    tb = TreeBuilder()
    for lab, _, _ in graph:
        tb.node(lab)
    if len(graph) == 2:
        tb.link(0, 1)
    return tb


def _build_from_splits(graph, order, e0, splits):
    """Rooted merge tree from recorded splits; ``order`` maps bit -> label."""
    tb = TreeBuilder()
    leaf0 = tb.node(order[e0])

    def build(mask):
        if mask & (mask - 1) == 0:
            return tb.node(order[mask.bit_length() - 1])
        y = splits[mask]
        a = build(y)
        b = build(mask ^ y)
        w = tb.node()
        tb.link(w, a)
        tb.link(w, b)
        return w

    full = (1 << len(order)) - 1
    top = build(full ^ (1 << e0))
    tb.link(leaf0, top)
    return tb


def _incidence(graph):
    order = [lab for lab, _, _ in graph]
    vmask = {}
    for i, (_, u, v) in enumerate(graph):
        vmask[u] = vmask.get(u, 0) | (1 << i)
        vmask[v] = vmask.get(v, 0) | (1 << i)
    return order, vmask


def _mid_count(mask, full, vmask):
    rest = full ^ mask
    return sum(1 for m in vmask.values() if m & mask and m & rest)


def _candidate_sets(graph, vmask, k, full, e0):
    """All edge sets (without e0) whose middle set has at most k vertices."""
    verts = sorted(vmask, key=repr)
    G = nx.MultiGraph()
    G.add_nodes_from(verts)
    for i, (_, u, v) in enumerate(graph):
        G.add_edge(u, v, key=i)
    out = set()
    for size in range(0, k + 1):
        for B in combinations(verts, size):
            Bs = set(B)
            blocks = []
            H = G.subgraph([v for v in verts if v not in Bs])
            for comp in nx.connected_components(H):
                m = 0
                for v in comp:
                    m |= vmask[v]
                blocks.append(m)
            free = []
            for i, (_, u, v) in enumerate(graph):
                if u in Bs and v in Bs:
                    free.append(1 << i)
            parts = blocks + free
            if len(parts) > 22:
                continue
            for pick in range(1 << len(parts)):
                m = 0
                for j, p in enumerate(parts):
                    if pick >> j & 1:
                        m |= p
                if m and not m >> e0 & 1:
                    if _mid_count(m, full, vmask) <= k:
                        out.add(m)
    return out


def _decide(graph, k, e0=0):
    """Width-``k`` merge tree rooted at leaf ``e0`` if one exists."""
    order, vmask = _incidence(graph)
    full = (1 << len(order)) - 1
    target = full ^ (1 << e0)
    cands = _candidate_sets(graph, vmask, k, full, e0)
    singles = {1 << i for i in range(len(order)) if i != e0}
    cands |= {s for s in singles if _mid_count(s, full, vmask) <= k}
    if target not in cands:
        return None
    good = {}
    by_size = sorted(cands, key=lambda m: (bin(m).count("1"), m))
    good_list = []
    for m in by_size:
        if m & (m - 1) == 0:
            good[m] = None
            good_list.append(m)
            continue
        low = m & -m
        for y in good_list:
            if y & low and y & ~m == 0 and y != m and (m ^ y) in good:
                good[m] = y
                good_list.append(m)
                break
    if target not in good:
        return None
    return _build_from_splits(graph, order, e0, good)


def _leaf_lower_bound(graph):
    deg = Counter()
    for _, u, v in graph:
        deg[u] += 1
        deg[v] += 1
    best = 0
    for _, u, v in graph:
        if u == v:
            best = max(best, 1 if deg[u] > 2 else 0)
        else:
            best = max(best, (deg[u] > 1) + (deg[v] > 1))
    return best


def branchwidth_exact(g):
    """Minimum-width branch decomposition; returns ``(width, bd)``.

    Searches widths upward from a leaf-edge lower bound, deciding each by a
    subset DP restricted to edge sets with small middle sets; the heuristic
    supplies the upper bound.
    """
    graph = edge_triples(g)
    if not graph:
        raise DegenerateInputError("branch decomposition of an edgeless graph")
    if len(graph) <= 2:
        bd = _single(graph).freeze(BranchDecomposition, graph)
        return bd.width, bd
    ub = branchwidth_heuristic(graph)
    for k in range(_leaf_lower_bound(graph), ub.width):
        tb = _decide(graph, k)
        if tb is not None:
            bd = branch_from_builder(tb, graph)
            return bd.width, bd
    return ub.width, ub


def _from_tree_decomposition(graph):
    G = nx.Graph()
    for _, u, v in graph:
        G.add_node(u)
        G.add_node(v)
        if u != v:
            G.add_edge(u, v)
    _, T = treewidth_min_fill_in(G)
    bags = sorted(T.nodes, key=lambda b: sorted(map(repr, b)))
    tb = TreeBuilder()
    bag_node = {b: tb.node() for b in bags}
    for a, b in sorted(T.edges, key=lambda e: (bags.index(e[0]), bags.index(e[1]))):
        tb.link(bag_node[a], bag_node[b])
    for lab, u, v in graph:
        host = next(b for b in bags if u in b and v in b)
        tb.link(bag_node[host], tb.node(lab))
    # connect the forest networkx may return for disconnected inputs
    comps = list(nx.connected_components(nx.Graph([(a, b) for a in tb.adj for b in tb.adj[a]]))) if tb.adj else []
    anchors = [min(c) for c in comps]
    for a in anchors[1:]:
        tb.link(anchors[0], a)
    return branch_from_builder(tb, graph)


def _greedy(graph):
    order, vmask = _incidence(graph)
    full = (1 << len(order)) - 1
    tb = TreeBuilder()
    parts = [(1 << i, tb.node(order[i])) for i in range(len(order))]
    while len(parts) > 3:
        best = None
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                m = parts[i][0] | parts[j][0]
                score = _mid_count(m, full, vmask)
                if best is None or score < best[0]:
                    best = (score, i, j)
        _, i, j = best
        w = tb.node()
        tb.link(w, parts[i][1])
        tb.link(w, parts[j][1])
        merged = (parts[i][0] | parts[j][0], w)
        parts = [p for t, p in enumerate(parts) if t not in (i, j)] + [merged]
    if len(parts) == 3:
        w = tb.node()
        for _, x in parts:
            tb.link(w, x)
    elif len(parts) == 2:
        tb.link(parts[0][1], parts[1][1])
    return branch_from_builder(tb, graph)


def branchwidth_heuristic(g):
    """Best of a tree-decomposition conversion and greedy part merging."""
    graph = edge_triples(g)
    if not graph:
        raise DegenerateInputError("branch decomposition of an edgeless graph")
    if len(graph) <= 2:
        return _single(graph).freeze(BranchDecomposition, graph)
    cands = [_from_tree_decomposition(graph)]
    if len(graph) <= 200:
        cands.append(_greedy(graph))
    return min(cands, key=lambda d: d.width)


def branch_decomposition(g, exact_limit=12):
    """Exact below ``exact_limit`` edges, heuristic above."""
    graph = edge_triples(g)
    if len(graph) <= exact_limit:
        return branchwidth_exact(graph)[1]
    return branchwidth_heuristic(graph)
