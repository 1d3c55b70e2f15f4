"""Polyhedral decompositions: split an embedded graph into polyhedral pieces.

Loops and parallel copies are set aside first (``extra_edges``) and put
back at the end of the surface-cut pipeline; the splitting itself works on
the simple graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .embedding import (
    EmbeddedGraph,
    delete_vertices,
    find_short_noose_cut,
    genus,
    insert_edge,
    split_components,
)
from .errors import UnsupportedInputError


@dataclass(frozen=True)
class Gluing:
    parent: int
    children: tuple
    shared: tuple  # vertex labels W (empty when vertices went to the apex set)
    virtual: tuple  # labels of virtual edges created by this split
    kind: str  # "sum" or "apex"


@dataclass(frozen=True)
class PolyhedralDecomposition:
    components: tuple
    component_ids: tuple
    apices: frozenset
    gluing: tuple
    virtual_edges: frozenset
    extra_edges: tuple  # (label, u, v) loops and parallel copies set aside
    graph: EmbeddedGraph

    def to_json(self):
        from .formats import format_emb

        return {
            "components": [
                {
                    "id": cid,
                    "emb": format_emb(c),
                    "vertex_labels": [c.vertex_label(v) for v in range(c.n)],
                    "edge_labels": [c.edge_label(e) for e in range(c.m)],
                    "euler_genus": genus(c),
                }
                for cid, c in zip(self.component_ids, self.components)
            ],
            "apices": sorted(self.apices),
            "gluing": [
                {"parent": ev.parent, "children": list(ev.children), "shared": list(ev.shared),
                 "virtual": list(ev.virtual), "kind": ev.kind}
                for ev in self.gluing
            ],
            "virtual_edges": sorted(self.virtual_edges),
            "extra_edges": [list(t) for t in self.extra_edges],
        }


def simplify(g):
    """Drop loops and parallel copies (keeping the lowest edge id per pair)."""
    seen = set()
    extra = []
    drop = set()
    for e, (u, v) in enumerate(g.edges):
        key = (min(u, v), max(u, v))
        if u == v or key in seen:
            drop.add(e)
            extra.append((g.edge_label(e), g.vertex_label(u), g.vertex_label(v)))
        seen.add(key)
    if not drop:
        return g, ()
    keep = [e for e in range(g.m) if e not in drop]
    emap = {e: i for i, e in enumerate(keep)}
    rotation = tuple(tuple(2 * emap[d >> 1] + (d & 1) for d in r if (d >> 1) in emap) for r in g.rotation)
    h = EmbeddedGraph(g.n, tuple(g.edges[e] for e in keep), rotation, tuple(g.sign[e] for e in keep),
                      tuple(g.vertex_label(v) for v in range(g.n)), tuple(g.edge_label(e) for e in keep))
    return h, tuple(extra)


def _is_clique(g):
    return g.n <= 3 and g.m == g.n * (g.n - 1) // 2


def is_polyhedral(g):
    """Simple, 3-connected and free of useful short nooses, or a clique on at most 3 vertices."""
    if not g.is_simple() or g.n == 0:
        return False
    if _is_clique(g):
        return g.is_connected() and g.n >= 1
    if g.n < 4:
        return False
    G = nx.Graph(g.to_networkx())
    if nx.node_connectivity(G) < 3:
        return False
    return find_short_noose_cut(g) is None


def polyhedral_decomposition(g):
    if not g.is_connected():
        raise UnsupportedInputError("polyhedral decomposition needs a connected graph")
    base, extra = simplify(g)
    nodes = {0: base}
    pending = [0] if base.m else []
    final = []
    events = []
    apices = set()
    virtual = set()
    next_id = 1
    next_virtual = -1
    while pending:
        hid = pending.pop(0)
        H = nodes[hid]
        if is_polyhedral(H):
            final.append(hid)
            continue
        info = find_short_noose_cut(H)
        if info is None:
            raise UnsupportedInputError(f"component {hid} is not polyhedral but has no short noose")
        S = info.noose.vertices
        S_labels = tuple(H.vertex_label(v) for v in S)
        children = []
        if not info.separating:
            apices.update(S_labels)
            rest = delete_vertices(H, S)
            for piece, _ in split_components(rest):
                if piece.m == 0:
                    continue
                nodes[next_id] = piece
                children.append(next_id)
                next_id += 1
            events.append(Gluing(hid, tuple(children), (), (), "apex"))
        else:
            label = None
            pieces = []
            for piece, copies in info.pieces:
                if len(S) == 2:
                    u, v = copies
                    has_uv = any({a, b} == {u, v} for a, b in piece.edges)
                    if not has_uv:
                        if label is None:
                            label = next_virtual
                            next_virtual -= 1
                            virtual.add(label)
                        piece = insert_edge(piece, u, v, piece.rotation[u][-1], piece.rotation[v][-1], label)
                pieces.append(piece)
            for piece in pieces:
                nodes[next_id] = piece
                children.append(next_id)
                next_id += 1
            events.append(Gluing(hid, tuple(children), S_labels, (label,) if label is not None else (), "sum"))
        pending.extend(children)
    final.sort()
    return PolyhedralDecomposition(
        tuple(nodes[i] for i in final), tuple(final), frozenset(apices), tuple(events),
        frozenset(virtual), extra, g,
    )


def _labelled_edges(h):
    return {h.edge_label(e): (h.vertex_label(u), h.vertex_label(v)) for e, (u, v) in enumerate(h.edges)}


def replay_gluing(pd, with_extra=True):
    """Rebuild ``G[V - A]`` from the components; returns ``{label: (u, v)}``.

    Each split is undone in reverse order by uniting the pieces' edges on
    their labels and cancelling the virtual edges that split introduced.
    """
    current = {cid: _labelled_edges(c) for cid, c in zip(pd.component_ids, pd.components)}
    for ev in reversed(pd.gluing):
        merged = {}
        for c in ev.children:
            merged.update(current.pop(c, {}))
        for lab in ev.virtual:
            merged.pop(lab, None)
        current[ev.parent] = merged
    out = current.get(0, {})
    if with_extra:
        for lab, u, v in pd.extra_edges:
            if u not in pd.apices and v not in pd.apices:
                out[lab] = (u, v)
    return out


def replay_graph(pd):
    G = nx.MultiGraph()
    for lab, (u, v) in sorted(replay_gluing(pd).items(), key=lambda t: repr(t[0])):
        G.add_edge(u, v, key=lab)
    return G


def expected_remainder(pd):
    """``{label: (u, v)}`` of the input graph with the apex vertices removed."""
    g = pd.graph
    A = pd.apices
    return {lab: (u, v) for lab, (u, v) in _labelled_edges(g).items() if u not in A and v not in A}
