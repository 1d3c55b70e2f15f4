"""Transforms between branch and carving decompositions.

branch -> medial carving (leaf transport), carving -> bond carving (local
re-hanging of disconnected pieces), bond carving -> branch (leaf relabel),
clique-sum merging and apex reinsertion.
"""

from __future__ import annotations

import networkx as nx

from .decomposition import (
    BranchDecomposition,
    CarvingDecomposition,
    TreeBuilder,
    _key,
    edge_triples,
)
from .embedding import medial
from .errors import PreconditionError, StructuralInputError, UnsupportedInputError


def labelled_medial(g):
    """Medial graph whose vertices carry the edge labels of ``g``."""
    md = medial(g)
    return md.relabelled(vlabels=[g.edge_label(e) for e in range(g.m)])


def branch_to_medial_carving(bd, g, check_polyhedral=True):
    """Same tree, leaves now read as medial vertices (edges of ``g``)."""
    if check_polyhedral:
        from .polyhedral import is_polyhedral

        if not is_polyhedral(g):
            raise PreconditionError("medial carving transport needs a polyhedral embedding")
    md = labelled_medial(g)
    return CarvingDecomposition(bd.tree, dict(bd.leaf_map), edge_triples(md), False)


def carving_to_branch(cd, g):
    """Leaves of a carving of medial(g) back to edges of ``g``."""
    labels = {g.edge_label(e) for e in range(g.m)}
    if set(cd.leaf_map.values()) != labels:
        raise StructuralInputError("carving leaves do not match the edges of the graph")
    return BranchDecomposition(cd.tree, dict(cd.leaf_map), edge_triples(g))


# ---------------------------------------------------------------------------
# bond carvings


class _Carving:
    """Mutable carving used by the bond repair."""

    def __init__(self, cd):
        self.tb = TreeBuilder()
        self.tb.graft(cd)
        self.G = nx.MultiGraph()
        self.G.add_nodes_from(cd.leaf_map.values())
        self.G.add_edges_from((u, v) for _, u, v in cd.graph if u != v)
        self.graph = cd.graph

    def side(self, a, b):
        """Leaf labels reachable from b without crossing a."""
        out = []
        stack = [(b, a)]
        while stack:
            x, p = stack.pop()
            if x in self.tb.leaf:
                out.append(self.tb.leaf[x])
            for y in self.tb.adj[x]:
                if y != p:
                    stack.append((y, x))
        return out

    def edges(self):
        return sorted((a, b) for a in self.tb.adj for b in self.tb.adj[a] if a < b)

    def cut(self, labels):
        s = set(labels)
        return sum(1 for _, u, v in self.graph if u != v and (u in s) != (v in s))

    def potential(self):
        bad = 0
        total = 0
        for a, b in self.edges():
            for x, y in ((a, b), (b, a)):
                s = self.side(x, y)
                if not nx.is_connected(self.G.subgraph(s)):
                    bad += 1
            total += self.cut(self.side(a, b))
        return bad, total

    def width(self):
        return max((self.cut(self.side(a, b)) for a, b in self.edges()), default=0)

    def snapshot(self):
        return ({x: list(n) for x, n in self.tb.adj.items()}, dict(self.tb.leaf), self.tb._next)

    def restore(self, snap):
        adj, leaf, nxt = snap
        self.tb.adj = {x: list(n) for x, n in adj.items()}
        self.tb.leaf = dict(leaf)
        self.tb._next = nxt

    def move(self, a, b, piece):
        """Detach the leaves of ``piece`` (inside the b side of a-b) and re-hang them.

        The detached subtree is attached by descending from ``a`` into the
        neighbouring branch that holds at least half of the piece's boundary,
        as deep as that stays true.
        """
        tb = self.tb
        piece = set(piece)
        boundary = [(u, v) for _, u, v in self.graph if u != v and ((u in piece) != (v in piece))]
        leaves = [x for x, lab in tb.leaf.items() if lab in piece]
        restricted = _restrict(tb, a, b, piece)
        for x in leaves:
            tb.remove(x)
        tb.cleanup()
        if not tb.adj:
            return False
        half = len(boundary) / 2.0

        def weight(x, p):
            s = set(self.side(p, x))
            return sum(1 for u, v in boundary if u in s or v in s)

        # a survives the cleanup: its side keeps all of its branches
        start = a if a in tb.adj else None
        if start is None:
            return False
        best_edge = None
        prev, cur = None, start
        while True:
            nxt = None
            for y in sorted(tb.adj[cur]):
                if y == prev:
                    continue
                if weight(y, cur) >= half:
                    nxt = y
                    break
            if nxt is None:
                break
            best_edge = (cur, nxt)
            prev, cur = cur, nxt
        if best_edge is None:
            nb = sorted(tb.adj[start])
            if not nb:
                return False
            best_edge = (start, nb[0])
        w = tb.subdivide(*best_edge)
        mapping = tb.graft(restricted)
        tb.link(w, _anchor(tb, mapping))
        tb.cleanup()
        return True


def _restrict(tb, a, b, piece):
    """Copy of the b-side subtree of a-b keeping only leaves in ``piece``."""
    out = TreeBuilder()
    stack = [(b, a, None)]
    while stack:
        x, p, parent_new = stack.pop()
        if x in tb.leaf and tb.leaf[x] not in piece:
            continue
        nx_ = out.node(tb.leaf.get(x))
        if parent_new is not None:
            out.link(parent_new, nx_)
        for y in tb.adj[x]:
            if y != p:
                stack.append((y, x, nx_))
    out.cleanup()
    return out


def _anchor(tb, mapping):
    """Node of the grafted subtree to connect upward (a degree <= 2 node)."""
    nodes = sorted(mapping.values())
    if len(nodes) == 1:
        return nodes[0]
    for x in nodes:
        if x not in tb.leaf and len(tb.adj[x]) == 2:
            return x
    # a well-formed ternary tree has no degree-2 node; subdivide its first edge
    x = nodes[0]
    y = sorted(tb.adj[x])[0]
    return tb.subdivide(x, y)


def carving_to_bond(cd, max_rounds=None):
    """Rearrange a carving so that both sides of every tree edge are connected.

    Each move takes a connected component of a disconnected side and re-hangs
    its subtree beside the part of the tree it attaches to; the cut sets on the
    descent path never grow, so the width never increases.
    """
    G = nx.MultiGraph()
    G.add_nodes_from(cd.leaf_map.values())
    G.add_edges_from((u, v) for _, u, v in cd.graph if u != v)
    if G.number_of_nodes() == 0 or not nx.is_connected(G):
        raise UnsupportedInputError("bond carving needs a connected graph")
    if cd.is_bond():
        return CarvingDecomposition(cd.tree, dict(cd.leaf_map), cd.graph, True)
    start_width = cd.width
    c = _Carving(cd)
    n = G.number_of_nodes()
    rounds = max_rounds if max_rounds is not None else 4 * n * n + 20
    phi = c.potential()
    for _ in range(rounds):
        if phi[0] == 0:
            break
        improved = False
        for a, b in c.edges():
            for x, y in ((a, b), (b, a)):
                side = c.side(x, y)
                comps = sorted((sorted(cc, key=repr) for cc in nx.connected_components(G.subgraph(side))),
                               key=lambda cc: (len(cc), repr(cc)))
                if len(comps) < 2:
                    continue
                for comp in comps:
                    snap = c.snapshot()
                    if c.move(x, y, comp):
                        new = c.potential()
                        if new < phi and c.width() <= start_width:
                            phi = new
                            improved = True
                            break
                    c.restore(snap)
                if improved:
                    break
            if improved:
                break
        if not improved:
            raise PreconditionError("bond repair made no progress")
    if phi[0] != 0:
        raise PreconditionError("bond repair did not converge")
    out = c.tb.freeze(CarvingDecomposition, cd.graph, bond=True)
    return out


# ---------------------------------------------------------------------------
# clique sums


def _attach_costs(bd, W):
    """``(width, growth)`` after hanging something containing ``W`` on each tree edge, in DFS order.

    Every middle set grows by the part of ``W`` seen on its side away from
    the attachment point; growth counts the added vertices over all middle sets.
    """
    from collections import Counter

    adj = bd.adjacency
    ends = bd.ends
    Wset = set(W)
    root_node = min(adj)
    parent = {root_node: None}
    order = []
    stack = [root_node]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in reversed(adj[x]):
            if y not in parent:
                parent[y] = x
                stack.append(y)
    count = {}
    for x in reversed(order):
        c = Counter()
        if x in bd.leaf_map:
            c.update(v for v in set(ends[bd.leaf_map[x]]) if v in Wset)
        for y in adj[x]:
            if parent.get(y) == x:
                c.update(count[y])
        count[x] = c
    total = count[root_node]
    below = {x: {v for v, k in count[x].items() if k} for x in order}
    above = {x: {v for v in total if total[v] - count[x][v] > 0} for x in order}
    ancestors = {}
    for x in order:
        p = parent[x]
        ancestors[x] = (ancestors[p] | {x}) if p is not None else {x}
    mids = bd.middle_sets
    down = [x for x in order if parent[x] is not None]
    out = []
    for a, b in _dfs_edges(bd):
        child = b if parent.get(b) == a else a
        worst = grown = 0
        for x in down:
            mid = mids[_key(parent[x], x)]
            if x == child:
                sides = (below[x], above[x])
            elif x in ancestors[child]:
                sides = (above[x],)
            else:
                sides = (below[x],)
            for extra in sides:
                worst = max(worst, len(mid | extra))
                grown += len(extra - mid)
        out.append(((worst, grown), (a, b)))
    return out


def _best_edge(bd, W):
    if not bd.tree:
        return None
    best = None
    for cost, e in _attach_costs(bd, W):
        if best is None or cost < best[0]:
            best = (cost, e)
    return best[1]


def _dfs_edges(bd):
    adj = bd.adjacency
    root = min(adj)
    out = []
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in reversed(adj[x]):
            if y not in seen:
                seen.add(y)
                out.append(_key(x, y))
                stack.append(y)
    return out


def bridge(bd1, bd2, W=(), graph=None):
    """Join two decompositions by an edge between subdivisions of chosen tree edges."""
    if bd1 is None:
        return bd2
    if bd2 is None:
        return bd1
    graph = graph if graph is not None else bd1.graph + bd2.graph
    tb = TreeBuilder()
    hooks = []
    for bd in (bd1, bd2):
        e = _best_edge(bd, W)
        m = tb.graft(bd)
        if e is None:
            hooks.append(next(iter(m.values())))
        else:
            hooks.append(tb.subdivide(m[e[0]], m[e[1]]))
    tb.link(*hooks)
    tb.cleanup()
    return tb.freeze(BranchDecomposition, graph)


def identify_leaves(bd1, bd2, lab1, lab2, keep=None, graph=None):
    """Glue two trees at leaves ``lab1`` (in bd1) and ``lab2`` (in bd2).

    With ``keep`` a pendant leaf of that label is left at the junction;
    otherwise the junction is dissolved.
    """
    tb = TreeBuilder()
    m1 = tb.graft(bd1)
    m2 = tb.graft(bd2)
    x1 = m1[bd1.leaf_of[lab1]]
    x2 = m2[bd2.leaf_of[lab2]]
    n1 = list(tb.adj[x1])
    n2 = list(tb.adj[x2])
    tb.remove(x1)
    tb.remove(x2)
    if not n1 and not n2:
        out = TreeBuilder()
        if keep is not None:
            out.node(keep)
        return out.freeze(BranchDecomposition, graph or ())
    w = tb.node()
    for y in n1 + n2:
        tb.link(w, y)
    if keep is not None:
        tb.link(w, tb.node(keep))
    tb.cleanup()
    return tb.freeze(BranchDecomposition, graph)


def merge_clique_sums(parts, pd):
    """Merge per-component decompositions along the gluing record of ``pd``.

    ``parts[i]`` decomposes ``pd.components[i]``.  Returns a decomposition of
    ``G[V - A]`` without the extra (loop/parallel) edges, or ``None`` when that
    graph has no edges.
    """
    if len(parts) != len(pd.components):
        raise StructuralInputError("one decomposition per component is required")
    current = {}
    for cid, part, comp in zip(pd.component_ids, parts, pd.components):
        if part is not None and {lab for lab, _, _ in part.graph} != {comp.edge_label(e) for e in range(comp.m)}:
            raise StructuralInputError(f"decomposition does not match component {cid}")
        current[cid] = part
    for ev in reversed(pd.gluing):
        kids = [current.pop(c, None) for c in ev.children]
        virtual = set(ev.virtual)
        merged = None
        for kid in kids:
            if kid is None or not kid.graph:
                continue
            if merged is None:
                merged = kid
                continue
            merged = _glue(merged, kid, ev, virtual)
        if merged is not None:
            merged = _drop_labels(merged, virtual)
        current[ev.parent] = merged
    return current.get(0)


def _glue(bd1, bd2, ev, virtual):
    graph = tuple({lab: (lab, u, v) for lab, u, v in bd1.graph + bd2.graph}.values())
    labs1 = {lab for lab, _, _ in bd1.graph}
    labs2 = {lab for lab, _, _ in bd2.graph}
    if len(ev.shared) == 2:
        common = sorted(labs1 & labs2, key=repr)
        if common:
            lab = common[0]
            keep = None if lab in virtual else lab
            return identify_leaves(bd1, bd2, lab, lab, keep=keep, graph=graph)
        u, v = ev.shared
        e1 = _edge_between(bd1, u, v)
        e2 = _edge_between(bd2, u, v)
        if e1 is not None and e2 is not None:
            # the real edge sits on one side, its stand-in on the other
            real, stand = (e1, e2) if e1 not in virtual else (e2, e1)
            if real in labs1:
                return identify_leaves(bd1, bd2, real, stand, keep=real, graph=_without(graph, stand))
            return identify_leaves(bd1, bd2, stand, real, keep=real, graph=_without(graph, stand))
    return bridge(bd1, bd2, ev.shared, graph)


def _without(graph, lab):
    return tuple(t for t in graph if t[0] != lab)


def _edge_between(bd, u, v):
    for lab, a, b in bd.graph:
        if {a, b} == {u, v} and a != b:
            return lab
    return None


def _drop_labels(bd, labels):
    labels = set(labels)
    graph = tuple(t for t in bd.graph if t[0] not in labels)
    leaves = labels & set(bd.leaf_of)
    if not leaves:
        return bd if len(graph) == len(bd.graph) else BranchDecomposition(bd.tree, dict(bd.leaf_map), graph)
    tb = TreeBuilder()
    m = tb.graft(bd)
    for lab in leaves:
        tb.remove(m[bd.leaf_of[lab]])
    if not graph:
        return None
    tb.cleanup()
    return tb.freeze(BranchDecomposition, graph)


# ---------------------------------------------------------------------------
# apices and extra edges


def _caterpillar(tb, labels):
    """Subtree with the given leaf labels; returns its hook node."""
    nodes = [tb.node(lab) for lab in labels]
    hook = nodes[0]
    for x in nodes[1:]:
        w = tb.node()
        tb.link(w, hook)
        tb.link(w, x)
        hook = w
    return hook


def _middles(part, ends):
    """Middle set of every tree edge of a builder (or a ``_Sub`` view of one)."""
    sub = TreeBuilder()
    index = sub.graft(part)
    back = {v: k for k, v in index.items()}
    bd = sub.freeze(BranchDecomposition, [(lab, *ends[lab]) for lab in sub.leaf.values()])
    nodes = sorted(sub.adj)
    return {(back[nodes[a]], back[nodes[b]]): mid for (a, b), mid in bd.middle_sets.items()}


def _hang(tb, hook, ends, A):
    """Attach ``hook`` on a subdivision of the tree edge with the smallest non-apex middle set."""
    others = [x for x in sorted(tb.adj) if x != hook and not _reaches(tb, x, hook)]
    if not others:
        return
    if len(others) == 1:
        tb.link(others[0], hook)
        return
    mids = _middles(_Sub(tb, others), ends)
    a, b = min(mids, key=lambda e: (len(mids[e] - A), len(mids[e]), e))
    tb.link(tb.subdivide(a, b), hook)


class _Sub:
    def __init__(self, tb, nodes):
        keep = set(nodes)
        self.adj = {x: [y for y in tb.adj[x] if y in keep] for x in nodes}
        self.leaf = {x: tb.leaf[x] for x in nodes if x in tb.leaf}


def _reaches(tb, x, target):
    stack, seen = [x], {x}
    while stack:
        y = stack.pop()
        if y == target:
            return True
        for z in tb.adj[y]:
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return False


def attach_edges(bd, triples, apices=()):
    """Hang further edges on ``bd`` without growing middle sets beyond the apices.

    Edges are grouped by their endpoint ``u`` outside ``apices``; each group
    becomes a small subtree placed as a pendant next to a leaf whose edge
    contains ``u`` (or, if there is none, on the tree edge with the smallest
    middle set).  Edges with both ends in ``apices`` go on such an edge too.
    """
    triples = list(triples)
    if not triples:
        return bd
    A = set(apices)
    tb = TreeBuilder()
    graph = list(bd.graph) if bd is not None else []
    if bd is not None:
        tb.graft(bd)
    ends = {lab: (u, v) for lab, u, v in graph}
    groups = {}
    loose = []
    for lab, u, v in triples:
        ends[lab] = (u, v)
        graph.append((lab, u, v))
        key = u if u not in A else (v if v not in A else None)
        if key is None:
            loose.append(lab)
        else:
            groups.setdefault(key, []).append(lab)
    # u is placed where it already crosses the tree, so only apices are added to old middle sets
    for key in sorted(groups, key=repr):
        hook = _caterpillar(tb, groups[key])
        live = [x for x in tb.adj if x != hook and not _reaches(tb, x, hook)]
        mids = _middles(_Sub(tb, live), ends) if len(live) > 1 else {}
        through = [e for e, mid in mids.items() if key in mid]
        hosts = [x for x in sorted(live) if x in tb.leaf and key in ends[tb.leaf[x]]]
        if through:
            a, b = min(through, key=lambda e: (len(mids[e] - A), len(mids[e]), e))
            tb.link(tb.subdivide(a, b), hook)
        elif hosts and tb.adj[hosts[0]]:
            (p,) = tb.adj[hosts[0]]
            tb.link(tb.subdivide(hosts[0], p), hook)
        elif hosts:
            w = tb.node()
            tb.link(w, hosts[0])
            tb.link(w, hook)
        else:
            _hang(tb, hook, ends, A)
    for lab in loose:
        hook = tb.node(lab)
        _hang(tb, hook, ends, A)
    tb.cleanup()
    return tb.freeze(BranchDecomposition, graph)


def add_apices(bd, g, apices):
    """Re-insert every edge of ``g`` incident to ``apices``."""
    A = set(apices)
    if not A:
        return bd
    have = set(bd.leaf_of) if bd is not None else set()
    triples = [t for t in edge_triples(g) if (t[1] in A or t[2] in A) and t[0] not in have]
    return attach_edges(bd, triples, A)
