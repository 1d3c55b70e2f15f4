"""Dynamic programming over rooted branch decompositions: Vertex Cover and
Connected Vertex Cover, brute-force oracles and table instrumentation.

Tables map a state on the middle set to the minimum number of solution
vertices among the edges below; a budget query compares that minimum with
the budget.  VC states are the selected part of the middle set, CVC states
are canonical partial packings of it (each block is the trace of one
component of the partial solution).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .decomposition import BranchDecomposition, branch_decomposition, root
from .errors import GuardExceededError, StructuralInputError, UnsupportedInputError
from .packings import bell, catalan, noncrossing_packing_ceiling, vertices_and_edges

MAX_BRUTE_VERTICES = 20


# ---------------------------------------------------------------------------
# problems


class VertexCover:
    name = "vc"
    empty = frozenset()

    def leaf(self, u, v):
        if u == v:
            return [((u,), frozenset([u]))]
        return [((u,), frozenset([u])), ((v,), frozenset([v])), ((u, v), frozenset([u, v]))]

    def selected(self, state):
        return state

    def join(self, s1, s2):
        return s1 | s2

    def project(self, state, mid, at_root):
        return state & mid


class ConnectedVertexCover:
    name = "cvc"
    empty = ()

    def leaf(self, u, v):
        if u == v:
            return [((u,), ((u,),))]
        a, b = sorted((u, v), key=repr)
        return [((u,), ((u,),)), ((v,), ((v,),)), ((u, v), ((a,), (b,))), ((u, v), ((a, b),))]

    def selected(self, state):
        return frozenset(x for b in state for x in b)

    def join(self, s1, s2):
        blocks = [set(b) for b in s1 + s2]
        merged = []
        for b in blocks:
            hit = [m for m in merged if m & b]
            for m in hit:
                b |= m
                merged.remove(m)
            merged.append(b)
        return tuple(sorted(tuple(sorted(b, key=repr)) for b in merged))

    def project(self, state, mid, at_root):
        kept = []
        for b in state:
            r = tuple(x for x in b if x in mid)
            if not r:
                # a component that left the boundary must be the whole solution
                if at_root and len(state) == 1:
                    return ()
                return None
            kept.append(r)
        return tuple(sorted(kept))


PROBLEMS = {"vc": VertexCover(), "cvc": ConnectedVertexCover()}


# ---------------------------------------------------------------------------
# engine


@dataclass
class DPRun:
    problem: str
    optimum: int
    witness: frozenset
    rbd: object
    tables: dict = field(repr=False)  # node -> {state: cost}
    back: dict = field(repr=False)  # node -> {state: back-pointer}

    def decide(self, budget):
        return self.optimum <= budget


def _check_decomposition(triples, rbd):
    have = sorted(map(repr, rbd.graph))
    want = sorted(map(repr, triples))
    if have != want:
        raise StructuralInputError("decomposition does not match the graph")


def _solve_node(problem, rbd, x, tables, back):
    ch = rbd.children[x]
    mid = rbd.middle[x]
    at_root = x == rbd.root_node
    table = {}
    ptr = {}
    if not ch:
        u, v = _leaf_ends(rbd, x)
        for chosen, state in problem.leaf(u, v):
            s = problem.project(state, mid, at_root)
            if s is None:
                continue
            cost = len(chosen)
            if s not in table or cost < table[s]:
                table[s] = cost
                ptr[s] = ("leaf", frozenset(chosen))
        return table, ptr
    c1, c2 = ch
    shared = rbd.middle[c1] & rbd.middle[c2]
    index = {}
    for s2, k2 in tables[c2].items():
        index.setdefault(problem.selected(s2) & shared, []).append((s2, k2))
    for s1, k1 in tables[c1].items():
        sel1 = problem.selected(s1)
        for s2, k2 in index.get(sel1 & shared, ()):
            overlap = len(sel1 & problem.selected(s2))
            s = problem.project(problem.join(s1, s2), mid, at_root)
            if s is None:
                continue
            cost = k1 + k2 - overlap
            if s not in table or cost < table[s]:
                table[s] = cost
                ptr[s] = ("join", s1, s2)
    return table, ptr


def _leaf_ends(rbd, x):
    lab = next(iter(rbd.edge_sets[x]))
    return rbd.bd.ends[lab]


def run_dp(problem, g, rbd=None):
    """Fill every table bottom-up; returns a :class:`DPRun`."""
    if isinstance(problem, str):
        problem = PROBLEMS[problem]
    verts, triples = vertices_and_edges(g)
    if problem.name == "cvc":
        G = nx.Graph()
        G.add_nodes_from(verts)
        G.add_edges_from((u, v) for _, u, v in triples)
        if len(verts) and not nx.is_connected(G):
            raise UnsupportedInputError("connected vertex cover needs a connected graph")
    if not triples:
        return DPRun(problem.name, 0, frozenset(), rbd, {}, {})
    if rbd is None:
        rbd = branch_decomposition(triples)
    if isinstance(rbd, BranchDecomposition):
        rbd = root(rbd)
    _check_decomposition(triples, rbd)
    tables, back = {}, {}
    for x in rbd.postorder():
        tables[x], back[x] = _solve_node(problem, rbd, x, tables, back)
    final = tables[rbd.root_node]
    if problem.empty not in final:
        raise UnsupportedInputError("no feasible solution")
    witness = _witness(rbd, back, rbd.root_node, problem.empty)
    return DPRun(problem.name, final[problem.empty], witness, rbd, tables, back)


def _witness(rbd, back, node, state):
    out = set()
    stack = [(node, state)]
    while stack:
        x, s = stack.pop()
        p = back[x][s]
        if p[0] == "leaf":
            out |= p[1]
        else:
            c1, c2 = rbd.children[x]
            stack.append((c1, p[1]))
            stack.append((c2, p[2]))
    return frozenset(out)


def solve_vc(g, rbd=None, budget=0, witness=False):
    """Does ``g`` have a vertex cover of at most ``budget`` vertices?"""
    run = run_dp("vc", g, rbd)
    ok = run.decide(budget)
    if witness:
        return ok, (run.witness if ok else None)
    return ok


def solve_cvc(g, rbd=None, budget=0, witness=False):
    """Does connected ``g`` have a connected vertex cover of at most ``budget`` vertices?"""
    run = run_dp("cvc", g, rbd)
    ok = run.decide(budget)
    if witness:
        return ok, (run.witness if ok else None)
    return ok


# ---------------------------------------------------------------------------
# oracles


def _is_cover(S, triples):
    return all(u in S or v in S for _, u, v in triples)


def _connected(S, triples):
    if len(S) <= 1:
        return True
    G = nx.Graph()
    G.add_nodes_from(S)
    G.add_edges_from((u, v) for _, u, v in triples if u in S and v in S)
    return nx.is_connected(G)


def _brute(g, budget, connected):
    verts, triples = vertices_and_edges(g)
    if len(verts) > MAX_BRUTE_VERTICES:
        raise GuardExceededError(f"{len(verts)} vertices exceeds the brute-force guard of {MAX_BRUTE_VERTICES}")
    for r in range(0, min(budget, len(verts)) + 1):
        for S in combinations(verts, r):
            S = set(S)
            if _is_cover(S, triples) and (not connected or _connected(S, triples)):
                return True
    return False


def brute_force_vc(g, budget):
    return _brute(g, budget, False)


def brute_force_cvc(g, budget):
    verts, triples = vertices_and_edges(g)
    G = nx.Graph()
    G.add_nodes_from(verts)
    G.add_edges_from((u, v) for _, u, v in triples)
    if len(verts) and not nx.is_connected(G):
        raise UnsupportedInputError("connected vertex cover needs a connected graph")
    return _brute(g, budget, True)


def check_witness(g, S, connected=False):
    _, triples = vertices_and_edges(g)
    return _is_cover(S, triples) and (not connected or _connected(S, triples))


def table_from_scratch(problem, g, rbd, node):
    """Table at ``node`` recomputed by enumerating partial solutions directly."""
    problem = PROBLEMS[problem] if isinstance(problem, str) else problem
    _, triples = vertices_and_edges(g)
    ends = rbd.bd.ends
    below = [ends[lab] for lab in rbd.edge_sets[node]]
    verts = sorted({x for e in below for x in e}, key=repr)
    if len(verts) > MAX_BRUTE_VERTICES or (problem.name == "cvc" and len(below) > 16):
        raise GuardExceededError("subtree too large for direct enumeration")
    mid = rbd.middle[node]
    at_root = node == rbd.root_node
    table = {}
    for r in range(len(verts) + 1):
        for S in combinations(verts, r):
            S = frozenset(S)
            if not all(u in S or v in S for u, v in below):
                continue
            if problem.name == "vc":
                states = [S & mid]
            else:
                inner = [(u, v) for u, v in below if u in S and v in S]
                states = []
                for k in range(len(inner) + 1):
                    for F in combinations(inner, k):
                        comps = _components_of(S, F)
                        traces = [tuple(sorted((x for x in c if x in mid), key=repr)) for c in comps]
                        if any(not t for t in traces):
                            if at_root and len(traces) == 1:
                                states.append(())
                            continue
                        states.append(tuple(sorted(traces)))
            for s in states:
                if s not in table or len(S) < table[s]:
                    table[s] = len(S)
    return table


def _components_of(S, F):
    G = nx.Graph()
    G.add_nodes_from(S)
    G.add_edges_from(F)
    return [sorted(c, key=repr) for c in nx.connected_components(G)]


# ---------------------------------------------------------------------------
# instrumentation


@dataclass(frozen=True)
class EdgeStats:
    node: int
    mid: int
    entries: int  # states after canonicalisation
    budget_entries: int  # (state, budget) pairs for budgets up to the given one
    packings: int  # distinct packings (CVC) or subsets (VC)
    subsets: int
    bell: int | None
    catalan: int
    ncp_ceiling: int


@dataclass(frozen=True)
class TableStats:
    problem: str
    budget: int
    edges: tuple
    max_mid: int
    max_entries: int
    max_packings: int

    def to_json(self):
        return {
            "problem": self.problem,
            "budget": self.budget,
            "max_mid": self.max_mid,
            "max_entries": self.max_entries,
            "max_packings": self.max_packings,
            "edges": [
                {
                    "node": s.node, "mid": s.mid, "entries": s.entries, "budget_entries": s.budget_entries,
                    "packings": s.packings, "subsets": s.subsets, "bell": s.bell, "catalan": s.catalan,
                    "ncp_ceiling": s.ncp_ceiling,
                }
                for s in self.edges
            ],
        }


def table_stats(run, budget=None):
    """Exact per-edge table sizes of a finished run, with the counting baselines."""
    if budget is None:
        budget = run.optimum
    rows = []
    for x in sorted(run.tables):
        t = run.tables[x]
        k = len(run.rbd.middle[x])
        rows.append(EdgeStats(
            x, k, len(t), sum(budget - c + 1 for c in t.values() if c <= budget), len(t),
            2 ** k, bell(k) if k <= 20 else None, catalan(k), noncrossing_packing_ceiling(k),
        ))
    return TableStats(
        run.problem, budget, tuple(rows),
        max((r.mid for r in rows), default=0),
        max((r.entries for r in rows), default=0),
        max((r.packings for r in rows), default=0),
    )
