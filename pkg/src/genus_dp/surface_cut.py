"""Surface cut decompositions: pipeline, noose certificates and verification."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .decomposition import branch_decomposition, edge_triples
from .embedding import Noose, genus
from .errors import DegenerateInputError, InfeasibleError, UnsupportedInputError
from .polyhedral import polyhedral_decomposition
from .transforms import (
    add_apices,
    attach_edges,
    branch_to_medial_carving,
    carving_to_bond,
    carving_to_branch,
    merge_clique_sums,
)


# ---------------------------------------------------------------------------
# tree-cotree


@dataclass(frozen=True)
class TreeCotree:
    T: frozenset
    C: frozenset
    X: frozenset


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.p[max(a, b)] = min(a, b)
        return True


def tree_cotree(g, forced_T=(), forced_C=()):
    """Spanning tree T, dual spanning tree C on the remaining edges, leftover X.

    Edge ids are indices into ``g.edges``.
    """
    if g.m == 0 or not g.is_connected():
        raise UnsupportedInputError("tree-cotree needs a connected graph with edges")
    forced_T = sorted(set(forced_T))
    forced_C = sorted(set(forced_C))
    if set(forced_T) & set(forced_C):
        raise InfeasibleError("an edge cannot be forced into both the tree and the cotree")
    dsu = _DSU(g.n)
    T = set()
    for e in forced_T:
        u, v = g.edges[e]
        if not dsu.union(u, v):
            raise InfeasibleError(f"forced tree edges contain a cycle (edge {e})")
        T.add(e)
    blocked = set(forced_C)
    for e in range(g.m):
        if e in T or e in blocked:
            continue
        u, v = g.edges[e]
        if dsu.union(u, v):
            T.add(e)
    if len(T) != g.n - 1:
        raise InfeasibleError("forced cotree edges disconnect the graph")
    fof = g.face_of_flag
    ddsu = _DSU(len(g.faces))
    C = set()

    def faces_of(e):
        return fof[4 * e], fof[4 * e + 1]

    for e in forced_C:
        if not ddsu.union(*faces_of(e)):
            raise InfeasibleError(f"forced cotree edges contain a dual cycle (edge {e})")
        C.add(e)
    for e in range(g.m):
        if e in T or e in C:
            continue
        if ddsu.union(*faces_of(e)):
            C.add(e)
    X = frozenset(range(g.m)) - T - C
    return TreeCotree(frozenset(T), frozenset(C), X)


# ---------------------------------------------------------------------------
# noose systems


@dataclass(frozen=True)
class NooseSystem:
    nooses: tuple
    multiplicity: dict  # primal vertex -> number of nooses through it (only repeated points)

    @property
    def theta(self):
        return theta(self)


def theta(ns):
    return sum(k - 1 for k in ns.multiplicity.values())


def noose_system(nooses):
    count = Counter(v for n in nooses for v in set(n.vertices))
    return NooseSystem(tuple(nooses), {v: k for v, k in sorted(count.items()) if k > 1})


def _split_at_repeats(vertices, faces, corners):
    """Split a closed alternating trail into nooses with distinct vertices."""
    out = []
    stack = [(list(vertices), list(faces), list(corners))]
    while stack:
        vs, fs, cs = stack.pop()
        seen = {}
        cut = None
        for i, v in enumerate(vs):
            if v in seen:
                cut = (seen[v], i)
                break
            seen[v] = i
        if cut is None:
            out.append(Noose(tuple(vs), tuple(fs), tuple(cs)))
            continue
        i, j = cut
        # inner loop v_i .. v_{j-1} closes back at v_j == v_i
        inner = (vs[i:j], fs[i:j], cs[i:j])
        outer = (vs[:i] + vs[j:], fs[:i] + fs[j:], cs[:i] + cs[j:])
        stack.append(outer)
        stack.append(inner)
    return out


def extract_nooses(h, black):
    """Nooses separating the black edges of ``h`` (edge ids) from the rest.

    A corner is grey when its two neighbouring edges have different colours.
    At every vertex and every face the grey corners are paired so that each
    maximal black run is enclosed; the pairing is traced into closed trails
    which are then split at repeated vertices.
    """
    black = set(black)

    def col(e):
        return e in black

    grey = [col(c >> 1) != col(h.succ(c) >> 1) for c in range(2 * h.m)]
    degree = Counter()
    for c in range(2 * h.m):
        if grey[c]:
            degree[("v", h.dart_vertex(c))] += 1
            degree[("f", h.corner_face[c])] += 1
    if any(k % 2 for k in degree.values()):
        raise AssertionError("grey subgraph has a vertex of odd degree")

    def pair_cyclic(seq):
        """seq: cyclic list of (corner, colour of the tile after it); pair grey corners per black run."""
        out = {}
        idx = [i for i, (c, _) in enumerate(seq) if grey[c]]
        if not idx:
            return out
        k = len(seq)
        for i in idx:
            c, after = seq[i]
            if after:  # a black run starts after c; find where it ends
                j = (i + 1) % k
                while not grey[seq[j][0]]:
                    j = (j + 1) % k
                out[c] = seq[j][0]
                out[seq[j][0]] = c
        return out

    vpair = {}
    for v in range(h.n):
        seq = [(d, col(h.succ(d) >> 1)) for d in h.rotation[v]]
        vpair.update(pair_cyclic(seq))
    fpair = {}
    for f in h.faces:
        # the corners of a face in walk order; the tile after corner i is dart i+1
        k = len(f.corners)
        seq = [(f.corners[i], col(f.darts[(i + 1) % k] >> 1)) for i in range(k)]
        fpair.update(pair_cyclic(seq))
    used = set()
    nooses = []
    for start in range(2 * h.m):
        if not grey[start] or start in used:
            continue
        vs, fs, cs = [], [], []
        c = start
        while True:
            # c is the corner leaving vertex v through face f
            used.add(c)
            c_in = fpair[c]
            used.add(c_in)
            vs.append(h.dart_vertex(c))
            fs.append(h.corner_face[c])
            cs.append((c, c_in))
            c = vpair[c_in]
            if c == start:
                break
        nooses.extend(_split_at_repeats(vs, fs, cs))
    return nooses


def _tile_components(h, black):
    """Regions left after cutting along the grey corners (tiles = edges)."""
    black = set(black)
    dsu = _DSU(h.m)
    for c in range(2 * h.m):
        a, b = c >> 1, h.succ(c) >> 1
        if (a in black) == (b in black):
            dsu.union(a, b)
    return len({dsu.find(e) for e in range(h.m)})


# ---------------------------------------------------------------------------
# pipeline


@dataclass(frozen=True)
class ComponentStage:
    component: int
    edges: int
    euler_genus: int
    branch_width: int
    carving_width: int
    bond_width: int
    final_width: int
    exact: bool


@dataclass(frozen=True)
class EdgeCertificate:
    tree_edge: tuple
    mid: tuple
    mid_minus_apices: tuple
    kind: str  # "small" or "noose"
    component: int = -1
    nooses: tuple = ()
    theta: int = 0
    x_size: int = 0
    regions: int = 0
    covered: bool = True
    passed: bool = True
    reason: str = ""


@dataclass(frozen=True)
class SurfaceCutDecomposition:
    bd: object
    pd: object
    stages: tuple
    merged_width: int
    width: int
    k_used: int
    certificates: tuple = field(default=(), repr=False)


def surface_cut_decomposition(g, exact_limit=12):
    """Branch decomposition whose wide middle sets sit on few nooses of one polyhedral component.

    The transform bounds (medial carving, clique-sum merge, apex insertion)
    are asserted on every run.
    """
    if g.m == 0:
        raise DegenerateInputError("surface cut decomposition of an edgeless graph")
    pd = polyhedral_decomposition(g)
    parts = []
    stages = []
    for cid, c in zip(pd.component_ids, pd.components):
        bd = branch_decomposition(c, exact_limit)
        k = bd.width
        if c.m >= 2:
            cd = branch_to_medial_carving(bd, c, check_polyhedral=False)
            if cd.width > 12 * k:
                raise AssertionError(f"medial carving width {cd.width} exceeds 12 * {k}")
            bond = carving_to_bond(cd)
            out = carving_to_branch(bond, c)
            cw, bw_bond = cd.width, bond.width
        else:
            out, cw, bw_bond = bd, 0, 0
        parts.append(out)
        stages.append(ComponentStage(cid, c.m, genus(c), k, cw, bw_bond, out.width, c.m <= exact_limit))
    merged = merge_clique_sums(parts, pd)
    merged_width = merged.width if merged is not None else 0
    part_width = max((p.width for p in parts), default=0)
    if merged_width > max(2, part_width):
        raise AssertionError(f"clique-sum merge width {merged_width} exceeds max(2, {part_width})")
    final = add_apices(merged, g, pd.apices)
    rest = [t for t in pd.extra_edges if t[1] not in pd.apices and t[2] not in pd.apices]
    final = attach_edges(final, rest, pd.apices)
    if final is None:
        final = attach_edges(None, edge_triples(g))
    if final.width > max(merged_width, 1) + len(pd.apices):
        raise AssertionError(f"apex width {final.width} exceeds max({merged_width}, 1) + {len(pd.apices)}")
    k_used = max((s.branch_width for s in stages), default=0)
    return SurfaceCutDecomposition(final, pd, tuple(stages), merged_width, final.width, k_used, certify(final, pd))


def _virtual_proxies(pd):
    """For every (component id, virtual label): real edge labels it stands for."""
    children = {ev.parent: ev.children for ev in pd.gluing}
    event_of = {lab: ev for ev in pd.gluing for lab in ev.virtual}

    def leaves(node):
        if node not in children:
            return [node]
        return [x for c in children[node] for x in leaves(c)]

    comp_edges = {cid: {c.edge_label(e) for e in range(c.m)} for cid, c in zip(pd.component_ids, pd.components)}
    out = {}
    for cid, labs in comp_edges.items():
        for lab in labs:
            if lab not in event_of:
                continue
            ev = event_of[lab]
            mine = next(ch for ch in ev.children if cid in leaves(ch))
            other = [ch for ch in ev.children if ch != mine]
            real = set()
            for ch in other:
                for leaf in leaves(ch):
                    real |= {x for x in comp_edges.get(leaf, ()) if x not in pd.virtual_edges}
            out[(cid, lab)] = real
    return out


def certify(bd, pd, proxies=None):
    """Per tree edge certificate: small middle set, or a noose system in one component."""
    if proxies is None:
        proxies = _virtual_proxies(pd)
    A = pd.apices
    comps = list(zip(pd.component_ids, pd.components))
    comp_vertices = {cid: {c.vertex_label(v) for v in range(c.n)} for cid, c in comps}
    sides = bd.directed_sides()
    xs = {}
    certs = []
    for (p, x), labels in sorted(sides.items()):
        te = (min(p, x), max(p, x))
        mid = bd.middle_sets[te]
        rest = sorted(mid - A, key=repr)
        if len(rest) <= 2:
            certs.append(EdgeCertificate(te, tuple(sorted(mid, key=repr)), tuple(rest), "small"))
            continue
        hosts = [cid for cid, _ in comps if set(rest) <= comp_vertices[cid]]
        if len(hosts) != 1:
            certs.append(EdgeCertificate(te, tuple(sorted(mid, key=repr)), tuple(rest), "noose",
                                         passed=False, covered=False,
                                         reason=f"middle set lies in {len(hosts)} components"))
            continue
        cid = hosts[0]
        h = dict(comps)[cid]
        side = set(labels)
        black = set()
        for e in range(h.m):
            lab = h.edge_label(e)
            if (cid, lab) in proxies:
                real = proxies[(cid, lab)]
                inside = sum(1 for r in real if r in side)
                if inside * 2 > len(real):
                    black.add(e)
            elif lab in side:
                black.add(e)
        nooses = extract_nooses(h, black)
        ns = noose_system(nooses)
        if cid not in xs:
            from .embedding import radial

            xs[cid] = len(tree_cotree(radial(h)).X)
        on_nooses = {h.vertex_label(v) for n in nooses for v in n.vertices}
        covered = set(rest) <= on_nooses
        regions = _tile_components(h, black)
        reasons = []
        if not covered:
            reasons.append("middle set not covered by nooses")
        if len(nooses) > 1 + xs[cid]:
            reasons.append("too many nooses")
        if regions != 2:
            reasons.append(f"cut leaves {regions} regions")
        certs.append(EdgeCertificate(
            te, tuple(sorted(mid, key=repr)), tuple(rest), "noose", cid,
            tuple(nooses), ns.theta, xs[cid], regions, covered, not reasons, "; ".join(reasons),
        ))
    return tuple(certs)


@dataclass(frozen=True)
class VerificationReport:
    certificates: tuple
    passed: bool
    max_nooses: int
    max_theta: int
    failures: tuple

    def to_json(self):
        return {
            "passed": self.passed,
            "max_nooses": self.max_nooses,
            "max_theta": self.max_theta,
            "edges": [
                {
                    "tree_edge": list(c.tree_edge),
                    "mid": len(c.mid),
                    "mid_minus_apices": len(c.mid_minus_apices),
                    "kind": c.kind,
                    "nooses": len(c.nooses),
                    "theta": c.theta,
                    "x": c.x_size,
                    "regions": c.regions,
                    "passed": c.passed,
                    "reason": c.reason,
                }
                for c in self.certificates
            ],
        }


def verify_scd(scd, max_nooses=None, max_theta=None):
    """Recompute all certificates and check them against optional ceilings."""
    certs = certify(scd.bd, scd.pd)
    out = []
    for c in certs:
        reasons = [c.reason] if c.reason else []
        if c.kind == "noose":
            if max_nooses is not None and len(c.nooses) > max_nooses:
                reasons.append(f"{len(c.nooses)} nooses exceed {max_nooses}")
            if max_theta is not None and c.theta > max_theta:
                reasons.append(f"theta {c.theta} exceeds {max_theta}")
        if reasons and c.passed:
            c = EdgeCertificate(c.tree_edge, c.mid, c.mid_minus_apices, c.kind, c.component, c.nooses,
                                c.theta, c.x_size, c.regions, c.covered, False, "; ".join(reasons))
        out.append(c)
    failures = tuple(c for c in out if not c.passed)
    noose_certs = [c for c in out if c.kind == "noose"]
    return VerificationReport(
        tuple(out), not failures,
        max((len(c.nooses) for c in noose_certs), default=0),
        max((c.theta for c in noose_certs), default=0),
        failures,
    )
