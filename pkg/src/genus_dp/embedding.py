"""Graphs cellularly embedded on closed surfaces, encoded as signed rotation systems.

Darts: edge ``e`` has darts ``2e`` (end at ``edges[e][0]``) and ``2e + 1``
(end at ``edges[e][1]``).  A *corner* is identified with the dart that
precedes it in the rotation of its vertex, so corner ``d`` sits between
dart ``d`` and its rotation successor.

Internally every embedding is also viewed as a generalized map on
``4m`` flags ``2d + s`` (``s`` is the side of the dart, ``1`` pointing towards
the rotation successor) with three fixed-point-free involutions: ``a0``
crosses to the other end of the edge, ``a1`` turns to the neighbouring dart
at the vertex, ``a2`` flips the side of the dart.  Faces are the orbits of
``<a0, a1>``; dual, radial and medial embeddings are built by rewiring
these involutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Optional

import networkx as nx

from .errors import InvalidNooseError, StructuralInputError, UnsupportedInputError


@dataclass(frozen=True)
class Face:
    id: int
    darts: tuple  # darts leaving along the boundary walk
    corners: tuple  # corner reached after each dart

    def __len__(self):
        return len(self.darts)


@dataclass(frozen=True)
class SurfaceReport:
    component_count: int
    vertex_count: int
    edge_count: int
    face_count: int
    euler_characteristic: int
    euler_genus: int
    orientable: bool

    def as_dict(self):
        return {
            "components": self.component_count,
            "vertices": self.vertex_count,
            "edges": self.edge_count,
            "faces": self.face_count,
            "euler_characteristic": self.euler_characteristic,
            "euler_genus": self.euler_genus,
            "orientable": self.orientable,
        }


@dataclass(frozen=True)
class Noose:
    """Closed alternating walk v0, f0, v1, f1, ... in the radial graph.

    ``corners[i] = (out, in)``: ``out`` is the corner of ``vertices[i]`` on
    ``faces[i]`` and ``in`` the corner of ``vertices[i + 1]`` on ``faces[i]``.
    """

    vertices: tuple
    faces: tuple
    corners: tuple

    @property
    def length(self):
        return len(self.vertices)


@dataclass(frozen=True)
class EmbeddedGraph:
    n: int
    edges: tuple
    rotation: tuple
    sign: tuple
    vlabels: Optional[tuple] = None
    elabels: Optional[tuple] = None

    def __post_init__(self):
        m = len(self.edges)
        if len(self.rotation) != self.n:
            raise StructuralInputError(f"expected {self.n} rotations, got {len(self.rotation)}")
        if len(self.sign) != m:
            raise StructuralInputError("one sign per edge required")
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise StructuralInputError(f"edge {e} has an endpoint out of range")
            if self.sign[e] not in (1, -1):
                raise StructuralInputError(f"edge {e} has sign {self.sign[e]!r}")
        seen = [False] * (2 * m)
        for v, rot in enumerate(self.rotation):
            for d in rot:
                if not 0 <= d < 2 * m:
                    raise StructuralInputError(f"vertex {v}: unknown slot {d}")
                if seen[d]:
                    raise StructuralInputError(f"slot {d} appears twice")
                if self.edges[d >> 1][d & 1] != v:
                    raise StructuralInputError(f"slot {d} listed at vertex {v} but belongs to {self.edges[d >> 1][d & 1]}")
                seen[d] = True
        if not all(seen):
            missing = seen.index(False)
            raise StructuralInputError(f"slot {missing} (edge {missing >> 1}) missing from rotations")
        if self.vlabels is not None and len(self.vlabels) != self.n:
            raise StructuralInputError("vlabels length mismatch")
        if self.elabels is not None and len(self.elabels) != m:
            raise StructuralInputError("elabels length mismatch")

    # -- basic accessors --------------------------------------------------
    @property
    def m(self):
        return len(self.edges)

    def vertex_label(self, v):
        return v if self.vlabels is None else self.vlabels[v]

    def edge_label(self, e):
        return e if self.elabels is None else self.elabels[e]

    def dart_vertex(self, d):
        return self.edges[d >> 1][d & 1]

    def degree(self, v):
        return len(self.rotation[v])

    @cached_property
    def _position(self):
        pos = [0] * (2 * self.m)
        for rot in self.rotation:
            for i, d in enumerate(rot):
                pos[d] = i
        return pos

    def succ(self, d):
        rot = self.rotation[self.dart_vertex(d)]
        return rot[(self._position[d] + 1) % len(rot)]

    def pred(self, d):
        rot = self.rotation[self.dart_vertex(d)]
        return rot[(self._position[d] - 1) % len(rot)]

    def corner_tiles(self, c):
        """The two edges on either side of corner ``c``."""
        return c >> 1, self.succ(c) >> 1

    # -- flag involutions -------------------------------------------------
    @cached_property
    def involutions(self):
        nf = 4 * self.m
        a0 = [0] * nf
        a1 = [0] * nf
        a2 = [0] * nf
        for d in range(2 * self.m):
            other = d ^ 1
            twist = self.sign[d >> 1] < 0
            for s in (0, 1):
                f = 2 * d + s
                a2[f] = 2 * d + 1 - s
                a0[f] = 2 * other + (s if twist else 1 - s)
            a1[2 * d + 1] = 2 * self.succ(d)
            a1[2 * self.succ(d)] = 2 * d + 1
        return a0, a1, a2

    def corner_of_flag(self, f):
        d = f >> 1
        return d if f & 1 else self.pred(d)

    @cached_property
    def faces(self):
        return tuple(_trace(self))

    @cached_property
    def face_of_flag(self):
        out = [0] * (4 * self.m)
        a0, a1, _ = self.involutions
        # same walk order as _trace, so ids agree
        seen = [False] * (4 * self.m)
        fid = 0
        for x in range(4 * self.m):
            if seen[x]:
                continue
            cur = x
            while True:
                seen[cur] = True
                out[cur] = fid
                y = a0[cur]
                seen[y] = True
                out[y] = fid
                cur = a1[y]
                if cur == x:
                    break
            fid += 1
        return out

    @cached_property
    def corner_face(self):
        """Face id of every corner."""
        return tuple(self.face_of_flag[2 * c + 1] for c in range(2 * self.m))

    @cached_property
    def components(self):
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return tuple(tuple(g) for g in sorted(groups.values()))

    def is_connected(self):
        return len(self.components) <= 1

    def to_networkx(self, labelled=False):
        """Abstract multigraph; with ``labelled`` nodes/keys use the original labels."""
        G = nx.MultiGraph()
        for v in range(self.n):
            G.add_node(self.vertex_label(v) if labelled else v)
        for e, (u, v) in enumerate(self.edges):
            if labelled:
                G.add_edge(self.vertex_label(u), self.vertex_label(v), key=self.edge_label(e))
            else:
                G.add_edge(u, v, key=e)
        return G

    def is_simple(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def relabelled(self, vlabels=None, elabels=None):
        return EmbeddedGraph(self.n, self.edges, self.rotation, self.sign,
                             tuple(vlabels) if vlabels is not None else self.vlabels,
                             tuple(elabels) if elabels is not None else self.elabels)


def _trace(g):
    a0, a1, _ = g.involutions
    seen = [False] * (4 * g.m)
    faces = []
    for x in range(4 * g.m):
        if seen[x]:
            continue
        darts, corners = [], []
        cur = x
        while True:
            seen[cur] = True
            y = a0[cur]
            seen[y] = True
            darts.append(cur >> 1)
            corners.append(g.corner_of_flag(y))
            cur = a1[y]
            if cur == x:
                break
        faces.append(Face(len(faces), tuple(darts), tuple(corners)))
    for v in range(g.n):
        if not g.rotation[v]:
            faces.append(Face(len(faces), (), ()))
    return faces


# ---------------------------------------------------------------------------
# construction helpers


def from_edge_rotations(n, edges, rotation, sign=None, vlabels=None, elabels=None):
    """Build from per-vertex cyclic lists of *edge ids*.

    An ordinary edge is resolved to the dart at that vertex; for a loop the
    first occurrence is end 0 and the second end 1.
    """
    edges = tuple((int(u), int(v)) for u, v in edges)
    rot = []
    for v in range(n):
        used = set()
        darts = []
        for e in rotation[v]:
            u0, u1 = edges[e]
            if u0 == v and 2 * e not in used:
                d = 2 * e
            elif u1 == v and 2 * e + 1 not in used:
                d = 2 * e + 1
            else:
                raise StructuralInputError(f"vertex {v}: edge {e} is not incident (or listed too often)")
            used.add(d)
            darts.append(d)
        rot.append(tuple(darts))
    if sign is None:
        sign = (1,) * len(edges)
    return EmbeddedGraph(n, edges, tuple(rot), tuple(sign),
                         tuple(vlabels) if vlabels is not None else None,
                         tuple(elabels) if elabels is not None else None)


def from_gmap(a0, a1, a2, vertex_of_flag, edge_of_flag, n, m, vlabels=None, elabels=None):
    """Signed rotation system of a generalized map with prescribed vertex/edge ids."""
    nf = len(a0)
    edge_flags = [[] for _ in range(m)]
    for f in range(nf):
        edge_flags[edge_of_flag[f]].append(f)
    dart_of_flag = [0] * nf
    ends = []
    for e in range(m):
        fl = sorted(edge_flags[e])
        if len(fl) != 4:
            raise StructuralInputError(f"edge {e}: expected 4 flags, got {len(fl)}")
        first = fl[0]
        end0 = {first, a2[first]}
        for f in fl:
            dart_of_flag[f] = 2 * e if f in end0 else 2 * e + 1
        x = first
        y = a0[x]
        ends.append((vertex_of_flag[x], vertex_of_flag[y], x, y))
    edges = tuple((u, v) for u, v, _, _ in ends)

    vertex_start = {}
    for f in range(nf):
        v = vertex_of_flag[f]
        if v not in vertex_start:
            vertex_start[v] = f
    side = [0] * nf
    rotation = []
    for v in range(n):
        if v not in vertex_start:
            rotation.append(())
            continue
        x = vertex_start[v]
        darts = []
        cur = x
        while True:
            side[cur] = 0
            nxt = a2[cur]
            side[nxt] = 1
            darts.append(dart_of_flag[cur])
            cur = a1[nxt]
            if cur == x:
                break
        rotation.append(tuple(darts))
    sign = []
    for u, v, x, y in ends:
        sign.append(1 if side[y] == 1 - side[x] else -1)
    return EmbeddedGraph(n, edges, tuple(rotation), tuple(sign), vlabels, elabels)


# ---------------------------------------------------------------------------
# topology


def trace_faces(g):
    return list(g.faces)


def is_orientable(g):
    a0, a1, a2 = g.involutions
    color = [-1] * (4 * g.m)
    for s in range(4 * g.m):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for inv in (a0, a1, a2):
                y = inv[x]
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def euler_genus(g):
    c = len(g.components)
    F = len(g.faces)
    chi = g.n - g.m + F
    return SurfaceReport(c, g.n, g.m, F, chi, 2 * c - chi, is_orientable(g))


def genus(g):
    return euler_genus(g).euler_genus


def _require_connected(g, what):
    if g.m == 0 or not g.is_connected():
        raise UnsupportedInputError(f"{what} needs a connected embedding with at least one edge")


def dual(g):
    """Dual embedding; vertex ``i`` is face ``i`` of ``g``, edge ``e`` crosses edge ``e``."""
    _require_connected(g, "dual")
    a0, a1, a2 = g.involutions
    return from_gmap(a2, a1, a0, g.face_of_flag, [f >> 2 for f in range(4 * g.m)], len(g.faces), g.m)


def _radial_gmap(g):
    a0, a1, a2 = g.involutions
    nf = 8 * g.m
    r0 = [0] * nf
    r1 = [0] * nf
    r2 = [0] * nf
    for f in range(4 * g.m):
        for t in (0, 1):
            x = 2 * f + t
            r0[x] = 2 * f + 1 - t
            r1[x] = 2 * (a2[f] if t == 0 else a0[f]) + t
            r2[x] = 2 * a1[f] + t
    return r0, r1, r2


def radial(g):
    """Vertex-face graph: vertices ``0..n-1`` are primal, ``n + i`` is face ``i``.

    Edge ``c`` of the radial graph is corner ``c`` of ``g``.
    """
    _require_connected(g, "radial")
    r0, r1, r2 = _radial_gmap(g)
    vof = []
    eof = []
    for x in range(8 * g.m):
        f, t = x >> 1, x & 1
        vof.append(g.dart_vertex(f >> 1) if t == 0 else g.n + g.face_of_flag[f])
        eof.append(g.corner_of_flag(f))
    return from_gmap(r0, r1, r2, vof, eof, g.n + len(g.faces), 2 * g.m)


def medial(g):
    """Medial graph: vertex ``e`` sits on edge ``e`` of ``g``; edge ``c`` runs through corner ``c``."""
    _require_connected(g, "medial")
    r0, r1, r2 = _radial_gmap(g)
    vof = []
    eof = []
    for x in range(8 * g.m):
        f = x >> 1
        vof.append(f >> 2)
        eof.append(g.corner_of_flag(f))
    return from_gmap(r2, r1, r0, vof, eof, g.m, 2 * g.m)


# ---------------------------------------------------------------------------
# editing


def delete_vertices(g, S):
    """Sub-embedding induced on ``V - S`` (rotations restricted)."""
    S = set(S)
    keep_v = [v for v in range(g.n) if v not in S]
    vmap = {v: i for i, v in enumerate(keep_v)}
    keep_e = [e for e, (u, v) in enumerate(g.edges) if u not in S and v not in S]
    emap = {e: i for i, e in enumerate(keep_e)}
    edges = tuple((vmap[g.edges[e][0]], vmap[g.edges[e][1]]) for e in keep_e)
    rotation = tuple(
        tuple(2 * emap[d >> 1] + (d & 1) for d in g.rotation[v] if (d >> 1) in emap) for v in keep_v
    )
    return EmbeddedGraph(len(keep_v), edges, rotation, tuple(g.sign[e] for e in keep_e),
                         tuple(g.vertex_label(v) for v in keep_v),
                         tuple(g.edge_label(e) for e in keep_e))


def split_components(g):
    """Connected pieces, each a standalone embedding; also the vertex index maps."""
    pieces = []
    for comp in g.components:
        vmap = {v: i for i, v in enumerate(comp)}
        es = sorted({d >> 1 for v in comp for d in g.rotation[v]})
        emap = {e: i for i, e in enumerate(es)}
        edges = tuple((vmap[g.edges[e][0]], vmap[g.edges[e][1]]) for e in es)
        rotation = tuple(tuple(2 * emap[d >> 1] + (d & 1) for d in g.rotation[v]) for v in comp)
        piece = EmbeddedGraph(len(comp), edges, rotation, tuple(g.sign[e] for e in es),
                              tuple(g.vertex_label(v) for v in comp),
                              tuple(g.edge_label(e) for e in es))
        pieces.append((piece, comp))
    return pieces


def insert_edge(g, u, v, after_u, after_v, label=None):
    """Add an edge ``u``-``v`` placed right after the given darts (``None`` = append).

    Both signs are tried and the one that does not raise the Euler genus is kept,
    i.e. the new edge is drawn inside a face common to both corners.
    """
    m = g.m
    base = genus(g)
    for s in (1, -1):
        rot = [list(r) for r in g.rotation]
        for w, after, dart in ((u, after_u, 2 * m), (v, after_v, 2 * m + 1)):
            r = rot[w]
            if after is None:
                r.append(dart)
            else:
                r.insert(r.index(after) + 1, dart)
        elabels = None
        if g.elabels is not None or label is not None:
            elabels = tuple(g.edge_label(e) for e in range(m)) + (m if label is None else label,)
        h = EmbeddedGraph(g.n, g.edges + ((u, v),), tuple(tuple(r) for r in rot), g.sign + (s,),
                          g.vlabels, elabels)
        if genus(h) <= base:
            return h
    raise UnsupportedInputError(f"no face contains both corners for edge {u}-{v}")


# ---------------------------------------------------------------------------
# nooses


def _corner_arcs(g, v, c_in, c_out):
    """Split the rotation at ``v`` at two corners into (arc after c_in, arc after c_out)."""
    rot = g.rotation[v]
    k = len(rot)
    i = g._position[c_in]
    j = g._position[c_out]
    arc1 = [rot[(i + 1 + t) % k] for t in range((j - i) % k)]
    arc2 = [rot[(j + 1 + t) % k] for t in range((i - j) % k)]
    return arc1, arc2


def validate_noose(g, noose):
    L = len(noose.vertices)
    if L == 0 or len(noose.faces) != L or len(noose.corners) != L:
        raise InvalidNooseError("noose must alternate vertices and faces")
    if len(set(noose.vertices)) != L:
        raise InvalidNooseError("noose vertices must be distinct")
    cf = g.corner_face
    for i in range(L):
        v, f = noose.vertices[i], noose.faces[i]
        out_c, in_c = noose.corners[i]
        w = noose.vertices[(i + 1) % L]
        if not (0 <= out_c < 2 * g.m and 0 <= in_c < 2 * g.m):
            raise InvalidNooseError("unknown corner")
        if g.dart_vertex(out_c) != v or cf[out_c] != f:
            raise InvalidNooseError(f"corner {out_c} is not a corner of vertex {v} on face {f}")
        if g.dart_vertex(in_c) != w or cf[in_c] != f:
            raise InvalidNooseError(f"corner {in_c} is not a corner of vertex {w} on face {f}")
    for i in range(L):
        if noose.corners[i - 1][1] == noose.corners[i][0]:
            raise InvalidNooseError(f"noose enters and leaves vertex {noose.vertices[i]} through one corner")


def _cut(g, noose):
    """Split noose vertices along their corners; returns graph and copy ids."""
    validate_noose(g, noose)
    rotation = [list(r) for r in g.rotation]
    dart_owner = {}
    vlabels = [g.vertex_label(v) for v in range(g.n)]
    copies = []
    n = g.n
    for i, v in enumerate(noose.vertices):
        c_in = noose.corners[i - 1][1]
        c_out = noose.corners[i][0]
        arc1, arc2 = _corner_arcs(g, v, c_in, c_out)
        rotation[v] = arc1
        rotation.append(arc2)
        vlabels.append(g.vertex_label(v))
        for d in arc2:
            dart_owner[d] = n
        copies.append((v, n))
        n += 1
    edges = []
    for e, (u, w) in enumerate(g.edges):
        edges.append((dart_owner.get(2 * e, u), dart_owner.get(2 * e + 1, w)))
    h = EmbeddedGraph(n, tuple(edges), tuple(tuple(r) for r in rotation), g.sign,
                      tuple(vlabels), tuple(g.edge_label(e) for e in range(g.m)))
    return h, copies


def cut_along_noose(g, noose):
    """Cut the surface along ``noose`` and cap the boundary with disks.

    Returns the resulting connected embedded pieces; vertex labels are kept so
    the two copies of a noose vertex share the original label.
    """
    h, _ = _cut(g, noose)
    return [p for p, _ in split_components(h)]


@dataclass(frozen=True)
class NooseCut:
    noose: Noose
    pieces: tuple  # (EmbeddedGraph, copy-vertex indices inside that piece)
    separating: bool
    contractible: bool
    separates_graph: bool

    @property
    def useful(self):
        return (not self.contractible) or self.separates_graph


def classify_noose(g, noose):
    h, copies = _cut(g, noose)
    copy_ids = {c for pair in copies for c in pair}
    pieces = []
    for piece, comp in split_components(h):
        local = tuple(i for i, v in enumerate(comp) if v in copy_ids)
        pieces.append((piece, local))
    separating = len(pieces) >= 2
    if not separating:
        return NooseCut(noose, tuple(pieces), False, False, False)
    contractible = any(genus(p) == 0 for p, _ in pieces)
    separates = all(p.n > len(local) for p, local in pieces)
    return NooseCut(noose, tuple(pieces), True, contractible, separates)


def _chords_cross(face, a, b, c, d):
    pos = {corner: i for i, corner in enumerate(face.corners)}
    pa, pb, pc, pd = pos[a], pos[b], pos[c], pos[d]
    lo, hi = min(pa, pb), max(pa, pb)
    return (lo < pc < hi) != (lo < pd < hi)


def iter_short_nooses(g):
    """Candidate nooses of length 1 then 2, in lexicographic vertex order."""
    cf = g.corner_face
    by_vertex_face = {}
    for c in range(2 * g.m):
        by_vertex_face.setdefault(g.dart_vertex(c), {}).setdefault(cf[c], []).append(c)
    for v in range(g.n):
        for f, cs in sorted(by_vertex_face.get(v, {}).items()):
            for c1, c2 in combinations(sorted(cs), 2):
                yield Noose((v,), (f,), ((c1, c2),))
    faces = g.faces
    for u in range(g.n):
        fu = by_vertex_face.get(u, {})
        for v in range(u + 1, g.n):
            fv = by_vertex_face.get(v, {})
            common = sorted(set(fu) & set(fv))
            for i, f in enumerate(common):
                for h in common[i:]:
                    seen = set()
                    for c1 in fu[f]:
                        for c2 in fv[f]:
                            for c3 in fv[h]:
                                for c4 in fu[h]:
                                    if c1 == c4 or c2 == c3:
                                        continue
                                    if f == h:
                                        key = frozenset([(c1, c2), (c4, c3)])
                                        if key in seen or _chords_cross(faces[f], c1, c2, c3, c4):
                                            continue
                                        seen.add(key)
                                    yield Noose((u, v), (f, h), ((c1, c2), (c3, c4)))


def find_short_noose_cut(g):
    for noose in iter_short_nooses(g):
        info = classify_noose(g, noose)
        if info.useful:
            return info
    return None


def find_short_noose(g):
    """A noose of length <= 2 that is non-contractible or whose vertices separate ``g``."""
    _require_connected(g, "find_short_noose")
    info = find_short_noose_cut(g)
    return None if info is None else info.noose


def isomorphic(g, h):
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx())
