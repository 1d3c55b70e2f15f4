"""Reading and writing the ``.emb`` text format.

::

    emb <n> <m>
    v <id>: <slot> <slot> ...      # cyclic rotation, slots are edge ids
    e <id> <u> <v> <sign>          # sign is + or -

For a loop the two ends can be written ``<e>.0`` and ``<e>.1``; a bare id
resolves to the first free end.  ``#`` starts a comment.
"""

from __future__ import annotations

from pathlib import Path

from .embedding import EmbeddedGraph
from .errors import StructuralInputError


def _int(tok, lineno, what):
    try:
        val = int(tok)
    except ValueError:
        raise StructuralInputError(f"expected integer {what}, got {tok!r}", lineno)
    if val < 0:
        raise StructuralInputError(f"negative {what} {val}", lineno)
    return val


def parse_emb(text):
    header = None
    vlines = {}
    elines = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if header is None:
            if toks[0] != "emb" or len(toks) != 3:
                raise StructuralInputError("expected header 'emb <n> <m>'", lineno)
            header = (_int(toks[1], lineno, "vertex count"), _int(toks[2], lineno, "edge count"))
            continue
        if toks[0] == "v":
            head, _, rest = line[1:].partition(":")
            if not _:
                raise StructuralInputError("vertex line needs ':'", lineno)
            v = _int(head.strip(), lineno, "vertex id")
            if v in vlines:
                raise StructuralInputError(f"vertex {v} listed twice", lineno)
            vlines[v] = (lineno, rest.split())
        elif toks[0] == "e":
            if len(toks) != 5:
                raise StructuralInputError("edge line must be 'e <id> <u> <v> <sign>'", lineno)
            e = _int(toks[1], lineno, "edge id")
            if e in elines:
                raise StructuralInputError(f"edge {e} listed twice", lineno)
            if toks[4] not in ("+", "-"):
                raise StructuralInputError(f"sign must be + or -, got {toks[4]!r}", lineno)
            elines[e] = (lineno, _int(toks[2], lineno, "endpoint"), _int(toks[3], lineno, "endpoint"),
                         1 if toks[4] == "+" else -1)
        else:
            raise StructuralInputError(f"unknown record {toks[0]!r}", lineno)
    if header is None:
        raise StructuralInputError("empty input")
    n, m = header
    if sorted(vlines) != list(range(n)):
        raise StructuralInputError(f"expected vertex lines 0..{n - 1}")
    if sorted(elines) != list(range(m)):
        raise StructuralInputError(f"expected edge lines 0..{m - 1}")
    edges = []
    for e in range(m):
        lineno, u, v, _ = elines[e]
        if u >= n or v >= n:
            raise StructuralInputError(f"edge {e} endpoint out of range", lineno)
        edges.append((u, v))
    used = set()
    rotation = []
    for v in range(n):
        lineno, slots = vlines[v]
        darts = []
        for tok in slots:
            if "." in tok:
                es, _, end = tok.partition(".")
                e = _int(es, lineno, "slot")
                if end not in ("0", "1"):
                    raise StructuralInputError(f"bad slot end in {tok!r}", lineno)
                if e >= m:
                    raise StructuralInputError(f"slot {tok} names unknown edge", lineno)
                d = 2 * e + int(end)
                if edges[e][int(end)] != v:
                    raise StructuralInputError(f"slot {tok} does not end at vertex {v}", lineno)
            else:
                e = _int(tok, lineno, "slot")
                if e >= m:
                    raise StructuralInputError(f"slot {e} names unknown edge", lineno)
                if edges[e][0] == v and 2 * e not in used:
                    d = 2 * e
                elif edges[e][1] == v and 2 * e + 1 not in used:
                    d = 2 * e + 1
                else:
                    raise StructuralInputError(f"slot {e} is not a free end at vertex {v}", lineno)
            if d in used:
                raise StructuralInputError(f"slot {tok} used twice", lineno)
            used.add(d)
            darts.append(d)
        rotation.append(tuple(darts))
    for d in range(2 * m):
        if d not in used:
            raise StructuralInputError(f"end {d & 1} of edge {d >> 1} missing from rotations", elines[d >> 1][0])
    return EmbeddedGraph(n, tuple(edges), tuple(rotation), tuple(elines[e][3] for e in range(m)))


def format_emb(g):
    lines = [f"emb {g.n} {g.m}"]
    for v in range(g.n):
        toks = []
        for d in g.rotation[v]:
            e = d >> 1
            toks.append(f"{e}.{d & 1}" if g.edges[e][0] == g.edges[e][1] else str(e))
        lines.append(f"v {v}: " + " ".join(toks))
    for e, (u, v) in enumerate(g.edges):
        lines.append(f"e {e} {u} {v} {'+' if g.sign[e] > 0 else '-'}")
    return "\n".join(lines) + "\n"


def read_emb(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StructuralInputError(f"cannot read {path}: {exc.strerror}")
    return parse_emb(text)


def write_emb(g, path):
    Path(path).write_text(format_emb(g))
