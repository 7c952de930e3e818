"""Cube complexes glued from unit cubes, and the cubulation of dodecahedral complexes.

A cube has corners 0..7 (bit ``a`` set = far side along axis ``a``), twelve
edges ``4*a + j`` running along axis ``a`` from a corner without bit ``a``
to the one with it, and six faces ``2*a + b`` (corners whose bit ``a`` is
``b``).  A complex is a list of cubes together with gluings of faces by
corner maps.  Cells of the complex are classes of local cells; edges carry a
sign saying whether the local direction agrees with the class representative.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass

from .dodecomplex import DodecahedralComplex, UnionFind

AXES = (0, 1, 2)
ROLES = ("vertex", "edge", "face", "centre")


def edge_corners(e: int) -> tuple:
    a, j = divmod(e, 4)
    others = [b for b in AXES if b != a]
    lo = sum(((j >> k) & 1) << others[k] for k in range(2))
    return lo, lo | (1 << a)


EDGE_CORNERS = tuple(edge_corners(e) for e in range(12))
EDGE_OF = {c: e for e, c in enumerate(EDGE_CORNERS)}


def face_corners(f: int) -> tuple:
    a, b = divmod(f, 2)
    return tuple(c for c in range(8) if (c >> a) & 1 == b)


def face_edges(f: int) -> tuple:
    cs = set(face_corners(f))
    return tuple(e for e, (lo, hi) in enumerate(EDGE_CORNERS) if lo in cs and hi in cs)


def corner_edges(c: int) -> tuple:
    return tuple(e for e, (lo, hi) in enumerate(EDGE_CORNERS) if c in (lo, hi))


FACE_EDGES = tuple(face_edges(f) for f in range(6))
CORNER_EDGES = tuple(corner_edges(c) for c in range(8))


@dataclass(frozen=True)
class Gluing:
    cube: int
    face: int
    cube2: int
    face2: int
    corners: tuple      # corner map: corners[c] for c in face_corners(face)


class CubeComplex:
    """Cubes glued along faces; cells are computed as classes of local cells.

    ``cube_info[K] = (sheet, vertex, faces)`` is set for cubulations: the
    dodecahedron vertex the cube sits at and, per axis ``a``, the pentagon
    that face ``2*a`` lies in.
    """

    def __init__(self, ncubes: int, gluings, vertex_role=None, cube_info=None, labels=None):
        self.ncubes = ncubes
        self.gluings = list(gluings)
        self.cube_info = cube_info
        self.labels = labels
        n = ncubes
        uv = UnionFind(8 * n)
        ue = UnionFind(12 * n)
        us = UnionFind(6 * n)
        sides = Counter()
        for gl in self.gluings:
            cmap = dict(zip(face_corners(gl.face), gl.corners))
            for c, c2 in cmap.items():
                uv.union(8 * gl.cube + c, 8 * gl.cube2 + c2)
            for e in FACE_EDGES[gl.face]:
                lo, hi = EDGE_CORNERS[e]
                a, b = cmap[lo], cmap[hi]
                if (a, b) in EDGE_OF:
                    ue.union(12 * gl.cube + e, 12 * gl.cube2 + EDGE_OF[(a, b)], 0)
                else:
                    ue.union(12 * gl.cube + e, 12 * gl.cube2 + EDGE_OF[(b, a)], 1)
            us.union(6 * gl.cube + gl.face, 6 * gl.cube2 + gl.face2)
            sides[(gl.cube, gl.face)] += 1
            sides[(gl.cube2, gl.face2)] += 1
        if ue.conflict:
            raise ValueError("gluings identify an edge with itself reversed")
        self.face_glued = sides
        self.vertex = _relabel(uv, 8 * n)
        self.edge = _relabel(ue, 12 * n)
        self.edge_sign = [ue.find(x)[1] for x in range(12 * n)]
        self.square = _relabel(us, 6 * n)
        self.nvertices = max(self.vertex, default=-1) + 1
        self.nedges = max(self.edge, default=-1) + 1
        self.nsquares = max(self.square, default=-1) + 1
        self.vertex_role = None
        if vertex_role is not None:
            roles = [None] * self.nvertices
            for x in range(8 * n):
                r = vertex_role(x // 8, x % 8)
                if roles[self.vertex[x]] not in (None, r):
                    raise ValueError("vertex roles disagree across a gluing")
                roles[self.vertex[x]] = r
            self.vertex_role = roles
        # representative local edge of each global edge (sign 0)
        self.edge_rep = [None] * self.nedges
        for x in range(12 * n):
            g = self.edge[x]
            if self.edge_rep[g] is None and self.edge_sign[x] == 0:
                self.edge_rep[g] = x
        self.square_rep = [None] * self.nsquares
        for x in range(6 * n):
            s = self.square[x]
            if self.square_rep[s] is None:
                self.square_rep[s] = x

    # -- basic queries ---------------------------------------------------

    def f_vector(self) -> tuple:
        return (self.nvertices, self.nedges, self.nsquares, self.ncubes)

    def edge_ends(self, g: int) -> tuple:
        """(tail vertex, head vertex) of a global edge in its representative direction."""
        x = self.edge_rep[g]
        K, e = divmod(x, 12)
        lo, hi = EDGE_CORNERS[e]
        return self.vertex[8 * K + lo], self.vertex[8 * K + hi]

    def local_end(self, K: int, e: int, c: int) -> tuple:
        """Global edge-end (edge, 0 tail / 1 head) of local edge ``e`` at corner ``c``."""
        x = 12 * K + e
        lo, _ = EDGE_CORNERS[e]
        return self.edge[x], (0 if c == lo else 1) ^ self.edge_sign[x]

    def edge_degrees(self) -> Counter:
        """Number of cube edges (cube corners around the edge) per global edge."""
        return Counter(self.edge)

    def is_closed(self) -> bool:
        """Every cube face glued exactly once (each square has two sides)."""
        return all(self.face_glued.get((K, f), 0) == 1 for K in range(self.ncubes) for f in range(6))

    def to_json(self) -> dict:
        return {
            "f_vector": list(self.f_vector()),
            "cubes": [
                {"corners": [self.vertex[8 * K + c] for c in range(8)],
                 "edges": [self.edge[12 * K + e] for e in range(12)],
                 "edge_signs": [self.edge_sign[12 * K + e] for e in range(12)],
                 "faces": [self.square[6 * K + f] for f in range(6)]}
                for K in range(self.ncubes)
            ],
            "vertex_roles": self.vertex_role,
        }

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)


def _relabel(uf: UnionFind, n: int) -> list:
    return uf.classes()[:n]


# --------------------------------------------------------------------------- cubulation


def cubulate(x: DodecahedralComplex) -> CubeComplex:
    """Twenty cubes per dodecahedron, one around each vertex.

    Local points of one dodecahedron: vertices 0..19, edge midpoints
    20 + e, face centres 50 + f, the centre 62.  In the cube at ``v`` with
    edges ``e_0 < e_1 < e_2`` at ``v``, corner bit ``a`` moves along ``e_a``.
    """
    m = x.model
    edges = m.edges
    eidx = m.edge_index()
    vedges = [sorted(e for e, vs in enumerate(edges) if v in vs) for v in range(20)]
    efaces = m.edge_faces()
    vfaces = []
    for v in range(20):
        es = vedges[v]
        fs = []
        for a in AXES:
            b, c = (es[t] for t in AXES if t != a)
            fs.append(next(f for f in efaces[b] if f in efaces[c]))
        vfaces.append(tuple(fs))

    def corner_point(v, c):
        bits = [a for a in AXES if (c >> a) & 1]
        if not bits:
            return v
        if len(bits) == 1:
            return 20 + vedges[v][bits[0]]
        if len(bits) == 2:
            return 50 + vfaces[v][next(a for a in AXES if a not in bits)]
        return 62

    corner_pts = [[corner_point(v, c) for c in range(8)] for v in range(20)]
    k = x.k
    gl = []
    # interior squares: cubes at both ends of each edge, same sheet
    for e, vs in enumerate(edges):
        v, w = sorted(vs)
        a = vedges[v].index(e)
        b = vedges[w].index(e)
        fa, fb = 2 * a + 1, 2 * b + 1
        pos = {corner_pts[w][c]: c for c in face_corners(fb)}
        cmap = tuple(pos[corner_pts[v][c]] for c in face_corners(fa))
        for i in range(k):
            gl.append(Gluing(20 * i + v, fa, 20 * i + w, fb, cmap))
    # boundary squares across pentagon pairings
    for i in range(k):
        for f in range(12):
            j, f2 = x.partner[i][f]
            if (j, f2) < (i, f):
                continue
            vm = x.vertex_map(i, f)

            def img(p):
                if p < 20:
                    return vm[p]
                if p < 50:
                    a_, b_ = edges[p - 20]
                    return 20 + eidx[frozenset((vm[a_], vm[b_]))]
                return 50 + f2

            for v in m.faces[f]:
                a = vfaces[v].index(f)
                w = vm[v]
                b = vfaces[w].index(f2)
                pos = {corner_pts[w][c]: c for c in face_corners(2 * b)}
                cmap = tuple(pos[img(corner_pts[v][c])] for c in face_corners(2 * a))
                gl.append(Gluing(20 * i + v, 2 * a, 20 * j + w, 2 * b, cmap))

    def role(K, c):
        return ROLES[bin(c).count("1")]

    info = [(K // 20, K % 20, vfaces[K % 20]) for K in range(20 * k)]
    return CubeComplex(20 * k, gl, role, info, m.labels)


def three_torus() -> CubeComplex:
    """One cube with each pair of opposite faces glued by translation."""
    gl = []
    for a in AXES:
        gl.append(Gluing(0, 2 * a, 0, 2 * a + 1, tuple(c | (1 << a) for c in face_corners(2 * a))))
    return CubeComplex(1, gl)


# --------------------------------------------------------------------------- NPC


@dataclass
class NpcReport:
    min_edge_degree: int
    closed: bool
    simplicial: bool
    flag: bool
    bad_vertices: list

    @property
    def npc(self) -> bool:
        return self.closed and self.simplicial and self.flag and self.min_edge_degree >= 4


def vertex_links(c: CubeComplex):
    """Per global vertex: link edges (from square corners) and triangles (cube corners).

    Link vertices are global edge-ends.  Squares are taken once each, via
    their representative cube face.
    """
    ledges = [[] for _ in range(c.nvertices)]
    ltris = [[] for _ in range(c.nvertices)]
    for s, x in enumerate(c.square_rep):
        K, f = divmod(x, 6)
        fe = FACE_EDGES[f]
        for corner in face_corners(f):
            es = [e for e in fe if corner in EDGE_CORNERS[e]]
            ends = tuple(c.local_end(K, e, corner) for e in es)
            ledges[c.vertex[8 * K + corner]].append(ends)
    for K in range(c.ncubes):
        for corner in range(8):
            ends = tuple(c.local_end(K, e, corner) for e in CORNER_EDGES[corner])
            ltris[c.vertex[8 * K + corner]].append(ends)
    return ledges, ltris


def npc_report(c: CubeComplex) -> NpcReport:
    degs = c.edge_degrees()
    ledges, ltris = vertex_links(c)
    simplicial = flag = True
    bad = []
    for v in range(c.nvertices):
        es = [frozenset(e) for e in ledges[v]]
        ts = [frozenset(t) for t in ltris[v]]
        simp = all(len(e) == 2 for e in es) and len(set(es)) == len(es) \
            and all(len(t) == 3 for t in ts) and len(set(ts)) == len(ts)
        fl = True
        if simp:
            adj: dict = {}
            for e in es:
                p, q = tuple(e)
                adj.setdefault(p, set()).add(q)
                adj.setdefault(q, set()).add(p)
            tset = set(ts)
            for p in adj:
                for q in adj[p]:
                    if q <= p:
                        continue
                    for r in adj[p] & adj[q]:
                        if r > q and frozenset((p, q, r)) not in tset:
                            fl = False
        else:
            fl = False
        if not (simp and fl):
            bad.append(v)
        simplicial &= simp
        flag &= fl
    return NpcReport(min(degs.values()), c.is_closed(), simplicial, flag, bad)
