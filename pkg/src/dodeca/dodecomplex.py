"""Dodecahedral complexes: the model dodecahedron, face pairings and covers.

Each generator labels an antipodal pair of pentagons, one tail and one head.
Sheet ``i``'s tail pentagon of ``g`` is glued to sheet ``i^g``'s head
pentagon of ``g``.  The vertex matching of a pairing sends a tail vertex
``v`` to the vertex ``r`` steps further along the head pentagon from the
antipode of ``v``.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources

import numpy as np

from .cosets import CosetTable, PermutationAction, table_rows_from_perms
from .fpgroup import ALPHABET, NGENS, Presentation
from .homology import schreier_generators

SPACES = ("WS", "PHS", "RP3")
TAIL, HEAD = "tail", "head"


class FixtureError(ValueError):
    pass


class UnionFind:
    """Union-find with an optional Z/2 parity relative to the root."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.par = [0] * n
        self.conflict = False

    def find(self, x: int):
        p = 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            p ^= self.par[x]
            x = self.parent[x]
        root = x
        acc = p
        for y in path:
            nxt = acc ^ self.par[y]
            self.parent[y] = root
            self.par[y] = acc
            acc = nxt
        return root, p

    def union(self, a: int, b: int, parity: int = 0) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if pa ^ pb != parity:
                self.conflict = True
                return False
            return True
        if ra < rb:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[ra] = rb
        self.par[ra] = pa ^ pb ^ parity
        return True

    def classes(self) -> list:
        """Root of every element, relabeled 0.. in order of first appearance."""
        ids: dict = {}
        out = []
        for x in range(len(self.parent)):
            r = self.find(x)[0]
            out.append(ids.setdefault(r, len(ids)))
        return out


# --------------------------------------------------------------------------- model


@dataclass(frozen=True)
class DodecahedronModel:
    faces: tuple          # 12 cyclic vertex sequences
    antipode: tuple       # vertex involution
    labels: tuple         # face -> (generator, side)
    offsets: dict = field(hash=False, compare=False)
    listing_alias: dict = field(hash=False, compare=False)

    @property
    def edges(self) -> tuple:
        return _edges(self.faces)

    @cached_property
    def _edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def _face_edges(self) -> tuple:
        idx = self._edge_index
        return tuple(tuple(idx[frozenset((vs[k], vs[(k + 1) % 5]))] for k in range(5))
                     for vs in self.faces)

    def edge_index(self) -> dict:
        return self._edge_index

    def face_edges(self, f: int) -> tuple:
        return self._face_edges[f]

    def edge_faces(self) -> list:
        out = [[] for _ in self.edges]
        for f in range(12):
            for e in self.face_edges(f):
                out[e].append(f)
        return out

    def face_of(self, g: int, side: str) -> int:
        return self.labels.index((g, side))

    def antiface(self, f: int) -> int:
        s = {self.antipode[v] for v in self.faces[f]}
        return next(i for i, vs in enumerate(self.faces) if set(vs) == s)

    def glue_map(self, tail: int, head: int, r: int) -> dict:
        h = self.faces[head]
        return {v: h[(h.index(self.antipode[v]) + r) % 5] for v in self.faces[tail]}

    def validate(self):
        deg = Counter(v for f in self.faces for v in f)
        if len(self.faces) != 12 or len(deg) != 20 or set(deg.values()) != {3}:
            raise FixtureError("faces do not form a dodecahedron")
        if len(self.edges) != 30 or any(len(fs) != 2 for fs in self.edge_faces()):
            raise FixtureError("edge incidences broken")
        a = self.antipode
        if any(a[a[v]] != v or a[v] == v for v in range(20)):
            raise FixtureError("antipode is not a fixed-point-free involution")
        for f in range(12):
            g, side = self.labels[f]
            o = self.antiface(f)
            if self.labels[o] != (g, HEAD if side == TAIL else TAIL):
                raise FixtureError(f"face {f}: labels of antipodal faces do not pair up")
            # the antipodal map reverses the cyclic order as seen from outside
            img = [a[v] for v in self.faces[f]]
            ho = self.faces[o]
            k = ho.index(img[0])
            if [ho[(k - j) % 5] for j in range(5)] != img:
                raise FixtureError(f"face {f}: antipode does not reverse orientation")
        return self


@lru_cache(maxsize=None)
def _edges(faces) -> tuple:
    out = []
    seen = set()
    for vs in faces:
        for k in range(5):
            e = frozenset((vs[k], vs[(k + 1) % 5]))
            if e not in seen:
                seen.add(e)
                out.append(e)
    return tuple(out)


@lru_cache(maxsize=None)
def canonical_dodecahedron() -> DodecahedronModel:
    d = json.loads(resources.files("dodeca.data").joinpath("dodecahedron.json").read_text())
    try:
        labels = tuple((ALPHABET.index(g), side) for g, side in d["labels"])
        m = DodecahedronModel(tuple(tuple(f) for f in d["faces"]), tuple(d["antipode"]), labels,
                              dict(d["offsets"]), dict(d["listing_alias"]))
    except (KeyError, ValueError) as exc:
        raise FixtureError(f"corrupt dodecahedron fixture: {exc}") from exc
    return m.validate()


@dataclass(frozen=True)
class TwistScheme:
    space: str
    offset: int


def twist_scheme(space: str) -> TwistScheme:
    space = space.upper()
    return TwistScheme(space, canonical_dodecahedron().offsets[space])


# --------------------------------------------------------------------------- complexes


@dataclass(frozen=True)
class FVector:
    V: int
    E: int
    F: int
    C: int

    def euler(self) -> int:
        return self.V - self.E + self.F - self.C

    def __iter__(self):
        return iter((self.V, self.E, self.F, self.C))

    def scaled(self, k: int) -> "FVector":
        return FVector(k * self.V, k * self.E, k * self.F, k * self.C)


class DodecahedralComplex:
    """``k`` dodecahedra with an involutive pentagon pairing.

    ``partner[i][f] = (j, f2)`` and ``matching[i][f]`` lists the images of the
    vertices of pentagon ``f`` (in the model's cyclic order) on pentagon
    ``f2`` of sheet ``j``.
    """

    def __init__(self, model: DodecahedronModel, partner, matching, space: str = "",
                 action: PermutationAction | None = None):
        self.model = model
        self.partner = partner
        self.matching = matching
        self.space = space
        self.action = action
        self._orbits = None
        self.check()

    @property
    def k(self) -> int:
        return len(self.partner)

    def vertex_map(self, i: int, f: int) -> dict:
        return dict(zip(self.model.faces[f], self.matching[i][f]))

    def check(self):
        m = self.model
        for i in range(self.k):
            for f in range(12):
                j, f2 = self.partner[i][f]
                if self.partner[j][f2] != (i, f):
                    raise ValueError(f"pairing not involutive at sheet {i + 1}, face {f}")
                fwd = self.vertex_map(i, f)
                back = self.vertex_map(j, f2)
                if set(fwd.values()) != set(m.faces[f2]) or any(back[fwd[v]] != v for v in fwd):
                    raise ValueError(f"vertex matching not inverse at sheet {i + 1}, face {f}")

    def orbits(self):
        """(vertex class per (sheet, vertex), edge class per (sheet, edge)) as arrays."""
        if self._orbits is not None:
            return self._orbits
        m = self.model
        k = self.k
        eidx = m.edge_index()
        ev = [tuple(sorted(e)) for e in m.edges]
        uv = UnionFind(20 * k)
        ue = UnionFind(30 * k)
        for i in range(k):
            for f in range(12):
                j, f2 = self.partner[i][f]
                vm = self.vertex_map(i, f)
                for v, w in vm.items():
                    uv.union(20 * i + v, 20 * j + w)
                for e in m.face_edges(f):
                    a, b = ev[e]
                    a2, b2 = vm[a], vm[b]
                    e2 = eidx[frozenset((a2, b2))]
                    # parity records whether the edge is reversed
                    ue.union(30 * i + e, 30 * j + e2, 0 if (a2, b2) == ev[e2] else 1)
        if ue.conflict:
            raise ValueError("an edge is identified with itself reversed")
        self._orbits = (np.array(uv.classes()), np.array(ue.classes()))
        return self._orbits

    def f_vector(self) -> FVector:
        vc, ec = self.orbits()
        return FVector(len(set(vc)), len(set(ec)), 6 * self.k, self.k)

    def edge_orbit_sizes(self) -> Counter:
        _, ec = self.orbits()
        return Counter(Counter(ec.tolist()).values())

    def pairing_graph(self) -> list:
        """Edges (sheet, sheet', generator), one per glued pentagon pair, 0-based."""
        out = []
        for i in range(self.k):
            for f in range(12):
                g, side = self.model.labels[f]
                if side == TAIL:
                    out.append((i, self.partner[i][f][0], g))
        return out

    def has_self_identification(self) -> bool:
        return any(a == b for a, b, _ in self.pairing_graph())

    def to_json(self) -> dict:
        if self.action is None:
            raise ValueError("complex was not built from an action")
        return {"space": self.space.lower(), "degree": self.k, "action": self.action.to_json()}


def cover_complex(base: DodecahedralComplex | str, a: PermutationAction) -> DodecahedralComplex:
    """Glue ``a.degree`` copies of the base's dodecahedron as prescribed by ``a``."""
    if isinstance(base, str):
        base = base_complex(base)
    if base.k != 1:
        raise ValueError("cover_complex expects a one-sheet base")
    m = base.model
    k = a.degree
    perms = a.perms
    inv = a.inverse().perms
    partner = []
    matching = []
    for i in range(k):
        prow, mrow = [], []
        for f in range(12):
            g, side = m.labels[f]
            f2 = base.partner[0][f][1]
            j = perms[g][i] if side == TAIL else inv[g][i]
            prow.append((j, f2))
            mrow.append(base.matching[0][f])
        partner.append(prow)
        matching.append(mrow)
    return DodecahedralComplex(m, partner, matching, base.space, a)


def base_complex(space: str) -> DodecahedralComplex:
    m = canonical_dodecahedron()
    r = twist_scheme(space).offset
    partner = [[None] * 12]
    matching = [[None] * 12]
    for g in range(NGENS):
        t = m.face_of(g, TAIL)
        h = m.face_of(g, HEAD)
        gm = m.glue_map(t, h, r)
        inv = {b: a for a, b in gm.items()}
        partner[0][t] = (0, h)
        partner[0][h] = (0, t)
        matching[0][t] = tuple(gm[v] for v in m.faces[t])
        matching[0][h] = tuple(inv[v] for v in m.faces[h])
    ident = PermutationAction(tuple(tuple([0]) for _ in range(NGENS)))
    return DodecahedralComplex(m, partner, matching, space.upper(), ident)


def derive_presentation(space: str) -> Presentation:
    """One relator per edge class, read off by walking around the edge.

    Crossing a tail pentagon of ``g`` reads ``g``, a head pentagon reads
    ``g^-1``; the walk continues in the other pentagon at the image edge.
    """
    x = base_complex(space)
    m = x.model
    eidx = m.edge_index()
    ef = m.edge_faces()
    _, ec = x.orbits()
    done_orbits = set()
    rels = []
    for f0 in range(12):
        for e0 in m.face_edges(f0):
            if ec[e0] in done_orbits:
                continue
            done_orbits.add(ec[e0])
            word = []
            f, e = f0, e0
            while True:
                g, side = m.labels[f]
                word.append(2 * g + (0 if side == TAIL else 1))
                _, f2 = x.partner[0][f]
                vm = x.vertex_map(0, f)
                e2 = eidx[frozenset(vm[v] for v in m.edges[e])]
                f = next(h for h in ef[e2] if h != f2)
                e = e2
                if (f, e) == (f0, e0):
                    break
                if len(word) > 60:
                    raise RuntimeError("edge walk does not close")
            rels.append(tuple(word))
    return Presentation(tuple(rels), f"{space.upper()} (derived)")



# --------------------------------------------------------------------------- double covers


def sheet_table(a: PermutationAction) -> CosetTable:
    """Coset table of the stabilizer of sheet 0, keeping the sheet numbering."""
    return CosetTable(table_rows_from_perms(a.array()))


def double_action(a: PermutationAction, cocycle, cols: dict | None = None) -> PermutationAction:
    """Two-sheeted lift of ``a``: sheet ``i + eps*k`` goes to ``i^g + (eps xor c(i,g))*k``."""
    if cols is None:
        cols = schreier_generators(sheet_table(a))
    k = a.degree
    out = []
    for g in range(NGENS):
        p = a.perms[g]
        q = [0] * (2 * k)
        for i in range(k):
            j = cols.get((i, g))
            c = cocycle[j] if j is not None else 0
            q[i] = p[i] + c * k
            q[i + k] = p[i] + (1 - c) * k
        out.append(tuple(q))
    return PermutationAction(tuple(out))


def double_cover(x: DodecahedralComplex, cocycle) -> DodecahedralComplex:
    if x.action is None:
        raise ValueError("double_cover needs a complex built from an action")
    if not any(cocycle):
        raise ValueError("zero cocycle gives a disconnected double cover")
    base = base_complex(x.space)
    return cover_complex(base, double_action(x.action, cocycle))


def double_is_fpf(a: PermutationAction, cocycle, cols: dict) -> bool:
    """No pentagon of the double cover is glued to its own sheet."""
    for g in range(NGENS):
        p = a.perms[g]
        for i in range(a.degree):
            if p[i] == i and cocycle[cols[(i, g)]] == 0:
                return False
    return True


def load_cover(d: dict) -> DodecahedralComplex:
    space = d["space"].upper()
    if space not in SPACES:
        raise ValueError(f"unknown space {d['space']!r}")
    a = PermutationAction.from_json(d["action"])
    if a.degree != d.get("degree", a.degree):
        raise ValueError("degree field disagrees with the action")
    return cover_complex(base_complex(space), a)
