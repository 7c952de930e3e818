"""Hyperplanes of a cube complex and the special-cube-complex conditions.

A mid-square is (cube, axis): the square through the cube's centre dual to
the four edges along that axis.  Hyperplanes are parallelism classes of
edges; each mid-square belongs to the class of its dual edges.  For
cubulated dodecahedral complexes the mid-squares group into pentagonal
disks, five around each face-centre-to-cell-centre segment.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .cubecomplex import AXES, CORNER_EDGES, EDGE_CORNERS, FACE_EDGES, CubeComplex, face_corners, vertex_links
from .dodecomplex import UnionFind
from .fpgroup import ALPHABET

TAIL, HEAD = "tail", "head"
TEX_SIDE = {TAIL: r"\otimes", HEAD: r"\odot"}


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DiskLabel:
    sheet: int          # 0-based
    gen: int
    side: str

    def __str__(self):
        return f"({ALPHABET[self.gen]},{self.side})_{self.sheet + 1}"

    def tex(self, alias: dict | None = None) -> str:
        g = ALPHABET[self.gen]
        if alias:
            g = alias[g]
        return f"({g},{TEX_SIDE[self.side]})_{{{self.sheet + 1}}}"

    def to_json(self) -> dict:
        return {"face": ALPHABET[self.gen], "side": self.side, "sheet": self.sheet + 1}


@dataclass
class SurfaceComponent:
    index: int
    midsquares: list                 # (cube, axis)
    edges: list                      # global edges dual to the component
    two_sided: bool
    orientable: bool
    embedded: bool
    chi: int
    disks: list = field(default_factory=list)
    near: frozenset = frozenset()
    near_incidences: int = 0

    @property
    def genus(self):
        if not self.orientable:
            return None
        return (2 - self.chi) // 2

    def disk_sheets(self) -> Counter:
        return Counter(d.sheet for d in self.disks)


class Hyperplanes:
    """All hyperplanes of a cube complex with the data the tests need."""

    def __init__(self, c: CubeComplex):
        self.c = c
        n = c.ncubes
        # parallelism of global edges with co-orientation parity
        uf = UnionFind(c.nedges)
        bad_roots = []
        for K in range(n):
            for a in AXES:
                es = [12 * K + 4 * a + j for j in range(4)]
                g0, s0 = c.edge[es[0]], c.edge_sign[es[0]]
                for x in es[1:]:
                    if not uf.union(g0, c.edge[x], s0 ^ c.edge_sign[x]):
                        bad_roots.append(g0)
        comp_of_edge = uf.classes()
        self.edge_parity = [uf.find(g)[1] for g in range(c.nedges)]
        one_sided = {comp_of_edge[g] for g in bad_roots}
        # order components by their least disk (or least mid-square)
        ms_comp = [[comp_of_edge[c.edge[12 * K + 4 * a]] for a in AXES] for K in range(n)]
        ncomp = max(comp_of_edge, default=-1) + 1

        def ms_key(K, a):
            if c.cube_info is None:
                return (K, a)
            sheet, _, faces = c.cube_info[K]
            g, side = c.labels[faces[a]]
            return (sheet, g, side)

        first = {}
        for K in range(n):
            for a in AXES:
                cid = ms_comp[K][a]
                kk = ms_key(K, a)
                if cid not in first or kk < first[cid]:
                    first[cid] = kk
        order = sorted(range(ncomp), key=lambda cid: first[cid])
        ren = {old: new for new, old in enumerate(order)}
        self.comp_of_edge = [ren[x] for x in comp_of_edge]
        self.ms_comp = [[ren[x] for x in row] for row in ms_comp]
        one_sided = {ren[x] for x in one_sided}
        self.ncomp = ncomp

        msq = [[] for _ in range(ncomp)]
        for K in range(n):
            for a in AXES:
                msq[self.ms_comp[K][a]].append((K, a))
        eds = [[] for _ in range(ncomp)]
        for g in range(c.nedges):
            eds[self.comp_of_edge[g]].append(g)
        embedded = [True] * ncomp
        for K in range(n):
            row = self.ms_comp[K]
            if len(set(row)) < 3:
                for cid, cnt in Counter(row).items():
                    if cnt > 1:
                        embedded[cid] = False
        # midlines: each square contributes one per direction in the component
        midlines = [0] * ncomp
        for x in c.square_rep:
            K, f = divmod(x, 6)
            a = f // 2
            for b in AXES:
                if b != a:
                    midlines[self.ms_comp[K][b]] += 1
        orient = self._orientability()
        self.components = []
        for cid in range(ncomp):
            chi = len(eds[cid]) - midlines[cid] + len(msq[cid])
            sc = SurfaceComponent(cid, msq[cid], eds[cid], cid not in one_sided, cid not in orient,
                                  embedded[cid], chi)
            self.components.append(sc)
        if c.cube_info is not None:
            self._disks()

    def _orientability(self) -> set:
        """Components whose mid-squares cannot be coherently oriented."""
        c = self.c
        uf = UnionFind(3 * c.ncubes)
        bad = set()

        def frame_sign(axis1, s1, axis2, s2, normal):
            p, q = (b for b in AXES if b != normal)
            return s1 * s2 * (1 if (axis1, axis2) == (p, q) else -1)

        for gl in c.gluings:
            cmap = dict(zip(face_corners(gl.face), gl.corners))
            b, beta = divmod(gl.face, 2)
            b2, beta2 = divmod(gl.face2, 2)
            c0 = beta << b
            axis_img = {}
            for x in AXES:
                if x == b:
                    continue
                p, q = cmap[c0], cmap[c0 | (1 << x)]
                d = p ^ q
                x2 = d.bit_length() - 1
                axis_img[x] = (x2, 1 if q & d else -1)
            for a in AXES:
                if a == b:
                    continue
                t = next(y for y in AXES if y not in (a, b))
                eps = 1 if beta == 0 else -1
                eps2 = 1 if beta2 == 0 else -1
                a2, _ = axis_img[a]
                t2, st = axis_img[t]
                o1 = frame_sign(b, eps, t, 1, a)
                o2 = frame_sign(b2, -eps2, t2, st, a2)
                if not uf.union(3 * gl.cube + a, 3 * gl.cube2 + a2, 0 if o1 == o2 else 1):
                    bad.add(self.ms_comp[gl.cube][a])
        return bad

    def _disks(self):
        c = self.c
        role = c.vertex_role
        for sc in self.components:
            groups: dict = {}
            for K, a in sc.midsquares:
                sheet, _, faces = c.cube_info[K]
                g, side = c.labels[faces[a]]
                groups.setdefault(DiskLabel(sheet, g, side), []).append((K, a))
            for lab, sqs in groups.items():
                if len(sqs) != 5:
                    raise ValueError(f"disk {lab} has {len(sqs)} mid-squares")
            sc.disks = sorted(groups)
            near = []
            for g in sc.edges:
                for v in c.edge_ends(g):
                    if role[v] == "vertex":
                        near.append(v)
            sc.near = frozenset(near)
            sc.near_incidences = len(near)

    # -- osculation ------------------------------------------------------

    def _ends_at_vertices(self):
        """Per vertex: list of (edge, end) and the set of edge-end pairs sharing a square."""
        c = self.c
        ledges, _ = vertex_links(c)
        ends = [set() for _ in range(c.nvertices)]
        for K in range(c.ncubes):
            for corner in range(8):
                v = c.vertex[8 * K + corner]
                for e in CORNER_EDGES[corner]:
                    ends[v].add(c.local_end(K, e, corner))
        adj = [set(frozenset(p) for p in le) for le in ledges]
        return ends, adj

    def osculations(self):
        """(self-osculating component ids, inter-osculating pairs), direct definitions.

        Dual edges are directed by the co-orientation: an end at ``v`` leaves
        ``v`` when its representative end is the tail and parity is even.
        """
        if hasattr(self, "_osc"):
            return self._osc
        ends, adj = self._ends_at_vertices()
        selfosc = set()
        inter = set()
        crossing = self.crossing_pairs()
        for v, es in enumerate(ends):
            es = sorted(es)
            for i1 in range(len(es)):
                g1, end1 = es[i1]
                c1 = self.comp_of_edge[g1]
                out1 = (end1 ^ self.edge_parity[g1]) == 0
                for i2 in range(i1 + 1, len(es)):
                    g2, end2 = es[i2]
                    if g1 == g2:
                        continue
                    c2 = self.comp_of_edge[g2]
                    if frozenset((es[i1], es[i2])) in adj[v]:
                        continue
                    if c1 == c2:
                        out2 = (end2 ^ self.edge_parity[g2]) == 0
                        if out1 == out2:
                            selfosc.add(c1)
                    else:
                        pair = (min(c1, c2), max(c1, c2))
                        if pair in crossing:
                            inter.add(pair)
        self._osc = (selfosc, inter)
        return self._osc

    def crossing_pairs(self) -> set:
        if not hasattr(self, "_cross"):
            out = set()
            for row in self.ms_comp:
                for a in AXES:
                    for b in AXES:
                        if row[a] < row[b]:
                            out.add((row[a], row[b]))
            self._cross = out
        return self._cross

    def self_osculates_direct(self, cid: int) -> bool:
        sc = self.components[cid]
        if not (sc.embedded and sc.two_sided):
            raise PreconditionError("direct self-osculation needs an embedded 2-sided hyperplane")
        return cid in self.osculations()[0]

    def inter_osculates_direct(self, s: int, t: int) -> bool:
        for cid in (s, t):
            sc = self.components[cid]
            if not (sc.embedded and sc.two_sided):
                raise PreconditionError("direct inter-osculation needs embedded 2-sided hyperplanes")
        return (min(s, t), max(s, t)) in self.osculations()[1]

    # -- disk-level lemmas ------------------------------------------------

    def _adjacent_faces(self):
        if not hasattr(self, "_adjf"):
            c = self.c
            adj = set()
            for K in range(c.ncubes):
                _, _, faces = c.cube_info[K]
                for a in AXES:
                    for b in AXES:
                        if a != b:
                            adj.add((c.labels[faces[a]], c.labels[faces[b]]))
            self._adjf = adj
        return self._adjf

    def self_osculates_lemma(self, cid: int) -> bool:
        sc = self.components[cid]
        if not sc.embedded:
            raise PreconditionError("the disk criterion needs an embedded hyperplane")
        if any(n >= 2 for n in sc.disk_sheets().values()):
            return True
        return len(sc.near) < sc.near_incidences

    def intersecting_disks(self, s: int, t: int) -> int:
        adj = self._adjacent_faces()
        n = 0
        by_sheet: dict = {}
        for d in self.components[t].disks:
            by_sheet.setdefault(d.sheet, []).append(d)
        for d in self.components[s].disks:
            for d2 in by_sheet.get(d.sheet, ()):
                if ((d.gen, d.side), (d2.gen, d2.side)) in adj:
                    n += 1
        return n

    def inter_osculates_lemma(self, s: int, t: int) -> bool:
        S, T = self.components[s], self.components[t]
        for sc in (S, T):
            if not sc.embedded:
                raise PreconditionError("the disk criterion needs embedded hyperplanes")
            if self.self_osculates_lemma(sc.index):
                raise PreconditionError("the disk criterion needs non-self-osculating hyperplanes")
        if (min(s, t), max(s, t)) not in self.crossing_pairs():
            return False
        adj = self._adjacent_faces()
        by_sheet: dict = {}
        for d in T.disks:
            by_sheet.setdefault(d.sheet, []).append(d)
        for d in S.disks:
            for d2 in by_sheet.get(d.sheet, ()):
                if ((d.gen, d.side), (d2.gen, d2.side)) not in adj:
                    return True
        nint = self.intersecting_disks(s, t)
        return len(S.near | T.near) + nint < len(S.disks) + len(T.disks)


# --------------------------------------------------------------------------- reports


def chromatic_number(nodes: int, edges) -> tuple:
    """(colours, exact?) -- exhaustive search up to 20 nodes, DSatur beyond."""
    adj = [set() for _ in range(nodes)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    if nodes == 0:
        return 0, True
    if nodes > 20:
        colour = {}
        while len(colour) < nodes:
            v = max((u for u in range(nodes) if u not in colour),
                    key=lambda u: (len({colour[w] for w in adj[u] if w in colour}), len(adj[u])))
            used = {colour[w] for w in adj[v] if w in colour}
            colour[v] = next(k for k in range(nodes) if k not in used)
        return max(colour.values()) + 1, False
    order = sorted(range(nodes), key=lambda u: -len(adj[u]))
    for k in range(1, nodes + 1):
        col = {}

        def bt(i):
            if i == len(order):
                return True
            v = order[i]
            used = {col[w] for w in adj[v] if w in col}
            for cc in range(k):
                if cc not in used:
                    col[v] = cc
                    if bt(i + 1):
                        return True
                    del col[v]
            return False

        if bt(0):
            return k, True
    return nodes, True


@dataclass
class SpecialnessReport:
    components: list
    crossing: list
    self_osculating: list
    inter_osculating: list
    lemma_agrees: bool
    chromatic: int
    chromatic_exact: bool

    @property
    def all_embedded(self) -> bool:
        return all(sc.embedded for sc in self.components)

    @property
    def all_two_sided(self) -> bool:
        return all(sc.two_sided for sc in self.components)

    @property
    def special(self) -> bool:
        return (self.all_embedded and self.all_two_sided
                and not self.self_osculating and not self.inter_osculating)


def specialness(c: CubeComplex, h: Hyperplanes | None = None) -> SpecialnessReport:
    h = h or Hyperplanes(c)
    comps = h.components
    ok = [sc.embedded and sc.two_sided for sc in comps]
    selfosc, inter = h.osculations()
    selfosc = sorted(s for s in selfosc if ok[s])
    inter = sorted(p for p in inter if ok[p[0]] and ok[p[1]])
    agree = True
    if c.cube_info is not None:
        for sc in comps:
            if ok[sc.index]:
                agree &= h.self_osculates_lemma(sc.index) == (sc.index in selfosc)
        for s, t in h.crossing_pairs():
            if ok[s] and ok[t] and s not in selfosc and t not in selfosc:
                agree &= h.inter_osculates_lemma(s, t) == ((s, t) in inter)
    cross = sorted(h.crossing_pairs())
    chi, exact = chromatic_number(len(comps), cross)
    return SpecialnessReport(comps, cross, selfosc, inter, agree, chi, exact)


def surface_report(c: CubeComplex, alias: dict | None = None) -> dict:
    h = Hyperplanes(c)
    rep = specialness(c, h)
    comps = []
    for sc in rep.components:
        d = {"id": sc.index + 1, "midsquares": len(sc.midsquares), "chi": sc.chi, "genus": sc.genus,
             "orientable": sc.orientable, "two_sided": sc.two_sided, "embedded": sc.embedded}
        if sc.disks:
            d["disks"] = [x.to_json() for x in sc.disks]
            d["near_vertices"] = len(sc.near)
        comps.append(d)
    pairs = [{"pair": [s + 1, t + 1],
              "intersecting_disks": h.intersecting_disks(s, t) if c.cube_info else None}
             for s, t in rep.crossing]
    return {"components": comps, "crossing_pairs": pairs,
            "self_osculating": [s + 1 for s in rep.self_osculating],
            "inter_osculating": [[s + 1, t + 1] for s, t in rep.inter_osculating],
            "lemma_agrees": rep.lemma_agrees, "chromatic_number": rep.chromatic,
            "chromatic_exact": rep.chromatic_exact, "special": rep.special}


# --------------------------------------------------------------------------- disk graph


class DiskGraph:
    """Pentagonal disks of a dodecahedral complex and how they continue across pentagons.

    Node ``12*i + F`` is the disk in sheet ``i`` parallel to pentagon ``F``.
    Across the pentagon ``F'`` meeting ``F`` in edge ``e`` the disk continues
    into the partner sheet, parallel to the other pentagon at the image of
    ``e``.  This gives the surface components without cubulating, and with
    ``cols`` (Schreier columns of the sheet action) it records which columns
    each crossing reads, so components of double covers can be counted from
    cocycles alone.
    """

    def __init__(self, x, cols: dict | None = None):
        m = x.model
        self.k = x.k
        eidx = m.edge_index()
        ef = m.edge_faces()
        n = 12 * x.k
        parent = list(range(n))
        mask = [0] * n

        def find(a):
            acc = 0
            path = []
            while parent[a] != a:
                path.append(a)
                acc ^= mask[a]
                a = parent[a]
            for b in path:
                nxt = acc ^ mask[b]
                parent[b] = a
                mask[b] = acc
                acc = nxt
            return a

        cycles = []
        for i in range(x.k):
            for F in range(12):
                for e in m.face_edges(F):
                    F1 = next(h for h in ef[e] if h != F)
                    j, F2 = x.partner[i][F1]
                    vm = x.vertex_map(i, F1)
                    e2 = eidx[frozenset(vm[v] for v in m.edges[e])]
                    G = next(h for h in ef[e2] if h != F2)
                    w = 0
                    if cols is not None:
                        g, side = m.labels[F1]
                        col = cols.get((i, g) if side == TAIL else (j, g))
                        if col is not None:
                            w = 1 << col
                    a, b = 12 * i + F, 12 * j + G
                    ra, rb = find(a), find(b)
                    pa, pb = mask[a] if a != ra else 0, mask[b] if b != rb else 0
                    if ra == rb:
                        z = pa ^ pb ^ w
                        if z:
                            cycles.append((ra, z))
                    else:
                        parent[ra] = rb
                        mask[ra] = pa ^ pb ^ w
        roots = [find(a) for a in range(n)]
        # components ordered by least disk label (sheet, generator, side), as Hyperplanes does
        first: dict = {}
        for a, r in enumerate(roots):
            key = (a // 12, m.labels[a % 12])
            if r not in first or key < first[r]:
                first[r] = key
        ren = {r: c for c, r in enumerate(sorted(first, key=first.get))}
        self.comp = [ren[r] for r in roots]
        self.ncomp = len(ren)
        self.members = [[] for _ in range(self.ncomp)]
        for a, c in enumerate(self.comp):
            self.members[c].append(a)
        # GF(2) basis of the cycle weights of each component
        lead = [dict() for _ in range(self.ncomp)]
        for r, z in cycles:
            piv = lead[ren[find(r)]]
            while z:
                h = z.bit_length() - 1
                if h not in piv:
                    piv[h] = z
                    break
                z ^= piv[h]
        self.cycle_basis = [list(piv.values()) for piv in lead]
        fe = [set(m.face_edges(F)) for F in range(12)]
        self.embedded = []
        for ms in self.members:
            by_sheet: dict = {}
            for a in ms:
                by_sheet.setdefault(a // 12, []).append(a % 12)
            ok = all(not (fe[f1] & fe[f2]) for fs in by_sheet.values()
                     for f1, f2 in itertools.combinations(fs, 2))
            self.embedded.append(ok)

    def disks(self, c: int, labels) -> list:
        return sorted(DiskLabel(a // 12, *labels[a % 12]) for a in self.members[c])

    def split_masks(self, vectors) -> list:
        """Per component, bitmask over ``vectors`` of those with odd pairing against some cycle.

        Returned as the list of per-cycle masks: a cocycle sum_t lam_t v_t
        lifts the component to two copies iff ``lam`` is orthogonal to every
        mask of that component.
        """
        out = []
        for basis in self.cycle_basis:
            rows = []
            for b in basis:
                r = 0
                for t, v in enumerate(vectors):
                    if bin(b & v).count("1") & 1:
                        r |= 1 << t
                rows.append(r)
            out.append(rows)
        return out
