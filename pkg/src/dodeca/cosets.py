"""Coset tables, permutation actions and the subgroup machinery built on them.

Cosets and sheets are 0-based internally and 1-based in every serialized form.
Actions are right actions: ``perm[g][i]`` is the image of ``i`` under ``g`` and a
word is applied letter by letter from the left.
"""
from __future__ import annotations

import itertools
import logging
import re
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _lowindex
from .fpgroup import ALPHABET, NGENS, NLETTERS, Presentation, format_word, letter_automorphisms, parse_word

log = logging.getLogger(__name__)


class ResourceLimit(RuntimeError):
    """A search or enumeration exceeded its configured bound."""

    def __init__(self, msg, progress=None):
        super().__init__(msg)
        self.progress = progress or {}


# --------------------------------------------------------------------------- tables


class CosetTable:
    """Complete coset table: ``rows[c, l]`` is coset ``c`` times letter ``l``."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        a = np.array(rows, dtype=np.int64).reshape(-1, NLETTERS)
        a.setflags(write=False)
        self.rows = a

    @property
    def index(self) -> int:
        return self.rows.shape[0]

    def perm(self, g: int) -> np.ndarray:
        return self.rows[:, 2 * g]

    def flat(self) -> tuple:
        return tuple(int(v) for v in self.rows.ravel())

    def key(self) -> bytes:
        return self.rows.astype(np.int32).tobytes()

    def __eq__(self, other):
        return isinstance(other, CosetTable) and np.array_equal(self.rows, other.rows)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CosetTable(index={self.index})"

    def is_valid(self, p: Presentation | None = None) -> bool:
        k = self.index
        r = self.rows
        if r.min() < 0 or r.max() >= k:
            return False
        for g in range(NGENS):
            if not np.array_equal(r[r[:, 2 * g], 2 * g + 1], np.arange(k)):
                return False
        if p is not None:
            start = np.arange(k)
            for rel in p.relators:
                cur = start
                for x in rel:
                    cur = r[cur, x]
                if not np.array_equal(cur, start):
                    return False
        return len(_bfs_order(r, 0)) == k


@dataclass(frozen=True)
class PermutationAction:
    """Generator permutations on sheets ``0..k-1`` (0-based internally)."""

    perms: tuple

    @property
    def degree(self) -> int:
        return len(self.perms[0])

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(tuple(int(v) for v in p) for p in self.perms))

    def array(self) -> np.ndarray:
        return np.array(self.perms, dtype=np.int64)

    def inverse(self) -> "PermutationAction":
        out = []
        for p in self.perms:
            q = [0] * len(p)
            for i, j in enumerate(p):
                q[j] = i
            out.append(tuple(q))
        return PermutationAction(tuple(out))

    def to_json(self) -> dict:
        return {ALPHABET[g]: [v + 1 for v in p] for g, p in enumerate(self.perms)}

    @classmethod
    def from_json(cls, d: dict) -> "PermutationAction":
        return cls(tuple(tuple(v - 1 for v in d[c]) for c in ALPHABET))

    @classmethod
    def from_cycles(cls, cycles: dict, degree: int) -> "PermutationAction":
        """Build from cycle notation such as ``"(1,2,14,20,3)(4,5)"`` per generator."""
        return cls(tuple(parse_cycles(cycles.get(c, ""), degree) for c in ALPHABET))

    def evaluate(self, w) -> np.ndarray:
        k = self.degree
        a = self.array()
        inv = np.empty_like(a)
        for g in range(NGENS):
            inv[g, a[g]] = np.arange(k)
        cur = np.arange(k)
        for x in w:
            cur = (a[x >> 1] if x % 2 == 0 else inv[x >> 1])[cur]
        return cur

    def satisfies(self, p: Presentation) -> bool:
        k = np.arange(self.degree)
        return all(np.array_equal(self.evaluate(r), k) for r in p.relators)

    def is_transitive(self) -> bool:
        return len(_bfs_order(table_rows_from_perms(self.array()), 0)) == self.degree


def parse_cycles(text: str, degree: int) -> tuple:
    p = list(range(degree))
    for c in re.findall(r"\(([^)]*)\)", text):
        xs = [int(t) - 1 for t in re.split(r"[,\s]+", c.strip()) if t]
        for a, b in zip(xs, xs[1:] + xs[:1]):
            p[a] = b
    return tuple(p)


def format_cycles(perm) -> str:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append("(" + ",".join(str(v + 1) for v in cyc) + ")")
    return "".join(out) or "()"


def table_rows_from_perms(a: np.ndarray) -> np.ndarray:
    k = a.shape[1]
    rows = np.empty((k, NLETTERS), dtype=np.int64)
    for g in range(NGENS):
        rows[:, 2 * g] = a[g]
        rows[a[g], 2 * g + 1] = np.arange(k)
    return rows


def action_from_table(t: CosetTable) -> PermutationAction:
    return PermutationAction(tuple(tuple(int(v) for v in t.rows[:, 2 * g]) for g in range(NGENS)))


def table_from_action(a: PermutationAction, base: int = 0) -> CosetTable:
    """Coset table of the stabilizer of ``base`` (standardized from ``base``)."""
    return CosetTable(_standardize(table_rows_from_perms(a.array()), base))


@dataclass
class SubgroupRecord:
    table: CosetTable
    words: list | None = None
    provenance: str = "enumerated"

    @property
    def degree(self) -> int:
        return self.table.index

    def action(self) -> PermutationAction:
        return action_from_table(self.table)

    def to_json(self) -> dict:
        d = {"degree": self.degree, "action": self.action().to_json(), "provenance": self.provenance}
        if self.words is not None:
            d["generator_words"] = [format_word(w) for w in self.words]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SubgroupRecord":
        act = PermutationAction.from_json(d["action"])
        words = [parse_word(w) for w in d["generator_words"]] if "generator_words" in d else None
        return cls(table_from_action(act), words, d.get("provenance", "imported"))


@dataclass(frozen=True)
class GroupSummary:
    order: int
    transitive: bool
    regular: bool
    perfect: bool
    name: str | None = None

    def label(self) -> str:
        return self.name or f"order {self.order}"


# --------------------------------------------------------------------------- basic ops


def trace(t: CosetTable, w, start: int = 0) -> int:
    c = start
    for x in w:
        c = int(t.rows[c, x])
    return c


def contains(t: CosetTable, words) -> bool:
    return all(trace(t, w, 0) == 0 for w in words)


def _bfs_order(rows, base):
    order = [base]
    seen = {base}
    i = 0
    while i < len(order):
        c = order[i]
        i += 1
        for x in range(rows.shape[1]):
            d = int(rows[c, x])
            if d >= 0 and d not in seen:
                seen.add(d)
                order.append(d)
    return order


def _standardize(rows: np.ndarray, base: int) -> np.ndarray:
    order = _bfs_order(rows, base)
    k = len(order)
    lab = np.full(rows.shape[0], -1, dtype=np.int64)
    lab[order] = np.arange(k)
    return lab[rows[order]]


def canonical_rows(rows: np.ndarray, col_perm=None) -> np.ndarray:
    """Lexicographically least standardized relabeling over all base points."""
    rows = np.asarray(rows)
    if col_perm is not None:
        rows = rows[:, list(col_perm)]
    best = None
    for b in range(rows.shape[0]):
        s = _standardize(rows, b)
        if best is None or tuple(s.ravel()) < tuple(best.ravel()):
            best = s
    return best


def canonical_table(t: CosetTable) -> CosetTable:
    return CosetTable(canonical_rows(t.rows))


def is_conjugate(s: CosetTable, t: CosetTable) -> bool:
    if s.index != t.index:
        return False
    cs = canonical_rows(s.rows)
    for b in range(t.index):
        if np.array_equal(_standardize(t.rows, b), cs):
            return True
    return False


def is_normal(t: CosetTable) -> bool:
    """All base points give the same standardized table."""
    s0 = _standardize(t.rows, 0)
    return all(np.array_equal(_standardize(t.rows, b), s0) for b in range(1, t.index))


# --------------------------------------------------------------------------- Todd-Coxeter


def todd_coxeter(p: Presentation, gens, max_cosets: int = 100_000) -> CosetTable:
    """HLT coset enumeration of the subgroup generated by ``gens``."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    gens = [tuple(g) for g in gens]
    for w in gens:
        if any(not 0 <= x < NLETTERS for x in w):
            raise ValueError("malformed word")
    table: list[list[int]] = [[-1] * NLETTERS]
    parent = [0]
    live = [1]

    def rep(c):
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def new_coset(c, x):
        if live[0] >= max_cosets:
            raise ResourceLimit(f"more than {max_cosets} live cosets", {"live": live[0]})
        n = len(table)
        table.append([-1] * NLETTERS)
        parent.append(n)
        live[0] += 1
        table[c][x] = n
        table[n][x ^ 1] = c
        return n

    def coincidence(a, b):
        queue = []

        def merge(k, l):
            k, l = rep(k), rep(l)
            if k == l:
                return
            if k > l:
                k, l = l, k
            parent[l] = k
            live[0] -= 1
            queue.append(l)

        merge(a, b)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(NLETTERS):
                f = table[e][x]
                if f < 0:
                    continue
                if table[f][x ^ 1] == e:
                    table[f][x ^ 1] = -1
                e1, f1 = rep(e), rep(f)
                if table[e1][x] >= 0:
                    merge(f1, table[e1][x])
                elif table[f1][x ^ 1] >= 0:
                    merge(e1, table[f1][x ^ 1])
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def scan_and_fill(c, w):
        n = len(w)
        if n == 0:
            return
        f = b = c
        i, j = 0, n - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            new_coset(f, w[i])

    for w in gens:
        scan_and_fill(rep(0), w)
    rels = [tuple(r) for r in p.relators]
    c = 0
    while c < len(table):
        for r in rels:
            if parent[c] != c:
                break
            scan_and_fill(c, r)
        if parent[c] == c:
            for x in range(NLETTERS):
                if parent[c] != c:
                    break
                if table[c][x] < 0:
                    new_coset(c, x)
        c += 1
    alive = [c for c in range(len(table)) if parent[c] == c]
    lab = {c: i for i, c in enumerate(alive)}
    rows = np.array([[lab[rep(table[c][x])] for x in range(NLETTERS)] for c in alive], dtype=np.int64)
    return CosetTable(_standardize(rows, lab[rep(0)]))


# --------------------------------------------------------------------------- low index


def _run_subtree(payload):
    T, m, N, args = payload
    tabs, ms, done, nodes, fin = _lowindex.search(T, m, N, NLETTERS, *args, -1, 0)
    return [(int(mm), np.array(tb)) for tb, mm in zip(tabs, ms)], int(nodes)


def low_index_classes(p: Presentation, max_index: int, jobs: int = 1, use_symmetry: bool = True,
                      node_limit: int = 0, progress=None) -> list[SubgroupRecord]:
    """One canonical table per conjugacy class of subgroups of index <= max_index.

    The search works up to the letter automorphisms of ``p``; each leader found
    is expanded into its orbit of conjugacy classes before returning.
    """
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    N = max_index
    auts = letter_automorphisms(p) if use_symmetry else [tuple(range(NLETTERS))]
    args = _lowindex.prepare([list(r) for r in p.relators], NLETTERS, auts)
    T = np.full(N * NLETTERS, -1, dtype=np.int32)
    leaders = []
    if jobs <= 1:
        tabs, ms, done, nodes, fin = _lowindex.search(T, 1, N, NLETTERS, *args, -1, node_limit)
        leaders = [(int(m), np.array(tb)) for tb, m in zip(tabs, ms)]
        if not fin:
            raise ResourceLimit(f"node limit {node_limit} reached",
                                {"nodes": int(nodes), "leaders_found": len(leaders)})
    else:
        depth = 1
        while True:
            tabs, ms, done, nodes, fin = _lowindex.search(T.copy(), 1, N, NLETTERS, *args, depth, 0)
            pending = [(np.array(tb), int(m)) for tb, m, d in zip(tabs, ms, done) if not d]
            if len(pending) >= 8 * jobs or not pending or depth > 6 * N:
                break
            depth += 1
        leaders = [(int(m), np.array(tb)) for tb, m, d in zip(tabs, ms, done) if d]
        payloads = [(tb, m, N, args) for tb, m in pending]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for i, (found, _) in enumerate(ex.map(_run_subtree, payloads)):
                leaders.extend(found)
                if progress:
                    progress(i + 1, len(payloads))
    classes = {}
    for m, flat in leaders:
        rows = flat.reshape(m, NLETTERS).astype(np.int64)
        for a in auts:
            ainv = [0] * NLETTERS
            for l in range(NLETTERS):
                ainv[a[l]] = l
            c = canonical_rows(rows, ainv)
            classes[(m, c.tobytes())] = c
    out = [SubgroupRecord(CosetTable(classes[k]), None, "enumerated") for k in sorted(classes)]
    out.sort(key=lambda r: (r.degree, tuple(r.table.rows.ravel())))
    return out


# --------------------------------------------------------------------------- groups


def _closure(gens: list, bound: int):
    """Elements of the permutation group generated by ``gens`` (BFS from identity)."""
    k = len(gens[0]) if gens else 0
    ident = np.arange(k, dtype=np.int32)
    elems = [ident]
    index = {ident.tobytes(): 0}
    i = 0
    while i < len(elems):
        e = elems[i]
        i += 1
        for g in gens:
            h = g[e]
            key = h.tobytes()
            if key not in index:
                if len(elems) >= bound:
                    raise ResourceLimit(f"group order exceeds {bound}", {"order_at_least": len(elems)})
                index[key] = len(elems)
                elems.append(h)
    return elems, index


def _normal_closure_order(gens, seeds, bound):
    if not seeds:
        return 1
    cur = list(seeds)
    while True:
        elems, index = _closure(cur, bound)
        added = False
        for s in list(cur):
            for g in gens:
                ginv = np.argsort(g).astype(np.int32)
                c = g[s[ginv]]
                if c.tobytes() not in index:
                    cur.append(c)
                    added = True
        if not added:
            return len(elems)


CATALOG = {(60, True): "A5", (120, True): "SL(2,5)", (504, True): "PSL(2,8)"}


def catalog_name(order: int, perfect: bool) -> str | None:
    if order == 1:
        return "1"
    if order == 1344:
        return "order 1344"
    return CATALOG.get((order, perfect))


def image_summary(a: PermutationAction, bound: int = 1_000_000) -> GroupSummary:
    gens = [np.array(p, dtype=np.int32) for p in a.perms]
    elems, _ = _closure(gens, bound)
    order = len(elems)
    comms = []
    for g, h in itertools.combinations(gens, 2):
        gi, hi = np.argsort(g), np.argsort(h)
        c = h[g[hi[gi]]]
        if not np.array_equal(c, np.arange(len(c))):
            comms.append(c.astype(np.int32))
    dorder = _normal_closure_order(gens, comms, bound)
    perfect = dorder == order
    transitive = a.is_transitive()
    regular = transitive and order == a.degree
    return GroupSummary(order, transitive, regular, perfect, catalog_name(order, perfect))


def image_order(a: PermutationAction) -> int:
    """Order of the monodromy image by Schreier-Sims (sympy); no element list is built."""
    from sympy.combinatorics import Permutation, PermutationGroup
    return int(PermutationGroup([Permutation(list(p)) for p in a.perms]).order())


def regular_table(a: PermutationAction, bound: int = 1_000_000) -> CosetTable:
    """Right-regular action of the image group: a coset table of the kernel."""
    gens = [np.array(p, dtype=np.int32) for p in a.perms]
    elems, index = _closure(gens, bound)
    n = len(elems)
    rows = np.empty((n, NLETTERS), dtype=np.int64)
    for e, el in enumerate(elems):
        for g, gp in enumerate(gens):
            rows[e, 2 * g] = index[gp[el].tobytes()]
    for g in range(NGENS):
        rows[rows[:, 2 * g], 2 * g + 1] = np.arange(n)
    return CosetTable(rows)


def core(t: CosetTable, bound: int = 1_000_000, provenance: str = "core") -> SubgroupRecord:
    return SubgroupRecord(regular_table(action_from_table(t), bound), None, provenance)


def core_index(t: CosetTable, bound: int = 1_000_000) -> int:
    return image_summary(action_from_table(t), bound).order


# --------------------------------------------------------------------------- finite groups


@dataclass
class SubgroupClass:
    index: int
    order: int
    size: int
    normal: bool
    image_order: int
    image_name: str | None
    table: CosetTable = field(repr=False)


def finite_subgroup_classes(p: Presentation, bound: int = 100_000) -> list[SubgroupClass]:
    """All subgroups of a finite presented group, grouped into conjugacy classes."""
    reg = todd_coxeter(p, [], max_cosets=bound)
    n = reg.index
    rows = reg.rows
    # word for each element, then the multiplication table a*b = trace(b's word from a)
    words = [()] * n
    seen = [False] * n
    seen[0] = True
    dq = deque([0])
    while dq:
        c = dq.popleft()
        for x in range(NLETTERS):
            d = int(rows[c, x])
            if not seen[d]:
                seen[d] = True
                words[d] = words[c] + (x,)
                dq.append(d)
    mul = np.empty((n, n), dtype=np.int64)
    for b in range(n):
        cur = np.arange(n)
        for x in words[b]:
            cur = rows[cur, x]
        mul[:, b] = cur
    inv = [int(np.nonzero(mul[a_] == 0)[0][0]) for a_ in range(n)]

    def close(gens):
        s = {0}
        frontier = [0]
        gl = list(gens)
        while frontier:
            nxt = []
            for e in frontier:
                for g in gl:
                    h = int(mul[e, g])
                    if h not in s:
                        s.add(h)
                        nxt.append(h)
            frontier = nxt
        return frozenset(s)

    cyclic = {close([g]) for g in range(n)}
    subs = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for H in frontier:
            for C in cyclic:
                if not C <= H:
                    J = close(list(H | C))
                    if J not in subs:
                        new.add(J)
        subs |= new
        frontier = new

    def conj(H, g):
        return frozenset(int(mul[mul[inv[g], h], g]) for h in H)

    classes = []
    done = set()
    for H in sorted(subs, key=lambda s: (-len(s), sorted(s))):
        if H in done:
            continue
        orbit = {conj(H, g) for g in range(n)}
        done |= orbit
        # coset action on right cosets Hg
        cos = {}
        reps = []
        for g in range(n):
            key = frozenset(int(mul[h, g]) for h in H)
            if key not in cos:
                cos[key] = len(reps)
                reps.append(g)
        k = len(reps)
        trows = np.empty((k, NLETTERS), dtype=np.int64)
        for i, g in enumerate(reps):
            for x in range(NLETTERS):
                gx = int(rows[g, x])
                trows[i, x] = cos[frozenset(int(mul[h, gx]) for h in H)]
        t = CosetTable(_standardize(trows, cos[H]))
        summ = image_summary(action_from_table(t))
        classes.append(SubgroupClass(k, len(H), len(orbit), len(orbit) == 1, summ.order, summ.name, t))
    classes.sort(key=lambda c: (c.index, c.order))
    return classes
