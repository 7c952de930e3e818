"""Drivers composing the modules: cover analysis, table reproduction and searches."""
from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fixtures
from .cosets import (PermutationAction, ResourceLimit, SubgroupRecord, action_from_table, contains,
                     finite_subgroup_classes, image_order, image_summary, is_conjugate, is_normal,
                     low_index_classes, regular_table, trace)
from .cubecomplex import cubulate, npc_report
from .dodecomplex import (DodecahedralComplex, base_complex, canonical_dodecahedron, cover_complex,
                          derive_presentation, double_action, sheet_table)
from .fpgroup import Presentation, builtin_presentation, relators_equivalent
from .homology import (AbelianGroup, abelian_invariants, abelian_relation_matrix, mod2_kernel_basis, rank_mod_p,
                       schreier_generators, smith_normal_form)
from .hypersurface import DiskGraph, Hyperplanes, specialness


class VerificationError(RuntimeError):
    pass


def presentation(space: str) -> Presentation:
    return builtin_presentation(space)


def _pmap(fn, items, jobs: int = 1):
    """Map over independent work items; output order follows the input."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# --------------------------------------------------------------------------- cover records


@dataclass
class CoverRecord:
    space: str
    degree: int
    action: PermutationAction
    homology: AbelianGroup
    components: int
    embedded: list                   # per component
    special: bool | None = None
    provenance: str = ""

    @property
    def betti(self) -> int:
        return self.homology.rank

    @property
    def all_embedded(self) -> bool:
        return all(self.embedded)

    @property
    def any_embedded(self) -> bool:
        return any(self.embedded)

    def embedded_flag(self) -> str:
        n = sum(self.embedded)
        if n == 0:
            return "no"
        if n == len(self.embedded):
            return "yes (all)"
        return "yes (one)" if n == 1 else f"yes ({n})"

    def to_json(self) -> dict:
        return {"space": self.space.lower(), "degree": self.degree, "action": self.action.to_json(),
                "homology": str(self.homology), "betti": self.betti, "components": self.components,
                "embedded": self.embedded, "all_embedded": self.all_embedded,
                "any_embedded": self.any_embedded, "special": self.special, "provenance": self.provenance}

    @classmethod
    def from_json(cls, d: dict) -> "CoverRecord":
        return cls(d["space"].upper(), d["degree"], PermutationAction.from_json(d["action"]),
                   AbelianGroup.parse(d["homology"]), d["components"], list(d["embedded"]),
                   d.get("special"), d.get("provenance", ""))


def homology_of(space: str, a: PermutationAction) -> AbelianGroup:
    return abelian_invariants(abelian_relation_matrix(presentation(space), sheet_table(a)))


def analyze_action(space: str, a: PermutationAction, provenance: str = "", special: bool = True,
                   homology: bool = True) -> CoverRecord:
    """Homology and canonical-surface data of one cover, computed on the cubulation."""
    x = cover_complex(space, a)
    c = cubulate(x)
    h = Hyperplanes(c)
    sp = None
    if special:
        sp = specialness(c, h).special
    hom = homology_of(space, a) if homology else AbelianGroup(0)
    return CoverRecord(space.upper(), a.degree, a, hom, len(h.components),
                       [sc.embedded for sc in h.components], sp, provenance)


def full_report(space: str, a: PermutationAction, npc: bool = False) -> dict:
    """Everything the command line prints for one cover."""
    x = cover_complex(space, a)
    c = cubulate(x)
    h = Hyperplanes(c)
    rep = specialness(c, h)
    alias = canonical_dodecahedron().listing_alias
    summ = image_summary(a)
    out = {
        "space": space.lower(), "degree": a.degree,
        "homology": str(homology_of(space, a)),
        "f_vector": list(x.f_vector()), "cube_f_vector": list(c.f_vector()),
        "monodromy": {"order": summ.order, "name": summ.name, "regular": summ.regular,
                      "perfect": summ.perfect},
        "self_identifications": sum(1 for i, j, _ in x.pairing_graph() if i == j),
        "components": [
            {"id": sc.index + 1, "disks": [d.tex(alias) for d in sc.disks], "genus": sc.genus,
             "chi": sc.chi, "embedded": sc.embedded, "two_sided": sc.two_sided,
             "orientable": sc.orientable, "near_vertices": len(sc.near),
             "self_osculating": sc.index in rep.self_osculating}
            for sc in h.components],
        "crossing_pairs": [[s + 1, t + 1] for s, t in rep.crossing],
        "inter_osculating": [[s + 1, t + 1] for s, t in rep.inter_osculating],
        "crossing_chromatic_number": rep.chromatic,
        "lemma_agrees": rep.lemma_agrees,
        "special": rep.special,
    }
    if npc:
        r = npc_report(c)
        out["npc"] = {"npc": r.npc, "min_edge_degree": r.min_edge_degree, "flag": r.flag,
                      "simplicial": r.simplicial, "closed": r.closed}
    return out


def property_failures(space: str, a: PermutationAction) -> list[str]:
    """Invariants every cover must satisfy; returns the violated ones."""
    bad = []
    k = a.degree
    base = base_complex(space)
    x = cover_complex(base, a)
    fv, bfv = x.f_vector(), base.f_vector()
    if tuple(fv) != tuple(bfv.scaled(k)):
        bad.append(f"f-vector {tuple(fv)} is not {k} x {tuple(bfv)}")
    if fv.euler() != 0:
        bad.append("dodecahedral Euler characteristic nonzero")
    c = cubulate(x)
    cb = cubulate(base)
    if c.f_vector() != tuple(k * v for v in cb.f_vector()):
        bad.append("cube f-vector not multiplicative")
    V, E, F, C = c.f_vector()
    if V - E + F - C != 0:
        bad.append("cubical Euler characteristic nonzero")
    h = Hyperplanes(c)
    disks = [d for sc in h.components for d in sc.disks]
    if len(disks) != 12 * k or len(set(disks)) != 12 * k or set(Counter(d.sheet for d in disks).values()) != {12}:
        bad.append("disks are not 12 per sheet")
    dg = DiskGraph(x)
    if (dg.ncomp != len(h.components) or dg.embedded != [sc.embedded for sc in h.components]
            or any(dg.disks(i, x.model.labels) != sorted(sc.disks) for i, sc in enumerate(h.components))):
        bad.append("disk graph and hyperplanes disagree")
    rep = specialness(c, h)
    if not rep.lemma_agrees:
        bad.append("disk-level osculation criterion disagrees with the direct check")
    m = abelian_relation_matrix(presentation(space), sheet_table(a))
    inv = smith_normal_form(m)
    if any(inv[i + 1] % inv[i] for i in range(len(inv) - 1)):
        bad.append("invariant factors do not form a divisor chain")
    for p in (2, 3, 5):
        if rank_mod_p(m, p) != sum(1 for d in inv if d % p):
            bad.append(f"GF({p}) rank disagrees with the Smith form")
    return bad


# --------------------------------------------------------------------------- tables


@dataclass
class TableDataset:
    name: str
    rows: list
    expected: list
    diff: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diff

    def to_json(self) -> dict:
        return {"table": self.name, "ok": self.ok, "rows": self.rows, "diff": self.diff, "notes": self.notes}


def _diff_counters(got: Counter, want: Counter, fmt=str) -> list[str]:
    out = []
    for key in sorted(set(got) | set(want), key=str):
        if got[key] != want[key]:
            out.append(f"{fmt(key)}: computed {got[key]}, expected {want[key]}")
    return out


def enumerate_covers(space: str, max_index: int, jobs: int = 1, progress=None) -> list[SubgroupRecord]:
    return low_index_classes(presentation(space), max_index, jobs=jobs, progress=progress)


def _analyze_ws(rec):
    return analyze_action("WS", rec.action(), "enumerated")


def table1(records: list[SubgroupRecord] | None = None, jobs: int = 1, max_index: int = 9,
           covers: list[CoverRecord] | None = None) -> TableDataset:
    if covers is None:
        if records is None:
            records = enumerate_covers("WS", max_index, jobs)
        covers = _pmap(_analyze_ws, records, jobs)
    got = Counter((r.degree, str(r.homology), r.betti, r.components, r.embedded_flag()) for r in covers)
    want = Counter()
    for row in fixtures.expected_table(1):
        want[(row["degree"], str(row["H1"]), row["betti"], row["components"], row["embedded"])] += row["covers"]
    rows = [{"degree": k[0], "H1": k[1], "betti": k[2], "components": k[3], "embedded": k[4], "covers": n}
            for k, n in sorted(got.items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1]))]
    ds = TableDataset("table1", rows, list(want.items()), _diff_counters(got, want))
    per_degree = Counter(r.degree for r in covers)
    ds.notes.append("classes per degree: " + ", ".join(f"{d}:{n}" for d, n in sorted(per_degree.items())))
    ds.covers = covers
    return ds


# --------------------------------------------------------------------------- double covers


@dataclass
class DoubleFamily:
    """All connected double covers of one cover, as cocycle coordinates ``lam``."""
    action: PermutationAction
    cols: dict
    kernel: list                    # cocycle basis, each a 0/1 tuple over Schreier columns
    lam: np.ndarray                 # 1 .. 2^r - 1
    fpf: np.ndarray
    components: np.ndarray

    def cocycle(self, lam: int) -> list:
        c = [0] * len(self.cols)
        for t, v in enumerate(self.kernel):
            if lam >> t & 1:
                c = [p ^ q for p, q in zip(c, v)]
        return c

    def lift(self, lam: int) -> PermutationAction:
        return double_action(self.action, self.cocycle(lam), self.cols)


def _parity(a: np.ndarray, m: int) -> np.ndarray:
    return np.bitwise_count(a & m) & 1


def double_family(space: str, a: PermutationAction) -> DoubleFamily:
    """Index-2 subgroups of the cover's group, with fpf flags and surface counts.

    A double cover is fpf iff the cocycle is 1 at every self-glued pentagon;
    a surface component lifts to two iff the cocycle vanishes on its cycles.
    """
    t = sheet_table(a)
    cols = schreier_generators(t)
    kern = mod2_kernel_basis(abelian_relation_matrix(presentation(space), t))
    r = len(kern)
    if r > 30:
        raise ResourceLimit(f"{2 ** r - 1} double covers is too many to list", {"kernel_rank": r})
    vecs = [sum(1 << j for j, v in enumerate(k) if v) for k in kern]
    lam = np.arange(1, 1 << r, dtype=np.int64)
    fpf = np.ones(len(lam), dtype=bool)
    for g, p in enumerate(a.perms):
        for i in range(a.degree):
            if p[i] == i:
                j = cols[(i, g)]
                fpf &= _parity(lam, sum(1 << s for s, v in enumerate(vecs) if v >> j & 1)) == 1
    dg = DiskGraph(cover_complex(space, a), cols)
    comps = np.zeros(len(lam), dtype=np.int64)
    for rows in dg.split_masks(vecs):
        split = np.ones(len(lam), dtype=bool)
        for m in rows:
            split &= _parity(lam, m) == 0
        comps += 1 + split
    return DoubleFamily(a, cols, kern, lam, fpf, comps)


def table2(c_action: PermutationAction | None = None) -> TableDataset:
    a = c_action or fixtures.source_action("cover_c")
    fam = double_family("WS", a)
    got = Counter()
    for lam, ok, n in zip(fam.lam, fam.fpf, fam.components):
        if ok:
            got[(str(homology_of("WS", fam.lift(int(lam)))), int(n))] += 1
    want = Counter({(str(r["H1"]), r["components"]): r["covers"] for r in fixtures.expected_table(2)})
    rows = [{"H1": k[0], "components": k[1], "covers": n} for k, n in sorted(got.items())]
    ds = TableDataset("table2", rows, list(want.items()), _diff_counters(got, want))
    ds.notes.append(f"double covers {len(fam.lam)}, fixed-point free {int(fam.fpf.sum())}")
    if len(fam.lam) != 127 or int(fam.fpf.sum()) != 64:
        ds.diff.append(f"expected 127 doubles / 64 fpf, got {len(fam.lam)} / {int(fam.fpf.sum())}")
    return ds


@dataclass
class TowerResult:
    doubles: int
    doubles_fpf: int
    second: int
    second_fpf: int
    distribution: Counter
    special_candidates: list        # (parent lam, lam) with 24 components
    e_action: PermutationAction | None = None


def tower(c_action: PermutationAction | None = None, progress=None) -> TowerResult:
    a = c_action or fixtures.source_action("cover_c")
    fam = double_family("WS", a)
    second = second_fpf = 0
    dist = Counter()
    cands = []
    for n, lam in enumerate(fam.lam):
        d = fam.lift(int(lam))
        f2 = double_family("WS", d)
        second += len(f2.lam)
        second_fpf += int(f2.fpf.sum())
        dist.update(f2.components[f2.fpf].tolist())
        for l2 in f2.lam[f2.fpf & (f2.components == 24)]:
            cands.append((int(lam), int(l2), f2.lift(int(l2))))
        if progress:
            progress(n + 1, len(fam.lam))
    res = TowerResult(len(fam.lam), int(fam.fpf.sum()), second, second_fpf, dist,
                      [(p, q) for p, q, _ in cands])
    if len(cands) == 1:
        res.e_action = cands[0][2]
    return res


def table3(res: TowerResult | None = None) -> TableDataset:
    res = res or tower()
    want = Counter()
    for r in fixtures.expected_table(3):
        want[r["components"]] += r["covers"]
    got = Counter({int(k): v for k, v in res.distribution.items()})
    rows = [{"components": k, "covers": n} for k, n in sorted(got.items())]
    ds = TableDataset("table3", rows, sorted(want.items()), _diff_counters(got, want))
    ds.notes.append(f"doubles of doubles {res.second}, fixed-point free {res.second_fpf}")
    ds.notes.append("expected columns with equal component counts are summed")
    if (res.second, res.second_fpf) != (43905, 16192):
        ds.diff.append(f"expected 43905 / 16192, got {res.second} / {res.second_fpf}")
    return ds


def base_point_containing(a: PermutationAction, words) -> int | None:
    """A sheet whose stabilizer contains every word, if any."""
    t = sheet_table(a)
    for b in range(a.degree):
        if all(trace(t, w, b) == b for w in words):
            return b
    return None


def e_doubles(e_action: PermutationAction) -> tuple[int, int, Counter]:
    fam = double_family("WS", e_action)
    return len(fam.lam), int(fam.fpf.sum()), Counter(fam.components[fam.fpf].tolist())


# --------------------------------------------------------------------------- cores


def find_class(records, pred):
    return [r for r in records if pred(r)]


def is_hempel(rec: CoverRecord) -> bool:
    return rec.degree == 5 and rec.betti == 4


def core_checks(covers: list[CoverRecord]) -> dict:
    """Core indices of small classes and the relation between 𝒞, Hempel's cover and 𝒮."""
    out = {}
    # a normal subgroup is its own core; only irregular classes have a proper one
    small = [r for r in covers if 1 < r.degree <= 6 and not is_normal(sheet_table(r.action))]
    out["small_core_indices"] = sorted(Counter(image_order(r.action) for r in small).items())
    cs = [r for r in covers if r.degree == 6 and r.components == 6]
    hs = [r for r in covers if is_hempel(r)]
    out["unique_c"] = len(cs) == 1
    out["unique_hempel"] = len(hs) == 1
    if len(cs) != 1 or len(hs) != 1:
        return out
    c, h = cs[0].action, hs[0].action
    s_tab = sheet_table(fixtures.source_action("appendix"))
    reg_c = regular_table(c)
    reg_h = regular_table(h)
    out["core_c_order"] = reg_c.index
    out["core_h_order"] = reg_h.index
    # both cores and the appendix cover are normal; conjugate means equal
    out["core_c_is_s"] = is_conjugate(reg_c, s_tab)
    out["core_h_is_s"] = is_conjugate(reg_h, s_tab)
    both = PermutationAction(tuple(p + tuple(v + c.degree for v in q) for p, q in zip(c.perms, h.perms)))
    out["joint_image_order"] = image_order(both)
    # regular covers in the census lying below both 𝒞 and Hempel's cover
    c_words = _generators(sheet_table(c))
    h_words = _generators(sheet_table(h))
    below = []
    for r in covers:
        t = sheet_table(r.action)
        if 1 < r.degree < 60 and is_normal(t) and contains(t, c_words) and contains(t, h_words):
            below.append(r.degree)
    out["regular_below_both"] = below
    s_words = fixtures.source_words("S")
    out["s_below_c"] = base_point_containing(c, s_words) is not None
    out["s_below_hempel"] = base_point_containing(h, s_words) is not None
    return out


def _generators(t) -> list:
    """Schreier generators of the stabilizer of coset 0 as words."""
    rows = t.rows
    k = t.index
    words = [None] * k
    words[0] = ()
    order = [0]
    for c in order:
        for x in range(rows.shape[1]):
            d = int(rows[c, x])
            if words[d] is None:
                words[d] = words[c] + (x,)
                order.append(d)
    inv = lambda w: tuple(v ^ 1 for v in reversed(w))
    gens = []
    for c in range(k):
        for x in range(0, rows.shape[1], 2):
            d = int(rows[c, x])
            w = words[c] + (x,) + inv(words[d])
            if _free_reduce(w):
                gens.append(_free_reduce(w))
    return gens


def _free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def search_cores(covers: list[CoverRecord], max_build: int = 2520, homology: bool = False,
                 progress=None) -> dict:
    """Core indices of the degree 7-9 classes; builds and analyzes the cores up to ``max_build``."""
    pool = [r for r in covers if 7 <= r.degree <= 9]
    orders = [image_order(r.action) for r in pool]
    out = {"core_indices": sorted(set(orders)), "index_counts": sorted(Counter(orders).items()),
           "by_degree": sorted(Counter(zip((r.degree for r in pool), orders)).items())}
    built = []
    todo = [(r, o) for r, o in zip(pool, orders) if o <= max_build]
    for n, (r, o) in enumerate(todo):
        reg = regular_table(r.action)
        ra = action_from_table(reg)
        dg = DiskGraph(cover_complex("WS", ra))
        item = {"degree": r.degree, "core_index": o, "class_components": r.components,
                "class_homology": str(r.homology), "components": dg.ncomp,
                "embedded": sum(dg.embedded), "disks": sorted(Counter(len(m) for m in dg.members).items())}
        if homology:
            item["homology"] = str(homology_of("WS", ra))
        built.append(item)
        if progress:
            progress(n + 1, len(todo))
    out["built"] = built
    return out


def core_cover_report(rec: CoverRecord, homology: bool = True) -> dict:
    """Full cube-level analysis of the cover of a class's normal core."""
    ra = action_from_table(regular_table(rec.action))
    summ = image_summary(rec.action)
    x = cover_complex("WS", ra)
    c = cubulate(x)
    h = Hyperplanes(c)
    rep = specialness(c, h)
    out = {"degree": ra.degree, "image": summ.name, "perfect": summ.perfect,
           "components": len(h.components),
           "embedded": [sc.embedded for sc in h.components],
           "pentagons": [len(sc.disks) for sc in h.components],
           "genus": [sc.genus for sc in h.components],
           "self_osculating": len(rep.self_osculating)}
    if homology:
        out["homology"] = str(homology_of("WS", ra))
    return out


# --------------------------------------------------------------------------- PHS and RP3


def table4() -> TableDataset:
    p = presentation("PHS")
    classes = finite_subgroup_classes(p)
    base = base_complex("PHS")
    bfv = base.f_vector()
    deck_orders = {"1": 1, "A_5": 60, "SL(2,5)": 120}
    rows = []
    for cl in classes:
        a = action_from_table(cl.table)
        x = cover_complex(base, a)
        c = cubulate(x)
        h = Hyperplanes(c)
        spheres = all(sc.chi == 2 and sc.orientable and len(sc.disks) == 12 for sc in h.components)
        nemb = sum(sc.embedded for sc in h.components)
        rows.append({"degree": cl.index, "subgroup_order": cl.order, "conjugates": cl.size,
                     "f_vector": "(" + ",".join(map(str, x.f_vector())) + ")",
                     "embedded": "yes" if nemb == len(h.components) else ("no" if nemb == 0 else "some"),
                     "components": len(h.components), "spheres": spheres,
                     "regular": "yes" if cl.normal else "no", "image_order": cl.image_order})
    exp = fixtures.expected_table(4)
    diff = []
    if len(classes) != 12 or sum(cl.size for cl in classes) != 76:
        diff.append(f"{sum(cl.size for cl in classes)} subgroups in {len(classes)} classes, expected 76 in 12")
    for got, want in zip(rows, exp):
        d = want["degree"]
        checks = {"degree": (got["degree"], d),
                  "f_vector": (got["f_vector"], "(" + ",".join(str(d * v) for v in bfv) + ")"),
                  "f_vector_table": (got["f_vector"], want["f_vector"]),
                  "embedded": (got["embedded"], want["embedded"]),
                  "components": (got["components"], want["components"]),
                  "regular": (got["regular"], want["regular"]),
                  "image_order": (got["image_order"], deck_orders[want["deck"]]),
                  "subgroup_order": (got["subgroup_order"], 120 // d),
                  "spheres": (got["spheres"], True)}
        for name, (g, w) in checks.items():
            if g != w:
                diff.append(f"degree {d} {name}: computed {g}, expected {w}")
    if len(rows) != len(exp):
        diff.append(f"{len(rows)} rows, expected {len(exp)}")
    return TableDataset("table4", rows, exp, diff)


def rp3_checks() -> dict:
    p = presentation("RP3")
    recs = low_index_classes(p, 4)
    degs = Counter(r.degree for r in recs)
    out = {"classes_by_degree": sorted(degs.items()),
           "abelianization": str(abelian_invariants(_presentation_matrix(p)))}
    base = base_complex("RP3")
    hb = Hyperplanes(cubulate(base))
    out["base_components"] = [(len(sc.disks), sc.chi, sc.embedded) for sc in hb.components]
    r = npc_report(cubulate(base))
    out["base_npc"] = r.npc
    out["base_min_edge_degree"] = r.min_edge_degree
    out["edge_degrees"] = sorted(set(cubulate(base).edge_degrees().values()))
    two = [rec for rec in recs if rec.degree == 2]
    if two:
        x = cover_complex(base, two[0].action())
        h = Hyperplanes(cubulate(x))
        out["double_components"] = [(len(sc.disks), sc.chi) for sc in h.components]
    return out


def _presentation_matrix(p: Presentation):
    from .homology import IntegerMatrix
    from .fpgroup import NGENS, exponent_sums
    return IntegerMatrix.from_dense([exponent_sums(r) for r in p.relators]) if p.relators else \
        IntegerMatrix.zeros(0, NGENS)


def presentations_check() -> dict:
    out = {}
    for space in ("WS", "PHS", "RP3"):
        d = derive_presentation(space)
        out[space] = {"derived": d.strings(), "equivalent": relators_equivalent(d, presentation(space)),
                      "abelianization": str(abelian_invariants(_presentation_matrix(d)))}
    return out


def npc_bases() -> dict:
    out = {}
    for space in ("WS", "PHS", "RP3"):
        c = cubulate(base_complex(space))
        r = npc_report(c)
        out[space] = {"cube_f_vector": list(c.f_vector()), "min_edge_degree": r.min_edge_degree,
                      "flag": r.flag, "simplicial": r.simplicial, "npc": r.npc}
    return out


# --------------------------------------------------------------------------- appendix


def verify_appendix() -> dict:
    """Rebuild the listed degree-60 cover and check every listed property."""
    checks = {}
    notes = []
    a = fixtures.source_action("appendix")
    ws = presentation("WS")
    checks["relators"] = a.satisfies(ws)
    checks["transitive"] = a.is_transitive()
    checks["degree_60"] = a.degree == 60
    summ = image_summary(a)
    checks["regular_order_60_perfect"] = summ.regular and summ.order == 60 and summ.perfect
    hom = homology_of("WS", a)
    checks["homology"] = str(hom) == "Z^41 + Z2^12"
    x = cover_complex("WS", a)
    c = cubulate(x)
    h = Hyperplanes(c)
    rep = specialness(c, h)
    comps = h.components
    checks["a_60_embedded_components"] = len(comps) == 60 and rep.all_embedded and rep.all_two_sided
    checks["b_12_disks_distinct_sheets"] = all(len(sc.disks) == 12 and len(sc.disk_sheets()) == 12 for sc in comps)
    checks["c_near_12_vertices"] = all(len(sc.near) == 12 for sc in comps)
    cross = rep.crossing
    checks["d_crossing_share_3_disks"] = bool(cross) and all(h.intersecting_disks(s, t) == 3 for s, t in cross)
    checks["e_crossing_21_near"] = bool(cross) and all(len(comps[s].near | comps[t].near) == 21 for s, t in cross)
    checks["special"] = rep.special
    checks["lemma_agrees"] = rep.lemma_agrees
    listed, typos = fixtures.source_listings("appendix")
    computed = [frozenset(sc.disks) for sc in comps]
    checks["listings_exact"] = sorted(map(sorted, listed)) == sorted(map(sorted, computed))
    if typos:
        notes.append("stray bracket read as a typo in: " + ", ".join(typos))
    t = sheet_table(a)
    checks["listed_words_generate_subgroup"] = contains(t, fixtures.source_words("S"))
    c_act = fixtures.source_action("cover_c")
    checks["below_c"] = all(trace(sheet_table(c_act), w, 0) == 0 for w in fixtures.source_words("S"))
    return {"ok": all(checks.values()), "checks": checks, "notes": notes,
            "components": len(comps), "crossing_pairs": len(cross), "homology": str(hom)}


def verify_cover_c(c_action: PermutationAction) -> dict:
    """Checks on the six-sheeted cover found by enumeration against the listed one."""
    listed_a = fixtures.source_action("cover_c")
    checks = {}
    pi = relabeling(c_action, listed_a)
    checks["conjugate_to_listed"] = pi is not None
    words = fixtures.source_words("C")
    checks["words_trace"] = base_point_containing(c_action, words) is not None
    x = cover_complex("WS", c_action)
    c = cubulate(x)
    h = Hyperplanes(c)
    rep = specialness(c, h)
    comps = h.components
    checks["six_components"] = len(comps) == 6
    checks["embedded_two_sided"] = rep.all_embedded and rep.all_two_sided
    checks["genus_4"] = all(sc.genus == 4 for sc in comps)
    checks["twelve_disks_two_per_sheet"] = all(
        len(sc.disks) == 12 and set(sc.disk_sheets().values()) == {2} and len(sc.disk_sheets()) == 6
        for sc in comps)
    checks["all_self_osculating"] = len(rep.self_osculating) == 6
    loops = Counter(i for i, j, _ in x.pairing_graph() if i == j)
    checks["one_loop_per_node"] = len(loops) == 6 and set(loops.values()) == {1}
    listed, typos = fixtures.source_listings("cover_c")
    if pi is not None:
        mapped = sorted(sorted(type(d)(pi[d.sheet], d.gen, d.side) for d in sc.disks) for sc in comps)
        checks["listings_up_to_relabeling"] = mapped == sorted(map(sorted, listed))
    else:
        checks["listings_up_to_relabeling"] = False
    checks["crossing_graph_3_colourable"] = rep.chromatic <= 3
    return {"ok": all(checks.values()), "checks": checks, "typos": typos,
            "crossing_chromatic_number": rep.chromatic, "crossing_pairs": len(rep.crossing),
            "homology": str(homology_of("WS", c_action))}


def relabeling(a: PermutationAction, b: PermutationAction) -> list | None:
    """Sheet bijection ``pi`` with ``pi[i^g] = pi[i]^g`` in ``b``, or None."""
    if a.degree != b.degree:
        return None
    n = a.degree
    ta, tb = sheet_table(a), sheet_table(b)
    for start in range(n):
        pi = [-1] * n
        pi[0] = start
        stack = [0]
        ok = True
        while stack and ok:
            i = stack.pop()
            for x in range(ta.rows.shape[1]):
                j, jb = int(ta.rows[i, x]), int(tb.rows[pi[i], x])
                if pi[j] == -1:
                    pi[j] = jb
                    stack.append(j)
                elif pi[j] != jb:
                    ok = False
                    break
        if ok and len(set(pi)) == n:
            return pi
    return None


def write_json(path: Path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, default=str))


class Timer:
    def __init__(self):
        self.t0 = time.perf_counter()

    def __call__(self) -> float:
        return time.perf_counter() - self.t0
