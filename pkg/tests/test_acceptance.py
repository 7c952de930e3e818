"""Acceptance criteria 1-11, one test each; a summary line per criterion is printed at the end."""
import time
from collections import Counter

import pytest

from dodeca import fixtures, pipeline
from dodeca.cosets import finite_subgroup_classes, image_summary, is_normal
from dodeca.cubecomplex import three_torus
from dodeca.dodecomplex import sheet_table
from dodeca.fpgroup import builtin_presentation
from dodeca.hypersurface import specialness

criterion = pytest.mark.criterion

D504_H1 = "Z^8 + Z2^10 + Z3 + Z4^9 + Z5^17 + Z7 + Z8^6 + Z9^7 + Z17^28 + Z27^7 + Z29^9 + Z83^18"


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


@criterion(1, "presentations")
def test_c01_presentations():
    res, sec = _timed(pipeline.presentations_check)
    assert res["WS"]["equivalent"] and res["PHS"]["equivalent"]
    assert res["RP3"]["abelianization"] == "Z2"
    assert sec < 1.0, f"{sec:.2f}s"


@criterion(2, "Table 1 census to degree 9")
def test_c02_census(census):
    per_degree = Counter(r.degree for r in census.covers)
    assert per_degree == {1: 1, 5: 38, 6: 61, 7: 50, 8: 185, 9: 155}
    deg5 = Counter(str(r.homology) for r in census.covers if r.degree == 5)
    assert deg5 == {"Z5^2 + Z25^2": 25, "Z3 + Z5 + Z25^3": 6, "Z5^6 + Z25": 6, "Z^4 + Z3^2": 1}
    ds = pipeline.table1(covers=census.covers)
    assert ds.ok, ds.diff
    assert census.seconds < 30 * 60


@criterion(3, "cover C")
def test_c03_cover_c(census):
    cs = [r for r in census.covers if r.degree == 6 and r.components == 6]
    assert len(cs) == 1
    c = cs[0].action
    res, sec = _timed(pipeline.verify_cover_c, c)
    assert res["homology"] == "Z^5 + Z2^2 + Z5^3"
    failed = [k for k, v in res["checks"].items() if not v]
    assert not failed, f"failed checks {failed}; crossing chromatic number {res['crossing_chromatic_number']}"
    assert sec < 5.0


@criterion(4, "appendix certificate")
def test_c04_appendix():
    res, sec = _timed(pipeline.verify_appendix)
    failed = [k for k, v in res["checks"].items() if not v]
    assert res["ok"], failed
    assert res["homology"] == "Z^41 + Z2^12" and res["components"] == 60
    assert sec < 30.0


@criterion(5, "normal cores")
def test_c05_cores(census):
    res, sec = _timed(pipeline.core_checks, census.covers)
    # proper non-normal subgroups of index <= 6
    assert {k for k, _ in res["small_core_indices"]} == {60, 360}
    # normal ones are their own cores: the 31 kernels of maps onto Z5
    normal = [r for r in census.covers if 1 < r.degree <= 6 and is_normal(sheet_table(r.action))]
    assert len(normal) == 31 and {r.degree for r in normal} == {5}
    assert res["unique_c"] and res["unique_hempel"]
    assert res["core_c_order"] == res["core_h_order"] == 60
    assert res["core_c_is_s"] and res["core_h_is_s"]
    assert res["joint_image_order"] == 60
    assert res["regular_below_both"] == []
    assert res["s_below_c"] and res["s_below_hempel"]
    assert sec < 60.0


@criterion(6, "double-cover towers")
def test_c06_towers():
    ds2 = pipeline.table2()
    assert ds2.ok, ds2.diff
    res = pipeline.tower()
    assert (res.doubles, res.doubles_fpf) == (127, 64)
    assert (res.second, res.second_fpf) == (43905, 16192)
    ds3 = pipeline.table3(res)
    assert ds3.ok, ds3.diff
    assert len(res.special_candidates) == 1
    e = res.e_action
    assert pipeline.base_point_containing(e, fixtures.source_words("E")) is not None
    n, nf, dist = pipeline.e_doubles(e)
    assert n == nf == 131071
    assert dist == {24: 120205, 25: 10200, 26: 240, 27: 240, 28: 162, 33: 24}


def _ten(census):
    return [r for r in census.covers if r.degree == 9 and r.components == 2]


@criterion(7, "degree-504 covers")
def test_c07_degree_504(census):
    ten = _ten(census)
    assert len(ten) == 10
    assert {str(r.homology) for r in ten} == {"Z + Z3 + Z4 + Z5^3 + Z7"}
    for r in ten:
        s = image_summary(r.action)
        assert s.order == 504 and s.perfect and s.name == "PSL(2,8)"
    t0 = time.perf_counter()
    rep = pipeline.core_cover_report(ten[0], homology=True)
    assert rep["degree"] == 504 and rep["components"] == 9
    assert all(rep["embedded"]) and rep["pentagons"] == [672] * 9 and rep["genus"] == [169] * 9
    assert rep["self_osculating"] == 9
    assert rep["homology"] == D504_H1
    assert time.perf_counter() - t0 < 2 * 3600


@pytest.mark.slow
def test_c07_all_ten_cores(census):
    for r in _ten(census)[1:]:
        rep = pipeline.core_cover_report(r, homology=True)
        assert rep["components"] == 9 and all(rep["embedded"])
        assert rep["homology"] == D504_H1


def test_core_index_census(census):
    res = pipeline.search_cores(census.covers)
    assert res["core_indices"] == [168, 504, 1344, 2520, 20160, 181440]
    built = [b for b in res["built"] if b["core_index"] == 1344]
    assert len(built) == 120
    eight = [b for b in built if b["components"] == 8]
    assert len(eight) == 40 and all(b["embedded"] == 0 for b in eight)


@criterion(8, "PHS covers")
def test_c08_phs():
    t0 = time.perf_counter()
    classes = finite_subgroup_classes(builtin_presentation("PHS"))
    assert len(classes) == 12 and sum(c.size for c in classes) == 76
    assert {c.image_order for c in classes} == {1, 60, 120}
    ds = pipeline.table4()
    assert ds.ok, ds.diff
    assert all(r["components"] == r["degree"] and r["spheres"] for r in ds.rows)
    assert time.perf_counter() - t0 < 60


@criterion(9, "RP3")
def test_c09_rp3():
    res, sec = _timed(pipeline.rp3_checks)
    assert res["classes_by_degree"] == [(1, 1), (2, 1)]
    assert res["base_components"] == [(2, 2, True)] * 6
    assert [c for c in res["double_components"]] == [(2, 2)] * 12
    assert 2 in res["edge_degrees"] and not res["base_npc"]
    assert sec < 1.0, f"{sec:.2f}s"


@criterion(10, "NPC of the base cubulations")
def test_c10_npc():
    res = pipeline.npc_bases()
    ws = res["WS"]
    assert ws["cube_f_vector"] == [14, 54, 60, 20]
    assert ws["min_edge_degree"] >= 4 and ws["flag"] and ws["npc"]
    assert (res["PHS"]["npc"], res["PHS"]["min_edge_degree"]) == (False, 3)
    assert (res["RP3"]["npc"], res["RP3"]["min_edge_degree"]) == (False, 2)


@criterion(11, "property suites over every cover")
def test_c11_properties(census, c_action, s_action):
    bad = {}
    for r in census.covers:
        f = pipeline.property_failures("WS", r.action)
        if f:
            bad[r.degree] = f
    for a in (c_action, s_action):
        f = pipeline.property_failures("WS", a)
        if f:
            bad[a.degree] = f
    assert not bad, bad
    assert specialness(three_torus()).special
