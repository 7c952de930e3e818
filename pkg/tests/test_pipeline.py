import random

import pytest

from dodeca import pipeline
from dodeca.cosets import PermutationAction, ResourceLimit


def _analyze(rec):
    return pipeline.analyze_action("WS", rec.action(), "enumerated")


def test_cover_record_roundtrip_and_recompute(small_census):
    rng = random.Random(3)
    for r in rng.sample(small_census, 8):
        rec = _analyze(r)
        back = pipeline.CoverRecord.from_json(rec.to_json())
        assert back == rec
        again = pipeline.analyze_action("WS", back.action, "enumerated")
        assert again == rec


def test_pmap_schedule_independent(small_census):
    items = small_census[:12]
    assert pipeline._pmap(_analyze, items, 1) == pipeline._pmap(_analyze, items, 2)


def test_property_suite_small_census(small_census):
    for r in small_census:
        assert pipeline.property_failures("WS", r.action()) == []


def test_embedded_flag():
    rec = pipeline.CoverRecord("WS", 1, PermutationAction(((0,),) * 6), None, 3, [True, False, False])
    assert rec.embedded_flag() == "yes (one)"
    rec.embedded = [True, True, False]
    assert rec.embedded_flag() == "yes (2)"


def test_table2():
    ds = pipeline.table2()
    assert ds.ok, ds.diff


def test_table4():
    ds = pipeline.table4()
    assert ds.ok, ds.diff


def test_tower_and_table3():
    res = pipeline.tower()
    assert (res.doubles, res.doubles_fpf, res.second, res.second_fpf) == (127, 64, 43905, 16192)
    assert len(res.special_candidates) == 1 and res.e_action is not None
    ds = pipeline.table3(res)
    assert ds.ok, ds.diff


def test_double_family_limit(s_action):
    with pytest.raises(ResourceLimit):
        pipeline.double_family("WS", s_action)


def test_relabeling(c_action):
    k = c_action.degree
    pi = list(range(k))
    random.Random(1).shuffle(pi)
    inv = [0] * k
    for i, j in enumerate(pi):
        inv[j] = i
    b = PermutationAction(tuple(tuple(pi[p[inv[i]]] for i in range(k)) for p in c_action.perms))
    assert pipeline.relabeling(c_action, b) == pi
    assert pipeline.relabeling(c_action, PermutationAction(((0,),) * 6)) is None


def test_full_report(c_action):
    rep = pipeline.full_report("WS", c_action, npc=True)
    assert rep["homology"] == "Z^5 + Z2^2 + Z5^3"
    assert rep["f_vector"] == [6, 36, 36, 6]
    assert rep["npc"]["npc"] and len(rep["components"]) == 6
    assert rep["monodromy"]["order"] == 60
    assert rep["self_identifications"] == 6
