import pytest

from dodeca import fixtures
from dodeca.dodecomplex import FixtureError
from dodeca.hypersurface import DiskLabel


def test_parse_token():
    t = fixtures.parse_disk_token(r"(z,\odot)_1")
    assert t.label == DiskLabel(0, 5, "head") and not t.typo
    t = fixtures.parse_disk_token(r"(u,\otimes)_{12}")
    assert t.label == DiskLabel(11, 0, "tail")


def test_stray_bracket_flagged():
    t = fixtures.parse_disk_token(r"(w,\odot)]_5")
    assert t.typo and t.label == DiskLabel(4, 2, "head")


def test_bad_token():
    with pytest.raises(FixtureError):
        fixtures.parse_disk_token("(q,odot)_1")


def test_listings_shape():
    listed, typos = fixtures.source_listings("cover_c")
    assert len(listed) == 6 and all(len(s) == 12 for s in listed)
    assert typos == [r"(w,\odot)]_5"]
    listed, typos = fixtures.source_listings("appendix")
    assert len(listed) == 60 and all(len(s) == 12 for s in listed)
    assert not typos
    # every (sheet, pentagon) slot used exactly once
    assert len(set().union(*listed)) == 720


def test_actions_are_valid(ws):
    for name, k in (("cover_c", 6), ("appendix", 60)):
        a = fixtures.source_action(name)
        assert a.degree == k and a.satisfies(ws) and a.is_transitive()


def test_expected_tables():
    t1 = fixtures.expected_table(1)
    assert sum(r["covers"] for r in t1) == 490
    assert sum(r["covers"] for r in fixtures.expected_table(2)) == 64
    assert sum(r["covers"] for r in fixtures.expected_table(3)) == 16192
    assert len(fixtures.expected_table(4)) == 12


def test_missing_fixture():
    with pytest.raises(FixtureError):
        fixtures.load_json("nope.json")
