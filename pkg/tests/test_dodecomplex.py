import pytest

from dodeca.cosets import PermutationAction
from dodeca.dodecomplex import (FixtureError, base_complex, canonical_dodecahedron, cover_complex, double_cover,
                                double_is_fpf, load_cover, sheet_table)
from dodeca.homology import schreier_generators
from dodeca.pipeline import double_family


def test_model_is_a_dodecahedron():
    m = canonical_dodecahedron()
    m.validate()
    assert len(m.edges) == 30
    # every face is paired with its antipodal face
    for g in range(6):
        assert m.antiface(m.face_of(g, "tail")) == m.face_of(g, "head")


# (V, E, F, C) and dodecahedral edge degree of each base space, from the gluing counts:
# WS identifies all 20 vertices and the 30 edges in classes of 5, PHS classes of 4 and 3,
# RP3 is the antipodal quotient.
@pytest.mark.parametrize("space,fv,deg", [
    ("WS", (1, 6, 6, 1), 5), ("PHS", (5, 10, 6, 1), 3), ("RP3", (10, 15, 6, 1), 2),
])
def test_base_f_vectors(space, fv, deg):
    x = base_complex(space)
    assert tuple(x.f_vector()) == fv
    assert x.f_vector().euler() == 0
    assert set(x.edge_orbit_sizes()) == {deg}


def test_cover_f_vectors_multiply(small_census):
    base = base_complex("WS")
    for r in small_census:
        x = cover_complex(base, r.action())
        assert x.f_vector() == base.f_vector().scaled(r.degree)
        assert set(x.edge_orbit_sizes()) == {5}


def test_non_relator_action_breaks_edge_cycles(ws):
    a = PermutationAction(((1, 0),) * 6)
    assert not a.satisfies(ws)
    assert set(cover_complex("WS", a).edge_orbit_sizes()) != {5}


def test_load_cover_roundtrip(c_action):
    x = cover_complex("WS", c_action)
    y = load_cover(x.to_json())
    assert y.partner == x.partner and y.matching == x.matching
    with pytest.raises(ValueError):
        load_cover({"space": "xx", "action": c_action.to_json()})


def test_double_fpf_three_routes(c_action):
    fam = double_family("WS", c_action)
    cols = schreier_generators(sheet_table(c_action))
    assert fam.cols == cols
    for lam, fpf in zip(fam.lam, fam.fpf):
        cyc = fam.cocycle(int(lam))
        assert double_is_fpf(c_action, cyc, cols) == bool(fpf)
        assert (not cover_complex("WS", fam.lift(int(lam))).has_self_identification()) == bool(fpf)


def test_double_cover_wrapper(c_action):
    x = cover_complex("WS", c_action)
    fam = double_family("WS", c_action)
    y = double_cover(x, fam.cocycle(1))
    assert y.k == 12 and y.f_vector() == x.f_vector().scaled(2)
    with pytest.raises(ValueError):
        double_cover(x, [0] * len(fam.cols))


def test_fixture_error_is_value_error():
    assert issubclass(FixtureError, ValueError)
