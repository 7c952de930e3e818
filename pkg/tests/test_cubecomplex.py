import json

import pytest

from dodeca.cubecomplex import cubulate, npc_report, three_torus
from dodeca.dodecomplex import base_complex, cover_complex


def test_three_torus():
    c = three_torus()
    assert c.f_vector() == (1, 3, 3, 1)
    assert c.is_closed()
    r = npc_report(c)
    # each of the 3 edges lies in 4 squares; the link is an octahedron
    assert r.min_edge_degree == 4 and r.flag and r.npc


@pytest.mark.parametrize("space,mindeg,npc", [("WS", 4, True), ("PHS", 3, False), ("RP3", 2, False)])
def test_base_cubulations(space, mindeg, npc):
    x = base_complex(space).f_vector()
    c = cubulate(base_complex(space))
    # vertices: old vertices, edge midpoints, pentagon centres, cell centres;
    # edges: half edges, midpoint-to-centre in each pentagon, pentagon-to-cell centre
    assert c.f_vector() == (x.V + x.E + x.F + x.C, 2 * x.E + 5 * x.F + 12 * x.C, 5 * x.F + 30 * x.C, 20 * x.C)
    assert c.is_closed()
    r = npc_report(c)
    assert r.min_edge_degree == mindeg
    assert r.npc == npc


def test_ws_base_f_vector():
    assert cubulate(base_complex("WS")).f_vector() == (14, 54, 60, 20)


def test_cube_counts_multiply(small_census):
    cb = cubulate(base_complex("WS")).f_vector()
    for r in small_census[:40]:
        c = cubulate(cover_complex("WS", r.action()))
        assert c.f_vector() == tuple(r.degree * v for v in cb)
        V, E, F, C = c.f_vector()
        assert V - E + F - C == 0


def test_dump(tmp_path, c_action):
    c = cubulate(cover_complex("WS", c_action))
    c.dump(tmp_path / "c.json")
    d = json.loads((tmp_path / "c.json").read_text())
    assert len(d["cubes"]) == 120 and d["f_vector"] == list(c.f_vector())
