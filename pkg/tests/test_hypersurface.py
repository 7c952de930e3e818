import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from dodeca.cosets import PermutationAction
from dodeca.cubecomplex import cubulate, three_torus
from dodeca.dodecomplex import base_complex, canonical_dodecahedron, cover_complex
from dodeca.hypersurface import (DiskGraph, DiskLabel, Hyperplanes, PreconditionError, chromatic_number,
                                 specialness, surface_report)
from dodeca.pipeline import double_family


def _brute_chromatic(n, edges):
    for k in range(1, n + 1):
        for col in itertools.product(range(k), repeat=n):
            if all(col[a] != col[b] for a, b in edges):
                return k
    return 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=15))))
def test_chromatic_number_against_brute_force(g):
    n, edges = g
    edges = sorted({(min(a, b), max(a, b)) for a, b in edges if a != b})
    k, exact = chromatic_number(n, edges)
    assert exact and k == _brute_chromatic(n, edges)


def test_chromatic_k6():
    assert chromatic_number(6, list(itertools.combinations(range(6), 2))) == (6, True)


def test_three_torus_hyperplanes():
    c = three_torus()
    h = Hyperplanes(c)
    assert len(h.components) == 3
    for sc in h.components:
        assert sc.chi == 0 and sc.orientable and sc.two_sided and sc.embedded
        assert len(sc.midsquares) == 1
    rep = specialness(c, h)
    assert not rep.self_osculating and not rep.inter_osculating
    assert rep.special
    assert len(rep.crossing) == 3


def test_ws_base_surface():
    c = cubulate(base_complex("WS"))
    h = Hyperplanes(c)
    assert len(h.components) == 1
    sc = h.components[0]
    assert sc.genus == 4 and sc.two_sided and not sc.embedded
    assert len(sc.midsquares) == 60 and len(sc.disks) == 12
    assert not specialness(c, h).special
    with pytest.raises(PreconditionError):
        h.self_osculates_direct(0)
    with pytest.raises(PreconditionError):
        h.self_osculates_lemma(0)


def test_cover_c_surfaces(c_action):
    c = cubulate(cover_complex("WS", c_action))
    h = Hyperplanes(c)
    rep = specialness(c, h)
    assert len(h.components) == 6
    for sc in h.components:
        assert sc.chi == -6 and sc.genus == 4 and sc.embedded and sc.two_sided
        assert Counter(sc.disk_sheets().values()) == {2: 6}
        assert h.self_osculates_direct(sc.index) and h.self_osculates_lemma(sc.index)
    assert rep.lemma_agrees and not rep.special


def test_appendix_surfaces(s_action):
    c = cubulate(cover_complex("WS", s_action))
    h = Hyperplanes(c)
    rep = specialness(c, h)
    assert rep.special and rep.lemma_agrees
    for s, t in rep.crossing[:40]:
        assert not h.inter_osculates_direct(s, t)
        assert not h.inter_osculates_lemma(s, t)
        assert len(h.components[s].near | h.components[t].near) == 21


def test_surface_invariants(small_census):
    for r in small_census:
        c = cubulate(cover_complex("WS", r.action()))
        h = Hyperplanes(c)
        assert sum(len(sc.midsquares) for sc in h.components) == 3 * c.ncubes
        assert sum(len(sc.disks) for sc in h.components) == 12 * r.degree
        for sc in h.components:
            assert sc.two_sided and sc.orientable
            assert sc.near_incidences == len(sc.disks)
        assert specialness(c, h).lemma_agrees


# degree 9, two components whose least-node and least-label orders differ
SWAPPED = ((1, 3, 0, 8, 5, 7, 2, 6, 4), (1, 6, 3, 0, 5, 8, 4, 2, 7), (4, 5, 8, 7, 2, 0, 3, 1, 6),
           (6, 4, 5, 8, 7, 3, 2, 0, 1), (2, 3, 8, 7, 1, 6, 0, 5, 4), (4, 3, 0, 2, 8, 6, 7, 1, 5))


def _same_components(a):
    labels = canonical_dodecahedron().labels
    x = cover_complex("WS", a)
    h = Hyperplanes(cubulate(x))
    dg = DiskGraph(x)
    # same components in the same order
    got = [(dg.disks(c, labels), e) for c, e in enumerate(dg.embedded)]
    want = [(sorted(sc.disks), sc.embedded) for sc in h.components]
    assert got == want
    return dg


def test_disk_graph_matches_hyperplanes(small_census):
    for r in small_census:
        _same_components(r.action())
    dg = _same_components(PermutationAction(SWAPPED))
    assert sorted(dg.embedded) == [False, True]


def test_double_component_counts_from_cocycles(c_action):
    # cocycle prediction vs cubulating the lifted cover
    fam = double_family("WS", c_action)
    for n in range(0, len(fam.lam), 9):
        lam = int(fam.lam[n])
        h = Hyperplanes(cubulate(cover_complex("WS", fam.lift(lam))))
        assert len(h.components) == fam.components[n]
        assert all(sc.embedded for sc in h.components)


def test_phs_components_are_spheres():
    from dodeca.cosets import action_from_table, finite_subgroup_classes
    from dodeca.fpgroup import builtin_presentation
    for cl in finite_subgroup_classes(builtin_presentation("PHS"))[:6]:
        h = Hyperplanes(cubulate(cover_complex("PHS", action_from_table(cl.table))))
        assert len(h.components) == cl.index
        assert all(sc.chi == 2 and len(sc.disks) == 12 for sc in h.components)


def test_report_and_labels(c_action):
    rep = surface_report(cubulate(cover_complex("WS", c_action)))
    assert len(rep["components"]) == 6 and rep["chromatic_number"] == 6
    d = DiskLabel(0, 5, "head")
    assert str(d) == "(z,head)_1"
    assert d.to_json() == {"face": "z", "side": "head", "sheet": 1}
