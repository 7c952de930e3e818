from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from dodeca import fixtures
from dodeca.cosets import (PermutationAction, ResourceLimit, action_from_table, contains, finite_subgroup_classes,
                           format_cycles, image_order, image_summary, is_conjugate, is_normal, low_index_classes,
                           parse_cycles, regular_table, table_from_action, todd_coxeter)
from dodeca.fpgroup import builtin_presentation

_F, *_G = free_group("u v w x y z")


def _sympy_word(w):
    out = _F.identity
    for x in w:
        out = out * _G[x >> 1] ** (-1 if x & 1 else 1)
    return out


def _sympy_index(space, words):
    """Coset count from sympy's independent enumerator."""
    g = FpGroup(_F, [_sympy_word(r) for r in builtin_presentation(space).relators])
    c = g.coset_enumeration([_sympy_word(w) for w in words])
    c.compress()
    return len(c.table)


@pytest.mark.parametrize("space,words", [
    ("PHS", None), ("RP3", None), ("WS", "C"), ("WS", "S"), ("WS", "E"),
])
def test_todd_coxeter_against_sympy(space, words):
    ws = fixtures.source_words(words) if words else []
    t = todd_coxeter(builtin_presentation(space), ws)
    assert t.is_valid(builtin_presentation(space))
    assert contains(t, ws)
    assert t.index == _sympy_index(space, ws)


def test_todd_coxeter_limit():
    with pytest.raises(ResourceLimit):
        todd_coxeter(builtin_presentation("PHS"), [], max_cosets=50)


def test_small_census_counts(small_census, ws):
    # no covers of degree 2..4; 38 classes at degree 5, 61 at degree 6
    assert Counter(r.degree for r in small_census) == {1: 1, 5: 38, 6: 61}
    for r in small_census:
        assert r.table.is_valid(ws)


def test_small_census_pairwise_nonconjugate(small_census):
    by_deg = {}
    for r in small_census:
        by_deg.setdefault(r.degree, []).append(r.table)
    for tabs in by_deg.values():
        for i in range(len(tabs)):
            for j in range(i):
                assert not is_conjugate(tabs[i], tabs[j])


def test_symmetry_reduction_changes_nothing(ws):
    a = low_index_classes(ws, 6, use_symmetry=True)
    b = low_index_classes(ws, 6, use_symmetry=False)
    assert sorted(r.table.key() for r in a) == sorted(r.table.key() for r in b)


def test_parallel_matches_serial(ws):
    a = low_index_classes(ws, 6, jobs=1)
    b = low_index_classes(ws, 6, jobs=2)
    assert [r.table.key() for r in a] == [r.table.key() for r in b]


def test_node_limit(ws):
    with pytest.raises(ResourceLimit):
        low_index_classes(ws, 8, node_limit=10)


def test_phs_low_index_matches_subgroup_lattice():
    # two unrelated routes: low-index search vs the lattice of the finite group
    p = builtin_presentation("PHS")
    lattice = [c for c in finite_subgroup_classes(p) if c.index <= 12]
    li = low_index_classes(p, 12)
    assert len(li) == len(lattice)
    for c in lattice:
        assert sum(is_conjugate(c.table, r.table) for r in li) == 1


def test_image_order_two_routes(small_census):
    for r in small_census:
        a = r.action()
        s = image_summary(a)
        assert s.order == image_order(a)
        # regular iff normal, checked through the table and through the group order
        assert is_normal(r.table) == (s.order == r.degree)


def test_regular_table(c_action, ws):
    t = regular_table(c_action)
    assert t.index == image_order(c_action) == 60
    assert t.is_valid(ws)
    assert is_normal(t)


@settings(max_examples=50)
@given(st.permutations(list(range(9))))
def test_cycles_roundtrip(p):
    p = tuple(p)
    assert parse_cycles(format_cycles(p), 9) == p


def test_action_table_roundtrip(small_census):
    for r in small_census[:20]:
        a = r.action()
        assert action_from_table(table_from_action(a)) == a
        assert PermutationAction.from_json(a.to_json()) == a
