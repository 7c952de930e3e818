import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from dodeca import homology
from dodeca.cosets import PermutationAction, action_from_table, table_from_action
from dodeca.fpgroup import builtin_presentation
from dodeca.homology import (AbelianGroup, IntegerMatrix, abelian_invariants, abelian_relation_matrix,
                             mod2_kernel_basis, rank_mod_p, schreier_generators, smith_normal_form)
from dodeca.pipeline import homology_of


def _determinantal_invariants(a):
    """Invariant factors from gcds of k x k minors (slow, independent)."""
    m, n = len(a), len(a[0])
    M = Matrix(a)
    d = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        d.append(g)
    return tuple(d[k] // d[k - 1] for k in range(1, len(d)))


matrices = st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_against_minors(a):
    assert smith_normal_form(IntegerMatrix.from_dense(a)) == _determinantal_invariants(a)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_divisor_chain_and_mod_p_ranks(a):
    m = IntegerMatrix.from_dense(a)
    inv = smith_normal_form(m)
    assert all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
    for p in (2, 3, 5):
        assert rank_mod_p(m, p) == sum(1 for d in inv if d % p)


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_against_sympy(a, p):
    dm = DomainMatrix([[GF(p)(v) for v in r] for r in a], (len(a), len(a[0])), GF(p))
    assert rank_mod_p(IntegerMatrix.from_dense(a), p) == dm.rank()


def test_modular_route_matches_dense(monkeypatch):
    rng = random.Random(7)
    mats = []
    for _ in range(40):
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        mats.append([[rng.choice([0, 0, 0, 1, -1, 2, 3, 4, 5, 9, -25]) for _ in range(n)] for _ in range(m)])
    dense = [smith_normal_form(IntegerMatrix.from_dense(a)) for a in mats]
    monkeypatch.setattr(homology, "DENSE_LIMIT", 0)
    assert [smith_normal_form(IntegerMatrix.from_dense(a)) for a in mats] == dense


def test_modular_route_on_covers(monkeypatch, c_action, s_action):
    want = [str(homology_of("WS", a)) for a in (c_action, s_action)]
    monkeypatch.setattr(homology, "DENSE_LIMIT", 0)
    assert [str(homology_of("WS", a)) for a in (c_action, s_action)] == want


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_mod2_kernel(a):
    m = IntegerMatrix.from_dense(a)
    basis = mod2_kernel_basis(m)
    assert len(basis) == m.ncols - rank_mod_p(m, 2)
    for c in basis:
        assert all(sum(v * x for v, x in zip(r, c)) % 2 == 0 for r in a)
    # independence over GF(2)
    if basis:
        dm = DomainMatrix([[GF(2)(v) for v in c] for c in basis], (len(basis), m.ncols), GF(2))
        assert dm.rank() == len(basis)


@given(st.integers(0, 5), st.lists(st.sampled_from([2, 3, 4, 5, 8, 9, 25, 27, 83]), max_size=6))
def test_abelian_group_roundtrip(r, tors):
    g = AbelianGroup(r, tuple(tors))
    assert AbelianGroup.parse(str(g)) == g


def test_abelian_group_parse_composite():
    assert AbelianGroup.parse("Z6") == AbelianGroup(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianGroup(0, (6,))


def test_schreier_column_count(small_census):
    # a subgroup of index k in the free group of rank 6 is free of rank 5k + 1
    for r in small_census:
        assert len(schreier_generators(r.table)) == 5 * r.degree + 1


@pytest.mark.parametrize("space,h1", [("WS", "Z5^3"), ("PHS", "0"), ("RP3", "Z2")])
def test_base_homology(space, h1):
    one = table_from_action(PermutationAction(((0,),) * 6))
    assert str(abelian_invariants(abelian_relation_matrix(builtin_presentation(space), one))) == h1


def test_cover_c_homology(c_action):
    assert str(homology_of("WS", c_action)) == "Z^5 + Z2^2 + Z5^3"


def test_hempel_betti(small_census):
    betti = [homology_of("WS", action_from_table(r.table)).betti for r in small_census if r.degree == 5]
    assert betti.count(4) == 1
