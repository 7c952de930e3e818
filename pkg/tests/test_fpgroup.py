import pytest
from hypothesis import given, strategies as st

from dodeca.fpgroup import (NLETTERS, Presentation, WordError, builtin_presentation, cyclic_key, format_word,
                            invert, letter_automorphisms, parse_word, reduce, relators_equivalent)
from dodeca.dodecomplex import derive_presentation

words = st.lists(st.integers(0, NLETTERS - 1), max_size=12).map(tuple)


@given(words)
def test_format_parse_roundtrip(w):
    assert parse_word(format_word(w)) == w


@given(words)
def test_reduce_idempotent_and_inverse_cancels(w):
    r = reduce(w)
    assert reduce(r) == r
    assert reduce(w + invert(w)) == ()


@given(words, st.integers(0, 11))
def test_cyclic_key_invariant_under_rotation_and_inversion(w, k):
    w = reduce(w)
    if not w:
        return
    k %= len(w)
    assert cyclic_key(w[k:] + w[:k]) == cyclic_key(w)
    assert cyclic_key(invert(w)) == cyclic_key(w)


def test_parse_word_examples():
    assert parse_word("u v' w") == (0, 3, 4)
    assert parse_word("1") == ()
    with pytest.raises(WordError):
        parse_word("uq")


def test_presentation_rejects_unreduced():
    with pytest.raises(WordError):
        Presentation.from_strings(["uu'"])


@pytest.mark.parametrize("space", ["WS", "PHS", "RP3"])
def test_derived_presentation_matches_builtin(space):
    assert relators_equivalent(derive_presentation(space), builtin_presentation(space))


@pytest.mark.parametrize("space", ["WS", "PHS", "RP3"])
def test_letter_automorphisms_preserve_relators(space):
    p = builtin_presentation(space)
    auts = letter_automorphisms(p)
    assert tuple(range(NLETTERS)) in auts
    keys = sorted(map(cyclic_key, p.relators))
    for a in auts:
        assert all(a[x ^ 1] == a[x] ^ 1 for x in range(NLETTERS))
        img = sorted(cyclic_key(tuple(a[x] for x in r)) for r in p.relators)
        assert img == keys
