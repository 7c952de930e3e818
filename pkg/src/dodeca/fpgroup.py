"""Free words and finite presentations over the six face letters u..z.

A word is a tuple of letter codes: generator ``g`` (0..5) is ``2*g`` and
its inverse is ``2*g + 1``, so ``code ^ 1`` inverts a letter.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources

ALPHABET = "uvwxyz"
NGENS = 6
NLETTERS = 2 * NGENS

Word = tuple


class WordError(ValueError):
    pass


def gen_of(letter: int) -> int:
    return letter >> 1


def letter(g: int, exp: int = 1) -> int:
    return 2 * g + (0 if exp > 0 else 1)


def parse_word(text: str) -> Word:
    """Parse ``"u v' w'"``-style text; ``"1"`` or ``""`` is the identity."""
    out = []
    s = "".join(text.split())
    if s in ("", "1"):
        return ()
    i = 0
    while i < len(s):
        c = s[i]
        if c not in ALPHABET:
            raise WordError(f"bad letter {c!r} in {text!r}")
        g = ALPHABET.index(c)
        i += 1
        if i < len(s) and s[i] == "'":
            out.append(2 * g + 1)
            i += 1
        else:
            out.append(2 * g)
    return tuple(out)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return "".join(ALPHABET[x >> 1] + ("'" if x & 1 else "") for x in w)


def reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(w) -> Word:
    return tuple(x ^ 1 for x in reversed(w))


def cyclic_reduce(w) -> Word:
    w = list(reduce(w))
    while len(w) > 1 and w[0] == w[-1] ^ 1:
        w = w[1:-1]
    return tuple(w)


def cyclic_key(w) -> Word:
    """Least rotation of ``w`` or of its inverse; equal keys mean equal relators."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    cands = []
    for v in (w, invert(w)):
        cands.extend(v[k:] + v[:k] for k in range(len(v)))
    return min(cands)


def exponent_sums(w) -> list[int]:
    row = [0] * NGENS
    for x in w:
        row[x >> 1] += -1 if x & 1 else 1
    return row


@dataclass(frozen=True)
class Presentation:
    relators: tuple
    label: str = "derived"

    def __post_init__(self):
        for r in self.relators:
            if not r:
                raise WordError("empty relator")
            if tuple(reduce(r)) != tuple(r):
                raise WordError(f"relator {format_word(r)} is not reduced")
            if any(not 0 <= x < NLETTERS for x in r):
                raise WordError("letter outside the alphabet")

    @classmethod
    def from_strings(cls, rels, label="derived"):
        return cls(tuple(parse_word(r) for r in rels), label)

    def strings(self) -> list[str]:
        return [format_word(r) for r in self.relators]

    def __str__(self):
        return f"<{', '.join(ALPHABET)} | {', '.join(self.strings())}>"


def _fixture():
    return json.loads(resources.files("dodeca.data").joinpath("presentations.json").read_text())


def builtin_presentation(space: str) -> Presentation:
    space = space.upper()
    data = _fixture()
    if space not in data:
        raise KeyError(f"unknown space {space!r}; expected one of {sorted(data)}")
    return Presentation.from_strings(data[space], space)


def relators_equivalent(a: Presentation, b: Presentation) -> bool:
    return Counter(map(cyclic_key, a.relators)) == Counter(map(cyclic_key, b.relators))


def letter_automorphisms(p: Presentation) -> list[tuple]:
    """Signed permutations of the generators carrying the relator multiset to itself.

    Each is returned as a tuple ``a`` with ``a[letter]`` the image letter; the
    identity comes first.  Generator images are chosen one at a time and a
    branch is cut as soon as a fully assigned relator leaves the relator set.
    """
    target = Counter(map(cyclic_key, p.relators))
    used = {x >> 1 for r in p.relators for x in r}
    # relators become checkable once their largest generator is assigned
    ready = [[] for _ in range(NGENS)]
    for r in p.relators:
        ready[max(x >> 1 for x in r)].append(r)
    out = []
    a = [0] * NLETTERS

    def extend(g, free):
        if g == NGENS:
            img = Counter(cyclic_key([a[x] for x in r]) for r in p.relators)
            if img == target:
                out.append(tuple(a))
            return
        choices = [(h, s) for h in sorted(free) for s in (0, 1)] if g in used else [(g, 0)]
        for h, s in choices:
            a[2 * g] = 2 * h + s
            a[2 * g + 1] = a[2 * g] ^ 1
            if all(cyclic_key([a[x] for x in r]) in target for r in ready[g]):
                extend(g + 1, free - {h} if g in used else free)

    extend(0, frozenset(used))
    out.sort(key=lambda a: a != tuple(range(NLETTERS)))
    return out
