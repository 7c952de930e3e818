"""Bundled reference data and the reading conventions needed to use it.

The reference listings compose permutations and words in the opposite order
to this package: orbit tables are read as inverse permutations and words are
read right to left.  Disk listings name pentagons through the model's
``listing_alias``.
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .cosets import PermutationAction, parse_cycles
from .dodecomplex import FixtureError, canonical_dodecahedron
from .fpgroup import ALPHABET, parse_word
from .homology import AbelianGroup
from .hypersurface import HEAD, TAIL, DiskLabel

SIDES = {"odot": HEAD, "otimes": TAIL}
_TOKEN = re.compile(r"\(([a-z]),\\(odot|otimes)\)(\]?)_\{?(\d+)\}?")


def _text(name: str) -> str:
    try:
        return resources.files("dodeca.data").joinpath(name).read_text()
    except FileNotFoundError as exc:
        raise FixtureError(f"missing fixture {name}") from exc


@lru_cache(maxsize=None)
def load_json(name: str):
    try:
        return json.loads(_text(name))
    except json.JSONDecodeError as exc:
        raise FixtureError(f"corrupt fixture {name}: {exc}") from exc


def load_csv(name: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(_text(name))))


def source_action(name: str) -> PermutationAction:
    """Generator action of a listed cover ('appendix' or 'cover_c')."""
    d = load_json(f"{name}.json")
    n = d["degree"]
    perms = []
    for g in ALPHABET:
        p = parse_cycles(d["orbits"][g], n)
        if sorted(p) != list(range(n)):
            raise FixtureError(f"{name}: orbit of {g} is not a permutation")
        perms.append(p)
    return PermutationAction(tuple(perms)).inverse()


def source_words(name: str) -> list:
    """Generator words of a listed subgroup ('C', 'S' or 'E'), in this package's order."""
    return [tuple(reversed(parse_word(w))) for w in load_json("words.json")[name]]


@dataclass(frozen=True)
class Token:
    label: DiskLabel
    typo: bool
    raw: str


def parse_disk_token(tok: str, alias: dict | None = None) -> Token:
    """Parse ``(g,\\odot)_{n}``; a stray ``]`` before the subscript is accepted and flagged."""
    m = _TOKEN.fullmatch(tok.strip())
    if not m:
        raise FixtureError(f"unreadable disk token {tok!r}")
    g, side, bracket, sheet = m.groups()
    if alias:
        back = {v: k for k, v in alias.items()}
        g = back[g]
    return Token(DiskLabel(int(sheet) - 1, ALPHABET.index(g), SIDES[side]), bool(bracket), tok)


def source_listings(name: str):
    """(list of disk-label sets, tokens flagged as typos) for a listed cover."""
    alias = canonical_dodecahedron().listing_alias
    out = []
    typos = []
    for surf in load_json(f"{name}.json")["surfaces"]:
        toks = [parse_disk_token(t, alias) for t in surf]
        typos.extend(t.raw for t in toks if t.typo)
        out.append(frozenset(t.label for t in toks))
    return out, typos


def expected_table(n: int) -> list[dict]:
    rows = load_csv(f"table{n}.csv")
    for r in rows:
        if "H1" in r:
            r["H1"] = AbelianGroup.parse(r["H1"])
        for key in ("degree", "betti", "components", "covers"):
            if key in r:
                r[key] = int(r[key])
    return rows
