"""First homology of covers and mod-2 cocycles.

The subgroup presentation comes from Reidemeister-Schreier rewriting over a
breadth-first Schreier transversal.  Invariants are computed by exact
integer elimination: unit pivots are taken sparsely first (this removes
almost everything for relation matrices of covers), the remainder is
diagonalized densely with Python integers.
"""
from __future__ import annotations

import math
import re
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from .cosets import CosetTable
from .fpgroup import NGENS, Presentation


@dataclass
class IntegerMatrix:
    """Sparse integer matrix; ``rows[i]`` maps column -> nonzero int."""
    nrows: int
    ncols: int
    rows: list = field(default_factory=list)

    @classmethod
    def from_dense(cls, a) -> "IntegerMatrix":
        a = [list(map(int, r)) for r in a]
        ncols = len(a[0]) if a else 0
        return cls(len(a), ncols, [{j: v for j, v in enumerate(r) if v} for r in a])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntegerMatrix":
        return cls(nrows, ncols, [{} for _ in range(nrows)])

    def to_dense(self) -> list:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def copy(self) -> "IntegerMatrix":
        return IntegerMatrix(self.nrows, self.ncols, [dict(r) for r in self.rows])


# -- Schreier rewriting ------------------------------------------------------

def schreier_generators(t: CosetTable) -> dict:
    """Column index for every non-tree pair (coset, generator).

    The tree is grown breadth-first from coset 0, letters in code order.
    """
    rows = t.rows
    k = t.index
    tree = set()
    seen = [False] * k
    seen[0] = True
    q = deque([0])
    while q:
        c = q.popleft()
        for x in range(2 * NGENS):
            d = int(rows[c, x])
            if not seen[d]:
                seen[d] = True
                q.append(d)
                tree.add((c, x >> 1) if x % 2 == 0 else (d, x >> 1))
    cols = {}
    for i in range(k):
        for g in range(NGENS):
            if (i, g) not in tree:
                cols[(i, g)] = len(cols)
    return cols


def rewrite(t: CosetTable, w, start: int, cols: dict) -> dict:
    """Exponent-sum vector of ``w`` read from ``start`` in Schreier generators."""
    rows = t.rows
    c = start
    vec: dict = {}
    for x in w:
        g = x >> 1
        if x % 2 == 0:
            j = cols.get((c, g))
            c = int(rows[c, x])
            if j is not None:
                vec[j] = vec.get(j, 0) + 1
        else:
            c = int(rows[c, x])
            j = cols.get((c, g))
            if j is not None:
                vec[j] = vec.get(j, 0) - 1
    return {j: v for j, v in vec.items() if v}


def abelian_relation_matrix(p: Presentation, t: CosetTable) -> IntegerMatrix:
    """Rows: every relator rewritten from every coset; columns: Schreier generators."""
    cols = schreier_generators(t)
    rows = [rewrite(t, r, c, cols) for c in range(t.index) for r in p.relators]
    return IntegerMatrix(len(rows), len(cols), rows)


# -- Smith normal form -------------------------------------------------------

def _eliminate_units(m: IntegerMatrix):
    """Pivot on +-1 entries until none are left.

    Returns (number of unit pivots, remaining rows as dicts).  Pivots are
    chosen with a Markowitz-style cost to limit fill-in.
    """
    rows = {i: dict(r) for i, r in enumerate(m.rows) if r}
    colrows: dict = {}
    for i, r in rows.items():
        for j in r:
            colrows.setdefault(j, set()).add(i)
    npiv = 0
    last = 0
    while True:
        # accept the first pivot no worse than the previous round's best
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(colrows[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost <= last:
                            break
            if best is not None and best[0] <= last:
                break
        if best is None:
            break
        last = best[0]
        _, i, j = best
        prow = rows.pop(i)
        for jj in prow:
            colrows[jj].discard(i)
        s = prow[j]
        for i2 in list(colrows[j]):
            r2 = rows[i2]
            f = r2[j] * s
            for jj, v in prow.items():
                nv = r2.get(jj, 0) - f * v
                if nv:
                    if jj not in r2:
                        colrows[jj].add(i2)
                    r2[jj] = nv
                elif jj in r2:
                    del r2[jj]
                    colrows[jj].discard(i2)
            if not r2:
                del rows[i2]
        del colrows[j]
        npiv += 1
    return npiv, list(rows.values())


def _diagonalize(a: list) -> list:
    """Nonzero diagonal of a dense integer matrix after unimodular reduction."""
    a = [r[:] for r in a if any(r)]
    diag = []
    while a:
        ncol = len(a[0])
        # pivot of least absolute value
        pi = pj = -1
        best = None
        for i, r in enumerate(a):
            for j, v in enumerate(r):
                if v and (best is None or abs(v) < best):
                    best, pi, pj = abs(v), i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if best is None:
            break
        while True:
            p = a[pi][pj]
            done = True
            for i, r in enumerate(a):
                if i != pi and r[pj]:
                    q = r[pj] // p
                    if q:
                        pr = a[pi]
                        for j in range(ncol):
                            if pr[j]:
                                r[j] -= q * pr[j]
                    if r[pj]:
                        done = False
            pr = a[pi]
            for j in range(ncol):
                if j != pj and pr[j]:
                    q = pr[j] // p
                    if q:
                        for r in a:
                            if r[pj]:
                                r[j] -= q * r[pj]
                    if pr[j]:
                        done = False
            if done:
                break
            # a smaller remainder exists; move the pivot there
            best = abs(p)
            for i, r in enumerate(a):
                if r[pj] and abs(r[pj]) < best:
                    best, pi = abs(r[pj]), i
            pr = a[pi]
            for j in range(ncol):
                if pr[j] and abs(pr[j]) < best:
                    best, pj = abs(pr[j]), j
        diag.append(abs(a[pi][pj]))
        a = [r[:pj] + r[pj + 1:] for i, r in enumerate(a) if i != pi]
        a = [r for r in a if any(r)]
    return diag


def _factor(n: int) -> dict:
    from sympy import factorint
    return factorint(n)


# -- modular route for large remainders ---------------------------------------

_BIG_PRIMES = []


def _primes(n: int) -> list:
    """``n`` distinct primes just below 2**30 (products of two residues fit in int64)."""
    from sympy import prevprime
    while len(_BIG_PRIMES) < n:
        _BIG_PRIMES.append(prevprime(_BIG_PRIMES[-1] if _BIG_PRIMES else 2 ** 30))
    return _BIG_PRIMES[:n]


def _eliminate_mod(a: np.ndarray, p: int):
    """Row echelon form mod a prime; returns (pivot rows, pivot columns, det sign-free product)."""
    a = a % p
    m, n = a.shape
    rows = list(range(m))
    prow, pcol = [], []
    det = 1
    r = 0
    for j in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, j])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            rows[r], rows[i] = rows[i], rows[r]
            det = -det
        piv = int(a[r, j])
        det = det * piv % p
        inv = pow(piv, -1, p)
        a[r] = a[r] * inv % p
        below = a[r + 1:, j].copy()
        nzb = np.nonzero(below)[0]
        if len(nzb):
            a[r + 1 + nzb] = (a[r + 1 + nzb] - np.outer(below[nzb], a[r])) % p
        prow.append(rows[r])
        pcol.append(j)
        r += 1
    return prow, pcol, det % p


def _exact_det(a: list) -> int:
    """Determinant of a square integer matrix by Chinese remaindering."""
    n = len(a)
    if n == 0:
        return 1
    logb = sum(math.log2(max(1.0, math.sqrt(sum(float(v) * float(v) for v in row)))) for row in a) + 2
    need = int(logb // 29) + 2
    ps = _primes(need)
    res, mod = 0, 1
    for p in ps:
        arr = np.array([[v % p for v in row] for row in a], dtype=np.int64)
        pr, pc, d = _eliminate_mod(arr, p)
        if len(pc) < n:
            d = 0
        # combine res (mod mod) with d (mod p)
        t = (d - res) * pow(mod, -1, p) % p
        res += mod * t
        mod *= p
    return res if res <= mod // 2 else res - mod


def _local_valuations(a: list, p: int, e: int) -> list:
    """Valuations (< e) of the Smith diagonal of ``a`` over Z/p^e."""
    q = p ** e
    if q < 2 ** 31:
        arr = np.array([[v % q for v in row] for row in a], dtype=np.int64)
    else:
        arr = np.array([[v % q for v in row] for row in a], dtype=object)
    vals = []
    while arr.shape[0] and arr.shape[1]:
        val = np.zeros(arr.shape, dtype=np.int64)
        cur = arr.copy()
        zero = cur == 0
        for k in range(e):
            mask = (cur % p == 0) & ~zero
            val[mask] += 1
            cur = np.where(mask, cur // p, cur)
        val[zero] = e
        i, j = np.unravel_index(int(np.argmin(val)), val.shape)
        v = int(val[i, j])
        if v >= e:
            break
        vals.append(v)
        unit = int(arr[i, j]) // p ** v
        uinv = pow(unit, -1, q)
        col = arr[:, j].copy()
        f = (col // p ** v) * uinv % q
        f[i] = 0
        arr = (arr - np.outer(f, arr[i]) % q) % q
        arr = np.delete(np.delete(arr, i, axis=0), j, axis=1)
    return vals


def _modular_diagonal(a: list) -> list:
    """Invariant factors of a dense integer matrix, via a torsion multiple and local Smith forms."""
    from sympy import factorint, isprime
    ps = _primes(3)
    best = None
    for p in ps:
        res = _eliminate_mod(np.array([[v % p for v in row] for row in a], dtype=np.int64), p)
        if best is None or len(res[1]) > len(best[1]):
            best = res
    r = len(best[1])
    if r == 0:
        return []
    rng = np.random.default_rng(12345)
    h = 0
    stable = 0
    tries = 0
    while stable < 2 and tries < 8:
        tries += 1
        if tries == 1:
            rows, cols = best[0], best[1]
        else:
            # a different nonsingular minor from a shuffled elimination
            rp = rng.permutation(len(a))
            cp = rng.permutation(len(a[0]))
            sh = np.array([[a[i][j] % ps[0] for j in cp] for i in rp], dtype=np.int64)
            pr, pc, _ = _eliminate_mod(sh, ps[0])
            if len(pc) < r:
                continue
            rows = [int(rp[i]) for i in pr]
            cols = [int(cp[j]) for j in pc]
        d = abs(_exact_det([[a[i][j] for j in cols] for i in rows]))
        g = math.gcd(h, d)
        stable = stable + 1 if g == h else 0
        h = g
    fac = factorint(h, limit=10 ** 6)
    for q in list(fac):
        if q > 10 ** 6 and not isprime(q):
            # rare: finish the factorization the slow way
            k = fac.pop(q)
            for q2, k2 in factorint(q).items():
                fac[q2] = fac.get(q2, 0) + k * k2
    per_prime = {}
    for p, k in fac.items():
        e = 1
        while True:
            vals = _local_valuations(a, p, e)
            if len(vals) == r or e > k:
                break
            e = min(2 * e, k + 1)
        if len(vals) != r:
            raise ArithmeticError(f"local Smith form at {p} lost rank")
        per_prime[p] = sorted((v for v in vals if v), reverse=True)
    diag = [1] * r
    for p, vs in per_prime.items():
        for idx, v in enumerate(vs):
            diag[r - 1 - idx] *= p ** v
    return diag


DENSE_LIMIT = 40


def _diagonal(m: IntegerMatrix) -> list:
    npiv, rest = _eliminate_units(m)
    cols = sorted({j for r in rest for j in r})
    ci = {j: k for k, j in enumerate(cols)}
    dense = []
    for r in rest:
        row = [0] * len(cols)
        for j, v in r.items():
            row[ci[j]] = v
        dense.append(row)
    if min(len(dense), len(cols)) > DENSE_LIMIT:
        return [1] * npiv + _modular_diagonal(dense)
    return [1] * npiv + _diagonalize(dense)


def _prime_powers(diag) -> list:
    out = []
    for d in diag:
        if d > 1:
            out.extend(p ** e for p, e in _factor(d).items())
    return out


def _chain(pp: list, rank: int) -> tuple:
    by_p: dict = {}
    for q in pp:
        p = min(_factor(q))
        by_p.setdefault(p, []).append(q)
    for v in by_p.values():
        v.sort(reverse=True)
    nt = max((len(v) for v in by_p.values()), default=0)
    inv = []
    for k in range(nt):
        d = 1
        for v in by_p.values():
            if k < len(v):
                d *= v[k]
        inv.append(d)
    inv.reverse()
    return tuple([1] * (rank - nt) + inv)


def smith_normal_form(m: IntegerMatrix) -> tuple:
    """Invariant factors d1 | d2 | ... | dr of ``m`` (r = rank); input untouched."""
    diag = _diagonal(m)
    return _chain(_prime_powers(diag), len(diag))


def _prime_key(q: int):
    f = _factor(q)
    (p, e), = f.items()
    return (p, e)


@dataclass(frozen=True)
class AbelianGroup:
    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for q in self.torsion:
            if q < 2 or len(_factor(q)) != 1:
                raise ValueError(f"torsion entry {q} is not a prime power")
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion, key=_prime_key)))

    def __str__(self):
        terms = []
        if self.rank:
            terms.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        for q, n in sorted(Counter(self.torsion).items()):
            terms.append(f"Z{q}" if n == 1 else f"Z{q}^{n}")
        return " + ".join(terms) if terms else "0"

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        text = text.strip()
        if text in ("0", "1", ""):
            return cls(0, ())
        rank = 0
        tors = []
        for term in text.split("+"):
            m = re.fullmatch(r"\s*Z(\d*)(?:\^(\d+))?\s*", term)
            if not m:
                raise ValueError(f"cannot parse group term {term!r}")
            n = int(m.group(2) or 1)
            if m.group(1):
                q = int(m.group(1))
                # allow composite orders, split into prime powers
                tors.extend(p ** e for p, e in _factor(q).items() for _ in range(n))
            else:
                rank += n
        return cls(rank, tuple(tors))

    @property
    def betti(self) -> int:
        return self.rank

    def even_factors(self) -> int:
        return sum(1 for q in self.torsion if q % 2 == 0)


def abelian_invariants(m: IntegerMatrix) -> AbelianGroup:
    diag = _diagonal(m)
    return AbelianGroup(m.ncols - len(diag), tuple(_prime_powers(diag)))


def cover_homology(p: Presentation, t: CosetTable) -> AbelianGroup:
    return abelian_invariants(abelian_relation_matrix(p, t))


# -- finite fields -----------------------------------------------------------

def rank_mod_p(m: IntegerMatrix, p: int) -> int:
    rows = [{j: v % p for j, v in r.items() if v % p} for r in m.rows]
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        r = rows.pop()
        if not r:
            continue
        j = min(r)
        inv = pow(r[j], -1, p)
        r = {jj: v * inv % p for jj, v in r.items()}
        rank += 1
        nxt = []
        for r2 in rows:
            if j in r2:
                f = r2[j]
                for jj, v in r.items():
                    nv = (r2.get(jj, 0) - f * v) % p
                    if nv:
                        r2[jj] = nv
                    else:
                        r2.pop(jj, None)
            if r2:
                nxt.append(r2)
        rows = nxt
    return rank


def mod2_kernel_basis(m: IntegerMatrix) -> list:
    """Basis of {c in GF(2)^ncols : m c = 0 mod 2}, each vector a 0/1 tuple.

    These are the homomorphisms to Z/2 that kill all relators.
    """
    piv: dict = {}
    for r in m.rows:
        b = 0
        for j, v in r.items():
            if v & 1:
                b |= 1 << j
        while b:
            j = b.bit_length() - 1
            if j in piv:
                b ^= piv[j]
            else:
                piv[j] = b
                break
    # back-substitute to reduced echelon form
    for j in sorted(piv):
        for j2 in piv:
            if j2 != j and (piv[j2] >> j) & 1:
                piv[j2] ^= piv[j]
    basis = []
    for f in range(m.ncols):
        if f in piv:
            continue
        c = [0] * m.ncols
        c[f] = 1
        for j, row in piv.items():
            if (row >> f) & 1:
                c[j] = 1
        basis.append(tuple(c))
    return basis
