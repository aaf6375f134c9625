"""Hamming and Johnson schemes in closed form.

Vertices are never materialized.  Hamming words are the integers
``0 .. q^n - 1`` read as base-q digit strings; Johnson vertices are the
k-subsets of ``{0..v-1}`` in colex rank order.  Every eigenmatrix entry is
an integer and all arithmetic uses Python big integers.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from .errors import ParameterOutOfRange
from .scheme import AssociationScheme


def krawtchouk(n: int, q: int, k: int, i: int) -> int:
    """K_k(i) = sum_j (-1)^j (q-1)^(k-j) C(i,j) C(n-i,k-j)."""
    if not (0 <= k <= n and 0 <= i <= n):
        raise ParameterOutOfRange(f"krawtchouk indices k={k}, i={i} outside 0..{n}")
    if q < 2:
        raise ParameterOutOfRange("alphabet size q must be >= 2")
    return sum((-1) ** j * (q - 1) ** (k - j) * comb(i, j) * comb(n - i, k - j)
               for j in range(k + 1))


def eberlein(v: int, k: int, j: int, i: int) -> int:
    """Eigenvalue of the Johnson class-j matrix on eigenspace i."""
    if not (0 <= i <= k and 0 <= j <= k):
        raise ParameterOutOfRange(f"eberlein indices j={j}, i={i} outside 0..{k}")
    return sum((-1) ** h * comb(i, h) * comb(k - i, j - h) * comb(v - k - i, j - h)
               for h in range(j + 1))


def _popcount_table():
    return hasattr(np, "bitwise_count")


def popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a) if _popcount_table() else _slow_popcount(a)


def _slow_popcount(a):  # pragma: no cover - numpy < 2.0
    a = a.astype(np.uint64)
    c = np.zeros(a.shape, dtype=np.uint8)
    while np.any(a):
        c += (a & 1).astype(np.uint8)
        a >>= 1
    return c


class HammingScheme(AssociationScheme):
    """H(n, q): words of length n over an alphabet of size q, Hamming distance."""

    closed_form = True

    def __init__(self, n: int, q: int = 2):
        if n < 1 or q < 2:
            raise ParameterOutOfRange(f"H({n},{q}) needs n >= 1 and q >= 2")
        if q ** n >= 2**62:
            raise ParameterOutOfRange(f"H({n},{q}) has too many vertices to encode")
        self.n, self.q = n, q
        P = np.array([[krawtchouk(n, q, j, i) for j in range(n + 1)] for i in range(n + 1)],
                     dtype=object)
        m = [comb(n, j) * (q - 1) ** j for j in range(n + 1)]
        ident = tuple(range(n + 1))
        super().__init__(q ** n, P, P.copy(), m, exact_mode=True, name=f"H({n},{q})",
                         p_ordering=ident, q_ordering=ident)

    def _intersection_numbers(self):
        n, q = self.n, self.q
        p = np.zeros((n + 1, n + 1, n + 1), dtype=object)
        for k in range(n + 1):
            for i in range(n + 1):
                # a = positions among the k differing ones where z agrees with x,
                # e = positions among the n-k agreeing ones where z differs from both
                for a in range(k + 1):
                    e = i - (k - a)
                    if e < 0 or e > n - k:
                        continue
                    for b in range(k - a + 1):
                        c = k - a - b
                        if c and q == 2:
                            continue
                        j = (k - b) + e
                        p[i, j, k] += (comb(k, a) * comb(k - a, b) * (q - 2) ** c
                                       * comb(n - k, e) * (q - 1) ** e)
        return p

    def relations_between(self, rows, cols):
        r = np.asarray(rows, dtype=np.int64).reshape(-1)
        c = np.asarray(cols, dtype=np.int64).reshape(-1)
        if self.q == 2:
            return popcount(r[:, None] ^ c[None, :]).astype(np.int64)
        dr = self.digits(r)
        dc = self.digits(c)
        out = np.zeros((r.size, c.size), dtype=np.int64)
        for pos in range(self.n):
            out += dr[:, pos][:, None] != dc[:, pos][None, :]
        return out

    def digits(self, words) -> np.ndarray:
        """Base-q digits, most significant first (column 0 is the first symbol)."""
        w = np.asarray(words, dtype=np.int64).copy()
        out = np.empty((w.size, self.n), dtype=np.int64)
        for pos in range(self.n - 1, -1, -1):
            out[:, pos] = w % self.q
            w //= self.q
        return out

    def encode(self, digits) -> int:
        val = 0
        for s in digits:
            val = val * self.q + int(s)
        return val

    def weight(self, words) -> np.ndarray:
        return self.relations_between(words, [0])[:, 0]

    def adjacency_apply(self, i, v, chunk=512):
        if i != 1 or self.q != 2 or np.asarray(v).dtype == object:
            return super().adjacency_apply(i, v, chunk)
        v = np.asarray(v)
        idx = np.arange(self.num_vertices)
        out = np.zeros_like(v)
        for b in range(self.n):
            out += v[idx ^ (1 << b)]
        return out


@lru_cache(maxsize=None)
def _colex_table(v, k):
    """All k-subsets of range(v) as bitmasks, in colex rank order."""
    from itertools import combinations

    masks = []
    for combo in combinations(range(v), k):
        masks.append((sum(1 << x for x in combo), tuple(sorted(combo, reverse=True))))
    masks.sort(key=lambda t: t[1])
    return np.array([m for m, _ in masks], dtype=np.int64)


def colex_rank(subset) -> int:
    """Colex rank of a set of distinct non-negative integers."""
    s = sorted(subset)
    return sum(comb(x, i + 1) for i, x in enumerate(s))


def colex_unrank(r: int, k: int) -> list[int]:
    out = []
    for i in range(k, 0, -1):
        x = i - 1
        while comb(x + 1, i) <= r:
            x += 1
        out.append(x)
        r -= comb(x, i)
    return sorted(out)


class JohnsonScheme(AssociationScheme):
    """J(v, k): k-subsets of a v-set; relation r means |x & y| = k - r."""

    closed_form = True

    def __init__(self, v: int, k: int):
        if k < 1 or 2 * k > v:
            raise ParameterOutOfRange(f"J({v},{k}) needs 1 <= k and 2k <= v")
        if v > 62:
            raise ParameterOutOfRange("ground sets above 62 points are not supported")
        self.v, self.k = v, k
        P = np.array([[eberlein(v, k, j, i) for j in range(k + 1)] for i in range(k + 1)],
                     dtype=object)
        m = [comb(v, i) - (comb(v, i - 1) if i else 0) for i in range(k + 1)]
        val = [comb(k, j) * comb(v - k, j) for j in range(k + 1)]
        Q = np.empty((k + 1, k + 1), dtype=object)
        from fractions import Fraction

        for i in range(k + 1):
            for j in range(k + 1):
                x = Fraction(m[j] * P[j][i], val[i])
                Q[i][j] = int(x) if x.denominator == 1 else x
        ident = tuple(range(k + 1))
        super().__init__(comb(v, k), P, Q, m, exact_mode=True, name=f"J({v},{k})",
                         p_ordering=ident, q_ordering=ident)

    def _intersection_numbers(self):
        v, k = self.v, self.k
        p = np.zeros((k + 1, k + 1, k + 1), dtype=object)
        for r in range(k + 1):
            # x & y of size k - r, x - y and y - x of size r, outside v - k - r
            for a in range(k - r + 1):
                for b in range(r + 1):
                    for c in range(r + 1):
                        e = k - a - b - c
                        if e < 0 or e > v - k - r:
                            continue
                        i = k - a - b
                        j = k - a - c
                        p[i, j, r] += comb(k - r, a) * comb(r, b) * comb(r, c) * comb(v - k - r, e)
        return p

    def masks(self, vertices) -> np.ndarray:
        vv = np.asarray(vertices, dtype=np.int64).reshape(-1)
        if self.num_vertices <= 200_000:
            return _colex_table(self.v, self.k)[vv]
        return np.array([sum(1 << x for x in colex_unrank(int(r), self.k)) for r in vv],
                        dtype=np.int64)

    def relations_between(self, rows, cols):
        a = self.masks(rows)
        b = self.masks(cols)
        return self.k - popcount(a[:, None] & b[None, :]).astype(np.int64)


def build_named(spec: dict) -> AssociationScheme:
    """Scheme from a family descriptor such as ``{"family": "hamming", "n": 7, "q": 2}``."""
    fam = str(spec.get("family", "")).lower()
    try:
        if fam == "hamming":
            return HammingScheme(int(spec["n"]), int(spec.get("q", 2)))
        if fam == "johnson":
            return JohnsonScheme(int(spec["v"]), int(spec["k"]))
    except KeyError as exc:
        raise ParameterOutOfRange(f"missing parameter {exc} for family {fam!r}") from None
    raise ParameterOutOfRange(f"unknown scheme family {fam!r}")
