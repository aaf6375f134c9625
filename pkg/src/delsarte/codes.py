"""Binary linear codes and codeword files.

Words of length n are packed into Python/NumPy integers with the first
symbol in the most significant bit, matching ``HammingScheme.encode``.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError

# generator polynomial x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1 of the cyclic Golay code
GOLAY_POLY = (1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1)  # coefficients of x^0 .. x^11


def pack(bits) -> int:
    val = 0
    for b in bits:
        val = (val << 1) | (int(b) & 1)
    return val


def unpack(word: int, n: int) -> list[int]:
    return [(word >> (n - 1 - i)) & 1 for i in range(n)]


def gf2_row_reduce(rows: list[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced echelon form of packed rows; returns (rows, pivot bit positions)."""
    rows = [r for r in rows if r]
    basis: list[int] = []
    pivots: list[int] = []
    for bit in range(n - 1, -1, -1):
        mask = 1 << bit
        idx = next((i for i, r in enumerate(rows) if r & mask), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        rows = [r ^ piv if r & mask else r for r in rows]
        basis = [b ^ piv if b & mask else b for b in basis]
        basis.append(piv)
        pivots.append(bit)
        rows = [r for r in rows if r]
    return basis, pivots


@dataclass(frozen=True)
class BinaryLinearCode:
    """Binary linear [n, k] code held by a reduced generator basis."""

    n: int
    basis: tuple[int, ...]

    @classmethod
    def from_generators(cls, rows, n: int) -> "BinaryLinearCode":
        basis, _ = gf2_row_reduce([int(r) for r in rows], n)
        return cls(n, tuple(sorted(basis, reverse=True)))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self):
        return 1 << self.dimension

    def codewords(self) -> np.ndarray:
        words = np.zeros(1, dtype=np.int64)
        for g in self.basis:
            words = np.concatenate([words, words ^ np.int64(g)])
        return np.sort(words)

    def dual(self) -> "BinaryLinearCode":
        n = self.n
        basis, pivots = gf2_row_reduce(list(self.basis), n)
        free = [b for b in range(n) if b not in pivots]
        gens = []
        for f in free:
            # x with x_f = 1, the other free bits 0, pivot bits solved from the basis rows
            x = 1 << f
            for row, pb in zip(basis, pivots):
                if row & (1 << f):
                    x |= 1 << pb
            gens.append(x)
        return BinaryLinearCode.from_generators(gens, n)

    def coset_representatives(self) -> np.ndarray:
        """One word from each coset of the code in F_2^n."""
        _, pivots = gf2_row_reduce(list(self.basis), self.n)
        reps = np.zeros(1, dtype=np.int64)
        for b in range(self.n):
            if b not in pivots:
                reps = np.concatenate([reps, reps ^ np.int64(1 << b)])
        return np.sort(reps)

    def extend(self) -> "BinaryLinearCode":
        """Append an overall parity bit."""
        rows = [(g << 1) | (bin(g).count("1") & 1) for g in self.basis]
        return BinaryLinearCode.from_generators(rows, self.n + 1)

    def times_bit(self) -> "BinaryLinearCode":
        """The code C x {0,1}: a free last coordinate."""
        rows = [g << 1 for g in self.basis] + [1]
        return BinaryLinearCode.from_generators(rows, self.n + 1)


def cyclic_code(n: int, poly) -> BinaryLinearCode:
    """Cyclic code generated by ``poly`` (coefficients of x^0 .. x^r)."""
    r = len(poly) - 1
    rows = []
    for shift in range(n - r):
        bits = [0] * n
        for e, c in enumerate(poly):
            if c:
                bits[e + shift] = 1
        rows.append(pack(bits))
    return BinaryLinearCode.from_generators(rows, n)


def golay23() -> BinaryLinearCode:
    return cyclic_code(23, GOLAY_POLY)


def golay24() -> BinaryLinearCode:
    return golay23().extend()


def hamming_code(m: int) -> BinaryLinearCode:
    """The [2^m - 1, 2^m - m - 1, 3] Hamming code (dual of the simplex code)."""
    n = 2**m - 1
    # parity-check columns are the binary expansions of 1..n; row b selects bit b
    rows = []
    for b in range(m):
        rows.append(pack([(col >> b) & 1 for col in range(1, n + 1)]))
    return BinaryLinearCode.from_generators(rows, n).dual()


def extended_hamming_code(m: int) -> BinaryLinearCode:
    return hamming_code(m).extend()


def pair_code(n: int) -> BinaryLinearCode:
    """{0,1} x {0...0, 1...1} inside H(2n, 2)."""
    length = 2 * n
    rows = [1 << (length - 1), (1 << (length - 1)) - 1]
    return BinaryLinearCode.from_generators(rows, length)


def weight_distribution(words: np.ndarray, n: int) -> list[int]:
    w = np.bitwise_count(np.asarray(words, dtype=np.int64))
    return np.bincount(w, minlength=n + 1).astype(int).tolist()


# ---------------------------------------------------------------------------
# codeword files
# ---------------------------------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_words(text: str, n: int, q: int) -> list[int]:
    """Hamming-scheme words: one per line, n symbols from 0..q-1."""
    if q > 10:
        raise InputError("codeword files support alphabets up to q = 10")
    out = []
    for lineno, line in _content_lines(text):
        symbols = line.replace(" ", "")
        if len(symbols) != n or any(not ch.isdigit() or int(ch) >= q for ch in symbols):
            raise InputError(f"line {lineno}: expected {n} symbols from 0..{q - 1}, got {line!r}")
        val = 0
        for ch in symbols:
            val = val * q + int(ch)
        out.append(val)
    return out


def format_words(words, n: int, q: int = 2) -> str:
    lines = []
    for w in words:
        w = int(w)
        digits = []
        for _ in range(n):
            digits.append(str(w % q))
            w //= q
        lines.append("".join(reversed(digits)))
    return "\n".join(lines) + "\n"


def parse_subsets(text: str, v: int, k: int) -> list[int]:
    """Johnson-scheme vertices: lines of k distinct 1-based integers."""
    from .named import colex_rank

    out = []
    for lineno, line in _content_lines(text):
        try:
            items = [int(tok) for tok in line.replace(",", " ").split()]
        except ValueError:
            raise InputError(f"line {lineno}: non-integer entry in {line!r}") from None
        if len(items) != k or len(set(items)) != k or min(items) < 1 or max(items) > v:
            raise InputError(f"line {lineno}: expected {k} distinct integers in 1..{v}")
        out.append(colex_rank([x - 1 for x in items]))
    return out


def read_code_file(path, scheme) -> list[int]:
    from .named import HammingScheme, JohnsonScheme

    text = Path(path).read_text(encoding="utf-8")
    if isinstance(scheme, HammingScheme):
        return parse_words(text, scheme.n, scheme.q)
    if isinstance(scheme, JohnsonScheme):
        return parse_subsets(text, scheme.v, scheme.k)
    out = []
    for lineno, line in _content_lines(text):
        try:
            out.extend(int(tok) for tok in line.split())
        except ValueError:
            raise InputError(f"line {lineno}: vertex indices must be integers") from None
    return out
