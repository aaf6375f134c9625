"""Exact rational linear algebra for the small dense matrices used throughout.

Everything here works on ``fractions.Fraction`` (or ``int``) entries.  The
matrices are tiny, (d+1) x (d+1) or a few thousand rows by d+1 columns, so
plain Gaussian elimination is adequate; the tall case goes through
:func:`integer_rank`, which guesses numerically and then certifies exactly.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    return Fraction(x)


def fraction_matrix(M) -> list[list[Fraction]]:
    return [[as_fraction(x) for x in row] for row in M]


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = fraction_matrix(M)
    if not A:
        return A, []
    nrows, ncols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M) -> int:
    M = list(M)
    if not M or len(M[0]) == 0:
        return 0
    return len(rref(M)[1])


def nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : M x = 0}, one vector per free column."""
    M = list(M)
    if not M:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(A, b) -> list[Fraction]:
    """Unique solution of the square system A x = b."""
    A = fraction_matrix(A)
    n = len(A)
    aug = [row + [as_fraction(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise np.linalg.LinAlgError("singular system")
    return [R[i][n] for i in range(n)]


def inverse(A) -> list[list[Fraction]]:
    A = fraction_matrix(A)
    n = len(A)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return [row[n:] for row in R]


def integer_vector(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for x in v:
        den = lcm(den, as_fraction(x).denominator)
    ints = [int(as_fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def exact_matmul(M: np.ndarray, K: np.ndarray) -> np.ndarray:
    """Integer product that falls back to Python ints when int64 could overflow."""
    M = np.asarray(M)
    K = np.asarray(K)
    if M.size == 0 or K.size == 0:
        return np.zeros((M.shape[0], K.shape[1]), dtype=np.int64)
    mmax = int(np.max(np.abs(M.astype(object))))
    kmax = int(np.max(np.abs(K.astype(object))))
    if mmax * kmax * M.shape[1] < 2**62:
        return M.astype(np.int64) @ K.astype(np.int64)
    return M.astype(object) @ K.astype(object)


def integer_rank(M) -> int:
    """Exact rank of an integer matrix of any aspect ratio.

    Duplicate rows and columns are dropped first (rank is unchanged).  For
    tall matrices a numerically chosen row basis is certified by checking
    that the exact kernel of those rows annihilates every row; if the
    certificate fails we fall back to full elimination.
    """
    A = np.asarray(M)
    if A.size == 0:
        return 0
    if A.dtype != object:
        A = A.astype(np.int64)
    if A.shape[0] < A.shape[1]:
        A = A.T
    A = _unique_rows(A)
    A = _unique_rows(A.T).T
    nrows, ncols = A.shape
    if nrows <= 64:
        return rank(A.tolist())
    cand = _numeric_row_basis(A)
    sub = A[cand].tolist()
    r = rank(sub)
    kernel = nullspace(sub, ncols) if sub else nullspace([], ncols)
    if not kernel:
        return r
    K = np.array([integer_vector(v) for v in kernel], dtype=object).T
    if not np.any(exact_matmul(A, K) != 0):
        return r
    return rank(A.tolist())


def _unique_rows(A: np.ndarray) -> np.ndarray:
    if A.dtype == object:
        seen = {}
        for row in A.tolist():
            seen.setdefault(tuple(row), row)
        return np.array(list(seen.values()), dtype=object).reshape(-1, A.shape[1])
    return np.unique(A, axis=0)


def _numeric_row_basis(A: np.ndarray) -> list[int]:
    # greedy pivoted Gram-Schmidt: repeatedly take the row with the largest residual
    F = A.astype(float)
    F = F / np.maximum(np.linalg.norm(F, axis=1, keepdims=True), 1e-300)
    R = F.copy()
    chosen: list[int] = []
    for _ in range(F.shape[1]):
        norms = np.linalg.norm(R, axis=1)
        idx = int(np.argmax(norms))
        if norms[idx] < 1e-9:
            break
        chosen.append(idx)
        u = R[idx] / norms[idx]
        R -= np.outer(R @ u, u)
    return chosen


def is_zero_vector(v: Iterable) -> bool:
    return all(x == 0 for x in v)
