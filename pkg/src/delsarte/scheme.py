"""Symmetric association schemes: axioms, eigenmatrices, Krein numbers.

Conventions
-----------
``P[i][j]`` is the eigenvalue of the adjacency matrix ``A_j`` on the
eigenspace ``E_i`` (row 0 lists the valencies).  ``Q`` is defined by
``E_j = (1/|X|) sum_i Q[i][j] A_i`` (row 0 lists the multiplicities), so
``P @ Q == |X| I``.  Krein numbers use the standard normalization
``E_i o E_j = (1/|X|) sum_k q[i][j][k] E_k``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exact
from .errors import (
    DiagonalNotIdentityRelation,
    EigensystemNotSeparated,
    EmptyRelation,
    InconsistentIntersectionNumber,
    NegativeKrein,
    NotSymmetric,
    ParameterOutOfRange,
    SchemeAxiomError,
    SchemeTooLarge,
)

EPS_EIG = 1e-9
MAX_EXPLICIT_VERTICES = 5000
MAX_ORDERING_CLASSES = 10


class AssociationScheme:
    """A d-class symmetric association scheme together with its spectral data.

    Subclasses supply the relation oracle (:meth:`relations_between`) and may
    supply intersection numbers in closed form.  All public data is treated
    as immutable once constructed.
    """

    def __init__(self, num_vertices: int, P, Q, multiplicities, *, exact_mode: bool,
                 eps: float = EPS_EIG, name: str = "",
                 p_ordering=None, q_ordering=None):
        self.num_vertices = int(num_vertices)
        self.P = P
        self.Q = Q
        self.multiplicities = tuple(int(m) for m in multiplicities)
        self.exact = bool(exact_mode)
        self.eps = 0.0 if exact_mode else eps
        self.name = name
        if p_ordering is not None or q_ordering is not None:
            self.__dict__["polynomial_orderings"] = (p_ordering, q_ordering)

    # -- basic data -------------------------------------------------------
    @property
    def num_classes(self) -> int:
        return len(self.multiplicities) - 1

    @property
    def d(self) -> int:
        return self.num_classes

    @property
    def number_mode(self) -> str:
        return "EXACT" if self.exact else "APPROX"

    @property
    def valencies(self) -> tuple[int, ...]:
        return tuple(int(round(float(x))) if not self.exact else int(x) for x in self.P[0])

    @cached_property
    def intersection_numbers(self) -> np.ndarray:
        return self._intersection_numbers()

    def _intersection_numbers(self) -> np.ndarray:
        return intersection_from_eigenmatrix(self.P, self.Q, self.num_vertices, self.exact)

    @cached_property
    def krein(self) -> np.ndarray:
        return krein_numbers(self)

    @cached_property
    def polynomial_orderings(self):
        return find_polynomial_orderings(self)

    @property
    def p_ordering(self):
        return self.polynomial_orderings[0]

    @property
    def q_ordering(self):
        return self.polynomial_orderings[1]

    def theta(self) -> list:
        """Eigenvalues of A_1 on E_0..E_d (the P-polynomial eigenvalue grid)."""
        return [self.P[i][1] for i in range(self.d + 1)]

    def dual_theta(self) -> list:
        """Dual eigenvalues Q[i][1] (the Q-polynomial grid)."""
        return [self.Q[i][1] for i in range(self.d + 1)]

    def is_zero(self, x, scale: float = 1.0) -> bool:
        if self.exact:
            return x == 0
        return abs(float(x)) <= self.eps * max(1.0, scale)

    # -- relation oracle --------------------------------------------------
    def relations_between(self, rows, cols) -> np.ndarray:
        """Matrix of relation indices between two vertex lists."""
        raise NotImplementedError

    def relation(self, x: int, y: int) -> int:
        return int(self.relations_between([x], [y])[0, 0])

    def check_vertices(self, vertices) -> np.ndarray:
        from .errors import VertexOutOfRange

        v = np.asarray(vertices, dtype=np.int64).reshape(-1)
        if v.size and (v.min() < 0 or v.max() >= self.num_vertices):
            bad = int(v[(v < 0) | (v >= self.num_vertices)][0])
            raise VertexOutOfRange(f"vertex {bad} outside 0..{self.num_vertices - 1}")
        return v

    def relation_matrix(self, vertices=None) -> np.ndarray:
        if vertices is None:
            if self.num_vertices > MAX_EXPLICIT_VERTICES:
                raise SchemeTooLarge(f"|X| = {self.num_vertices} too large to materialize")
            vertices = np.arange(self.num_vertices)
        return self.relations_between(vertices, vertices)

    def adjacency_apply(self, i: int, v: np.ndarray, chunk: int = 512) -> np.ndarray:
        """Compute A_i v for an integer vector v indexed by all vertices."""
        n = self.num_vertices
        v = np.asarray(v)
        out = np.zeros(n, dtype=object if v.dtype == object else np.int64)
        allv = np.arange(n)
        for start in range(0, n, chunk):
            rows = allv[start:start + chunk]
            R = self.relations_between(rows, allv) == i
            out[start:start + chunk] = R.astype(v.dtype if v.dtype != object else np.int64) @ v
        return out

    def reordered(self, relation_order, eigen_order) -> "AssociationScheme":
        """Copy with relations and eigenspaces renumbered (index 0 fixed)."""
        return PermutedScheme(self, relation_order, eigen_order)

    def polynomial_form(self) -> "AssociationScheme":
        """Renumber so that the natural orderings are the polynomial ones."""
        p_ord, q_ord = self.polynomial_orderings
        ident = tuple(range(self.d + 1))
        p_ord = p_ord or ident
        q_ord = q_ord or ident
        if p_ord == ident and q_ord == ident:
            return self
        return self.reordered(p_ord, q_ord)

    def describe(self) -> dict:
        return {"name": self.name, "num_vertices": self.num_vertices,
                "num_classes": self.d, "number_mode": self.number_mode}

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or ''} |X|={self.num_vertices} d={self.d}>"


class ExplicitScheme(AssociationScheme):
    """Scheme given by a materialized relation matrix."""

    def __init__(self, relations: np.ndarray, intersection: np.ndarray, name: str = "explicit"):
        P, Q, m, is_exact = spectrum_from_intersection(intersection, relations.shape[0])
        super().__init__(relations.shape[0], P, Q, m, exact_mode=is_exact, name=name)
        self.relations = relations
        self.relations.setflags(write=False)
        self.__dict__["intersection_numbers"] = intersection

    def relations_between(self, rows, cols):
        return self.relations[np.ix_(np.asarray(rows, dtype=np.int64),
                                     np.asarray(cols, dtype=np.int64))]


class PermutedScheme(AssociationScheme):
    """View of another scheme with renumbered relations and eigenspaces."""

    def __init__(self, base: AssociationScheme, relation_order, eigen_order):
        d = base.d
        r = list(relation_order)
        e = list(eigen_order)
        if sorted(r) != list(range(d + 1)) or sorted(e) != list(range(d + 1)) or r[0] or e[0]:
            raise ParameterOutOfRange("orderings must be permutations fixing 0")
        P = _take2(base.P, e, r)
        Q = _take2(base.Q, r, e)
        m = [base.multiplicities[j] for j in e]
        super().__init__(base.num_vertices, P, Q, m, exact_mode=base.exact, eps=base.eps,
                         name=base.name)
        self.base = base
        self.relation_order = tuple(r)
        self.eigen_order = tuple(e)
        inv = np.empty(d + 1, dtype=np.int64)
        inv[r] = np.arange(d + 1)
        self._inverse = inv
        p = base.intersection_numbers
        self.__dict__["intersection_numbers"] = p[np.ix_(r, r, r)]

    def relations_between(self, rows, cols):
        return self._inverse[self.base.relations_between(rows, cols)]

    def _krein(self):
        q = self.base.krein
        e = list(self.eigen_order)
        return q[np.ix_(e, e, e)]

    @cached_property
    def krein(self):
        return self._krein()


def _take2(M, rows, cols):
    A = np.asarray(M)
    return A[np.ix_(rows, cols)]


# ---------------------------------------------------------------------------
# construction and verification
# ---------------------------------------------------------------------------

def verify_scheme(relation_matrix, name: str = "explicit") -> ExplicitScheme:
    """Check the association-scheme axioms on a relation matrix and build it.

    Intersection numbers are obtained by exhaustive counting: for every
    pair of classes the product ``A_i A_j`` is formed and must be constant
    on each relation.

    Raises
    ------
    NotSymmetric, DiagonalNotIdentityRelation, EmptyRelation,
    InconsistentIntersectionNumber
    """
    R = np.asarray(relation_matrix)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise SchemeAxiomError("relation matrix must be square")
    n = R.shape[0]
    if n < 2:
        raise SchemeAxiomError("need at least two vertices")
    if n > MAX_EXPLICIT_VERTICES:
        raise SchemeTooLarge(f"|X| = {n} exceeds {MAX_EXPLICIT_VERTICES}")
    if not np.issubdtype(R.dtype, np.integer):
        if np.any(R != np.round(R)):
            raise SchemeAxiomError("relation indices must be integers")
    R = R.astype(np.int64)
    if R.min() < 0:
        raise SchemeAxiomError("relation indices must be non-negative")
    d = int(R.max())
    if d < 1:
        raise SchemeAxiomError("need at least one non-identity class")
    asym = np.argwhere(R != R.T)
    if asym.size:
        x, y = (int(v) for v in asym[0])
        raise NotSymmetric(f"relation_of({x},{y}) = {R[x, y]} but relation_of({y},{x}) = {R[y, x]}")
    diag = np.diagonal(R)
    if np.any(diag != 0):
        x = int(np.argmax(diag != 0))
        raise DiagonalNotIdentityRelation(f"relation_of({x},{x}) = {diag[x]} != 0")
    off = (R == 0) & ~np.eye(n, dtype=bool)
    if off.any():
        x, y = (int(v) for v in np.argwhere(off)[0])
        raise DiagonalNotIdentityRelation(f"distinct vertices {x},{y} in relation 0")
    counts = np.bincount(R.ravel(), minlength=d + 1)
    if np.any(counts == 0):
        raise EmptyRelation(f"relation {int(np.argmin(counts))} is empty")
    p = count_intersection_numbers(R, d)
    dtype = np.int8 if d < 127 else np.int16
    return ExplicitScheme(R.astype(dtype), p, name=name)


def count_intersection_numbers(R: np.ndarray, d: int) -> np.ndarray:
    """Exhaustive p[i][j][k]; raises on the first inconsistent relation."""
    n = R.shape[0]
    p = np.zeros((d + 1, d + 1, d + 1), dtype=object)
    ftype = np.float32 if n < 2**24 else np.float64
    A = [(R == i).astype(ftype) for i in range(d + 1)]
    first = [tuple(int(v) for v in np.argwhere(R == k)[0]) for k in range(d + 1)]
    for i in range(d + 1):
        for j in range(i, d + 1):
            N = A[i] @ A[j] if i and j else (A[j] if i == 0 else A[i])
            for k in range(d + 1):
                vals = N[R == k]
                lo, hi = vals.min(), vals.max()
                if lo != hi:
                    ref = N[first[k]]
                    mask = (R == k) & (N != ref)
                    x, y = (int(v) for v in np.argwhere(mask)[0])
                    raise InconsistentIntersectionNumber(i, j, k, (x, y), (int(ref), int(N[x, y])))
                p[i, j, k] = p[j, i, k] = int(lo)
    return p


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

def spectrum_from_intersection(p: np.ndarray, n: int):
    """Eigenmatrices from intersection numbers.

    The characters ``phi`` (rows of ``P``) are the common eigenvectors of the
    matrices ``M_i[j][k] = p[i][j][k]`` normalized by ``phi_0 = 1``.  A
    generic integer combination of the ``M_i`` separates them.  If every
    eigenvalue of that combination is an integer with an exact one-dimensional
    eigenspace the result is exact; otherwise floats are returned.

    Returns ``(P, Q, multiplicities, exact)``.
    """
    d = p.shape[0] - 1
    Mi = [np.array(p[i], dtype=object) for i in range(d + 1)]
    val = [int(p[i][i][0]) for i in range(d + 1)]
    rng = np.random.default_rng(20240)
    for attempt in range(32):
        if attempt == 0:
            coeffs = [1 + (i * 7) % 11 + i for i in range(d + 1)]
        else:
            coeffs = [int(c) for c in rng.integers(1, 1000, size=d + 1)]
        M = sum(c * Mi[i] for i, c in enumerate(coeffs))
        Mf = M.astype(float)
        w, V = np.linalg.eig(Mf)
        w = w.real
        scale = max(1.0, float(np.abs(w).max()))
        ws = np.sort(w)
        if d > 0 and np.min(np.diff(ws)) <= 1e-6 * scale:
            continue
        chars = _exact_characters(M, w, p)
        if chars is not None:
            return _finish_exact(chars, val, n)
        return _finish_approx(V.real, p, val, n)
    raise EigensystemNotSeparated("could not separate the common eigenspaces")


def _exact_characters(M, w, p):
    d = p.shape[0] - 1
    chars = []
    for lam in w:
        li = int(round(lam))
        if abs(lam - li) > 1e-6 * max(1.0, abs(lam)):
            return None
        A = [[M[r][c] - (li if r == c else 0) for c in range(d + 1)] for r in range(d + 1)]
        ns = exact.nullspace(A)
        if len(ns) != 1 or ns[0][0] == 0:
            return None
        v = ns[0]
        phi = [x / v[0] for x in v]
        chars.append(phi)
    for phi in chars:
        for i in range(d + 1):
            for j in range(d + 1):
                if phi[i] * phi[j] != sum(p[i][j][k] * phi[k] for k in range(d + 1)):
                    return None
    return chars


def _order_characters(chars, val, key):
    trivial = [c for c in chars if all(key(x) == v for x, v in zip(c, val))]
    if len(trivial) != 1:
        raise EigensystemNotSeparated("trivial character not found")
    rest = [c for c in chars if c is not trivial[0]]
    rest.sort(key=lambda c: tuple(-round(float(x), 9) for x in c[1:]))
    return [trivial[0]] + rest


def _finish_exact(chars, val, n):
    chars = _order_characters(chars, val, lambda x: x)
    d = len(val) - 1
    P = np.empty((d + 1, d + 1), dtype=object)
    m = []
    for r, phi in enumerate(chars):
        P[r] = [Fraction(x) for x in phi]
        norm = sum(Fraction(x) ** 2 / val[i] for i, x in enumerate(phi))
        mr = Fraction(n) / norm
        if mr.denominator != 1 or mr <= 0:
            raise EigensystemNotSeparated(f"non-integral multiplicity {mr}")
        m.append(int(mr))
    # characters of integer matrices with rational values are integers
    P = np.array([[int(x) if x.denominator == 1 else x for x in row] for row in P], dtype=object)
    Q = np.empty((d + 1, d + 1), dtype=object)
    for i in range(d + 1):
        for j in range(d + 1):
            q = Fraction(m[j]) * Fraction(P[j][i]) / val[i]
            Q[i][j] = int(q) if q.denominator == 1 else q
    if sum(m) != n:
        raise EigensystemNotSeparated("multiplicities do not sum to |X|")
    return P, Q, m, True


def _finish_approx(V, p, val, n):
    d = len(val) - 1
    chars = []
    for c in range(V.shape[1]):
        v = V[:, c]
        if abs(v[0]) < 1e-12:
            raise EigensystemNotSeparated("eigenvector with vanishing first coordinate")
        chars.append(list(v / v[0]))
    chars = _order_characters(chars, val, lambda x: int(round(x)) if abs(x - round(x)) < 1e-6 else None)
    P = np.array(chars, dtype=float)
    m = []
    for r in range(d + 1):
        mr = n / float(np.sum(P[r] ** 2 / np.array(val, dtype=float)))
        if abs(mr - round(mr)) > 1e-6 * n:
            raise EigensystemNotSeparated(f"non-integral multiplicity {mr}")
        m.append(int(round(mr)))
    Q = np.array([[m[j] * P[j][i] / val[i] for j in range(d + 1)] for i in range(d + 1)])
    return P, Q, m, False


def eigensystem(scheme: AssociationScheme):
    """``(P, Q, multiplicities)`` of a scheme."""
    return scheme.P, scheme.Q, scheme.multiplicities


def intersection_from_eigenmatrix(P, Q, n, is_exact):
    """p[i][j][k] = (1 / (n k_k)) sum_r m_r P[r][i] P[r][j] P[r][k]."""
    d = len(P) - 1
    val = [P[0][i] for i in range(d + 1)]
    m = [Q[0][j] for j in range(d + 1)]
    p = np.empty((d + 1, d + 1, d + 1), dtype=object)
    for i in range(d + 1):
        for j in range(i, d + 1):
            for k in range(d + 1):
                s = sum(m[r] * P[r][i] * P[r][j] * P[r][k] for r in range(d + 1))
                v = Fraction(s) / (n * val[k]) if is_exact else s / (n * val[k])
                if is_exact:
                    v = int(v) if v.denominator == 1 else v
                p[i, j, k] = p[j, i, k] = v
    return p


def krein_numbers(scheme: AssociationScheme) -> np.ndarray:
    """Krein numbers from the Hadamard products of idempotent coefficients.

    Column j of Q holds the coordinates of ``|X| E_j`` in the basis
    ``A_0..A_d``; the Hadamard product ``E_i o E_j`` therefore has coordinates
    ``Q[:,i] * Q[:,j] / |X|^2`` and is expanded back in the ``E_k`` using
    ``A_l = sum_k P[k][l] E_k``.
    """
    P, Q, n = scheme.P, scheme.Q, scheme.num_vertices
    d = scheme.d
    q = np.empty((d + 1, d + 1, d + 1), dtype=object if scheme.exact else float)
    scale = max(float(abs(x)) for x in np.asarray(Q).ravel()) ** 2
    for i in range(d + 1):
        for j in range(i, d + 1):
            had = [Q[l][i] * Q[l][j] for l in range(d + 1)]
            for k in range(d + 1):
                s = sum(had[l] * P[k][l] for l in range(d + 1))
                if scheme.exact:
                    v = Fraction(s) / n
                    v = int(v) if v.denominator == 1 else v
                else:
                    v = s / n
                    if abs(v) <= scheme.eps * scale:
                        v = 0.0
                if v < 0:
                    raise NegativeKrein(i, j, k, v)
                q[i, j, k] = q[j, i, k] = v
    return q


# ---------------------------------------------------------------------------
# polynomial orderings
# ---------------------------------------------------------------------------

def _tridiagonal_chain(T, first, positive):
    """Ordering 0, first, ... forced by the support of T[first][.][.], or None."""
    d = len(T) - 1
    order = [0, first]
    used = {0, first}
    for j in range(1, d):
        nxt = [k for k in range(d + 1) if k not in used and positive(T[first][order[j]][k])]
        if len(nxt) != 1:
            return None
        order.append(nxt[0])
        used.add(nxt[0])
    for a in range(d + 1):
        for b in range(d + 1):
            v = T[first][order[a]][order[b]]
            if abs(a - b) > 1 and positive(v):
                return None
            if abs(a - b) == 1 and not positive(v):
                return None
    return tuple(order)


def find_polynomial_orderings(scheme: AssociationScheme):
    """Lexicographically smallest P- and Q-polynomial orderings (or None).

    Each candidate first class determines the rest of the ordering, so the
    search is linear in d rather than factorial.
    """
    d = scheme.d
    if d > MAX_ORDERING_CLASSES and not getattr(scheme, "closed_form", False):
        raise ParameterOutOfRange(f"ordering search limited to d <= {MAX_ORDERING_CLASSES}")
    p = scheme.intersection_numbers
    q = scheme.krein
    tol = 0 if scheme.exact else 1e-7 * max(1.0, max(float(abs(x)) for x in np.asarray(q).ravel()))

    def positive(x):
        return x > tol

    def search(T):
        for first in range(1, d + 1):
            o = _tridiagonal_chain(T, first, positive)
            if o is not None:
                return o
        return None

    return search(p), search(q)


def all_polynomial_orderings(scheme: AssociationScheme, dual: bool = False):
    """Every valid ordering, by brute force over permutations (d <= 7 tests)."""
    d = scheme.d
    T = scheme.krein if dual else scheme.intersection_numbers
    tol = 0 if scheme.exact else 1e-7
    out = []
    for perm in itertools.permutations(range(1, d + 1)):
        o = (0,) + perm
        ok = True
        for a in range(d + 1):
            for b in range(d + 1):
                v = T[o[1]][o[a]][o[b]]
                if (abs(a - b) > 1 and v > tol) or (abs(a - b) == 1 and not v > tol):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(o)
    return out
