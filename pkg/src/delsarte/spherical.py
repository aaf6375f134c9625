"""Finite sets on the unit sphere: Gegenbauer moments, designs, degree sets.

The variable of every polynomial here is the inner product ``<x, y>``.
Rational input keeps the whole pipeline in ``Fraction``; any float
coordinate switches to floating point with the tolerances below.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm
from pathlib import Path

import numpy as np

from .errors import (
    BoundViolation,
    DimensionTooSmall,
    InvalidPointSet,
    NegativeMoment,
    NotAnnihilator,
    ParameterOutOfRange,
    PositivityViolation,
    SchemeAxiomError,
    TheoremViolation,
    EigensystemNotSeparated,
    NegativeKrein,
)
from .exact import exact_matmul, rank as exact_rank
from .polynomials import add, degree, evaluate, mul, scale, trim
from .scheme import ExplicitScheme, verify_scheme

EPS_NORM = 1e-9
EPS_DEG = 1e-6
EPS_MOM_PER_POINT = 1e-8
EPS_PRODUCT = 1e-9


# ---------------------------------------------------------------------------
# Gegenbauer polynomials
# ---------------------------------------------------------------------------

def _check_dimension(d: int):
    if d < 3:
        raise DimensionTooSmall(f"dimension d = {d}; the recurrence needs d >= 3")


@lru_cache(maxsize=None)
def _gegenbauer(d: int, k: int) -> tuple:
    if k == 0:
        return (Fraction(1),)
    if k == 1:
        return (Fraction(0), Fraction(d))
    j = k - 1
    prev, cur = list(_gegenbauer(d, j - 1)), list(_gegenbauer(d, j))
    inner = add(mul([0, 1], cur), scale(prev, -Fraction(d + j - 3, d + 2 * j - 4)))
    return tuple(scale(inner, Fraction(d + 2 * j, j + 1)))


def gegenbauer(d: int, k: int) -> list[Fraction]:
    """Coefficients of Q_k on S^{d-1}, constant term first, Q_1 = d x."""
    _check_dimension(d)
    if k < 0:
        raise ParameterOutOfRange("degree k must be non-negative")
    return list(_gegenbauer(d, k))


def harmonic_dimension(d: int, k: int) -> int:
    """Dimension of degree-k harmonic polynomials in d variables."""
    return comb(d + k - 1, k) - (comb(d + k - 3, k - 2) if k >= 2 else 0)


def expand_gegenbauer(d: int, poly) -> list:
    """Coefficients f with ``poly = sum_k f_k Q_k``."""
    poly = trim(list(poly))
    top = degree(poly)
    if top < 0:
        return [0]
    f = [0] * (top + 1)
    rest = list(poly)
    for k in range(top, -1, -1):
        if k >= len(rest):
            continue
        Qk = gegenbauer(d, k)
        c = rest[k] / Qk[k]
        f[k] = c
        if c != 0:
            rest = add(rest, scale(Qk, -c))
    return f


def linearization(d: int, i: int, j: int) -> list[Fraction]:
    """q_k(i, j) for k = 0..i+j with ``Q_i Q_j = sum_k q_k(i, j) Q_k``.

    Raises :class:`PositivityViolation` unless ``q_k > 0`` exactly when
    ``|i - j| <= k <= i + j`` and ``k = i + j (mod 2)``.
    """
    q = expand_gegenbauer(d, mul(gegenbauer(d, i), gegenbauer(d, j)))
    q = q + [Fraction(0)] * (i + j + 1 - len(q))
    for k, v in enumerate(q):
        want = abs(i - j) <= k <= i + j and (i + j - k) % 2 == 0
        if (v > 0) != want or v < 0:
            raise PositivityViolation(f"q_{k}({i},{j}) = {v} on S^{d - 1}")
    return q


def _gegenbauer_values(d: int, K: int, x: np.ndarray) -> list[np.ndarray]:
    """Q_0..Q_K evaluated on a float array by the recurrence."""
    out = [np.ones_like(x), d * x]
    for k in range(1, K):
        nxt = (d + 2 * k) / (k + 1) * (x * out[k] - (d + k - 3) / (d + 2 * k - 4) * out[k - 1])
        out.append(nxt)
    return out[:K + 1]


# ---------------------------------------------------------------------------
# point sets
# ---------------------------------------------------------------------------

class PointSet:
    """A finite subset of S^{d-1} held through its Gram matrix.

    ``exact`` means every inner product is a ``Fraction``.
    """

    def __init__(self, gram, d: int, exact: bool, points=None, name: str = ""):
        _check_dimension(d)
        self.d = d
        self.exact = exact
        self.gram = gram
        self.points = points
        self.name = name
        self._validate()

    def __len__(self):
        return self.gram.shape[0]

    @property
    def size(self) -> int:
        return self.gram.shape[0]

    @property
    def number_mode(self) -> str:
        return "EXACT" if self.exact else "APPROX"

    @classmethod
    def from_points(cls, points, name: str = "") -> "PointSet":
        rows = [list(p) for p in points]
        if not rows:
            raise InvalidPointSet("point set is empty")
        d = len(rows[0])
        if any(len(r) != d for r in rows):
            raise InvalidPointSet("points have different dimensions")
        exact = all(isinstance(v, (int, Fraction)) for r in rows for v in r)
        if exact:
            P = np.array([[Fraction(v) for v in r] for r in rows], dtype=object)
            G = P.dot(P.T)
        else:
            P = np.array(rows, dtype=float)
            G = P @ P.T
            G = (G + G.T) / 2
        return cls(G, d, exact, points=P, name=name)

    @classmethod
    def from_integer_points(cls, points, name: str = "") -> "PointSet":
        """Integer vectors of equal squared norm N, scaled onto the sphere.

        The Gram matrix ``(x . y) / N`` stays rational.
        """
        P = np.array(points, dtype=object)
        G = P.dot(P.T)
        norms = set(G[i, i] for i in range(G.shape[0]))
        if len(norms) != 1 or 0 in norms:
            raise InvalidPointSet("integer points must share one non-zero squared norm")
        N = norms.pop()
        G = np.vectorize(lambda v: Fraction(v, N), otypes=[object])(G)
        return cls(G, P.shape[1], True, name=name)

    @classmethod
    def from_gram(cls, gram, d: int, name: str = "") -> "PointSet":
        G = np.array(gram, dtype=object)
        exact = all(isinstance(v, (int, Fraction)) for v in G.ravel())
        if exact:
            G = np.vectorize(Fraction, otypes=[object])(G)
            if exact_rank(G.tolist()) > d:
                raise InvalidPointSet(f"Gram matrix has rank above d = {d}")
        else:
            G = G.astype(float)
            if np.linalg.matrix_rank(G, tol=1e-7) > d:
                raise InvalidPointSet(f"Gram matrix has rank above d = {d}")
        if np.linalg.eigvalsh(G.astype(float)).min() < -1e-9:
            raise InvalidPointSet("Gram matrix is not positive semidefinite")
        return cls(G, d, exact, name=name)

    def _validate(self):
        G = self.gram
        n = G.shape[0]
        if n == 0:
            raise InvalidPointSet("point set is empty")
        if G.shape != (n, n):
            raise InvalidPointSet("Gram matrix must be square")
        diag = np.array([G[i, i] for i in range(n)], dtype=object if self.exact else float)
        if self.exact:
            bad = [i for i in range(n) if diag[i] != 1]
        else:
            bad = list(np.flatnonzero(np.abs(diag - 1) > EPS_NORM))
        if bad:
            raise InvalidPointSet(f"point {bad[0]} is not a unit vector (<x,x> = {diag[bad[0]]})")
        if np.any(G != G.T):
            raise InvalidPointSet("Gram matrix is not symmetric")
        off = ~np.eye(n, dtype=bool)
        hit = (G == 1) & off if self.exact else (G.astype(float) >= 1 - EPS_NORM) & off
        if hit.any():
            x, y = (int(v) for v in np.argwhere(hit)[0])
            raise InvalidPointSet(f"points {x} and {y} coincide")

    def off_diagonal(self) -> np.ndarray:
        n = self.size
        return self.gram[~np.eye(n, dtype=bool)]


def read_points(path, name: str | None = None) -> PointSet:
    """One point per line; ``p/q`` and integer tokens are exact, decimals switch to floats."""
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        row = []
        for tok in line.replace(",", " ").split():
            try:
                row.append(Fraction(tok) if ("." not in tok and "e" not in tok.lower()) else float(tok))
            except (ValueError, ZeroDivisionError):
                raise InvalidPointSet(f"line {lineno}: cannot parse {tok!r}") from None
        rows.append(row)
    if any(isinstance(v, float) for r in rows for v in r):
        rows = [[float(v) for v in r] for r in rows]
    return PointSet.from_points(rows, name=name or Path(path).stem)


# ---------------------------------------------------------------------------
# moments and designs
# ---------------------------------------------------------------------------

def moment_tolerance(X: PointSet) -> float:
    return EPS_MOM_PER_POINT * X.size


def moments(X: PointSet, K: int) -> list:
    """b_k = (1/|X|) sum_{x,y} Q_k(<x,y>) for k = 0..K (b_0 = |X|)."""
    if K < 0:
        raise ParameterOutOfRange("K must be non-negative")
    n = X.size
    if X.exact:
        values, counts = np.unique(X.gram.ravel(), return_counts=True)
        out = []
        for k in range(K + 1):
            Qk = gegenbauer(X.d, k)
            out.append(sum(int(c) * evaluate(Qk, v) for v, c in zip(values, counts)) / n)
            if out[-1] < 0:
                raise NegativeMoment(k, out[-1])
        return out
    tol = moment_tolerance(X)
    out = []
    for k, Vk in enumerate(_gegenbauer_values(X.d, K, X.gram.astype(float))):
        b = float(np.sum(Vk)) / n
        if b < -tol:
            raise NegativeMoment(k, b)
        out.append(0.0 if abs(b) <= tol else b)
    return out


def _moment_zero(X: PointSet, b) -> bool:
    return b == 0 if X.exact else abs(b) <= moment_tolerance(X)


def design_check(X: PointSet, w: int, t: int, b=None) -> bool:
    """Is X a spherical (w, t)-design, i.e. b_{w+1} = ... = b_{w+t} = 0?"""
    if w < 0 or t < 1:
        raise ParameterOutOfRange("need w >= 0 and t >= 1")
    b = b if b is not None and len(b) > w + t else moments(X, w + t)
    return all(_moment_zero(X, b[k]) for k in range(w + 1, w + t + 1))


# ---------------------------------------------------------------------------
# degree set and intervals
# ---------------------------------------------------------------------------

def degree_set(X: PointSet) -> list:
    """Distinct inner products between different points, in decreasing order.

    Float values are clustered: sorted values split at gaps above
    ``EPS_DEG``; each cluster is represented by its mean.
    """
    vals = X.off_diagonal()
    if X.exact:
        return sorted(set(vals.tolist()), reverse=True)
    if vals.size == 0:
        return []
    v = np.sort(vals.astype(float))[::-1]
    cuts = np.flatnonzero(-np.diff(v) > EPS_DEG) + 1
    return [float(c.mean()) for c in np.split(v, cuts)]


def relation_matrix(X: PointSet, alphas=None) -> np.ndarray:
    """R[x][y] = 0 on the diagonal, i when <x,y> is the i-th degree-set value."""
    alphas = degree_set(X) if alphas is None else alphas
    n = X.size
    R = np.zeros((n, n), dtype=np.int16)
    G = X.gram
    if X.exact:
        index = {a: i + 1 for i, a in enumerate(alphas)}
        for x in range(n):
            for y in range(n):
                if x != y:
                    R[x, y] = index[G[x, y]]
        return R
    a = np.asarray(alphas, dtype=float)
    Gf = G.astype(float)
    idx = np.abs(Gf[:, :, None] - a[None, None, :]).argmin(axis=2) + 1
    R[:] = idx
    R[np.diag_indices(n)] = 0
    return R


@dataclass(frozen=True)
class SphericalInterval:
    """Maximal run ``b_{w+1} = ... = b_{w+t} = 0`` with ``b_w != 0``.

    ``closed`` means ``b_{w+t+1} != 0`` was seen within the computed range.
    """

    w: int
    t: int
    closed: bool

    def as_dict(self) -> dict:
        return {"w": self.w, "t": self.t, "closed": self.closed}


def spherical_intervals(X: PointSet, b) -> list[SphericalInterval]:
    K = len(b) - 1
    out = []
    k = 1
    while k <= K:
        if _moment_zero(X, b[k]):
            start = k
            while k <= K and _moment_zero(X, b[k]):
                k += 1
            out.append(SphericalInterval(start - 1, k - start, k <= K))
        else:
            k += 1
    return out


# ---------------------------------------------------------------------------
# the scheme on X
# ---------------------------------------------------------------------------

def _gegenbauer_matrix(X: PointSet, k: int):
    """Q_k(<x,y>) as an integer matrix with a common denominator, or floats."""
    if X.exact:
        Qk = gegenbauer(X.d, k)
        vals = np.vectorize(lambda v: evaluate(Qk, v), otypes=[object])(X.gram)
        den = lcm(*(Fraction(v).denominator for v in vals.ravel()))
        return np.vectorize(lambda v: int(v * den), otypes=[object])(vals).astype(object)
    return _gegenbauer_values(X.d, k, X.gram.astype(float))[k]


@dataclass
class SphericalHypothesis:
    w: int
    s: int
    holds: bool
    failure: tuple | None = None

    def as_dict(self) -> dict:
        return {"w": self.w, "s": self.s, "holds": self.holds,
                "failure": list(self.failure) if self.failure else None}


def check_smainth_hypothesis(X: PointSet, b, w: int, s: int) -> SphericalHypothesis:
    """``G_k G_l = 0`` for k, l in 0..w+s, ``|k - l| >= w + 1``, with ``G_k = [Q_k(<x,y>)]``.

    ``G_k`` is ``H_k H_k^T`` by the addition formula, so these are the
    spherical counterparts of the restricted-idempotent products.
    """
    if _moment_zero(X, b[w]):
        return SphericalHypothesis(w, s, False, ("b_w", w))
    top = w + s
    mats = {k: _gegenbauer_matrix(X, k) for k in range(top + 1)}
    for k in range(top + 1):
        for l in range(k + w + 1, top + 1):
            if X.exact:
                P = exact_matmul(mats[k], mats[l])
                bad = np.argwhere(P != 0)
            else:
                P = mats[k] @ mats[l]
                tol = EPS_PRODUCT * max(1.0, np.abs(mats[k]).max() * np.abs(mats[l]).max() * X.size)
                bad = np.argwhere(np.abs(P) > tol)
            if bad.size:
                return SphericalHypothesis(w, s, False, (k, l, int(bad[0][0]), int(bad[0][1])))
    return SphericalHypothesis(w, s, True)


@dataclass
class SphericalScheme:
    scheme: ExplicitScheme
    q_ordering: tuple | None

    def as_dict(self) -> dict:
        return {"classes": self.scheme.d, "number_mode": self.scheme.number_mode,
                "q_polynomial": self.q_ordering is not None,
                "ordering": list(self.q_ordering) if self.q_ordering else None,
                "multiplicities": list(self.scheme.multiplicities)}


def scheme_on_points(X: PointSet, licensed: bool = False) -> SphericalScheme:
    """Verify that the inner-product classes form a scheme and search a Q-ordering.

    When ``licensed`` (the theorem's hypothesis holds) any failure raises
    :class:`TheoremViolation`.
    """
    R = relation_matrix(X)
    try:
        S = verify_scheme(R, name=X.name or "points")
        q_order = S.q_ordering
    except (SchemeAxiomError, EigensystemNotSeparated, NegativeKrein) as exc:
        if licensed:
            raise TheoremViolation(f"hypothesis holds but the point set carries no scheme: {exc}") from exc
        raise
    if licensed and q_order is None:
        raise TheoremViolation("hypothesis holds but the scheme on X is not Q-polynomial")
    return SphericalScheme(S, q_order)


# ---------------------------------------------------------------------------
# full analysis
# ---------------------------------------------------------------------------

@dataclass
class SphericalReport:
    size: int
    d: int
    number_mode: str
    moments: list
    degree_set: list
    intervals: list
    bound_checks: list = field(default_factory=list)  # (interval, satisfied)
    designs: dict = field(default_factory=dict)
    int_candidates: list = field(default_factory=list)

    @property
    def s(self) -> int:
        return len(self.degree_set)


def spherical_analysis(X: PointSet, K: int | None = None, designs=()) -> SphericalReport:
    """Moments up to K, degree set, intervals, the ``t <= 2s`` check and the scheme path.

    Every closed interval with ``2s - 1 <= t`` is a candidate for the
    corollary: the hypothesis is checked at its w and the scheme on X is
    built and certified.
    """
    alphas = degree_set(X)
    s = len(alphas)
    K = max(K or 0, 2 * s + 2)
    b = moments(X, K)
    ivs = spherical_intervals(X, b)
    report = SphericalReport(X.size, X.d, X.number_mode, b, alphas, ivs)
    for iv in ivs:
        if not iv.closed:
            continue
        ok = iv.t <= 2 * s
        report.bound_checks.append((iv, ok))
        if not ok:
            raise BoundViolation(f"spherical interval (w={iv.w}, t={iv.t}) exceeds 2s = {2 * s}")
    for w, t in designs:
        report.designs[(w, t)] = design_check(X, w, t, b)
    for iv in ivs:
        if iv.closed and 2 * s - 1 <= iv.t and s >= 1:
            hyp = check_smainth_hypothesis(X, b, iv.w, s)
            if not hyp.holds:
                raise TheoremViolation(
                    f"2s-1 <= t at (w={iv.w}, t={iv.t}) but the product hypothesis fails at {hyp.failure}")
            report.int_candidates.append((iv, hyp, scheme_on_points(X, licensed=True)))
    return report


def verify_scar(X: PointSet, coeffs, b=None):
    """Residual ``F(1) - sum_k f_k b_k`` for an annihilator F of X.

    ``coeffs`` are monomial coefficients in the inner-product variable;
    ``f`` is F written in the Gegenbauer basis.
    """
    F = trim(list(coeffs))
    if X.exact:
        F = [Fraction(c) for c in F]
    for a in degree_set(X):
        v = evaluate(F, a)
        if X.exact:
            bad = v != 0
        else:
            slope = abs(evaluate([k * c for k, c in enumerate(F)][1:] or [0], a))
            bad = abs(v) > EPS_DEG * max(1.0, slope)
        if bad:
            raise NotAnnihilator(f"F({a}) = {v} != 0 on the degree set")
    f = expand_gegenbauer(X.d, F)
    b = b if b is not None and len(b) >= len(f) else moments(X, len(f) - 1)
    return evaluate(F, 1) - sum(fk * bk for fk, bk in zip(f, b))


# ---------------------------------------------------------------------------
# classical examples
# ---------------------------------------------------------------------------

def simplex(d: int) -> PointSet:
    """d+1 points with pairwise inner product -1/d."""
    G = [[Fraction(1) if i == j else Fraction(-1, d) for j in range(d + 1)] for i in range(d + 1)]
    return PointSet.from_gram(G, d, name=f"simplex{d}")


def cross_polytope(d: int) -> PointSet:
    pts = []
    for i in range(d):
        for sgn in (1, -1):
            pts.append([sgn if j == i else 0 for j in range(d)])
    return PointSet.from_points(pts, name=f"cross{d}")


def cube(d: int = 3) -> PointSet:
    from itertools import product

    return PointSet.from_integer_points(list(product((1, -1), repeat=d)), name=f"cube{d}")


def icosahedron() -> PointSet:
    phi = (1 + 5 ** 0.5) / 2
    pts = []
    for a in (1, -1):
        for c in (phi, -phi):
            pts += [(0, a, c), (a, c, 0), (c, 0, a)]
    P = np.array(pts, dtype=float)
    P /= np.linalg.norm(P, axis=1)[:, None]
    return PointSet.from_points(P.tolist(), name="icosahedron")
