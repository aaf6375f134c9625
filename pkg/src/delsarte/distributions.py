"""Inner and dual distributions, (dual) degree sets and zero intervals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BoundViolation, DuplicateVertex, EmptySubset, NegativeDual
from .scheme import AssociationScheme

PAIR_CHUNK = 1024


@dataclass(frozen=True)
class ZeroInterval:
    """Maximal run ``vec[w+1] = ... = vec[w+t] = 0`` inside indices 1..d."""

    w: int
    t: int
    terminal: bool

    @property
    def indices(self) -> range:
        return range(self.w + 1, self.w + self.t + 1)

    def as_dict(self) -> dict:
        return {"w": self.w, "t": self.t, "terminal": self.terminal}


@dataclass(frozen=True)
class BoundVerdict:
    interval: ZeroInterval
    kind: str  # "zero" (checked against s*) or "dual_zero" (checked against s)
    case: str  # "interior" -> t <= 2x, "terminal" -> t <= x
    bound: int
    satisfied: bool

    @property
    def gap(self) -> int:
        return self.bound - self.interval.t

    def as_dict(self) -> dict:
        return {"interval": self.interval.as_dict(), "kind": self.kind, "case": self.case,
                "bound": self.bound, "satisfied": self.satisfied, "gap": self.gap}


@dataclass
class SubsetAnalysis:
    subset_size: int
    inner: list
    dual: list
    degree_set: tuple[int, ...]
    dual_degree_set: tuple[int, ...]
    zero_intervals: list[ZeroInterval]
    dual_zero_intervals: list[ZeroInterval]
    bound_verdicts: list[BoundVerdict] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.degree_set)

    @property
    def dual_degree(self) -> int:
        return len(self.dual_degree_set)

    @property
    def d(self) -> int:
        return len(self.inner) - 1


def _validated_subset(scheme: AssociationScheme, C) -> np.ndarray:
    v = scheme.check_vertices(C)
    if v.size == 0:
        raise EmptySubset("subset must be non-empty")
    u, counts = np.unique(v, return_counts=True)
    if np.any(counts > 1):
        raise DuplicateVertex(f"vertex {int(u[np.argmax(counts > 1)])} listed twice")
    return v


def relation_counts(scheme: AssociationScheme, C) -> list[int]:
    """Number of ordered pairs of C in each relation."""
    v = _validated_subset(scheme, C)
    counts = np.zeros(scheme.d + 1, dtype=np.int64)
    for start in range(0, v.size, PAIR_CHUNK):
        R = scheme.relations_between(v[start:start + PAIR_CHUNK], v)
        counts += np.bincount(R.ravel(), minlength=scheme.d + 1)
    return [int(c) for c in counts]


def inner_distribution(scheme: AssociationScheme, C) -> list[Fraction]:
    """a_i = |{(x, y) in C^2 : relation_of(x, y) = i}| / |C|."""
    counts = relation_counts(scheme, C)
    size = counts[0]
    return [Fraction(c, size) for c in counts]


def dual_distribution(scheme: AssociationScheme, a, subset_size: int) -> list:
    """MacWilliams transform b_j = sum_i a_i Q[i][j].

    In exact mode every b_j is checked to be non-negative; in approximate
    mode values within tolerance of zero are clamped.
    """
    d = scheme.d
    Q = scheme.Q
    b = []
    for j in range(d + 1):
        s = sum(a[i] * Q[i][j] for i in range(d + 1))
        if scheme.exact:
            s = Fraction(s)
            if s < 0:
                raise NegativeDual(j, s)
        else:
            s = float(s)
            tol = scheme.eps * max(1.0, float(scheme.num_vertices))
            if s < -tol:
                raise NegativeDual(j, s)
            if abs(s) <= tol:
                s = 0.0
        b.append(s)
    return b


def zero_intervals(vec, is_zero=None) -> list[ZeroInterval]:
    """All maximal zero runs among ``vec[1..d]`` as ``(w, t, terminal)``."""
    if is_zero is None:
        def is_zero(x):
            return x == 0
    d = len(vec) - 1
    out = []
    i = 1
    while i <= d:
        if is_zero(vec[i]):
            start = i
            while i <= d and is_zero(vec[i]):
                i += 1
            out.append(ZeroInterval(start - 1, i - start, i - 1 == d))
        else:
            i += 1
    return out


def support(vec, is_zero=None) -> tuple[int, ...]:
    if is_zero is None:
        def is_zero(x):
            return x == 0
    return tuple(i for i in range(1, len(vec)) if not is_zero(vec[i]))


def check_bounds(analysis: SubsetAnalysis, *, primal: bool = True, dual: bool = True,
                 strict: bool = True) -> list[BoundVerdict]:
    """Compare every maximal interval with twice the (dual) degree.

    A zero interval of ``a`` is bounded by the dual degree s*, a dual zero
    interval of ``b`` by the degree s; interior intervals by twice that,
    terminal ones by the value itself.  With ``strict`` a violation raises
    :class:`BoundViolation`.
    """
    verdicts = []
    sides = []
    if primal:
        sides.append(("zero", analysis.zero_intervals, analysis.dual_degree))
    if dual:
        sides.append(("dual_zero", analysis.dual_zero_intervals, analysis.degree))
    for kind, intervals, x in sides:
        for iv in intervals:
            case = "terminal" if iv.terminal else "interior"
            bound = x if iv.terminal else 2 * x
            v = BoundVerdict(iv, kind, case, bound, iv.t <= bound)
            if strict and not v.satisfied:
                raise BoundViolation(f"{kind} interval (w={iv.w}, t={iv.t}) exceeds {case} bound {bound}")
            verdicts.append(v)
    return verdicts


def analyze_subset(scheme: AssociationScheme, C, *, check: bool = True) -> SubsetAnalysis:
    """Full distribution analysis of a subset; bounds checked per side when the
    scheme is P- (resp. Q-) polynomial in its natural ordering."""
    counts = relation_counts(scheme, C)
    size = counts[0]
    a = [Fraction(c, size) for c in counts]
    b = dual_distribution(scheme, a, size)
    scale = float(scheme.num_vertices)

    def bz(x):
        return scheme.is_zero(x, scale)

    analysis = SubsetAnalysis(
        subset_size=size,
        inner=a,
        dual=b,
        degree_set=support(a),
        dual_degree_set=support(b, bz),
        zero_intervals=zero_intervals(a),
        dual_zero_intervals=zero_intervals(b, bz),
    )
    if check:
        ident = tuple(range(scheme.d + 1))
        p_ok, q_ok = (o == ident for o in scheme.polynomial_orderings)
        analysis.bound_verdicts = check_bounds(analysis, primal=p_ok, dual=q_ok)
    return analysis


def transform_back(scheme: AssociationScheme, b) -> list:
    """(1/|X|) b P, which recovers the inner distribution."""
    d = scheme.d
    n = scheme.num_vertices
    out = []
    for i in range(d + 1):
        s = sum(b[j] * scheme.P[j][i] for j in range(d + 1))
        out.append(Fraction(s) / n if scheme.exact else s / n)
    return out
