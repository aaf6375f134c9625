"""Outer distributions, complete regularity and the P-side theorem checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import BinaryLinearCode
from .distributions import SubsetAnalysis, ZeroInterval, _validated_subset
from .errors import (
    BasePointNotInSubset,
    PreconditionFailed,
    SchemeTooLarge,
    TheoremViolation,
)
from .exact import integer_rank
from .scheme import AssociationScheme

MAX_OUTER_VERTICES = 2**20
MAX_CERTIFICATE_VERTICES = 2**16
_CELLS_PER_CHUNK = 1 << 22


@dataclass
class OuterDistribution:
    """Rows of the outer distribution matrix B.

    In full mode there is one row per vertex.  For linear codes only one
    row per coset is stored (``weights`` says how many vertices it stands
    for); every statistic used here depends only on the set of rows.
    """

    rows: np.ndarray
    vertices: np.ndarray
    weights: np.ndarray
    subset_size: int
    full: bool

    @property
    def distances(self) -> np.ndarray:
        """d(x, C) for each stored row: the first relation hit by C."""
        return np.argmax(self.rows > 0, axis=1)

    @property
    def covering_radius(self) -> int:
        return int(self.distances.max())

    @property
    def rank(self) -> int:
        return integer_rank(self.rows)

    def row_of(self, x: int) -> np.ndarray:
        hit = np.flatnonzero(self.vertices == x)
        if not hit.size:
            raise KeyError(x)
        return self.rows[hit[0]]


def _count_rows(scheme: AssociationScheme, xs: np.ndarray, C: np.ndarray) -> np.ndarray:
    d1 = scheme.d + 1
    out = np.empty((xs.size, d1), dtype=np.int64)
    step = max(1, _CELLS_PER_CHUNK // max(1, C.size))
    for start in range(0, xs.size, step):
        chunk = xs[start:start + step]
        R = scheme.relations_between(chunk, C)
        idx = R + d1 * np.arange(chunk.size)[:, None]
        out[start:start + chunk.size] = np.bincount(
            idx.ravel(), minlength=chunk.size * d1).reshape(chunk.size, d1)
    return out


def outer_distribution(scheme: AssociationScheme, C) -> OuterDistribution:
    """B[x][i] = |{y in C : relation_of(x, y) = i}| for every vertex x."""
    C = _validated_subset(scheme, C)
    if scheme.num_vertices > MAX_OUTER_VERTICES:
        raise SchemeTooLarge(f"|X| = {scheme.num_vertices} exceeds {MAX_OUTER_VERTICES}; "
                             "use outer_distribution_linear for linear codes")
    xs = np.arange(scheme.num_vertices, dtype=np.int64)
    rows = _count_rows(scheme, xs, C)
    return OuterDistribution(rows, xs, np.ones(xs.size, dtype=np.int64), C.size, True)


def outer_distribution_linear(scheme: AssociationScheme, code: BinaryLinearCode) -> OuterDistribution:
    """Coset-reduced B for a binary linear code.

    Translation by a codeword permutes C, so the row of x depends only on
    the coset x + C; one representative per coset suffices.
    """
    words = code.codewords()
    reps = code.coset_representatives()
    rows = _count_rows(scheme, reps, words)
    return OuterDistribution(rows, reps, np.full(reps.size, words.size, dtype=np.int64),
                             words.size, False)


def rows_for(scheme: AssociationScheme, C, xs) -> np.ndarray:
    """B rows for selected vertices only."""
    C = _validated_subset(scheme, C)
    return _count_rows(scheme, np.asarray(xs, dtype=np.int64).reshape(-1), C)


@dataclass
class RegularityVerdict:
    completely_regular: bool
    covering_radius: int
    quotient_table: list | None
    witness: tuple[int, int] | None

    def as_dict(self) -> dict:
        return {"completely_regular": self.completely_regular, "rho": self.covering_radius,
                "quotient_table": self.quotient_table,
                "witness": list(self.witness) if self.witness else None}


def is_completely_regular(B: OuterDistribution) -> RegularityVerdict:
    """True iff rows with equal distance to C coincide.

    On failure the witness is the lexicographically first pair (reference
    vertex of the distance class, first disagreeing vertex) in vertex order.
    """
    order = np.argsort(B.vertices, kind="stable")
    rows = B.rows[order]
    verts = B.vertices[order]
    dist = np.argmax(rows > 0, axis=1)
    rho = int(dist.max())
    classes, first = np.unique(dist, return_index=True)
    ref_index = np.empty(rho + 1, dtype=np.int64)
    ref_index[classes] = first
    refs = rows[ref_index[dist]]
    bad = np.any(rows != refs, axis=1)
    if bad.any():
        k = int(np.argmax(bad))
        return RegularityVerdict(False, rho, None, (int(verts[ref_index[dist[k]]]), int(verts[k])))
    table = [rows[ref_index[i]].tolist() for i in range(rho + 1)]
    return RegularityVerdict(True, rho, table, None)


@dataclass
class MainthVerdict:
    w: int
    holds: bool
    failure: tuple[int, int] | None  # (vertex, relation index) breaking the hypothesis
    completely_regular: bool | None = None

    def as_dict(self) -> dict:
        return {"w": self.w, "holds": self.holds,
                "failure": list(self.failure) if self.failure else None,
                "completely_regular": self.completely_regular}


def check_mainth_hypothesis(scheme: AssociationScheme, B: OuterDistribution,
                            analysis: SubsetAnalysis, w: int) -> MainthVerdict:
    """Check ``B[x][j] = 0`` for ``w+i+1 <= j <= w+s*`` whenever d(x, C) = i <= s*.

    When the hypothesis holds the implied complete regularity is confirmed
    against :func:`is_completely_regular`; a disagreement raises
    :class:`TheoremViolation`.
    """
    s = analysis.dual_degree
    d = scheme.d
    if not 0 <= w <= d - s:
        raise PreconditionFailed(f"w = {w} outside 0..d - s* = {d - s}")
    if analysis.inner[w] <= 0:
        raise PreconditionFailed(f"a_{w} = 0")
    dist = B.distances
    j = np.arange(d + 1)
    lo = w + dist + 1
    forbidden = (j[None, :] >= lo[:, None]) & (j[None, :] <= w + s) & (dist[:, None] <= s)
    broken = forbidden & (B.rows > 0)
    if broken.any():
        r, c = np.argwhere(broken)[0]
        return MainthVerdict(w, False, (int(B.vertices[r]), int(c)))
    cr = is_completely_regular(B)
    if not cr.completely_regular:
        raise TheoremViolation(
            f"hypothesis holds at w = {w} but C is not completely regular (witness {cr.witness})")
    return MainthVerdict(w, True, None, True)


@dataclass
class IntPrediction:
    interval: ZeroInterval
    s_star: int
    predicted: bool
    hypothesis: MainthVerdict | None = None

    def as_dict(self) -> dict:
        return {"interval": self.interval.as_dict(), "s_star": self.s_star,
                "predicted_completely_regular": self.predicted,
                "hypothesis": self.hypothesis.as_dict() if self.hypothesis else None}


def check_int_condition(scheme: AssociationScheme, B: OuterDistribution,
                        analysis: SubsetAnalysis) -> list[IntPrediction]:
    """Every zero interval with ``2 s* - 1 <= t`` predicts complete regularity.

    Each prediction is validated through the main-theorem hypothesis at the
    interval's w (which the corollary's argument guarantees) and then
    against the direct regularity check.
    """
    s = analysis.dual_degree
    out = []
    for iv in analysis.zero_intervals:
        if 2 * s - 1 > iv.t:
            out.append(IntPrediction(iv, s, False))
            continue
        verdict = check_mainth_hypothesis(scheme, B, analysis, iv.w)
        if not verdict.holds:
            raise TheoremViolation(
                f"interval (w={iv.w}, t={iv.t}) meets 2s*-1 <= t but the main hypothesis fails "
                f"at {verdict.failure}")
        out.append(IntPrediction(iv, s, True, verdict))
    return out


@dataclass
class RankCertificate:
    base_point: int
    interval: ZeroInterval
    w_x: int
    t_x: int
    row_terminal: bool
    num_vectors: int
    vectors_rank: int
    rank_B: int
    s_star: int

    @property
    def independent(self) -> bool:
        return self.vectors_rank == self.num_vectors

    @property
    def holds(self) -> bool:
        return (self.independent and self.num_vectors <= self.rank_B == self.s_star + 1
                and self.interval.t <= self.t_x)

    def as_dict(self) -> dict:
        return {"base_point": self.base_point, "interval": self.interval.as_dict(),
                "w_x": self.w_x, "t_x": self.t_x, "row_terminal": self.row_terminal,
                "num_vectors": self.num_vectors, "vectors_rank": self.vectors_rank,
                "rank_B": self.rank_B, "s_star": self.s_star, "holds": self.holds}


def rank_certificate(scheme: AssociationScheme, C, B: OuterDistribution,
                     analysis: SubsetAnalysis, x: int) -> list[RankCertificate]:
    """Linear-independence certificates behind the bound t <= 2 s*.

    For each zero interval of ``a`` the zero run of row x containing it is
    ``{w_x+1 .. w_x+t_x}``.  The vectors chi, A_1 chi, ..., A_1^L chi with
    ``L = floor(t_x/2)`` (or ``L = t_x`` when the run reaches d) must be
    independent and their number cannot exceed rank(B) = s* + 1.
    """
    C = _validated_subset(scheme, C)
    if x not in set(C.tolist()):
        raise BasePointNotInSubset(f"base point {x} is not in C")
    if scheme.num_vertices > MAX_CERTIFICATE_VERTICES:
        raise SchemeTooLarge(f"|X| = {scheme.num_vertices} too large for explicit A_1 powers")
    d = scheme.d
    row = rows_for(scheme, C, [x])[0]
    rank_b = B.rank
    chi = np.zeros(scheme.num_vertices, dtype=np.int64)
    chi[C] = 1
    powers = [chi]
    certs = []
    for iv in analysis.zero_intervals:
        w_x = max(j for j in range(iv.w + 1) if row[j] != 0)
        right = next((j for j in range(iv.w + iv.t + 1, d + 1) if row[j] != 0), None)
        terminal = right is None
        t_x = (d - w_x) if terminal else right - w_x - 1
        L = t_x if terminal else t_x // 2
        while len(powers) <= L:
            powers.append(scheme.adjacency_apply(1, powers[-1]))
        vec_rank = integer_rank(np.array(powers[:L + 1]))
        certs.append(RankCertificate(x, iv, w_x, t_x, terminal, L + 1, vec_rank, rank_b,
                                     analysis.dual_degree))
    return certs


@dataclass
class RegularityReport:
    rho: int
    verdict: RegularityVerdict
    rank_B: int
    hypothesis_checks: list = field(default_factory=list)
    int_predictions: list = field(default_factory=list)
    rank_certificates: list = field(default_factory=list)
