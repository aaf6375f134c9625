"""Reproduction harness for the worked code examples.

Six codes are checked on the P-side (zero intervals of ``a``, dual degree
s*, complete regularity) and their six duals on the Q-side (dual zero
intervals of ``b``, degree s, induced Q-polynomial scheme).  Every recorded
expectation is compared against the computation; any difference raises
:class:`ReproductionMismatch`.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .codes import BinaryLinearCode, extended_hamming_code, golay23, golay24, hamming_code, pair_code
from .distributions import analyze_subset
from .errors import ReproductionMismatch
from .induced import DEFAULT_TRIPLES, RestrictedIdempotents, check_qmainth_hypothesis, induce_scheme
from .named import HammingScheme
from .regularity import check_int_condition, is_completely_regular, outer_distribution_linear

FULL_VERIFY_LIMIT = 256


def _spread(n: int, entries: dict) -> list[int]:
    v = [0] * (n + 1)
    for i, x in entries.items():
        v[i] = x
    return v


# Displayed vectors (b given as multiplier times a sparse vector).
GOLAY23_A = [1, 0, 0, 0, 0, 0, 0, 253, 506, 0, 0, 1288, 1288, 0, 0, 506, 253,
             0, 0, 0, 0, 0, 0, 1]
GOLAY23_B = [4096 * x for x in _spread(23, {0: 1, 8: 506, 12: 1288, 16: 253})]
GOLAY23X2_A = [1, 1, 0, 0, 0, 0, 0, 253, 759, 506, 0, 1288, 2576, 1288, 0, 506, 759, 253,
               0, 0, 0, 0, 0, 1, 1]
GOLAY23X2_B = [8192 * x for x in _spread(24, {0: 1, 8: 506, 12: 1288, 16: 253})]
GOLAY24_A = _spread(24, {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1})
GOLAY24_B = [4096 * x for x in GOLAY24_A]


@dataclass(frozen=True)
class CodeExample:
    key: str
    title: str
    build: object  # () -> BinaryLinearCode
    intervals: tuple  # (w, t) pairs expected among the zero intervals of a
    s_star: int
    a: list | None = None
    b: list | None = None


def _examples(m: int = 3, n: int = 3) -> list[CodeExample]:
    top = 2**m - 4
    return [
        CodeExample("pair", f"{{0,1}} x {{0..0, 1..1}} in H({2 * n},2)", lambda: pair_code(n),
                    ((1, 2 * n - 3),), n - 1),
        CodeExample("hamming", f"[{2**m - 1},{2**m - m - 1},3] Hamming code",
                    lambda: hamming_code(m), ((top, 2),), 1),
        CodeExample("ext-hamming", f"[{2**m},{2**m - m - 1},4] extended Hamming code",
                    lambda: extended_hamming_code(m), ((top, 3),), 2),
        CodeExample("golay23", "[23,12,7] Golay code", golay23, ((16, 6),), 3,
                    GOLAY23_A, GOLAY23_B),
        CodeExample("golay23x2", "[23,12,7] Golay code times {0,1}",
                    lambda: golay23().times_bit(), ((1, 5), (17, 5)), 3,
                    GOLAY23X2_A, GOLAY23X2_B),
        CodeExample("golay24", "[24,12,8] Golay code", golay24, ((16, 7),), 4,
                    GOLAY24_A, GOLAY24_B),
    ]


EXAMPLE_KEYS = tuple(f"{side}-{e.key}" for side in "pq" for e in _examples())
ALIASES = {"golay23": ["p-golay23"], "golay24": ["p-golay24"],
           "all": list(EXAMPLE_KEYS),
           "P": [k for k in EXAMPLE_KEYS if k.startswith("p-")],
           "Q": [k for k in EXAMPLE_KEYS if k.startswith("q-")]}


def resolve(which) -> list[str]:
    out = []
    for w in which:
        keys = ALIASES.get(w, [w] if w in EXAMPLE_KEYS else None)
        if keys is None:
            raise KeyError(w)
        out.extend(k for k in keys if k not in out)
    return out


@dataclass
class ExampleResult:
    key: str
    title: str
    n: int
    size: int
    a: list
    b: list
    intervals: list
    degree: int  # s* on the P-side, s on the Q-side
    relation: list  # per expected interval, e.g. "t = 2s*-1"
    conclusion: dict
    checks: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"key": self.key, "title": self.title, "n": self.n, "size": self.size,
                "a": self.a, "b": self.b,
                "intervals": [iv.as_dict() for iv in self.intervals],
                "degree": self.degree, "relation": self.relation,
                "conclusion": self.conclusion, "checks": self.checks}


def _relation(t: int, s: int, star: str) -> str:
    diff = t - 2 * s
    return f"t{star} = 2s{'' if star else '*'}" + (f"{diff:+d}" if diff else "")


def _expect(checks: dict, name: str, ok: bool, detail: str):
    checks[name] = bool(ok)
    if not ok:
        raise ReproductionMismatch(f"{name}: {detail}")


def _intervals_match(found, expected) -> bool:
    return {(iv.w, iv.t) for iv in found} >= set(expected)


def run_p_example(ex: CodeExample) -> ExampleResult:
    start = time.perf_counter()
    code: BinaryLinearCode = ex.build()
    H = HammingScheme(code.n)
    an = analyze_subset(H, code.codewords())
    checks: dict = {}
    if ex.a is not None:
        _expect(checks, "a", an.inner == [Fraction(x) for x in ex.a], f"a = {an.inner}")
        _expect(checks, "b", an.dual == [Fraction(x) for x in ex.b], f"b = {an.dual}")
    _expect(checks, "intervals", _intervals_match(an.zero_intervals, ex.intervals),
            f"zero intervals {[(iv.w, iv.t) for iv in an.zero_intervals]}")
    _expect(checks, "s_star", an.dual_degree == ex.s_star, f"s* = {an.dual_degree}")
    _expect(checks, "bounds", all(v.satisfied for v in an.bound_verdicts), "bound violated")
    B = outer_distribution_linear(H, code)
    predictions = {(p.interval.w, p.interval.t): p for p in check_int_condition(H, B, an)}
    verdict = is_completely_regular(B)
    for w, t in ex.intervals:
        _expect(checks, f"predicts_cr_{w}_{t}", predictions[(w, t)].predicted,
                f"2s*-1 <= t fails at ({w},{t})")
    _expect(checks, "completely_regular", verdict.completely_regular, f"witness {verdict.witness}")
    _expect(checks, "rank_B", B.rank == an.dual_degree + 1, f"rank(B) = {B.rank}")
    return ExampleResult(
        f"p-{ex.key}", ex.title, code.n, len(code), an.inner, an.dual, an.zero_intervals,
        an.dual_degree, [_relation(t, an.dual_degree, "") for _, t in ex.intervals],
        {"completely_regular": True, "rho": verdict.covering_radius,
         "quotient_table": verdict.quotient_table, "rank_B": B.rank},
        checks, time.perf_counter() - start)


def run_q_example(ex: CodeExample, *, full_verify: bool | None = None,
                  triples: int = DEFAULT_TRIPLES, seed: int = 0) -> ExampleResult:
    start = time.perf_counter()
    code = ex.build()
    dual = code.dual()
    H = HammingScheme(code.n)
    an = analyze_subset(H, dual.codewords())
    checks: dict = {}
    size = len(code)
    if ex.a is not None:
        # the dual code's a is b/|C| and its b is |X| a / |C|
        _expect(checks, "a", an.inner == [Fraction(x, size) for x in ex.b], f"a = {an.inner}")
        _expect(checks, "b", an.dual == [Fraction(x * H.num_vertices, size) for x in ex.a],
                f"b = {an.dual}")
    _expect(checks, "dual_intervals", _intervals_match(an.dual_zero_intervals, ex.intervals),
            f"dual zero intervals {[(iv.w, iv.t) for iv in an.dual_zero_intervals]}")
    _expect(checks, "s", an.degree == ex.s_star, f"s = {an.degree}")
    _expect(checks, "bounds", all(v.satisfied for v in an.bound_verdicts), "bound violated")
    for w, t in ex.intervals:
        _expect(checks, f"predicts_q_{w}_{t}", 2 * an.degree - 1 <= t, f"2s-1 > t at ({w},{t})")
    if full_verify is None:
        full_verify = len(dual) <= FULL_VERIFY_LIMIT
    w0 = ex.intervals[0][0]
    F = RestrictedIdempotents(H, dual.codewords())
    hypotheses = []
    for w, _ in ex.intervals:
        h = check_qmainth_hypothesis(F, an, w)
        hypotheses.append(h)
        _expect(checks, f"hypothesis_{w}", h.holds, f"F_k F_l != 0 at {h.failure}")
    ind = induce_scheme(H, dual.codewords(), analysis=an, w_star=w0, full_verify=full_verify,
                        triples=triples, seed=seed, check_hypothesis=False)
    _expect(checks, "classes", ind.s == an.degree, f"induced scheme has {ind.s} classes")
    _expect(checks, "q_polynomial", ind.q_polynomial, "no Q-ordering")
    conclusion = ind.as_dict()
    conclusion["hypothesis"] = [h.as_dict() for h in hypotheses]
    return ExampleResult(
        f"q-{ex.key}", f"dual of the {ex.title}", code.n, len(dual), an.inner, an.dual,
        an.dual_zero_intervals, an.degree,
        [_relation(t, an.degree, "*") for _, t in ex.intervals], conclusion, checks,
        time.perf_counter() - start)


def reproduce(which=("all",), *, m: int = 3, n: int = 3, full_verify: bool | None = None,
              triples: int = DEFAULT_TRIPLES, seed: int = 0) -> list[ExampleResult]:
    table = {e.key: e for e in _examples(m, n)}
    out = []
    for key in resolve(which):
        side, name = key.split("-", 1)
        if side == "p":
            out.append(run_p_example(table[name]))
        else:
            out.append(run_q_example(table[name], full_verify=full_verify,
                                     triples=triples, seed=seed))
    return out
