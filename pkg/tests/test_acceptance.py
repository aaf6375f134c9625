"""Acceptance criteria 1-11.

Each test prints one ``PASS``/``FAIL`` line with its runtime.  The lines are
repeated in the pytest terminal summary; ``python3 tests/test_acceptance.py``
runs the criteria without pytest.
"""
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from delsarte.codes import extended_hamming_code, golay23, golay24, hamming_code
from delsarte.distributions import analyze_subset
from delsarte.induced import (
    RestrictedIdempotents,
    check_qmainth_hypothesis,
    induce_scheme,
    q1_battery,
    resolve_trace_constant,
)
from delsarte.named import HammingScheme, JohnsonScheme
from delsarte.polynomials import annihilator_from_roots, verify_pcar, verify_qcar
from delsarte.regularity import check_int_condition, is_completely_regular, outer_distribution
from delsarte.reproduce import GOLAY23_A, GOLAY23_B, GOLAY23X2_A, GOLAY23X2_B, GOLAY24_A, GOLAY24_B
from delsarte.spherical import (
    cross_polytope,
    cube,
    design_check,
    gegenbauer,
    harmonic_dimension,
    icosahedron,
    linearization,
    moment_tolerance,
    simplex,
    spherical_analysis,
)
from delsarte.polynomials import evaluate

from conftest import random_linear_code, random_subset

RESULT_LINES: list[str] = []


@contextmanager
def criterion(num: int, label: str, limit: float | None = None, carried: float = 0.0):
    """Time the block and emit a PASS/FAIL line; ``carried`` adds time spent elsewhere."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start + carried
        in_time = limit is None or elapsed < limit
        budget = f" (limit {limit:g} s)" if limit else ""
        line = f"criterion {num:2d}: {'PASS' if ok and in_time else 'FAIL'}  {label}  [{elapsed:.2f} s{budget}]"
        RESULT_LINES.append(line)
        print(line)
    assert in_time, f"criterion {num} took {elapsed:.2f} s, limit {limit} s"


def _intervals(ivs):
    return [(iv.w, iv.t) for iv in ivs]


# 1-3: worked code examples ------------------------------------------------


def test_criterion_01_golay23():
    with criterion(1, "Golay [23,12,7] distributions, (16,6), S* = {8,12,16}, t = 2s*", 5):
        H = HammingScheme(23)
        an = analyze_subset(H, golay23().codewords())
        assert an.inner == GOLAY23_A
        assert an.dual == GOLAY23_B
        assert (16, 6) in _intervals(an.zero_intervals)
        assert an.dual_degree_set == (8, 12, 16) and an.dual_degree == 3
        assert 6 == 2 * an.dual_degree


def test_criterion_02_golay24():
    with criterion(2, "Golay [24,12,8] a = b/4096, (16,7), s* = 4, t = 2s*-1", 10):
        H = HammingScheme(24)
        an = analyze_subset(H, golay24().codewords())
        assert an.inner == GOLAY24_A and an.dual == GOLAY24_B
        assert an.inner == [Fraction(x, 4096) for x in an.dual]
        assert (16, 7) in _intervals(an.zero_intervals)
        assert an.dual_degree == 4 and 7 == 2 * an.dual_degree - 1


def test_criterion_03_golay_times_bit():
    with criterion(3, "Golay-23 x {0,1}: a, b exact, intervals (1,5) and (17,5), s* = 3"):
        H = HammingScheme(24)
        an = analyze_subset(H, golay23().times_bit().codewords())
        assert an.inner == GOLAY23X2_A and an.dual == GOLAY23X2_B
        found = _intervals(an.zero_intervals)
        assert (1, 5) in found and (17, 5) in found
        assert an.dual_degree == 3


# 4-5: complete regularity --------------------------------------------------


def _regularity_corpus(rng, count):
    schemes = [HammingScheme(n) for n in range(4, 13)] + [
        JohnsonScheme(8, 4), JohnsonScheme(10, 3), JohnsonScheme(12, 5), HammingScheme(5, 3),
        HammingScheme(4, 4), HammingScheme(7, 3)]
    for i in range(count):
        if i % 2:
            n = rng.randint(4, 12)
            yield HammingScheme(n), random_linear_code(n, rng.randint(1, n - 1), rng).codewords()
        else:
            S = rng.choice(schemes)
            yield S, random_subset(S, rng, 2, 40)


@pytest.fixture(scope="module")
def regularity_sweep():
    """Full outer distributions for the two Hamming codes plus 500 random subsets."""
    start = time.perf_counter()
    records = []
    named = [(HammingScheme(7), hamming_code(3).codewords()),
             (HammingScheme(8), extended_hamming_code(3).codewords())]
    rng = random.Random(4242)
    for S, C in named + list(_regularity_corpus(rng, 500)):
        assert S.num_vertices <= 4096
        an = analyze_subset(S, C)
        B = outer_distribution(S, C)
        preds = check_int_condition(S, B, an)  # raises TheoremViolation on a failed prediction
        cr = is_completely_regular(B).completely_regular
        B.rank  # computed here so the 60 s budget covers it
        records.append((an, B, preds, cr))
    return records, time.perf_counter() - start


def test_criterion_04_complete_regularity(regularity_sweep):
    records, spent = regularity_sweep
    with criterion(4, "Hamming codes CR; interval prediction on 500 random subsets", 60, spent):
        assert len(records) == 502
        for an, B, preds, cr in records[:2]:
            assert cr and any(p.predicted for p in preds)
        predicted = 0
        for an, B, preds, cr in records:
            for p in preds:
                if p.predicted:
                    predicted += 1
                    assert cr
        assert predicted >= 10


def test_criterion_05_rank(regularity_sweep):
    records, _ = regularity_sweep
    with criterion(5, "rank(B) = s* + 1 on every outer distribution of criterion 4"):
        for an, B, _, _ in records:
            assert B.rank == an.dual_degree + 1


# 6: characteristic identities ---------------------------------------------


def test_criterion_06_car_residuals():
    with criterion(6, "characteristic identity residuals exactly 0 on 200 pairs per side"):
        schemes = [HammingScheme(n) for n in range(3, 11)] + [JohnsonScheme(7, 3)]
        rng = random.Random(606)
        for dual in (False, True):
            for _ in range(200):
                S = rng.choice(schemes)
                an = analyze_subset(S, random_subset(S, rng, 2, 24))
                base = an.degree_set if dual else an.dual_degree_set
                extra = {r for r in range(1, S.d + 1) if rng.random() < 0.2}
                F = annihilator_from_roots(S, sorted(set(base) | extra), dual=dual)
                residual = verify_qcar(S, an, F) if dual else verify_pcar(S, an, F)
                assert residual == 0


# 7: induced schemes --------------------------------------------------------


def test_criterion_07_induced_schemes():
    with criterion(7, "induced Q-polynomial schemes: ext. Hamming dual (full), Golay-24 (sampled)",
                   120):
        H8 = HammingScheme(8)
        C = extended_hamming_code(3).dual().codewords()
        ind = induce_scheme(H8, C, w_star=4, full_verify=True)
        assert ind.hypothesis.holds and ind.verification == "full"
        assert ind.q_polynomial and ind.s == analyze_subset(H8, C).degree

        H24 = HammingScheme(24)
        G = golay24()
        C = G.dual().codewords()
        an = analyze_subset(H24, C)
        assert check_qmainth_hypothesis(RestrictedIdempotents(H24, C), an, 16).holds
        ind = induce_scheme(H24, C, analysis=an, w_star=16, triples=10**6, seed=7)
        assert ind.hypothesis.holds and ind.verification == "sampled"
        assert ind.triples_checked >= 10**6
        assert ind.q_polynomial and ind.s == an.degree == 4


# 8: equivalence battery ----------------------------------------------------


def test_criterion_08_q1_battery():
    with criterion(8, "five zero-window characterizations agree on 100 subsets each of J(5,2), H(6,2)"):
        rng = random.Random(808)
        for S in (JohnsonScheme(5, 2), HammingScheme(6)):
            for _ in range(100):
                bat = q1_battery(S, random_subset(S, rng, 1, 16), strict=False)
                assert bat.consistent, bat.disagreements()[:1]


# 9-10: spherical -----------------------------------------------------------


def test_criterion_09_spherical():
    with criterion(9, "spherical designs and t <= 2s on closed intervals", 5):
        octa = cross_polytope(3)
        assert design_check(octa, 0, 3) and not design_check(octa, 0, 4)
        assert design_check(simplex(3), 0, 2)
        ico = icosahedron()
        assert moment_tolerance(ico) == pytest.approx(1e-8 * 12)
        assert design_check(ico, 0, 5)
        corpus = [simplex(3), simplex(4), octa, cross_polytope(4), cube(3), cube(4), ico]
        closed = 0
        for X in corpus:
            rep = spherical_analysis(X, 12)
            for iv, ok in rep.bound_checks:
                if iv.closed:
                    closed += 1
                    assert ok and iv.t <= 2 * rep.s
        assert closed >= len(corpus)


def test_criterion_10_gegenbauer():
    with criterion(10, "Q_k(1) = h_k for k <= 20, d <= 10; linearization pattern for i, j <= 10, d <= 6"):
        for d in range(3, 11):
            for k in range(21):
                assert evaluate(gegenbauer(d, k), 1) == harmonic_dimension(d, k)
        for d in range(3, 7):
            for i in range(11):
                for j in range(11):
                    q = linearization(d, i, j)
                    assert len(q) <= i + j + 1
                    for k, c in enumerate(q):
                        allowed = abs(i - j) <= k <= i + j and (i + j - k) % 2 == 0
                        assert (c > 0) if allowed else (c == 0), (d, i, j, k, c)


# 11: trace identity normalization -----------------------------------------


def test_criterion_11_trace_constant():
    with criterion(11, "eigenbasis oracle pins c = 1/|X|^p; exact identity on 50 subsets"):
        J = JohnsonScheme(5, 2)
        rng = random.Random(1111)
        err = resolve_trace_constant(J, [random_subset(J, rng, 1, 10) for _ in range(12)])
        fits = [p for p, e in err.items() if e < 1e-9]
        assert len(fits) == 1 and all(e > 1e-3 for p, e in err.items() if p not in fits)
        power = fits[0]
        n = J.num_vertices
        q = J.krein
        for _ in range(50):
            C = random_subset(J, rng, 1, 10)
            an = analyze_subset(J, C)
            gram = RestrictedIdempotents(J, C).gram
            for i in range(J.d + 1):
                for j in range(J.d + 1):
                    pred = Fraction(len(C), n**power) * sum(q[i][j][k] * an.dual[k]
                                                            for k in range(J.d + 1))
                    assert gram[i][j] == pred


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
