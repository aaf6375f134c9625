import random
from fractions import Fraction

import pytest

from delsarte.codes import (
    extended_hamming_code,
    format_words,
    golay23,
    golay24,
    hamming_code,
    pair_code,
    parse_words,
    read_code_file,
    weight_distribution,
)
from delsarte.distributions import (
    analyze_subset,
    check_bounds,
    dual_distribution,
    inner_distribution,
    transform_back,
    zero_intervals,
)
from delsarte.errors import DuplicateVertex, EmptySubset, InputError, VertexOutOfRange
from delsarte.named import HammingScheme, JohnsonScheme

from conftest import random_subset

GOLAY23_A = [1, 0, 0, 0, 0, 0, 0, 253, 506, 0, 0, 1288, 1288, 0, 0, 506, 253, 0, 0, 0, 0, 0, 0, 1]


def test_golay23_distributions():
    H = HammingScheme(23)
    C = golay23().codewords()
    a = inner_distribution(H, C)
    assert a == GOLAY23_A
    b = dual_distribution(H, a, len(C))
    expect = [0] * 24
    expect[0], expect[8], expect[12], expect[16] = 1, 506, 1288, 253
    assert b == [4096 * x for x in expect]


def test_golay24_b_is_4096_a():
    H = HammingScheme(24)
    an = analyze_subset(H, golay24().codewords())
    assert an.dual == [4096 * x for x in an.inner]
    assert [(iv.w, iv.t) for iv in an.zero_intervals] == [(0, 7), (8, 3), (12, 3), (16, 7)]
    assert an.dual_degree == 4


def test_trivial_subsets():
    H = HammingScheme(5)
    a = inner_distribution(H, [7])
    assert a == [1, 0, 0, 0, 0, 0]
    an = analyze_subset(H, list(range(32)))
    assert an.dual == [32, 0, 0, 0, 0, 0]
    assert an.dual_degree == 0


def test_subset_errors():
    H = HammingScheme(4)
    with pytest.raises(EmptySubset):
        inner_distribution(H, [])
    with pytest.raises(DuplicateVertex):
        inner_distribution(H, [1, 2, 1])
    with pytest.raises(VertexOutOfRange):
        inner_distribution(H, [0, 16])


def test_zero_interval_extraction():
    ivs = zero_intervals([Fraction(x) for x in GOLAY23_A])
    assert [(iv.w, iv.t, iv.terminal) for iv in ivs] == [
        (0, 6, False), (8, 2, False), (12, 2, False), (16, 6, False)]
    assert zero_intervals([1, 2, 3, 4]) == []
    a = inner_distribution(HammingScheme(6), pair_code(3).codewords())
    assert a == [1, 1, 0, 0, 0, 1, 1]
    assert [(iv.w, iv.t) for iv in zero_intervals(a)] == [(1, 3)]
    term = zero_intervals([1, 0, 2, 0, 0])
    assert [(iv.w, iv.t, iv.terminal) for iv in term] == [(0, 1, False), (2, 2, True)]


def test_bounds_on_golay():
    an = analyze_subset(HammingScheme(23), golay23().codewords())
    v = [b for b in an.bound_verdicts if b.kind == "zero" and b.interval.w == 16][0]
    assert v.interval.t == 6 and v.bound == 6 and v.gap == 0 and v.satisfied


@pytest.mark.parametrize("code", [hamming_code(3), extended_hamming_code(3), golay23(), golay24(),
                                  pair_code(4)])
def test_macwilliams_bridge(code):
    H = HammingScheme(code.n)
    an = analyze_subset(H, code.codewords())
    dual = inner_distribution(H, code.dual().codewords())
    assert [Fraction(b, len(code)) for b in an.dual] == dual
    assert weight_distribution(code.dual().codewords(), code.n) == dual


def test_transform_involution(small_schemes):
    rng = random.Random(3)
    for S in small_schemes:
        for _ in range(10):
            an = analyze_subset(S, random_subset(S, rng))
            assert transform_back(S, an.dual) == an.inner
            assert an.dual[0] == an.subset_size
            assert sum(an.dual) == S.num_vertices


def test_bound_sweep_hamming_and_johnson():
    """1000 random subsets: no zero interval exceeds its bound."""
    rng = random.Random(2024)
    schemes = [HammingScheme(8), JohnsonScheme(7, 3)]
    for count in range(1000):
        S = schemes[count % 2]
        an = analyze_subset(S, random_subset(S, rng, 2, 32))
        verdicts = check_bounds(an, strict=False)
        assert all(v.satisfied for v in verdicts)


def test_code_file_round_trip(tmp_path):
    H = HammingScheme(7)
    words = hamming_code(3).codewords()
    path = tmp_path / "hamming.txt"
    path.write_text("# [7,4] code\n\n" + format_words(words, 7), encoding="utf-8")
    assert sorted(read_code_file(path, H)) == sorted(words.tolist())
    with pytest.raises(InputError):
        parse_words("0102\n", 4, 2)
    with pytest.raises(InputError):
        parse_words("010\n", 4, 2)


def test_johnson_subset_file(tmp_path):
    J = JohnsonScheme(6, 3)
    path = tmp_path / "sets.txt"
    path.write_text("1 2 3\n4 5 6\n", encoding="utf-8")
    C = read_code_file(path, J)
    assert inner_distribution(J, C) == [1, 0, 0, 1]
    path.write_text("1 2 2\n", encoding="utf-8")
    with pytest.raises(InputError):
        read_code_file(path, J)
