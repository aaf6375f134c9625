import random
from fractions import Fraction

import pytest

from delsarte.codes import extended_hamming_code, golay23
from delsarte.distributions import analyze_subset
from delsarte.errors import NotAnnihilator, NotPolynomialScheme, RepeatedRoot
from delsarte.named import HammingScheme, JohnsonScheme
from delsarte.polynomials import (
    annihilator_from_poly,
    annihilator_from_roots,
    drg_ortho_polys,
    g_construction,
    linearization_table,
    verify_pcar,
    verify_qcar,
)
from delsarte.scheme import verify_scheme

from conftest import petersen_relations, random_subset, rook_relations


def test_v0_and_grid_matches_eigenmatrix():
    for S in [HammingScheme(5), JohnsonScheme(8, 3)]:
        for dual in (False, True):
            system = drg_ortho_polys(S, dual)
            M = S.Q if dual else S.P
            assert system.polys[0] == [1]
            for k in range(S.d + 1):
                assert system.values(k) == [M[i][k] for i in range(S.d + 1)]


def test_petersen_polynomials():
    S = verify_scheme(petersen_relations())
    system = drg_ortho_polys(S)
    # x v_1 = 3 v_0 + 0 v_1 + 1 v_2 gives v_2 = x^2 - 3
    assert system.polys[2] == [Fraction(-3), Fraction(0), Fraction(1)]


def test_non_polynomial_scheme_rejected():
    S = verify_scheme(rook_relations(3, 4))
    with pytest.raises(NotPolynomialScheme):
        drg_ortho_polys(S)


def test_annihilator_basics():
    H = HammingScheme(4)
    F = annihilator_from_roots(H, [])
    assert F.coeffs == [1] and F.expansion[0] == Fraction(1, 1)
    full = annihilator_from_roots(H, range(1, 5))
    theta = H.theta()
    assert full(theta[0]) == 1 and all(full(t) == 0 for t in theta[1:])
    with pytest.raises(RepeatedRoot):
        annihilator_from_roots(H, [1, 1])


def test_golay23_cubic_annihilator():
    H = HammingScheme(23)
    an = analyze_subset(H, golay23().codewords())
    F = annihilator_from_roots(H, an.dual_degree_set)
    assert F(23) == 1
    assert F(23 - 16) == F(23 - 24) == F(23 - 32) == 0
    assert verify_pcar(H, an, F) == 0
    G = g_construction(H, an, 16)
    assert G.residual == 0
    assert G.from_grid == G.from_intersection
    assert G.support_ok


def test_constant_annihilator_identity():
    H = HammingScheme(6)
    an = analyze_subset(H, list(range(64)))  # C = X has empty dual degree set
    F = annihilator_from_roots(H, [])
    assert verify_pcar(H, an, F) == 0


def test_not_annihilator():
    H = HammingScheme(7)
    an = analyze_subset(H, extended_hamming_code(3).codewords()[:5].tolist())
    F = annihilator_from_roots(H, [1])
    with pytest.raises(NotAnnihilator):
        verify_pcar(H, an, F)


def test_qcar_on_dual_extended_hamming():
    H = HammingScheme(8)
    an = analyze_subset(H, extended_hamming_code(3).dual().codewords())
    F = annihilator_from_roots(H, an.degree_set, dual=True)
    assert verify_qcar(H, an, F) == 0


def _random_case(rng, schemes):
    S = rng.choice(schemes)
    an = analyze_subset(S, random_subset(S, rng, 2, 20))
    return S, an


def test_pcar_random_pairs():
    rng = random.Random(11)
    schemes = [HammingScheme(n) for n in range(3, 11)] + [JohnsonScheme(7, 3)]
    for _ in range(200):
        S, an = _random_case(rng, schemes)
        extra = {r for r in range(1, S.d + 1) if rng.random() < 0.2}
        F = annihilator_from_roots(S, sorted(set(an.dual_degree_set) | extra))
        assert verify_pcar(S, an, F) == 0


def test_qcar_random_pairs():
    rng = random.Random(12)
    schemes = [HammingScheme(n) for n in range(3, 11)] + [JohnsonScheme(7, 3)]
    for _ in range(200):
        S, an = _random_case(rng, schemes)
        extra = {r for r in range(1, S.d + 1) if rng.random() < 0.2}
        roots = sorted((set(an.degree_set) - {0}) | extra)
        F = annihilator_from_roots(S, roots, dual=True)
        assert verify_qcar(S, an, F) == 0


def test_annihilator_from_monomials():
    H = HammingScheme(3)
    an = analyze_subset(H, [0, 7])
    # S* = {2}; (x + 1)/4 vanishes on theta_2 = -1 and takes 1 at theta_0 = 3
    F = annihilator_from_poly(H, [Fraction(1, 4), Fraction(1, 4)])
    assert F.roots == (2,)
    assert verify_pcar(H, an, F) == 0


@pytest.mark.parametrize("S", [HammingScheme(6), JohnsonScheme(8, 4), HammingScheme(4, 3)])
def test_linearization_is_intersection_numbers(S):
    p, q = S.intersection_numbers, S.krein
    lin = linearization_table(S)
    dlin = linearization_table(S, dual=True)
    for i in range(S.d + 1):
        for j in range(S.d + 1):
            assert lin[i][j] == [p[i][j][k] for k in range(S.d + 1)]
            assert dlin[i][j] == [q[i][j][k] for k in range(S.d + 1)]


def test_g_support_on_random_subsets():
    rng = random.Random(5)
    H = HammingScheme(9)
    seen = 0
    while seen < 30:
        an = analyze_subset(H, random_subset(H, rng, 2, 6))
        for iv in an.zero_intervals:
            if not iv.terminal and iv.w + an.dual_degree + 1 <= H.d:
                G = g_construction(H, an, iv.w)
                assert G.residual == 0 and G.from_grid == G.from_intersection
                assert G.support_ok
                seen += 1
