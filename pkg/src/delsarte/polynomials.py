"""Orthogonal polynomials of polynomial schemes and (dual) annihilators.

Polynomials are lists of coefficients, constant term first.  In exact mode
the coefficients are ``Fraction``; the same code runs on floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .distributions import SubsetAnalysis
from .errors import NotAnnihilator, NotPolynomialScheme, ParameterOutOfRange, RepeatedRoot
from .scheme import AssociationScheme

# -- tiny univariate helpers ------------------------------------------------


def trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [0]


def add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def scale(p: list, c) -> list:
    return trim([c * x for x in p])


def mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def evaluate(p: list, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def degree(p: list) -> int:
    p = trim(p)
    return len(p) - 1 if p != [0] else -1


def _num(scheme, x):
    return Fraction(x) if scheme.exact else float(x)


# -- orthogonal polynomial systems -----------------------------------------

@dataclass(frozen=True)
class OrthoPolySystem:
    """v_0..v_d with v_k(theta_i) equal to column k of P (or of Q when dual)."""

    dual: bool
    polys: tuple
    grid: tuple  # theta_0..theta_d

    @property
    def d(self) -> int:
        return len(self.polys) - 1

    def values(self, k: int) -> list:
        return [evaluate(self.polys[k], t) for t in self.grid]


def _recurrence_table(scheme: AssociationScheme, dual: bool):
    T = scheme.krein if dual else scheme.intersection_numbers
    d = scheme.d
    ident = tuple(range(d + 1))
    order = scheme.q_ordering if dual else scheme.p_ordering
    if order != ident:
        side = "Q" if dual else "P"
        raise NotPolynomialScheme(f"natural ordering of {scheme.name} is not {side}-polynomial")
    return T


def drg_ortho_polys(scheme: AssociationScheme, dual: bool = False) -> OrthoPolySystem:
    """Build v_k (or v_k*) from the three-term recurrence

    ``x v_k = T[1][k][k-1] v_{k-1} + T[1][k][k] v_k + T[1][k][k+1] v_{k+1}``

    with T the intersection (resp. Krein) numbers, then check that the
    evaluation grid reproduces the eigenmatrix column by column.
    """
    T = _recurrence_table(scheme, dual)
    d = scheme.d
    one = _num(scheme, 1)
    polys = [[one]]
    if d >= 1:
        c = _num(scheme, T[1][0][1])
        polys.append(trim([-_num(scheme, T[1][0][0]) / c, one / c]))
    for k in range(1, d):
        nxt = add(mul([-_num(scheme, T[1][k][k]), one], polys[k]),
                  scale(polys[k - 1], -_num(scheme, T[1][k][k - 1])))
        polys.append(scale(nxt, one / _num(scheme, T[1][k][k + 1])))
    M = scheme.Q if dual else scheme.P
    grid = tuple(M[i][1] for i in range(d + 1))
    system = OrthoPolySystem(dual, tuple(polys), grid)
    for k in range(d + 1):
        vals = system.values(k)
        for i in range(d + 1):
            if not scheme.is_zero(vals[i] - M[i][k], float(abs(M[i][k])) + 1):
                raise NotPolynomialScheme(
                    f"v_{k}(theta_{i}) = {vals[i]} disagrees with eigenmatrix entry {M[i][k]}")
    return system


def expand(system: OrthoPolySystem, poly: list) -> list:
    """Coefficients f with poly = sum_k f_k v_k (as polynomials, deg <= d)."""
    poly = trim(poly)
    deg = degree(poly)
    if deg > system.d:
        raise ParameterOutOfRange(f"degree {deg} exceeds d = {system.d}")
    f = [0] * (system.d + 1)
    rest = list(poly)
    for k in range(deg, -1, -1):
        if k >= len(rest):
            continue
        lead = system.polys[k][k]
        c = rest[k] / lead
        f[k] = c
        if c != 0:
            rest = add(rest, scale(system.polys[k], -c))
            rest = rest + [0] * max(0, k + 1 - len(rest))
    return f


def expand_on_grid(scheme: AssociationScheme, values, dual: bool = False) -> list:
    """Coefficients f with sum_k f_k v_k(theta_i) = values[i] for every i.

    ``v_k(theta_i) = P[i][k]`` and ``P^{-1} = Q / |X|`` (swap for the dual
    system), so no elimination is needed.
    """
    d = scheme.d
    inv = scheme.P if dual else scheme.Q
    n = scheme.num_vertices
    out = []
    for k in range(d + 1):
        s = sum(inv[k][i] * values[i] for i in range(d + 1))
        out.append(Fraction(s) / n if scheme.exact else s / n)
    return out


# -- annihilators ----------------------------------------------------------

@dataclass(frozen=True)
class AnnihilatorPoly:
    """A polynomial vanishing on chosen eigenvalues, with its basis expansion."""

    roots: tuple[int, ...]  # eigenspace indices
    coeffs: list
    expansion: list
    dual: bool

    def __call__(self, x):
        return evaluate(self.coeffs, x)


def annihilator_from_roots(scheme: AssociationScheme, roots, dual: bool = False,
                           system: OrthoPolySystem | None = None) -> AnnihilatorPoly:
    """F(x) = prod_{i in roots} (x - theta_i) / (theta_0 - theta_i), so F(theta_0) = 1.

    ``dual=False`` uses the eigenvalues theta_i = P[i][1] (a dual annihilator
    for the P-side identity); ``dual=True`` uses theta_i* = Q[i][1].
    """
    roots = tuple(roots)
    if len(set(roots)) != len(roots):
        raise RepeatedRoot(f"repeated root index in {roots}")
    d = scheme.d
    if any(r < 1 or r > d for r in roots):
        raise ParameterOutOfRange(f"root indices must lie in 1..{d}")
    system = system or drg_ortho_polys(scheme, dual)
    grid = system.grid
    one = _num(scheme, 1)
    F = [one]
    for r in roots:
        den = _num(scheme, grid[0] - grid[r])
        F = mul(F, [-_num(scheme, grid[r]) / den, one / den])
    return AnnihilatorPoly(roots, F, expand(system, F), dual)


def annihilator_from_poly(scheme: AssociationScheme, coeffs, dual: bool = False,
                          system: OrthoPolySystem | None = None) -> AnnihilatorPoly:
    system = system or drg_ortho_polys(scheme, dual)
    coeffs = trim([_num(scheme, c) for c in coeffs])
    roots = tuple(i for i, t in enumerate(system.grid)
                  if scheme.is_zero(evaluate(coeffs, t), 1.0))
    if degree(coeffs) <= scheme.d:
        f = expand(system, coeffs)
    else:
        f = expand_on_grid(scheme, [evaluate(coeffs, t) for t in system.grid], dual)
    return AnnihilatorPoly(roots, coeffs, f, dual)


def _check_vanishing(scheme, F: AnnihilatorPoly, grid, index_set, what):
    for i in index_set:
        val = F(grid[i])
        if not scheme.is_zero(val, 1.0):
            raise NotAnnihilator(f"F(theta{what}_{i}) = {val} != 0 for {i} in the {what or 'dual '}degree set")


def verify_pcar(scheme: AssociationScheme, analysis: SubsetAnalysis, F: AnnihilatorPoly) -> object:
    """Residual F(theta_0)|C|/|X| - sum_k f_k a_k (zero for a dual annihilator)."""
    grid = scheme.theta()
    _check_vanishing(scheme, F, grid, analysis.dual_degree_set, "")
    lhs = F(grid[0]) * analysis.subset_size
    lhs = Fraction(lhs) / scheme.num_vertices if scheme.exact else lhs / scheme.num_vertices
    return lhs - sum(f * a for f, a in zip(F.expansion, analysis.inner))


def verify_qcar(scheme: AssociationScheme, analysis: SubsetAnalysis, F: AnnihilatorPoly) -> object:
    """Residual F(theta*_0) - sum_k f_k b_k (zero for an annihilator)."""
    grid = scheme.dual_theta()
    _check_vanishing(scheme, F, grid, analysis.degree_set, "*")
    return F(grid[0]) - sum(f * b for f, b in zip(F.expansion, analysis.dual))


@dataclass(frozen=True)
class GConstruction:
    """The auxiliary G = v_{w+s*+1} F from the polynomial bound argument."""

    w: int
    m: int  # w + s* + 1
    from_grid: list
    from_intersection: list
    residual: object

    @property
    def support_ok(self) -> bool:
        return all(g == 0 for g in self.from_intersection[: self.w + 1])


def g_construction(scheme: AssociationScheme, analysis: SubsetAnalysis, w: int,
                   system: OrthoPolySystem | None = None) -> GConstruction:
    """Expand G on the grid two ways and apply the P-side identity to it."""
    system = system or drg_ortho_polys(scheme)
    s = analysis.dual_degree
    m = w + s + 1
    d = scheme.d
    if m > d:
        raise ParameterOutOfRange(f"w + s* + 1 = {m} exceeds d = {d}")
    F = annihilator_from_roots(scheme, analysis.dual_degree_set, system=system)
    vm = system.values(m)
    grid_vals = [vm[i] * F(t) for i, t in enumerate(system.grid)]
    g_grid = expand_on_grid(scheme, grid_vals)
    p = scheme.intersection_numbers
    g_int = [sum(F.expansion[j] * p[m][j][k] for j in range(s + 1)) for k in range(d + 1)]
    lhs = grid_vals[0] * analysis.subset_size
    lhs = Fraction(lhs) / scheme.num_vertices if scheme.exact else lhs / scheme.num_vertices
    residual = lhs - sum(g * a for g, a in zip(g_int, analysis.inner))
    return GConstruction(w, m, g_grid, g_int, residual)


def linearization_table(scheme: AssociationScheme, dual: bool = False,
                        system: OrthoPolySystem | None = None):
    """Grid expansion of v_i v_j for all i, j; equals p[i][j][.] (or q[i][j][.])."""
    system = system or drg_ortho_polys(scheme, dual)
    d = scheme.d
    vals = [system.values(k) for k in range(d + 1)]
    out = [[None] * (d + 1) for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(d + 1):
            prod = [vals[i][r] * vals[j][r] for r in range(d + 1)]
            out[i][j] = expand_on_grid(scheme, prod, dual)
    return out
