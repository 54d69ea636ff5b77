import os
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fqops import golden
from fqops.fqop import VECTORIAL
from fqops.invariance import parse_properties
from fqops.linsolve import (FiberTable, Poly, Row, eliminate, fiber_dimensions, matrix_rank,
                            rank_and_kernel, solve_layered, solve_unique)

SYMS = sympy.symbols("t0:4")


def to_sympy(p: Poly):
    e = sympy.Integer(0)
    for m, c in p.t.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for i in m:
            term *= SYMS[i]
        e += term
    return sympy.expand(e)


polys = st.dictionaries(
    st.lists(st.integers(0, 3), max_size=3).map(lambda m: tuple(sorted(m))),
    st.fractions(min_value=-5, max_value=5, max_denominator=4),
    max_size=4,
).map(lambda t: Poly({m: Fraction(c) for m, c in t.items() if c}))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_poly_arithmetic_matches_sympy(a, b, c):
    assert to_sympy(a + b) == sympy.expand(to_sympy(a) + to_sympy(b))
    assert to_sympy(a * b - c) == sympy.expand(to_sympy(a) * to_sympy(b) - to_sympy(c))
    sub = {0: b}
    assert to_sympy(a.subs(sub)) == sympy.expand(to_sympy(a).subs(SYMS[0], to_sympy(b)))


def test_poly_helpers():
    p = Poly.var(0) * 2 + Poly.var(1) * Poly.var(2) + 3
    assert p.degree() == 2 and not p.is_const() and p.variables() == {0, 1, 2}
    lin, rest, bad = p.split_linear({0, 1})
    assert lin == {0: 2} and rest == Poly.const(3) and bad == [(1, 2)]
    assert Poly.const(0) == 0 and not Poly.const(0)
    assert (p / 2).const_value() == Fraction(3, 2)


def random_matrix(rng, n, m, rank):
    left = [[Fraction(rng.randint(-3, 3)) for _ in range(rank)] for _ in range(n)]
    right = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(m)] for _ in range(rank)]
    return [[sum(left[i][k] * right[k][j] for k in range(rank)) for j in range(m)] for i in range(n)]


@pytest.mark.parametrize("seed", range(10))
def test_rank_and_kernel_against_sympy(seed):
    rng = random.Random(seed)
    n, m = rng.randint(3, 9), rng.randint(3, 9)
    a = random_matrix(rng, n, m, rng.randint(1, min(n, m)))
    want = sympy.Matrix(a).rank()
    assert matrix_rank(a) == want
    b = [Fraction(rng.randint(-4, 4)) for _ in range(n)]
    rows = [Row({j: v for j, v in enumerate(r) if v}, b[i]) for i, r in enumerate(a)]
    sol = rank_and_kernel(rows, range(m))
    assert sol.rank == want and len(sol.kernel) == m - want
    for vec in sol.kernel:
        assert all(sum(r[j] * vec.get(j, 0) for j in range(m)) == 0 for r in a)
    augmented = sympy.Matrix([list(r) + [b[i]] for i, r in enumerate(a)]).rank()
    assert sol.consistent == (augmented == want)
    if sol.consistent:
        x = sol.particular
        assert all(sum(r[j] * x.get(j, 0) for j in range(m)) == b[i] for i, r in enumerate(a))


def test_eliminate_order_key():
    rows = [Row({0: Fraction(1), 1: Fraction(1)})]
    assert list(eliminate(rows).pivots) == [0]
    assert list(eliminate(rows, order_key=lambda c: -c).pivots) == [1]


def test_inconsistent_properties_are_reported():
    t = fiber_dimensions(parse_properties("CC + Zero"), VECTORIAL, 2)
    assert t.inconsistent_at == 0
    assert "inconsistent r=0" in t.records()
    assert "inconsistent at order 0" in t.render()
    with pytest.raises(ArithmeticError):
        solve_unique(parse_properties("CC + Zero"), VECTORIAL, 1)
    with pytest.raises(ArithmeticError):
        solve_unique(parse_properties("CC"), VECTORIAL, 1)


def test_fiber_table_rendering():
    t = FiberTable([[0], [0, 0], [0, 0, 2]])
    assert t.records()[-1] == "d r=2 j=2 dim=2"
    assert t.entry(2, 2) == 2
    assert t.render().splitlines()[-1].split() == ["2", "|", "0", "0", "2"]


def test_layered_levels_match_table():
    res = solve_layered(parse_properties(golden.fiber_properties("i")), VECTORIAL, 3)
    for r in range(4):
        row = res.table.row(r)
        assert row == golden.FIBER_TABLES["i"][r]
    assert sorted(res.levels.values()) == [2] * 2 + [3] * 12


def test_unreduced_solve_agrees():
    # natural property sets give the same dimensions with or without the reduced space
    specs = parse_properties("Nat + CC + Opp + O2")
    a = solve_layered(specs, VECTORIAL, 2).table
    b = solve_layered(specs, VECTORIAL, 2, reduced=False).table
    assert a.rows == b.rows


@pytest.mark.skipif(os.environ.get("FQOPS_STRETCH", "1") == "0", reason="stretch tables disabled")
def test_fiber_table_iv_prime():
    t = fiber_dimensions(parse_properties(golden.fiber_properties("iv'")), VECTORIAL, 5)
    assert t.inconsistent_at is None
    assert tuple(t.row(r) for r in range(6)) == golden.FIBER_TABLES["iv'"]
