import random
from fractions import Fraction

import pytest

import oracle
from fqops.bases import CIRCULAR, MIXED
from fqops.fqop import KINDS, PSEUDOSCALAR, SCALAR, VECTORIAL, FQOperation
from fqops.invariance import (PropertySpec, check, check_all, extend_series, generate_constraints,
                              is_reduced_word, natural_extend, natural_reduce, parse_properties,
                              validate, words)
from fqops.library import NAMES, builtin
from fqops.linsolve import Poly, solve_layered
from helpers import random_operation, random_rational

N = 2


def random_natural(rng, kind, order=N):
    comps = {}
    for s in {SCALAR: (0,), VECTORIAL: (1, 2), PSEUDOSCALAR: (12,)}[kind]:
        t = {(): Fraction(1)}
        for r in range(1, order + 1):
            for w in words(range(1, 6), r):
                if rng.random() < 0.5:
                    t[w] = random_rational(rng)
        comps[s] = t
    return natural_extend(FQOperation(kind, order, CIRCULAR, comps), MIXED)


def oracle_natural(op, seed=0):
    rng = random.Random(seed)
    m = oracle.Model(op.order, rng=rng)
    b1, b2 = oracle.moved_base(m, oracle.random_matrix(rng))
    x = oracle.apply_op(op, m)
    y = oracle.apply_op_based(op, b1, b2, m.a1, m.a2)
    return all(x[s] == y[s] for s in x)


def oracle_rotation_invariant(op, seed=0):
    """Rotate the pair (and hence its base) by the rational rotation (3/5, 4/5)."""
    c, s = Fraction(3, 5), Fraction(4, 5)
    m = oracle.Model(op.order, rng=random.Random(seed))

    def rot(x1, x2):
        return x1.scale(c) + x2.scale(s), x2.scale(c) - x1.scale(s)

    b1, b2 = rot(m.q1, m.q2)
    a1, a2 = rot(m.a1, m.a2)
    x = oracle.apply_op(op, m)
    y = oracle.apply_op_based(op, b1, b2, a1, a2)
    if op.kind == VECTORIAL:
        return (y[1], y[2]) == rot(x[1], x[2])
    return all(x[k] == y[k] for k in x)


def test_parse_properties():
    specs = parse_properties("sC + Opp + O2 + Scaling(3, 1/2) + H(alpha=2) + DScaling(1, 0)")
    assert [s.tag for s in specs] == ["CC", "Opp", "O2", "Scaling", "Scaling", "DScaling"]
    assert specs[3].params == (3, Fraction(1, 2))
    assert specs[4].params == (3, 2)
    assert str(specs[3]) == "Scaling(3,1/2)"
    for bad in ("", "CC + ", "Frob", "CC(("):
        with pytest.raises(ValueError):
            parse_properties(bad)
    with pytest.raises(ValueError):
        validate(PropertySpec("Scaling", (3,)))


def test_reduced_words():
    assert is_reduced_word((1, 5, 3))
    assert not is_reduced_word((1, 6))
    assert len(list(words(range(1, 6), 3))) == 125


@pytest.mark.parametrize("kind", KINDS)
def test_natural_extend_reduce_round_trip(kind):
    rng = random.Random(kind)
    op = random_natural(rng, kind, 3)
    red = natural_reduce(op)
    assert natural_extend(red, MIXED) == op
    assert all(is_reduced_word(w) for t in red.components.values() for w in t)


def test_extend_series_keeps_reduced_part():
    rng = random.Random(1)
    red = {w: random_rational(rng) for r in range(3) for w in words(range(1, 6), r)}
    full = extend_series(red, 1, 2)
    assert all(full.get(w, 0) == c for w, c in red.items())


@pytest.mark.parametrize("kind", KINDS)
def test_naturality_agrees_with_base_change(kind):
    rng = random.Random(f"nat{kind}")
    op = random_natural(rng, kind)
    assert check(op, PropertySpec("Nat")).holds
    assert oracle_natural(op, 1)
    bad = random_operation(rng, kind, N, MIXED, density=0.3)
    assert not check(bad, PropertySpec("Nat")).holds
    assert not oracle_natural(bad, 2)


@pytest.mark.parametrize("name", NAMES)
def test_builtins_are_natural(name):
    op = builtin(name, N, MIXED)
    assert check(op, PropertySpec("Nat")).holds
    assert oracle_natural(op, 3)


@pytest.mark.parametrize("kind", KINDS)
def test_rotation_invariance_agrees_with_oracle(kind):
    res = solve_layered(parse_properties("O2"), kind, N)
    rng = random.Random(f"o2{kind}")
    sub = {v: Poly.const(random_rational(rng)) for v in res.levels}
    good = natural_extend(res.operation.map_coeffs(lambda c: Poly.lift(c).subs(sub).const_value()), MIXED)
    assert check(good, PropertySpec("O2")).holds
    assert oracle_rotation_invariant(good)
    bad = random_natural(rng, kind)
    assert not check(bad, PropertySpec("O2")).holds
    assert not oracle_rotation_invariant(bad)


def test_builtin_verdicts():
    osy = builtin("OSy", 3, MIXED)
    got = check_all(osy, parse_properties("CC + Nat + O2 + CP + Idm"))
    assert all(r.holds for r in got.values()), got
    rep = check(builtin("OfSy", 2, MIXED), PropertySpec("CP"))
    assert not rep.holds and rep.order is not None
    assert "violated at order" in rep.detail
    assert check(builtin("AxisL", 2, MIXED), PropertySpec("Liv")).holds
    assert check(builtin("OafSy", 2, MIXED), PropertySpec("Antiv")).holds
    assert check(builtin("OfSy", 2, MIXED), PropertySpec("Biv")).holds
    assert not check(builtin("Id", 2, MIXED), PropertySpec("Antiv")).holds


def test_generate_constraints_are_satisfied_by_osy():
    osy = builtin("OSy", 2, MIXED)
    for spec in parse_properties("CC + Nat + Sigma2 + O2"):
        for cr in generate_constraints(spec, VECTORIAL, MIXED, 2, known=osy):
            lhs = sum(c * osy.coeff(s, w) for (s, w), c in cr.coeffs.items())
            assert lhs == cr.rhs, cr.label


def test_generate_constraints_rejects_unknown_kind():
    with pytest.raises(ValueError):
        generate_constraints(PropertySpec("Nat"), "spinor", MIXED, 1)
