import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from fqops.bases import BASES, CIRCULAR, MIXED, Q1, Q2, transform_element
from fqops.fqop import (A1, A2, EQ1, EQ2, KINDS, PSEUDOSCALAR, SCALAR, VECTORIAL, FQOperation, comm,
                        deserialize, evaluate_expression, evaluate_on, extract_coordinates,
                        first_differential, generic_pair, identity_differential,
                        kind_of_components, linear_operation, serialize)
from fqops.library import NAMES, builtin
from fqops.ncalgebra import AlgebraElement
from helpers import random_operation

N = 3

EXPRESSIONS = [
    (SCALAR, A1 * A2 * A1.inv() * A2.inv()),
    (SCALAR, (A1 * A1 + A2 * A2) * Fraction(-1, 2)),
    (PSEUDOSCALAR, A1 * A2 - comm(A1, A2) * Fraction(1, 3)),
    (PSEUDOSCALAR, (A1 * A2 - A2 * A1) * Fraction(1, 2)),
    (VECTORIAL, (A1, A2)),
    (VECTORIAL, (A2 * A1 * A2 * -1, A1 * A2 * A1 * -1)),
    (VECTORIAL, (A1 * EQ2 * A1.inv() * EQ2.inv() * A1, A2 + (A2 * A2 + 1) * EQ2)),
]


@pytest.fixture(scope="module")
def model():
    return oracle.Model(N, rng=random.Random(31))


def test_component_kinds():
    assert kind_of_components([0]) == SCALAR
    assert kind_of_components([1, 2]) == VECTORIAL
    assert kind_of_components([12]) == PSEUDOSCALAR
    with pytest.raises(ValueError):
        kind_of_components([0, 12])


@pytest.mark.parametrize("kind,expr", EXPRESSIONS)
@pytest.mark.parametrize("basis", BASES)
def test_expansion_matches_direct_evaluation(kind, expr, basis, model):
    op = evaluate_expression(expr, kind, N, basis)
    exprs = expr if isinstance(expr, tuple) else (expr,)
    got = oracle.apply_op(op, model, basis)
    for s, e in zip(sorted(got), exprs):
        assert got[s] == oracle.evaluate_expr(e, model.a1, model.a2, model.q1, model.q2)


@pytest.mark.parametrize("name", NAMES)
def test_builtin_serialization_round_trip(name):
    for order in range(4):
        for basis in (MIXED, CIRCULAR):
            op = builtin(name, order, basis)
            assert deserialize(serialize(op)) == op


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(KINDS), st.sampled_from(BASES))
def test_random_serialization_round_trip(seed, kind, basis):
    op = random_operation(random.Random(seed), kind, 2, basis, density=0.2)
    assert deserialize(serialize(op)) == op


def test_deserialize_rejects_bad_records():
    text = serialize(builtin("Id", 1, MIXED))
    with pytest.raises(ValueError):
        deserialize(text + "s=1 w=9 num=1 den=1\n")
    with pytest.raises(ValueError):
        deserialize(text + "s=1 w=1 num=x den=1\n")


@pytest.mark.parametrize("basis", BASES)
def test_basis_round_trip(basis):
    op = random_operation(random.Random(basis), VECTORIAL, 2, MIXED, density=0.3)
    assert op.to_basis(basis).to_basis(MIXED) == op


def test_coordinates_of_generic_pair():
    a1, a2 = generic_pair(2, MIXED)
    r1 = a1 - AlgebraElement.cliff(Q1, MIXED, 2)
    r2 = a2 - AlgebraElement.cliff(Q2, MIXED, 2)
    for basis in BASES:
        xs = extract_coordinates(r1, r2, basis)
        ref = [AlgebraElement.var(k, basis, 2) for k in range(1, 9)]
        assert [transform_element(x, basis) for x in xs] == ref


def test_evaluate_on_generic_pair_is_identity():
    for name in ("Id", "OSy", "PseudoDet"):
        op = builtin(name, 2, MIXED)
        pair = generic_pair(2, MIXED)
        vals = evaluate_on(op, pair)
        for s, v in vals.items():
            assert v == op.element(s)


def test_first_differential_of_id_and_linear_operations():
    assert first_differential(builtin("Id", 2, MIXED)) == identity_differential()
    rng = random.Random(8)
    L = tuple(tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(2)) for _ in range(2))
              for _ in range(4))
    assert first_differential(linear_operation(L, 2)) == L


def test_truncate_and_arithmetic():
    op = builtin("OSy", 3, MIXED)
    assert op.truncate(1) == builtin("OSy", 1, MIXED)
    assert (op + op) - op == op
    assert op.scale(2) == op + op


def test_constructor_validation():
    with pytest.raises(ValueError):
        FQOperation(VECTORIAL, 1, MIXED, {0: {(): 1}})
    with pytest.raises(ValueError):
        evaluate_expression((A1, A2), SCALAR, 1)


def test_osy_differential_from_displayed_rows():
    from fqops import golden

    comps = {s: {(): 1, **{(i + 1,): c for i, c in
                           enumerate(golden.EXPANSIONS[("OSy", s, "circular")][1])}}
             for s in (1, 2)}
    shown = FQOperation(VECTORIAL, 1, CIRCULAR, comps)
    d = first_differential(shown)
    assert d == first_differential(builtin("OSy", 3, MIXED))
    h = Fraction(1, 2)
    assert d[3] == ((h, h), (h, h))
    assert d[0] == ((0, 0), (0, 0))
