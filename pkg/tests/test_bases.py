import random
from fractions import Fraction

import pytest

import oracle
from fqops.bases import (BASES, CIRCULAR, MIXED, Q1, Q2, Q12, SPLIT, apply_derivation,
                         conjugate_word, delta0_eigenvalue, derivation_rule, dump_tables,
                         transform_element, transform_series)
from fqops.ncalgebra import AlgebraElement
from helpers import random_rational

QS = {Q1: "q1", Q2: "q2", Q12: "q12"}


@pytest.fixture(scope="module")
def model():
    return oracle.Model(1, rng=random.Random(21))


@pytest.mark.parametrize("basis", BASES)
def test_letter_conjugation_against_matrices(basis, model):
    """g x_k g^-1 = +-x_k' for every coordinate x_k computed from its definition."""
    args = (model.r1, model.r2, model.q1, model.q2)
    if basis == SPLIT:
        xs = oracle.split_coords(*args)
    else:
        xs = oracle.mixed_coords(*args)
        if basis == CIRCULAR:
            xs = oracle.circular_from_mixed(xs)
    for g, name in QS.items():
        q = getattr(model, name)
        for k in range(1, 9):
            s, (j,) = conjugate_word(g, (k,), basis)
            assert q * xs[k - 1] * q.scale(-1) == xs[j - 1].scale(s), (basis, g, k)


def test_conjugate_word_is_letterwise():
    s1, w1 = conjugate_word(Q1, (1, 7), MIXED)
    sa, a = conjugate_word(Q1, (1,), MIXED)
    sb, b = conjugate_word(Q1, (7,), MIXED)
    assert (s1, w1) == (sa * sb, a + b)


@pytest.mark.parametrize("frm,to", [(a, b) for a in BASES for b in BASES])
def test_transform_element_round_trip(frm, to):
    rng = random.Random(f"{frm}{to}")
    t = {}
    for _ in range(8):
        w = tuple(rng.randint(1, 8) for _ in range(rng.randint(0, 3)))
        t[(w, rng.choice((0, Q1, Q2, Q12)))] = random_rational(rng)
    x = AlgebraElement(t, frm, 3)
    y = transform_element(x, to)
    assert transform_element(y, frm) == x


def test_transform_series_agrees_with_elements():
    rng = random.Random(2)
    series = {tuple(rng.randint(1, 8) for _ in range(rng.randint(0, 3))): random_rational(rng)
              for _ in range(20)}
    series = {w: c for w, c in series.items() if c}
    for frm in BASES:
        for to in BASES:
            got = transform_series(series, frm, to)
            x = AlgebraElement({(w, 0): c for w, c in series.items()}, frm, 3)
            want = transform_element(x, to)
            assert {w: c for w, c in got.items() if c} == want.clifford_part(0)


def test_derivation_rules():
    assert derivation_rule(0)[0] == CIRCULAR
    basis, rule = derivation_rule(5)
    assert basis == MIXED
    assert rule[5][-1] == (Fraction(1), (), 0)
    with pytest.raises(ValueError):
        derivation_rule(9)
    with pytest.raises(ValueError):
        apply_derivation(1, AlgebraElement.var(1, SPLIT))


def test_derivation_is_leibniz():
    rng = random.Random(4)
    for i in (0, 2, 6):
        basis = derivation_rule(i)[0]
        for _ in range(10):
            a = AlgebraElement.word([rng.randint(1, 8) for _ in range(2)], basis, 4)
            b = AlgebraElement.word([rng.randint(1, 8) for _ in range(2)], basis, 4)
            assert apply_derivation(i, a * b) == apply_derivation(i, a) * b + a * apply_derivation(i, b)


def test_delta0_in_mixed_basis():
    # the mixed-basis images: r1 -> r1 Q12, r4 -> r5 Q12, r5 -> r4 Q12, r8 -> r8 Q12, others -> 0
    want = {1: 1, 4: 5, 5: 4, 8: 8}
    for k in range(1, 9):
        x = transform_element(AlgebraElement.var(k, MIXED), CIRCULAR)
        got = transform_element(apply_derivation(0, x), MIXED)
        if k in want:
            assert got == AlgebraElement.word((want[k],), MIXED, 1, g=Q12), k
        else:
            assert not got, k


def test_delta0_eigenvalue_empty_word():
    assert delta0_eigenvalue(()) == 0


def test_dump_tables_lists_every_rule():
    lines = dump_tables().splitlines()
    assert len(lines) == 3 * 3 * 8 + 8
    assert "mixed Q1 r7 -> -r8" in lines
