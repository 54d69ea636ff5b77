import random
from fractions import Fraction

import pytest

import oracle
from fqops.bases import CIRCULAR, MIXED, Q12
from fqops.fqop import PSEUDOSCALAR, VECTORIAL
from fqops.library import NAMES, builtin, floating_series, formal_pol, reduced_builtin
from fqops.ncalgebra import AlgebraElement
from helpers import random_rational

N = 3


@pytest.fixture(scope="module")
def model():
    return oracle.Model(N, rng=random.Random(51))


def test_formal_pol():
    rng = random.Random(1)
    t = {((rng.randint(1, 8),) * rng.randint(1, 2), rng.choice((0, 1, 2, 3))): random_rational(rng)
         for _ in range(6)}
    x = AlgebraElement.cliff(Q12, MIXED, N) + AlgebraElement(t, MIXED, N)
    p = formal_pol(x)
    assert p * p == -1
    assert p * x == x * p
    assert formal_pol(p) == p
    with pytest.raises(ValueError):
        formal_pol(AlgebraElement.scalar(2, MIXED, 1))


def test_axis_c_is_a_skew_involution(model):
    op = builtin("AxisC", N, MIXED)
    assert op.kind == PSEUDOSCALAR
    v = oracle.apply_op(op, model)[12]
    assert (v * v + 1).is_zero()


def test_floating_system_on_matrices(model):
    op = builtin("FSy", 4, MIXED)
    m = oracle.Model(4, rng=random.Random(52))
    out = oracle.apply_op(op, m)
    b1, b2 = out[1], out[2]
    i2 = b2.inv()
    for y in (b1 * i2, i2 * b1):
        assert (y * y + 1).is_zero()
    # generically not a Clifford system
    assert not oracle.is_clifford_pair(b1, b2)


def test_floating_series_symmetry():
    f4, f5 = floating_series(3)
    assert f5 == f4.conj(1)
    assert f4.basis == CIRCULAR


def test_osy_is_a_clifford_system(model):
    out = oracle.apply_op(builtin("OSy", N, MIXED), model)
    assert oracle.is_clifford_pair(out[1], out[2])


@pytest.mark.parametrize("name", NAMES)
def test_reduced_data_extends_back(name):
    from fqops.invariance import natural_extend

    red = reduced_builtin(name, 2)
    assert natural_extend(red, MIXED) == builtin(name, 2, MIXED)


def test_one_and_id():
    assert builtin("One", 3).components == {0: {(): 1}}
    ident = builtin("Id", 2, MIXED)
    assert ident.kind == VECTORIAL
    assert all(len(w) <= 1 for t in ident.components.values() for w in t)


def test_builtin_errors():
    with pytest.raises(ValueError):
        builtin("Nope")
    with pytest.raises(ValueError):
        builtin("Id", -1)
