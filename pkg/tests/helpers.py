"""Random samples shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from fqops.bases import MIXED
from fqops.fqop import A1, A2, VECTORIAL, FQOperation, evaluate_expression

# Expressions vanishing on every Clifford system, tagged by Clifford type
# (bit 0 for Q1, bit 1 for Q2).
VANISH = ((A1 * A1 + 1, 0), (A2 * A2 + 1, 0), (A1 * A2 + A2 * A1, 3))
MONOS = ((None, 0), (A1, 1), (A2, 2), (A1 * A2, 3), (A2 * A1, 3))


def _times(x, y):
    if x is None:
        return y
    if y is None:
        return x
    return x * y


def random_rational(rng: random.Random, span=3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice((1, 2, 3)))


def random_cc_expr(rng: random.Random, terms=2):
    """A pair (A1 + ..., A2 + ...) that reduces to (Q1, Q2) on Clifford systems."""
    out = []
    for base, tag in ((A1, 1), (A2, 2)):
        e = base
        for _ in range(terms):
            v, tv = rng.choice(VANISH)
            x, tx = rng.choice(MONOS)
            want = tag ^ tv ^ tx
            y = [m for m, t in MONOS if t == want]
            e = e + _times(_times(x, v), rng.choice(y)) * random_rational(rng)
        out.append(e)
    return tuple(out)


def random_cc_operation(rng: random.Random, order: int, basis: str = MIXED) -> FQOperation:
    return evaluate_expression(random_cc_expr(rng), VECTORIAL, order, basis)


def random_operation(rng: random.Random, kind: str, order: int, basis: str, density=0.5) -> FQOperation:
    """Arbitrary rational coefficient tables (not tied to any property)."""
    from fqops.fqop import COMPONENTS
    from fqops.invariance import words

    comps = {}
    for s in COMPONENTS[kind]:
        t = {(): Fraction(1)}
        for r in range(1, order + 1):
            for w in words(range(1, 9), r):
                if rng.random() < density:
                    t[w] = random_rational(rng)
        comps[s] = t
    return FQOperation(kind, order, basis, comps)
