"""Built-in operations.

One, Id and PseudoDet are expanded from closed forms.  OSy comes from the
naturality recursion with leading coefficient 1 and vanishing free data.
OfSy, OafSy, AxisL and AxisR are the unique solutions of their variance
classifications.  AxisC applies a formal polar part to the mean of the two
axes, and FSy places the floating-system series on the circular {1,2,3}
coordinates.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .bases import CIRCULAR, MIXED, Q1, Q2, Q12, Word
from .fqop import (
    A1, A2, PSEUDOSCALAR, SCALAR, VECTORIAL, FQOperation, comm, constant_op,
    evaluate_expression, from_elements,
)
from .ncalgebra import AlgebraElement, mul, neumann_inverse

NAMES = ("One", "Id", "PseudoDet", "OSy", "OfSy", "OafSy", "AxisL", "AxisR", "AxisC", "FSy")

_lock = threading.Lock()


def builtin(name: str, order: int = 2, basis: str = MIXED) -> FQOperation:
    if name not in NAMES:
        raise ValueError(f"unknown builtin {name!r}; expected one of {', '.join(NAMES)}")
    if order < 0:
        raise ValueError("order must be non-negative")
    with _lock:
        op = _build(name, order)
    return op.to_basis(basis)


@lru_cache(maxsize=None)
def _build(name: str, order: int) -> FQOperation:
    if name == "One":
        return constant_op(SCALAR, order, MIXED)
    if name == "Id":
        return evaluate_expression((A1, A2), VECTORIAL, order, MIXED)
    if name == "PseudoDet":
        return evaluate_expression(comm(A1, A2) * Fraction(1, 2), PSEUDOSCALAR, order, MIXED)
    return _natural(name, order)


@lru_cache(maxsize=None)
def reduced_builtin(name: str, order: int) -> FQOperation:
    """Free {1..5}-data in the circular basis of a natural builtin."""
    from .invariance import is_reduced_word

    if name in ("OSy", "OfSy", "OafSy", "AxisL", "AxisR", "AxisC", "FSy"):
        return _reduced(name, order)
    op = _build(name, order).to_basis(CIRCULAR)
    return FQOperation(op.kind, order, CIRCULAR, {
        s: {w: c for w, c in t.items() if is_reduced_word(w)} for s, t in op.components.items()})


def _natural(name: str, order: int) -> FQOperation:
    from .invariance import natural_extend

    return natural_extend(_reduced(name, order), MIXED)


CLASSIFICATION = {
    "OfSy": (VECTORIAL, "Biv + O2 + CC + Coeff(1, 4, 0)"),
    "OafSy": (VECTORIAL, "Antiv + O2 + CC"),
    "AxisL": (PSEUDOSCALAR, "Liv + O2 + CC"),
    "AxisR": (PSEUDOSCALAR, "Riv + O2 + CC"),
}


@lru_cache(maxsize=None)
def _reduced(name: str, order: int) -> FQOperation:
    if name == "OSy":
        return FQOperation(VECTORIAL, order, CIRCULAR, {1: {(): 1}, 2: {(): 1}})
    if name in CLASSIFICATION:
        from .invariance import parse_properties
        from .linsolve import solve_unique

        kind, text = CLASSIFICATION[name]
        return solve_unique(parse_properties(text), kind, order)
    if name == "AxisC":
        return axis_c(order)
    if name == "FSy":
        return floating_system(order)
    raise ValueError(f"unknown builtin {name!r}")


# -- formal polar part ----------------------------------------------------

def _binom_half(k: int) -> Fraction:
    # coefficient of y^k in (1 + y)^(-1/2)
    c = Fraction(1)
    for j in range(k):
        c *= (Fraction(-1, 2) - j) / (j + 1)
    return c


def formal_pol(x: AlgebraElement) -> AlgebraElement:
    """x (-x^2)^(-1/2) for x with -x^2 = 1 + (higher order)."""
    y = -(x * x) - 1
    if any(not w for w, _ in y.terms):
        raise ValueError("formal pol needs -x^2 = 1 at order 0")
    acc = AlgebraElement.scalar(1, x.basis, x.order)
    power = acc
    for k in range(1, x.order + 1):
        power = power * y
        if not power:
            break
        acc = acc + power.scale(_binom_half(k))
    return x * acc


def axis_c(order: int) -> FQOperation:
    left = reduced_builtin("AxisL", order).element(12)
    right = reduced_builtin("AxisR", order).element(12)
    return from_elements({12: formal_pol((left + right).scale(Fraction(1, 2)))}, PSEUDOSCALAR)


# -- floating Clifford systems -------------------------------------------

@lru_cache(maxsize=None)
def floating_series(order: int) -> Tuple[AlgebraElement, AlgebraElement]:
    """The series F4, F5 in circular r1, r2, r3 with r4 = F4, r5 = F5.

    Solved order by order from (A1 A2^-1)^2 = -1 and (A2^-1 A1)^2 = -1 with
    A1 = (1 + r1 + r2 + r3 + X) Q1 and A2 = (1 - r1 + r2 + r3 - X) Q2.
    Words of odd character drop out of those equations; they are fixed
    by requiring X to commute with Q1Q2 like r4 does.
    """
    from .invariance import words
    from .linsolve import Poly, Row, eliminate

    basis = CIRCULAR
    known: Dict[Word, Fraction] = {}
    for r in range(2, order + 1):
        ids = {w: i for i, w in enumerate(words((1, 2, 3), r))}
        terms = {(w, 0): c for w, c in known.items()}
        for w, i in ids.items():
            terms[(w, 0)] = Poly.var(i)
        x = AlgebraElement(terms, basis, r)
        # X stands in for r4, so it must be fixed by Q1Q2-conjugation
        res = _floating_residuals(x, r) + [c for c in (x - x.conj(Q12)).terms.values()]
        rows = []
        top = set(ids.values())
        for v in res:
            lin, rest, bad = Poly.lift(v).split_linear(top)
            if bad:
                raise ArithmeticError("floating system equations are not layered")
            if lin or rest:
                rows.append(Row(lin, -rest))
        ech = eliminate(rows)
        if ech.conditions:
            raise ArithmeticError(f"floating system equations inconsistent at order {r}")
        if len(ech.pivots) != len(ids):
            raise ArithmeticError(f"floating system series not unique at order {r}")
        for w, i in ids.items():
            c = Poly.lift(ech.pivots[i].rhs).const_value()
            if c:
                known[w] = c
    f4 = AlgebraElement({(w, 0): c for w, c in known.items()}, basis, order)
    return f4, f4.conj(Q1)


def floating_pair(x: AlgebraElement, order: int):
    basis = CIRCULAR
    v = {k: AlgebraElement.var(k, basis, order) for k in (1, 2, 3)}
    one = AlgebraElement.scalar(1, basis, order)
    x = x.with_order(order)
    a1 = (one + v[1] + v[2] + v[3] + x) * AlgebraElement.cliff(Q1, basis, order)
    a2 = (one - v[1] + v[2] + v[3] - x) * AlgebraElement.cliff(Q2, basis, order)
    return a1, a2


def _floating_residuals(x: AlgebraElement, r: int) -> List:
    a1, a2 = floating_pair(x, r)
    inv2 = neumann_inverse(a2)
    one = AlgebraElement.scalar(1, CIRCULAR, r)
    out = []
    for y in (a1 * inv2, inv2 * a1):
        z = mul(y, y, r)
        out.extend(c for (w, g), c in z.terms.items())
    return out


def floating_system(order: int) -> FQOperation:
    """Reduced circular data of FSy: the floating pair on r1, r2, r3."""
    f4 = floating_series(max(order, 0))[0].with_order(order) if order >= 2 else \
        AlgebraElement.zero(CIRCULAR, order)
    a1, a2 = floating_pair(f4, order)
    return from_elements({1: a1, 2: a2}, VECTORIAL)
