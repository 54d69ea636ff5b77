"""Independent oracle: a concrete matrix model of the Clifford setting.

Q1, Q2 act on R^4 as left multiplication by the quaternions i, j.  A
perturbation is R_j = t M_j with M_j a rational 4x4 matrix, and all values
live in M_4(Q)[t]/(t^(N+1)), so a truncated expansion of order N must agree
exactly with a direct computation.  Coordinates are built from the
definitions (graded parts of R_j Q_j^-1 and the character matrix), never
from the engine's own algebra.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Sequence

import sympy

F = Fraction
DIM = 4


def mat(rows) -> List[List[Fraction]]:
    return [[F(x) for x in r] for r in rows]


def mzero():
    return [[F(0)] * DIM for _ in range(DIM)]


def meye(c=1):
    return [[F(c) if i == j else F(0) for j in range(DIM)] for i in range(DIM)]


def madd(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mscale(a, c):
    return [[x * c for x in r] for r in a]


def mmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(r, col)), F(0)) for col in bt] for r in a]


def minv(a):
    m = sympy.Matrix(a).inv()
    return [[F(int(x.p), int(x.q)) for x in m.row(i)] for i in range(DIM)]


# quaternion left multiplications on (1, i, j, k)
QI = mat([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
QJ = mat([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])


class TS:
    """Truncated series sum_k c_k t^k with matrix coefficients."""

    def __init__(self, coeffs: Sequence, n: int):
        self.n = n
        c = list(coeffs)[: n + 1]
        self.c = c + [mzero() for _ in range(n + 1 - len(c))]

    @classmethod
    def const(cls, m, n):
        return cls([m], n)

    def __add__(self, o):
        o = _ts(o, self.n)
        return TS([madd(a, b) for a, b in zip(self.c, o.c)], self.n)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, o):
        return self + (-_ts(o, self.n))

    def __rsub__(self, o):
        return _ts(o, self.n) - self

    def scale(self, c):
        return TS([mscale(a, F(c)) for a in self.c], self.n)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.scale(o)
        o = _ts(o, self.n)
        out = [mzero() for _ in range(self.n + 1)]
        for i, a in enumerate(self.c):
            if not any(any(r) for r in a):
                continue
            for j in range(self.n + 1 - i):
                b = o.c[j]
                if any(any(r) for r in b):
                    out[i + j] = madd(out[i + j], mmul(a, b))
        return TS(out, self.n)

    def __rmul__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.scale(o)
        return _ts(o, self.n) * self

    def __eq__(self, o):
        return self.c == _ts(o, self.n).c

    def is_zero(self):
        return all(not any(any(r) for r in a) for a in self.c)

    def inv(self):
        b0 = minv(self.c[0])
        out = [b0]
        for k in range(1, self.n + 1):
            acc = mzero()
            for i in range(1, k + 1):
                acc = madd(acc, mmul(self.c[i], out[k - i]))
            out.append(mscale(mmul(b0, acc), -1))
        return TS(out, self.n)


def _ts(x, n):
    if isinstance(x, TS):
        return x
    if isinstance(x, (int, Fraction)):
        return TS.const(meye(x), n)
    return TS.const(x, n)


class Model:
    """The base Clifford system and a perturbed pair at truncation order n."""

    def __init__(self, n: int, m1=None, m2=None, rng: random.Random = None):
        rng = rng or random.Random(0)
        self.n = n
        self.q1 = TS.const(QI, n)
        self.q2 = TS.const(QJ, n)
        self.q12 = self.q1 * self.q2
        m1 = m1 if m1 is not None else random_matrix(rng)
        m2 = m2 if m2 is not None else random_matrix(rng)
        self.r1 = TS([mzero(), m1], n)
        self.r2 = TS([mzero(), m2], n)
        self.a1 = self.q1 + self.r1
        self.a2 = self.q2 + self.r2

    def tail(self, s: int) -> TS:
        return {0: _ts(1, self.n), 1: self.q1, 2: self.q2, 12: self.q12}[s]


def random_matrix(rng: random.Random, lo=-3, hi=3):
    return [[F(rng.randint(lo, hi), rng.choice((1, 1, 2, 3))) for _ in range(DIM)] for _ in range(DIM)]


def graded(x: TS, q1: TS, q2: TS, i1: int, i2: int) -> TS:
    """x^{i1}_{Q1}{}^{i2}_{Q2} with X^e_Q = (X + (-1)^e Q^-1 X Q) / 2."""
    def part(y, q, e):
        return (y + (q.scale(-1) * y * q).scale((-1) ** e)).scale(F(1, 2))
    return part(part(x, q1, i1), q2, i2)


def split_coords(r1: TS, r2: TS, q1: TS, q2: TS) -> List[TS]:
    out = []
    for r, q in ((r1, q1), (r2, q2)):
        x = r * q.scale(-1)
        for i1, i2 in ((0, 0), (0, 1), (1, 0), (1, 1)):
            out.append(graded(x, q1, q2, i1, i2))
    return out


CHARAC = [
    [1, 1, -1, -1, -1, -1, 1, 1],
    [1, 1, -1, -1, 1, 1, -1, -1],
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, -1, -1, -1, -1],
    [1, -1, -1, 1, -1, 1, 1, -1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, -1, 1, -1, 1, -1, 1, -1],
    [1, -1, 1, -1, -1, 1, -1, 1],
]


def mixed_coords(r1: TS, r2: TS, q1: TS, q2: TS) -> List[TS]:
    """Mixed coordinates straight from the character matrix."""
    i1, i2 = q1.scale(-1), q2.scale(-1)
    twisted = [r1 * i1, i1 * r1, q2 * r1 * q1 * q2, q2 * q1 * r1 * q2,
               r2 * i2, i2 * r2, q1 * r2 * q2 * q1, q1 * q2 * r2 * q1]
    out = []
    for row in CHARAC:
        acc = _ts(0, r1.n)
        for c, x in zip(row, twisted):
            acc = acc + x.scale(F(c, 8))
        out.append(acc)
    return out


def circular_from_mixed(m: List[TS]) -> List[TS]:
    return [m[0], m[1], m[2], m[3] + m[4], m[3] - m[4], m[5], m[6], m[7]]


def character_product(i: int, j: int) -> int:
    """Index whose character row is the pointwise product of rows i and j."""
    prod = [a * b for a, b in zip(CHARAC[i - 1], CHARAC[j - 1])]
    return CHARAC.index(prod) + 1


def evaluate_series(table: Dict[tuple, object], coords: List[TS], n: int) -> TS:
    """sum_w c_w x_{w1} ... x_{wk} by a trie walk."""
    trie: Dict = {}
    for w, c in table.items():
        if len(w) > n or not c:
            continue
        node = trie
        for k in w:
            node = node.setdefault(k, {})
        node[None] = F(c)

    def walk(node) -> TS:
        acc = _ts(node.get(None, 0), n)
        for k, child in node.items():
            if k is not None:
                acc = acc + coords[k - 1] * walk(child)
        return acc

    return walk(trie)


def apply_op(op, model: Model, basis: str = "mixed") -> Dict[int, TS]:
    """Values f_s(coords) Q^[s] of an engine operation on the model pair."""
    if basis == "split":
        coords = split_coords(model.r1, model.r2, model.q1, model.q2)
    else:
        coords = mixed_coords(model.r1, model.r2, model.q1, model.q2)
        if basis == "circular":
            coords = circular_from_mixed(coords)
    op = op.to_basis(basis)
    return {s: evaluate_series(t, coords, model.n) * model.tail(s) for s, t in op.components.items()}


def apply_op_at(op, model: Model, a1: TS, a2: TS) -> Dict[int, TS]:
    """Same, for another pair near the base Clifford system of ``model``."""
    r1, r2 = a1 - model.q1, a2 - model.q2
    coords = mixed_coords(r1, r2, model.q1, model.q2)
    op = op.to_basis("mixed")
    return {s: evaluate_series(t, coords, model.n) * model.tail(s) for s, t in op.components.items()}


def evaluate_expr(e, a1: TS, a2: TS, q1: TS, q2: TS) -> TS:
    """Direct evaluation of an fqop expression tree on model matrices."""
    n = a1.n
    op = e.op
    if op == "A1":
        return a1
    if op == "A2":
        return a2
    if op == "Q1":
        return q1
    if op == "Q2":
        return q2
    if op == "const":
        return _ts(F(e.value), n)
    args = [evaluate_expr(x, a1, a2, q1, q2) for x in e.args]
    if op == "add":
        return args[0] + args[1]
    if op == "sub":
        return args[0] - args[1]
    if op == "mul":
        return args[0] * args[1]
    if op == "scale":
        return args[0].scale(e.value)
    if op == "inv":
        return args[0].inv()
    if op == "comm":
        return args[0] * args[1] - args[1] * args[0]
    raise ValueError(f"oracle does not evaluate {op!r}")


def is_clifford_pair(b1: TS, b2: TS) -> bool:
    return (b1 * b1 + 1).is_zero() and (b2 * b2 + 1).is_zero() and (b1 * b2 + b2 * b1).is_zero()


def apply_op_based(op, q1: TS, q2: TS, a1: TS, a2: TS) -> Dict[int, TS]:
    """Evaluate ``op`` with (q1, q2) as the base Clifford system."""
    coords = mixed_coords(a1 - q1, a2 - q2, q1, q2)
    op = op.to_basis("mixed")
    tails = {0: _ts(1, a1.n), 1: q1, 2: q2, 12: q1 * q2}
    return {s: evaluate_series(t, coords, a1.n) * tails[s] for s, t in op.components.items()}


def moved_base(model: Model, m) -> tuple:
    """(g Q1 g^-1, g Q2 g^-1) for g = 1 + t m."""
    g = TS([meye(), m], model.n)
    gi = g.inv()
    return g * model.q1 * gi, g * model.q2 * gi
