"""FQ operations: coefficient tables, expression evaluation, coordinates.

An operation of kind scalar, vectorial or pseudoscalar is stored as one
words-only series per component label s in {0}, {1, 2} or {12}.  The value
of component s on a perturbed pair is ``f_s(r) * Q^[s]`` with tails
1, Q1, Q2, Q1Q2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .bases import (
    BASES, CIRCULAR, MIXED, ONE, Q1, Q2, Q12, SPLIT, Word,
    coord_matrix, transform_element, transform_series,
)
from .ncalgebra import (
    AlgebraElement, anticommutator, commutator, conj_project, grade_project,
    mul, neumann_inverse,
)

SCALAR = "scalar"
VECTORIAL = "vectorial"
PSEUDOSCALAR = "pseudoscalar"
KINDS = (SCALAR, VECTORIAL, PSEUDOSCALAR)

COMPONENTS = {SCALAR: (0,), VECTORIAL: (1, 2), PSEUDOSCALAR: (12,)}
TAIL = {0: ONE, 1: Q1, 2: Q2, 12: Q12}
GRADINGS = ((0, 0), (0, 1), (1, 0), (1, 1))


def sign_of(s: int) -> int:
    """The sign (-1)^[s]."""
    return -1 if s == 2 else 1


def kind_of_components(comps: Iterable[int]) -> str:
    comps = tuple(sorted(comps))
    for k, c in COMPONENTS.items():
        if c == comps:
            return k
    raise ValueError(f"no kind with components {comps}")


class FQOperation:
    """Coefficient tables of an operation truncated at ``order``."""

    __slots__ = ("kind", "order", "basis", "components")

    def __init__(self, kind: str, order: int, basis: str,
                 components: Dict[int, Dict[Word, object]]):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.kind = kind
        self.order = order
        self.basis = basis
        comps = {}
        for s in COMPONENTS[kind]:
            table = components.get(s, {})
            comps[s] = {
                tuple(w): (Fraction(c) if isinstance(c, int) else c)
                for w, c in table.items() if c and len(w) <= order
            }
        extra = set(components) - set(COMPONENTS[kind])
        if extra:
            raise ValueError(f"components {sorted(extra)} do not belong to kind {kind}")
        self.components = comps

    def __repr__(self) -> str:
        n = sum(len(t) for t in self.components.values())
        return f"FQOperation({self.kind}, order={self.order}, basis={self.basis}, terms={n})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FQOperation):
            return NotImplemented
        if (self.kind, self.basis) != (other.kind, other.basis):
            return False
        return self.components == other.components

    def coeff(self, s: int, w: Sequence[int]):
        return self.components[s].get(tuple(w), 0)

    def layer(self, s: int, r: int) -> Dict[Word, object]:
        return {w: c for w, c in self.components[s].items() if len(w) == r}

    def element(self, s: int, order: Optional[int] = None) -> AlgebraElement:
        """f_s(r) Q^[s] as an algebra element in the operation's basis."""
        g = TAIL[s]
        order = self.order if order is None else order
        return AlgebraElement({(w, g): c for w, c in self.components[s].items()},
                              self.basis, order)

    def series(self, s: int, order: Optional[int] = None) -> AlgebraElement:
        """f_s(r) without its tail."""
        order = self.order if order is None else order
        return AlgebraElement({(w, ONE): c for w, c in self.components[s].items()},
                              self.basis, order)

    def to_basis(self, basis: str) -> "FQOperation":
        if basis == self.basis:
            return self
        return FQOperation(self.kind, self.order, basis, {
            s: transform_series(t, self.basis, basis) for s, t in self.components.items()
        })

    def truncate(self, order: int) -> "FQOperation":
        return FQOperation(self.kind, min(order, self.order), self.basis, self.components)

    def with_order(self, order: int) -> "FQOperation":
        return FQOperation(self.kind, order, self.basis, self.components)

    def map_coeffs(self, fn: Callable) -> "FQOperation":
        return FQOperation(self.kind, self.order, self.basis, {
            s: {w: fn(c) for w, c in t.items()} for s, t in self.components.items()
        })

    def __add__(self, other: "FQOperation") -> "FQOperation":
        other = other.to_basis(self.basis)
        if other.kind != self.kind:
            raise ValueError("kind mismatch")
        comps = {}
        for s in self.components:
            t = dict(self.components[s])
            for w, c in other.components[s].items():
                t[w] = t.get(w, 0) + c
            comps[s] = t
        return FQOperation(self.kind, min(self.order, other.order), self.basis, comps)

    def __sub__(self, other: "FQOperation") -> "FQOperation":
        return self + other.scale(-1)

    def scale(self, a) -> "FQOperation":
        return self.map_coeffs(lambda c: c * a)

    def is_zero(self) -> bool:
        return not any(self.components.values())


def from_elements(values: Dict[int, AlgebraElement], kind: str, basis: Optional[str] = None,
                  order: Optional[int] = None) -> FQOperation:
    """Read coefficient tables off component values f_s Q^[s]."""
    comps = {}
    for s in COMPONENTS[kind]:
        v = values[s]
        if basis is not None and v.basis != basis:
            v = transform_element(v, basis)
        g = TAIL[s]
        table = {}
        for (w, h), c in v.terms.items():
            if h != g:
                raise ValueError(
                    "expression does not satisfy the kind's sign-linear form "
                    f"(component {s} has a term with Clifford part {h})"
                )
            table[w] = c
        comps[s] = table
    any_v = next(iter(values.values()))
    return FQOperation(kind, any_v.order if order is None else order, any_v.basis if basis is None else basis, comps)


def constant_op(kind: str, order: int, basis: str = MIXED, value=1) -> FQOperation:
    """The operation returning (Q1, Q2), Q1Q2 or 1 times ``value``."""
    return FQOperation(kind, order, basis, {s: {(): value} for s in COMPONENTS[kind]})


# -- perturbed pairs ------------------------------------------------------

def generic_pair(order: int, basis: str = MIXED) -> Tuple[AlgebraElement, AlgebraElement]:
    """(A1, A2) = (Q1 + R1, Q2 + R2) with generic R written in ``basis``."""
    out = []
    for j, g in ((0, Q1), (1, Q2)):
        terms = {((4 * j + k,), g): 1 for k in range(1, 5)}
        terms[((), g)] = 1
        out.append(transform_element(AlgebraElement(terms, SPLIT, order), basis))
    return out[0], out[1]


def extract_coordinates(r1: AlgebraElement, r2: AlgebraElement, basis: str = SPLIT) -> List[AlgebraElement]:
    """Eight coordinates of the perturbation (R1, R2) in ``basis``.

    The elements are written in the letters of the input; the split
    coordinates are the graded parts of R_j Q_j^-1, other bases are linear
    combinations of these.
    """
    split = []
    for r, g in ((r1, Q1), (r2, Q2)):
        if any(not w for w, _ in r.terms):
            raise ValueError("perturbation has an order-0 term")
        x = r * AlgebraElement.cliff(g, r.basis, r.order, c=-1)
        for i1, i2 in GRADINGS:
            split.append(grade_project(x, i1, i2))
    if basis == SPLIT:
        return split
    m = coord_matrix(SPLIT, basis)
    out = []
    for i in range(8):
        acc = AlgebraElement.zero(r1.basis, r1.order)
        for j in range(8):
            if m[i][j]:
                acc = acc + split[j].scale(m[i][j])
        out.append(acc)
    return out


# -- expressions ----------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    """Expression tree over A1, A2, Q1, Q2 and rational constants."""

    op: str
    args: Tuple = ()
    value: object = None

    def __add__(self, o): return Expr("add", (self, _lift(o)))
    def __radd__(self, o): return Expr("add", (_lift(o), self))
    def __sub__(self, o): return Expr("sub", (self, _lift(o)))
    def __rsub__(self, o): return Expr("sub", (_lift(o), self))
    def __neg__(self): return Expr("scale", (self,), Fraction(-1))

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return Expr("scale", (self,), Fraction(o))
        return Expr("mul", (self, o))

    def __rmul__(self, o):
        if isinstance(o, (int, Fraction)):
            return Expr("scale", (self,), Fraction(o))
        return Expr("mul", (_lift(o), self))

    def inv(self): return Expr("inv", (self,))
    def proj(self, q: int, parity: int): return Expr("proj", (self,), (q, parity))


def _lift(o) -> Expr:
    return o if isinstance(o, Expr) else Expr("const", (), Fraction(o))


A1 = Expr("A1")
A2 = Expr("A2")
EQ1 = Expr("Q1")
EQ2 = Expr("Q2")


def comm(a: Expr, b: Expr) -> Expr:
    return Expr("comm", (a, b))


def evaluate_tree(e: Expr, pair: Tuple[AlgebraElement, AlgebraElement]) -> AlgebraElement:
    a1, a2 = pair
    basis, order = a1.basis, a1.order
    memo: Dict[int, AlgebraElement] = {}

    def ev(x: Expr) -> AlgebraElement:
        key = id(x)
        if key in memo:
            return memo[key]
        if x.op == "A1":
            v = a1
        elif x.op == "A2":
            v = a2
        elif x.op == "Q1":
            v = AlgebraElement.cliff(Q1, basis, order)
        elif x.op == "Q2":
            v = AlgebraElement.cliff(Q2, basis, order)
        elif x.op == "const":
            v = AlgebraElement.scalar(x.value, basis, order)
        elif x.op == "add":
            v = ev(x.args[0]) + ev(x.args[1])
        elif x.op == "sub":
            v = ev(x.args[0]) - ev(x.args[1])
        elif x.op == "mul":
            v = ev(x.args[0]) * ev(x.args[1])
        elif x.op == "scale":
            v = ev(x.args[0]).scale(x.value)
        elif x.op == "inv":
            v = neumann_inverse(ev(x.args[0]))
        elif x.op == "comm":
            v = commutator(ev(x.args[0]), ev(x.args[1]))
        elif x.op == "proj":
            q, parity = x.value
            v = conj_project(ev(x.args[0]), q, parity)
        else:
            raise ValueError(f"unknown expression node {x.op!r}")
        memo[key] = v
        return v

    return ev(e)


def evaluate_expression(e: Union[Expr, Sequence[Expr]], kind: str, order: int,
                        basis: str = MIXED) -> FQOperation:
    """Expand a closed-form operation into its coefficient tables.

    ``e`` is one expression for scalar and pseudoscalar kinds and a pair of
    expressions for the vectorial kind.
    """
    exprs = [e] if isinstance(e, Expr) else list(e)
    comps = COMPONENTS[kind]
    if len(exprs) != len(comps):
        raise ValueError(f"{kind} needs {len(comps)} expression(s)")
    pair = generic_pair(order, basis)
    values = {s: evaluate_tree(x, pair) for s, x in zip(comps, exprs)}
    return from_elements(values, kind)


def evaluate_on(op: FQOperation, pair: Tuple[AlgebraElement, AlgebraElement]) -> Dict[int, AlgebraElement]:
    """Evaluate op at a concrete perturbed pair by substituting coordinates."""
    a1, a2 = pair
    basis = a1.basis
    r1 = a1 - AlgebraElement.cliff(Q1, basis, a1.order)
    r2 = a2 - AlgebraElement.cliff(Q2, basis, a2.order)
    coords = extract_coordinates(r1, r2, SPLIT)
    split_op = op.to_basis(SPLIT)
    order = min(a1.order, a2.order)
    out = {}
    for s in COMPONENTS[op.kind]:
        f = substitute_series(split_op.components[s], coords, basis, order)
        out[s] = f * AlgebraElement.cliff(TAIL[s], basis, order)
    return out


def substitute_series(series: Dict[Word, object], coords: Sequence[AlgebraElement],
                      basis: str, order: int) -> AlgebraElement:
    """sum_w p_w c_{w1}...c_{wr} for coordinate elements with no constant term.

    Horner evaluation over the prefix trie of the series' words.
    """
    trie: Dict = {}
    for w, c in series.items():
        node = trie
        for k in w:
            node = node.setdefault(k, {})
        node[None] = c

    def walk(node, depth: int) -> AlgebraElement:
        budget = order - depth
        const = node.get(None, 0)
        acc = AlgebraElement.scalar(const, basis, budget) if const else AlgebraElement.zero(basis, budget)
        for k, child in node.items():
            if k is None or budget < 1:
                continue
            tail = walk(child, depth + 1)
            if not tail:
                continue
            acc = acc + mul(coords[k - 1].with_order(budget), tail.with_order(budget))
        return acc

    return walk(trie, 0).with_order(order)


# -- first differential ---------------------------------------------------

FirstDifferential = Tuple[Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]], ...]


def first_differential(op: FQOperation) -> FirstDifferential:
    """Four 2x2 matrices from the split order-1 coefficients."""
    if op.kind != VECTORIAL:
        raise ValueError("first differential needs a vectorial operation")
    sp = op.to_basis(SPLIT)
    mats = []
    for k in range(1, 5):
        mats.append(tuple(
            tuple(Fraction(sp.coeff(s, (j,))) for j in (k, k + 4)) for s in (1, 2)
        ))
    return tuple(mats)


def linear_operation(L: FirstDifferential, order: int = 1, basis: str = SPLIT) -> FQOperation:
    """E + T(L): the Clifford conservative operation of order 1 with DPsi = L."""
    comps: Dict[int, Dict[Word, Fraction]] = {1: {(): Fraction(1)}, 2: {(): Fraction(1)}}
    for k in range(4):
        for row, s in enumerate((1, 2)):
            for col, j in enumerate((k + 1, k + 5)):
                if L[k][row][col]:
                    comps[s][(j,)] = Fraction(L[k][row][col])
    return FQOperation(VECTORIAL, order, SPLIT, comps).to_basis(basis)


def identity_differential() -> FirstDifferential:
    one, zero = Fraction(1), Fraction(0)
    return tuple(((one, zero), (zero, one)) for _ in range(4))


# -- serialization --------------------------------------------------------

def serialize(op: FQOperation) -> str:
    lines = [f"kind={op.kind}", f"basis={op.basis}", f"order={op.order}"]
    for s in COMPONENTS[op.kind]:
        for w in sorted(op.components[s], key=lambda w: (len(w), w)):
            c = Fraction(op.components[s][w])
            ws = "".join(map(str, w)) or "-"
            lines.append(f"s={s} w={ws} num={c.numerator} den={c.denominator}")
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> FQOperation:
    header: Dict[str, str] = {}
    comps: Dict[int, Dict[Word, Fraction]] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line and " " not in line:
            k, v = line.split("=", 1)
            header[k] = v
            continue
        fields = dict(part.split("=", 1) for part in line.split())
        try:
            s = int(fields["s"])
            w = () if fields["w"] == "-" else tuple(int(ch) for ch in fields["w"])
            c = Fraction(int(fields["num"]), int(fields["den"]))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"line {n}: malformed record {raw!r}") from exc
        if any(not 1 <= k <= 8 for k in w):
            raise ValueError(f"line {n}: letter out of range")
        comps.setdefault(s, {})[w] = c
    for k in ("kind", "basis", "order"):
        if k not in header:
            raise ValueError(f"missing header field {k}")
    return FQOperation(header["kind"], int(header["order"]), header["basis"], comps)
