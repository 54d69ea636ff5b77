"""Truncated free algebra generated by Q1, Q2 and eight perturbation variables.

An element is a sparse map ``(word, cliff) -> coefficient``.  Words are
tuples over 1..8 read in the element's basis; ``cliff`` is one of the codes
ONE, Q1, Q2, Q12 from :mod:`fqops.bases`.  In normal form every Clifford
part sits to the right of the variable letters, so ``g w = (g w g^-1) g``
is the only rewrite needed.

Coefficients are Fractions.  The arithmetic is written against the ring
operations only, so :mod:`fqops.linsolve` can run it with polynomial
coefficients as well.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple

from .bases import BASES, CLIFF_NAMES, MIXED, ONE, Q1, Q2, Q12, Word, conjugate_word

Key = Tuple[Word, int]


def cliff_mul(a: int, b: int) -> Tuple[int, int]:
    """Product of two Clifford parts as (sign, part)."""
    # Q1^a1 Q2^a2 Q1^b1 Q2^b2 with Q1^2 = Q2^2 = -1 and Q2 Q1 = -Q1 Q2
    a1, a2 = a & 1, a >> 1
    b1, b2 = b & 1, b >> 1
    flips = a2 * b1 + a1 * b1 + a2 * b2
    return (-1 if flips & 1 else 1), a ^ b


def cliff_inverse(g: int) -> Tuple[int, int]:
    return (1, ONE) if g == ONE else (-1, g)


def cliff_conj_sign(q: int, g: int) -> int:
    """Sign s with q g q^-1 = s g."""
    return 1 if q == ONE or g == ONE or g == q else -1


def _coerce(c):
    return Fraction(c) if isinstance(c, int) else c


class AlgebraElement:
    """Immutable normal-formed element of the truncated algebra."""

    __slots__ = ("terms", "basis", "order")

    def __init__(self, terms: Dict[Key, object], basis: str = MIXED, order: int = 0):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        if order < 0:
            raise ValueError("order must be non-negative")
        self.basis = basis
        self.order = order
        self.terms = {
            (tuple(w), g): _coerce(c)
            for (w, g), c in terms.items()
            if c and len(w) <= order
        }

    @classmethod
    def _raw(cls, terms: Dict[Key, object], basis: str, order: int) -> "AlgebraElement":
        # trusted constructor: keys already normal, zeros already dropped
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.basis = basis
        obj.order = order
        return obj

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, basis: str = MIXED, order: int = 0) -> "AlgebraElement":
        return cls({}, basis, order)

    @classmethod
    def scalar(cls, c, basis: str = MIXED, order: int = 0) -> "AlgebraElement":
        return cls({((), ONE): c}, basis, order)

    @classmethod
    def cliff(cls, g: int, basis: str = MIXED, order: int = 0, c=1) -> "AlgebraElement":
        return cls({((), g): c}, basis, order)

    @classmethod
    def var(cls, j: int, basis: str = MIXED, order: int = 1, c=1) -> "AlgebraElement":
        if not 1 <= j <= 8:
            raise ValueError(f"variable index out of range: {j}")
        return cls({((j,), ONE): c}, basis, order)

    @classmethod
    def word(cls, w: Iterable[int], basis: str = MIXED, order: Optional[int] = None,
             c=1, g: int = ONE) -> "AlgebraElement":
        w = tuple(w)
        return cls({(w, g): c}, basis, len(w) if order is None else order)

    # -- inspection ---------------------------------------------------

    def __iter__(self) -> Iterator[Tuple[Word, int, object]]:
        for (w, g), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
            yield w, g, c

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement.scalar(other, self.basis, self.order)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def __hash__(self):
        return hash((self.basis, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, g, c in self:
            mon = "".join(f"r{k}" for k in w)
            tail = "" if g == ONE else CLIFF_NAMES[g]
            parts.append(f"{c}*{mon or '1'}{tail}" if (mon or tail) else f"{c}")
        return " + ".join(parts)

    def truncate(self, order: int) -> "AlgebraElement":
        return AlgebraElement(self.terms, self.basis, min(order, self.order))

    def with_order(self, order: int) -> "AlgebraElement":
        return AlgebraElement(self.terms, self.basis, order)

    def homogeneous(self, r: int) -> "AlgebraElement":
        return AlgebraElement._raw(
            {k: c for k, c in self.terms.items() if len(k[0]) == r}, self.basis, self.order
        )

    def clifford_part(self, g: int) -> Dict[Word, object]:
        """Words-only series multiplying the Clifford part g."""
        return {w: c for (w, h), c in self.terms.items() if h == g}

    def min_degree(self) -> int:
        return min((len(w) for w, _ in self.terms), default=self.order + 1)

    # -- ring operations ----------------------------------------------

    def _check(self, other: "AlgebraElement") -> None:
        if self.basis != other.basis:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.scalar(other, self.basis, self.order)
        self._check(other)
        order = min(self.order, other.order)
        out = {k: c for k, c in self.terms.items() if len(k[0]) <= order}
        for k, c in other.terms.items():
            if len(k[0]) > order:
                continue
            v = out.get(k)
            v = c if v is None else v + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return AlgebraElement._raw(out, self.basis, order)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement._raw({k: -c for k, c in self.terms.items()}, self.basis, self.order)

    def __sub__(self, other) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.scalar(other, self.basis, self.order)
        return self + (-other)

    def __rsub__(self, other) -> "AlgebraElement":
        return (-self) + other

    def scale(self, a) -> "AlgebraElement":
        out = {}
        for k, c in self.terms.items():
            v = c * a
            if v:
                out[k] = v
        return AlgebraElement._raw(out, self.basis, self.order)

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "AlgebraElement":
        return self.scale(other)

    def conj(self, q: int) -> "AlgebraElement":
        """q x q^-1."""
        if q == ONE:
            return self
        out = {}
        for (w, g), c in self.terms.items():
            s, v = conjugate_word(q, w, self.basis)
            s *= cliff_conj_sign(q, g)
            out[(v, g)] = c if s > 0 else -c
        return AlgebraElement._raw(out, self.basis, self.order)


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a + b


def mul(a: AlgebraElement, b: AlgebraElement, degree: Optional[int] = None) -> AlgebraElement:
    """Normal-form product truncated at min order.

    With ``degree`` set only output words of exactly that length are kept,
    which is the hot path of the layered solvers.
    """
    a._check(b)
    order = min(a.order, b.order)
    basis = a.basis
    by_len: Dict[int, list] = {}
    for (w, g), c in b.terms.items():
        by_len.setdefault(len(w), []).append((w, g, c))
    out: Dict[Key, object] = {}
    for (w1, g1), c1 in a.terms.items():
        n1 = len(w1)
        if degree is None:
            lens = [n for n in by_len if n1 + n <= order]
        else:
            lens = [degree - n1] if degree - n1 in by_len and degree <= order else []
        for n in lens:
            for w2, g2, c2 in by_len[n]:
                s, v = conjugate_word(g1, w2, basis)
                s2, g = cliff_mul(g1, g2)
                key = (w1 + v, g)
                prod = c1 * c2
                if s * s2 < 0:
                    prod = -prod
                old = out.get(key)
                out[key] = prod if old is None else old + prod
    return AlgebraElement._raw({k: c for k, c in out.items() if c}, basis, order)


def conj_project(x: AlgebraElement, q: int, parity: int) -> AlgebraElement:
    """Half of x plus or minus q^-1 x q."""
    if q not in (Q1, Q2, Q12):
        raise ValueError("projection needs q in {Q1, Q2, Q1Q2}")
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    half = Fraction(1, 2)
    out = {}
    # q^-1 x q equals q x q^-1 since q^-1 = -q
    for (w, g), c in x.terms.items():
        s, v = conjugate_word(q, w, x.basis)
        s *= cliff_conj_sign(q, g)
        if v == w:
            keep = (s > 0) == (parity == 0)
            if keep:
                out[(w, g)] = out.get((w, g), 0) + c
            continue
        out[(w, g)] = out.get((w, g), 0) + c * half
        t = c * half
        if (s < 0) != (parity == 1):
            t = -t
        out[(v, g)] = out.get((v, g), 0) + t
    return AlgebraElement._raw({k: c for k, c in out.items() if c}, x.basis, x.order)


def grade_project(x: AlgebraElement, i1: int, i2: int) -> AlgebraElement:
    """The nested projection (x)^{i1}_{Q1}{}^{i2}_{Q2}."""
    return conj_project(conj_project(x, Q1, i1), Q2, i2)


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b - b * a


def anticommutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b + b * a


def neumann_inverse(a: AlgebraElement) -> AlgebraElement:
    """Inverse of ``u g + higher`` via the truncated geometric series."""
    lead = [(g, c) for (w, g), c in a.terms.items() if not w]
    if len(lead) != 1:
        raise ValueError("leading part must be a single unit times a Clifford part")
    g, u = lead[0]
    s, ginv = cliff_inverse(g)
    # a = u g (1 + x) with x = (u g)^-1 (a - u g)
    lead_inv = AlgebraElement.cliff(ginv, a.basis, a.order, c=s / _coerce(u))
    rest = a - AlgebraElement.cliff(g, a.basis, a.order, c=u)
    x = lead_inv * rest
    total = AlgebraElement.scalar(1, a.basis, a.order)
    power = total
    for _ in range(a.order):
        power = -(power * x)
        if not power:
            break
        total = total + power
    return total * lead_inv
