"""Invariance properties as order-by-order residual generators.

Every property yields, for a given expansion order r, a stream of
``(label, value)`` pairs whose values must all vanish.  Values are linear
in the order-r coefficients and may reference lower-order ones, so the
same code serves three purposes: checking a concrete operation, emitting
constraint rows for :mod:`fqops.linsolve`, and building operations by
classification.

Operations can be held in two ways.  A *full* context stores every word.
A *reduced* context stores a natural operation through its pure
{1..5}-words in the circular basis; everything else is recovered with
:func:`natural_extend`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .bases import (
    CIRCULAR, CONJ, MIXED, ONE, Q1, Q2, Q12, SPLIT, Word,
    char_mul, delta0_eigenvalue, transform_element, transform_series,
)
from .fqop import (
    COMPONENTS, KINDS, PSEUDOSCALAR, SCALAR, TAIL, VECTORIAL, FQOperation,
    extract_coordinates, from_elements, generic_pair, sign_of, substitute_series,
)
from .ncalgebra import AlgebraElement, commutator, mul, neumann_inverse

HALF = Fraction(1, 2)
REDUCED_LETTERS = (1, 2, 3, 4, 5)
ALL_LETTERS = tuple(range(1, 9))

# (J, L) per eliminated mixed variable, and (alpha, beta) per component
HYPER_JL = {6: (0, 0), 7: (1, 0), 8: (-1, 0)}
HYPER_AB = {
    0: {6: (HALF, -HALF), 7: (1, -1), 8: (0, 0)},
    1: {6: (HALF, HALF), 7: (1, 0), 8: (0, 1)},
    2: {6: (HALF, HALF), 7: (1, 0), 8: (0, -1)},
    12: {6: (HALF, -HALF), 7: (1, 1), 8: (0, 0)},
}

# Opp: signed substitution pi with f_s = f_s^opp(pi(r)), per basis
OPP_SUBS = {
    SPLIT: {
        0: (1, 2, -3, -4, 5, -6, 7, -8),
        1: (1, 2, 3, 4, 5, -6, -7, 8),
        2: (1, -2, -3, 4, 5, 6, 7, 8),
        12: (1, -2, 3, -4, 5, 6, -7, -8),
    },
    MIXED: {
        0: (1, 2, 3, 4, -5, -6, -7, -8),
        1: (2, 1, 3, 4, 5, 6, 8, 7),
        2: (-2, -1, 3, 4, 5, 6, -8, -7),
        12: (-1, -2, 3, 4, -5, -6, 7, 8),
    },
    CIRCULAR: {
        0: (1, 2, 3, 5, 4, -6, -7, -8),
        1: (2, 1, 3, 4, 5, 6, 8, 7),
        2: (-2, -1, 3, 4, 5, 6, -8, -7),
        12: (-1, -2, 3, 5, 4, -6, 7, 8),
    },
}

# sign flips used by symmetry and orthogonal invariance (mixed and circular)
TAU = (0, -1, 1, 1, -1, -1, 1, 1, -1)


def word_sign(w: Word, signs: Sequence[int]) -> int:
    s = 1
    for k in w:
        s *= signs[k]
    return s


def words(alphabet: Sequence[int], r: int) -> Iterator[Word]:
    return itertools.product(alphabet, repeat=r)


def is_reduced_word(w: Word) -> bool:
    return all(k <= 5 for k in w)


# -- naturality -----------------------------------------------------------

def extend_series(reduced: Dict[Word, object], s: int, order: int) -> Dict[Word, object]:
    """Fill all mixed coefficients of component s from its {1..5}-part."""
    memo: Dict[Word, object] = {}
    zero = Fraction(0)

    def get(w: Word):
        v = memo.get(w)
        if v is not None:
            return v
        k = next((i for i, x in enumerate(w) if x >= 6), None)
        if k is None:
            v = reduced.get(w, zero)
        else:
            h = w[k]
            J, L = HYPER_JL[h]
            a, b = HYPER_AB[s][h]
            v = zero
            for _, u, c in _decay_terms(s, w, k, Fraction(J), Fraction(L), Fraction(a), Fraction(b)):
                x = get(u)
                if x:
                    v = v + x * c
        memo[w] = v
        return v

    out = {}
    for r in range(order + 1):
        for w in words(ALL_LETTERS, r):
            v = get(w)
            if v:
                out[w] = v
    return out


def natural_reduce(op: FQOperation, check_natural: bool = True) -> FQOperation:
    """Keep the free {1..5}-coefficients in the circular basis.

    Split-basis input is reduced in the circular basis as well; use
    :func:`split_free_data` for the {1,2,5,7,8} split description.
    """
    if check_natural:
        rep = check(op, PropertySpec("Nat"))
        if not rep.holds:
            raise ValueError(f"operation is not natural: {rep.detail}")
    circ = op.to_basis(CIRCULAR)
    return FQOperation(op.kind, op.order, CIRCULAR, {
        s: {w: c for w, c in t.items() if is_reduced_word(w)}
        for s, t in circ.components.items()
    })


def natural_extend(reduced: FQOperation, basis: Optional[str] = None) -> FQOperation:
    """Unique natural operation with the given free coefficients.

    Mixed and circular input must live on {1..5}-words; split input on
    {1,2,5,7,8}-words (the Gram-Schmidt description), solved order by order.
    """
    target = basis or reduced.basis
    if reduced.basis == SPLIT:
        return _extend_from_split(reduced).to_basis(target)
    for t in reduced.components.values():
        if any(not is_reduced_word(w) for w in t):
            raise ValueError("reduced data must be supported on {1..5}-words")
    mixed = reduced.to_basis(MIXED)
    comps = {s: extend_series(t, s, reduced.order) for s, t in mixed.components.items()}
    return FQOperation(reduced.kind, reduced.order, MIXED, comps).to_basis(target)


SPLIT_FREE = (1, 2, 5, 7, 8)


def split_free_data(op: FQOperation) -> FQOperation:
    sp = op.to_basis(SPLIT)
    return FQOperation(op.kind, op.order, SPLIT, {
        s: {w: c for w, c in t.items() if all(k in SPLIT_FREE for k in w)}
        for s, t in sp.components.items()
    })


def _extend_from_split(data: FQOperation) -> FQOperation:
    from .linsolve import Poly, Row, eliminate

    for t in data.components.values():
        if any(k not in SPLIT_FREE for w in t for k in w):
            raise ValueError("split data must be supported on {1,2,5,7,8}-words")
    known: Dict[int, Dict[Word, Fraction]] = {s: {} for s in data.components}
    for r in range(data.order + 1):
        ids = {}
        table = {s: dict(known[s]) for s in known}
        for s in known:
            for w in words(REDUCED_LETTERS, r):
                ids[(s, w)] = len(ids)
                table[s][w] = Poly.var(ids[(s, w)])
        red = FQOperation(data.kind, r, MIXED, table)
        full = natural_extend(red, SPLIT)
        rows = []
        for s in known:
            for w in words(SPLIT_FREE, r):
                v = Poly.lift(full.coeff(s, w)) - data.coeff(s, w)
                lin, rest, _ = v.split_linear(set(ids.values()))
                rows.append(Row(lin, -rest))
        ech = eliminate(rows)
        if len(ech.pivots) != len(ids):
            raise ValueError("split data does not determine a natural operation")
        if ech.conditions:
            raise ValueError("split data is inconsistent")
        for (s, w), i in ids.items():
            val = Fraction(Poly.lift(ech.pivots[i].rhs).const_value())
            if val:
                known[s][w] = val
    return natural_extend(FQOperation(data.kind, data.order, MIXED, known))


# -- operation contexts ---------------------------------------------------

def reduced_pair(order: int) -> Tuple[AlgebraElement, AlgebraElement]:
    """Generic pair around its symmetric orthogonalization (circular r6=r7=r8=0)."""
    out = []
    for a in generic_pair(order, CIRCULAR):
        out.append(AlgebraElement({k: c for k, c in a.terms.items() if is_reduced_word(k[0])},
                                  CIRCULAR, order))
    return out[0], out[1]


class OpContext:
    """An operation plus cached views used by the residual generators."""

    def __init__(self, op: FQOperation, reduced: bool = False):
        self.kind = op.kind
        self.order = op.order
        self.reduced = reduced
        if reduced:
            op = op.to_basis(CIRCULAR)
            for t in op.components.values():
                if any(not is_reduced_word(w) for w in t):
                    raise ValueError("reduced context needs {1..5}-supported data")
        self.op = op
        self.basis = CIRCULAR if reduced else op.basis
        self._tables: Dict[str, FQOperation] = {}
        self._full: Dict[str, FQOperation] = {}
        self._cache: Dict[object, object] = {}

    def table(self, basis: str) -> FQOperation:
        if self.reduced and basis == SPLIT:
            return self.full(SPLIT)
        t = self._tables.get(basis)
        if t is None:
            t = self._tables[basis] = self.op.to_basis(basis)
        return t

    def full(self, basis: str) -> FQOperation:
        if not self.reduced:
            return self.table(basis)
        t = self._full.get(basis)
        if t is None:
            if MIXED not in self._full:
                self._full[MIXED] = natural_extend(self.table(MIXED), MIXED)
            t = self._full[basis] = self._full[MIXED].to_basis(basis)
        return t

    def coeff(self, basis: str, s: int, w: Word):
        if self.reduced and (basis == SPLIT or not is_reduced_word(w)):
            return self.full(basis).coeff(s, w)
        return self.table(basis).coeff(s, w)

    def memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def pair(self, order: Optional[int] = None):
        order = self.order if order is None else order
        if self.reduced:
            return reduced_pair(order)
        return generic_pair(order, self.basis)

    def values(self, order: Optional[int] = None) -> Dict[int, AlgebraElement]:
        """Component values f_s Q^[s] on the context's generic pair."""
        order = self.order if order is None else order
        return self.memo(("values", order), lambda: {
            s: self.table(self.basis).element(s, order) for s in COMPONENTS[self.kind]
        })

    def apply_to(self, pair: Sequence[AlgebraElement]) -> Dict[int, AlgebraElement]:
        """Evaluate the operation at a Clifford-conservative perturbation of Q."""
        a1, a2 = pair
        order = min(a1.order, a2.order)
        basis = a1.basis
        r1 = a1 - AlgebraElement.cliff(Q1, basis, order)
        r2 = a2 - AlgebraElement.cliff(Q2, basis, order)
        coords = extract_coordinates(r1, r2, basis)
        table = self.full(basis)
        return {
            s: substitute_series(table.components[s], coords, basis, order)
            * AlgebraElement.cliff(TAIL[s], basis, order)
            for s in COMPONENTS[self.kind]
        }


def context_from_values(values: Dict[int, AlgebraElement], kind: str, reduced: bool) -> OpContext:
    return OpContext(from_elements(values, kind), reduced=reduced)


# -- property descriptors -------------------------------------------------

@dataclass(frozen=True)
class PropertySpec:
    tag: str
    params: Tuple = ()

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        return f"{self.tag}({','.join(str(p) for p in self.params)})"


ALIASES = {
    "sC": "CC", "vC": "CC", "psC": "CC", "C": "CC", "CC": "CC",
    "Nat": "Nat", "Opp": "Opp", "Sigma2": "Sigma2", "S2": "Sigma2", "Σ2": "Sigma2",
    "O2": "O2", "Scaling": "Scaling", "S": "Scaling", "Hyp": "Hyp", "Hyperscaling": "Hyp",
    "CD": "CD", "Biv": "Biv", "Antiv": "Antiv", "Liv": "Liv", "Riv": "Riv",
    "FC": "FC", "vC'": "FC", "CP": "CP", "FCP": "FCP", "CP'": "FCP",
    "Inv": "Inv", "Idm": "Idm", "I3": "I3",
    "AxisEquals": "AxisEquals", "WMT": "WMT", "WeakMetricTrace": "WMT",
    "DScaling": "DScaling", "ComposeFixed": "ComposeFixed", "Coeff": "Coeff",
    "XE": "XE", "CXE": "CXE", "Zero": "Zero",
    "CliffordConservative": "CC", "Natural": "Nat", "Transposition": "Opp", "Symmetry": "Sigma2",
    "Σ₂": "Sigma2", "Orthogonal": "O2", "O₂": "O2", "CharacterDegeneracy": "CD",
    "Bivariant": "Biv", "Antivariant": "Antiv", "LeftVariant": "Liv", "RightVariant": "Riv",
    "FloatingConservative": "FC", "CliffordProductive": "CP", "FloatingProductive": "FCP",
    "Involutive": "Inv", "Idempotent": "Idm", "ThreeIdempotent": "I3",
}
SCALING_SHORT = {"H": 3, "E": 4, "CE": 5, "SH": 2, "SE": 1, "CH": 6, "CSH": 7, "CSE": 8}
LINEAR_TAGS = {"CC", "Nat", "Opp", "Sigma2", "O2", "Scaling", "Hyp", "CD", "Biv", "Antiv",
               "Liv", "Riv", "XE", "CXE", "Zero", "Coeff"}


def _parse_value(tok: str):
    tok = tok.strip()
    try:
        return Fraction(tok)
    except ValueError:
        return tok


def parse_properties(text: str) -> List[PropertySpec]:
    """Parse ``"sC + Opp + O2 + CP"`` or ``"Scaling(3, 1) + H(alpha=1)"``."""
    out = []
    for part in text.split("+"):
        part = part.strip()
        if not part:
            raise ValueError(f"empty property in {text!r}")
        m = re.fullmatch(r"([A-Za-zΣ0-9₂']+)\s*(?:\((.*)\))?", part)
        if not m:
            raise ValueError(f"cannot parse property {part!r}")
        name, args = m.group(1), m.group(2)
        params: List = []
        if args:
            for a in args.split(","):
                a = a.split("=", 1)[-1]
                params.append(_parse_value(a))
        if name in SCALING_SHORT:
            out.append(PropertySpec("Scaling", (SCALING_SHORT[name],) + tuple(params)))
            continue
        if name not in ALIASES:
            raise ValueError(f"unknown property {name!r}")
        out.append(PropertySpec(ALIASES[name], tuple(params)))
    return out


ARITY = {"CC": (0, 1), "Nat": (0, 0), "Opp": (0, 0), "Sigma2": (0, 0), "O2": (0, 0),
         "Scaling": (2, 2), "Hyp": (5, 6), "CD": (1, 1), "Biv": (0, 0), "Antiv": (0, 0),
         "Liv": (0, 0), "Riv": (0, 0), "FC": (1, 1), "CP": (0, 0), "FCP": (0, 0),
         "Inv": (0, 0), "Idm": (0, 0), "I3": (0, 0), "AxisEquals": (1, 1), "WMT": (0, 0),
         "DScaling": (2, 2), "ComposeFixed": (1, 1), "Coeff": (3, 4), "XE": (1, 1),
         "CXE": (1, 1), "Zero": (0, 0)}


def validate(spec: PropertySpec) -> None:
    lo, hi = ARITY.get(spec.tag, (None, None))
    if lo is None:
        raise ValueError(f"unknown property tag {spec.tag!r}")
    if not lo <= len(spec.params) <= hi:
        raise ValueError(f"{spec.tag} takes {lo}..{hi} parameters, got {len(spec.params)}")


# -- linear relation generators ------------------------------------------

def _rel(ctx: OpContext, basis: str, terms: Iterable[Tuple[int, Word, object]], const=0):
    acc = const
    for s, w, c in terms:
        v = ctx.coeff(basis, s, w)
        if v:
            acc = acc + v * c
    return acc


def _letters(ctx: OpContext) -> Tuple[int, ...]:
    return REDUCED_LETTERS if ctx.reduced else ALL_LETTERS


def gen_cc(ctx, r, value=1):
    if r != 0:
        return
    for s in COMPONENTS[ctx.kind]:
        yield f"CC p[{s}]", ctx.coeff(ctx.basis, s, ()) - Fraction(value)


def gen_zero(ctx, r):
    for s in COMPONENTS[ctx.kind]:
        for w in words(_letters(ctx), r):
            v = ctx.coeff(CIRCULAR if ctx.reduced else ctx.basis, s, w)
            if v:
                yield f"Zero p[{s}]{w}", v


def opp_partner(s: int, w: Word, basis: str) -> Tuple[int, Word]:
    """(eps, v) with p_w = eps * p_v under transposition invariance."""
    sub = OPP_SUBS[basis][s]
    sign = 1
    v = []
    for k in reversed(w):
        im = sub[k - 1]
        if im < 0:
            sign = -sign
        v.append(abs(im))
    return sign, tuple(v)


def gen_opp(ctx, r, basis=MIXED):
    basis = CIRCULAR if ctx.reduced else basis
    for s in COMPONENTS[ctx.kind]:
        for w in words(_letters(ctx), r):
            eps, v = opp_partner(s, w, basis)
            if v < w or (v == w and eps > 0):
                continue
            yield f"Opp p[{s}]{w}", _rel(ctx, basis, [(s, w, 1), (s, v, -eps)])


def gen_sigma2(ctx, r):
    basis = CIRCULAR if ctx.reduced else MIXED
    for w in words(_letters(ctx), r):
        t = word_sign(w, TAU)
        if ctx.kind == VECTORIAL:
            yield f"Sigma2 p[2]{w}", _rel(ctx, basis, [(2, w, 1), (1, w, -t)])
        elif t < 0:
            s = COMPONENTS[ctx.kind][0]
            yield f"Sigma2 p[{s}]{w}", _rel(ctx, basis, [(s, w, 1)])


def o2_allowed(s: int, w: Word) -> bool:
    """Whether orthogonal invariance leaves the circular coefficient free."""
    lam = delta0_eigenvalue(w)
    if s in (0, 12):
        return lam == 0
    return lam == (1 - word_sign(w, TAU)) // 2


def gen_o2(ctx, r):
    for w in words(_letters(ctx), r):
        if ctx.kind == VECTORIAL:
            t = word_sign(w, TAU)
            yield f"O2 p[2]{w}", _rel(ctx, CIRCULAR, [(2, w, 1), (1, w, -t)])
            if not o2_allowed(1, w):
                yield f"O2 p[1]{w}", ctx.coeff(CIRCULAR, 1, w)
        else:
            s = COMPONENTS[ctx.kind][0]
            if not o2_allowed(s, w):
                yield f"O2 p[{s}]{w}", ctx.coeff(CIRCULAR, s, w)


def scaling_terms(s: int, i: int, alpha, base: Word) -> List[Tuple[int, Word, object]]:
    """Terms of the i-scaling relation for base word ``base`` (mixed basis)."""
    eps = sign_of(s) if i in (1, 4, 5, 8) else 1
    terms = []
    for k in range(len(base) + 1):
        terms.append((s, base[:k] + (i,) + base[k:], Fraction(1)))
    terms.append((s, base, -eps * Fraction(alpha)))
    for k in range(len(base)):
        terms.append((s, base[:k] + (char_mul(i, base[k]),) + base[k + 1:], Fraction(1)))
    return terms


def gen_scaling(ctx, r, i, alpha):
    i = int(i)
    if not 1 <= i <= 8:
        raise ValueError(f"scaling index out of range: {i}")
    if r == 0:
        return
    for s in COMPONENTS[ctx.kind]:
        for base in words(ALL_LETTERS, r - 1):
            yield f"Scaling({i},{alpha}) p[{s}]{base}", _rel(ctx, MIXED, scaling_terms(s, i, alpha, base))


def gen_circ_scaling(ctx, r, alpha, skew):
    if r == 0:
        return
    for s in COMPONENTS[ctx.kind]:
        for base in words(ALL_LETTERS, r - 1):
            t4 = scaling_terms(s, 4, alpha, base)
            t5 = scaling_terms(s, 5, -alpha if skew else alpha, base)
            f = -HALF if skew else HALF
            terms = [(a, b, c * HALF) for a, b, c in t4] + [(a, b, c * f) for a, b, c in t5]
            yield f"{'CXE' if skew else 'XE'}({alpha}) p[{s}]{base}", _rel(ctx, MIXED, terms)


def _decay_terms(s, w, k, J, L, alpha, beta):
    h = w[k]
    n = len(w)
    t = []
    if n == 1:
        return [(s, (), alpha + beta)]
    if k == 0:
        j, rest = w[1], w[2:]
        t.append((s, w[1:], alpha))
        if J:
            t.append((s, (char_mul(char_mul(6, h), j),) + rest, -J / 2))
        t.append((s, (char_mul(h, j),) + rest, -HALF - L))
        return t
    i, head = w[k - 1], w[:k - 1]
    if k == n - 1:
        if J:
            t.append((s, head + (char_mul(char_mul(i, h), 6),), J / 2))
        t.append((s, head + (char_mul(i, h),), -HALF + L))
        t.append((s, w[:k], beta))
        return t
    j, tail = w[k + 1], w[k + 2:]
    if J:
        t.append((s, head + (char_mul(char_mul(i, h), 6), j) + tail, J / 2))
    t.append((s, head + (char_mul(i, h), j) + tail, -HALF + L))
    if J:
        t.append((s, head + (i, char_mul(char_mul(6, h), j)) + tail, -J / 2))
    t.append((s, head + (i, char_mul(h, j)) + tail, -HALF - L))
    return t


def gen_hyper(ctx, r, h, J, L, alpha, beta, comp=None):
    h = int(h)
    if r == 0:
        return
    comps = COMPONENTS[ctx.kind] if comp is None else (int(comp),)
    for s in comps:
        for w in words(ALL_LETTERS, r):
            for k, x in enumerate(w):
                if x != h:
                    continue
                terms = [(s, w, Fraction(1))] + [
                    (a, b, -c) for a, b, c in _decay_terms(s, w, k, Fraction(J), Fraction(L),
                                                           Fraction(alpha), Fraction(beta))]
                yield f"Hyp({h}) p[{s}]{w}@{k}", _rel(ctx, MIXED, terms)


def gen_nat(ctx, r):
    if ctx.reduced or r == 0:
        return
    for s in COMPONENTS[ctx.kind]:
        for w in words(ALL_LETTERS, r):
            for k, h in enumerate(w):
                if h < 6:
                    continue
                J, L = HYPER_JL[h]
                a, b = HYPER_AB[s][h]
                terms = [(s, w, Fraction(1))] + [
                    (x, y, -c) for x, y, c in _decay_terms(s, w, k, Fraction(J), Fraction(L),
                                                           Fraction(a), Fraction(b))]
                yield f"Nat p[{s}]{w}@{k}", _rel(ctx, MIXED, terms)


def gen_cd(ctx, r, eps):
    eps = Fraction(eps)
    for s in COMPONENTS[ctx.kind]:
        for w in words(ALL_LETTERS, r):
            for k, x in enumerate(w):
                v = w[:k] + (char_mul(x, 6),) + w[k + 1:]
                if v < w:
                    continue
                yield f"CD({eps}) p[{s}]{w}@{k}", _rel(ctx, MIXED, [(s, w, 1), (s, v, -eps)])


VARIANCE = {"Biv": (VECTORIAL, 1), "Antiv": (VECTORIAL, -1),
            "Liv": ("ps", 1), "Riv": ("ps", -1)}


def gen_variance(ctx, r, tag):
    want, eps = VARIANCE[tag]
    ok = ctx.kind == VECTORIAL if want == VECTORIAL else ctx.kind != VECTORIAL
    if not ok:
        yield from gen_zero(ctx, r)
        return
    yield from gen_nat(ctx, r)
    yield from gen_cd(ctx, r, eps)


def gen_coeff(ctx, r, s, word, value, basis=CIRCULAR):
    w = tuple(int(ch) for ch in str(word)) if str(word) not in ("-", "") else ()
    if isinstance(word, Fraction):
        w = tuple(int(ch) for ch in str(word.numerator))
    if len(w) != r:
        return
    yield f"Coeff p[{s}]{w}", ctx.coeff(str(basis), int(s), w) - Fraction(value)


# -- nonlinear residuals --------------------------------------------------

def element_residual(label: str, x: AlgebraElement, r: int):
    for (w, g), c in sorted(x.terms.items()):
        if len(w) == r and c:
            yield f"{label} {w} part {g}", c


def _pair_values(ctx: OpContext, r: int):
    return ctx.values(r), ctx.pair(r)


def gen_cp(ctx, r):
    vals = ctx.values(r)
    basis = ctx.basis
    if ctx.kind == VECTORIAL:
        p1, p2 = vals[1], vals[2]
        yield from element_residual("CP 11", mul(p1, p1, r) + _const(-1, basis, r, r), r)
        yield from element_residual("CP 12", mul(p1, p2, r) + mul(p2, p1, r), r)
        yield from element_residual("CP 22", mul(p2, p2, r) + _const(-1, basis, r, r), r)
    elif ctx.kind == PSEUDOSCALAR:
        p = vals[12]
        yield from element_residual("CP", mul(p, p, r) + _const(-1, basis, r, r), r)
    else:
        raise ValueError("Clifford productivity is defined for vectorial and pseudoscalar kinds")


def _const(c, basis, order, r):
    # constants only live in degree 0; keeps the degree-r residual honest
    return AlgebraElement.scalar(-c, basis, order) if r == 0 else AlgebraElement.zero(basis, order)


def gen_fcp(ctx, r):
    if ctx.kind != VECTORIAL:
        raise ValueError("floating productivity needs a vectorial operation")
    vals = ctx.values(r)
    p1, p2 = vals[1], vals[2]
    x = p1 * neumann_inverse(p2)
    y = neumann_inverse(p2) * p1
    one = AlgebraElement.scalar(1, ctx.basis, r)
    yield from element_residual("FCP left", x * x + one, r)
    yield from element_residual("FCP right", y * y + one, r)


def derived_d(ctx: OpContext) -> OpContext:
    """Context of the pseudodeterminant of the operation, D o Psi."""
    def build():
        if ctx.kind != VECTORIAL:
            raise ValueError("D o Psi needs a vectorial operation")
        v = ctx.values()
        d = commutator(v[1], v[2]).scale(HALF)
        return OpContext(from_elements({12: d}, PSEUDOSCALAR), reduced=ctx.reduced)
    return ctx.memo("D", build)


def gen_dscaling(ctx, r, i, alpha):
    yield from gen_scaling(derived_d(ctx), r, i, alpha)


def _builtin_ctx(ctx: OpContext, name: str) -> OpContext:
    from .library import builtin

    def build():
        op = builtin(str(name), ctx.order, CIRCULAR if ctx.reduced else ctx.basis)
        if ctx.reduced:
            op = FQOperation(op.kind, op.order, CIRCULAR, {
                s: {w: c for w, c in t.items() if is_reduced_word(w)}
                for s, t in op.components.items()})
        return OpContext(op, reduced=ctx.reduced)
    return ctx.memo(("builtin", name, ctx.order), build)


def gen_axis_equals(ctx, r, name):
    d = derived_d(ctx)
    ref = _builtin_ctx(ctx, name)
    letters = _letters(ctx)
    for w in words(letters, r):
        v = d.coeff(d.basis, 12, w) - ref.coeff(d.basis, 12, w)
        yield f"AxisEquals({name}) {w}", v


def gen_wmt(ctx, r, name="AxisC"):
    if ctx.kind != VECTORIAL:
        raise ValueError("weak metric trace needs a vectorial operation")
    vals = ctx.values(r)
    a1, a2 = ctx.pair(r)
    axis = _builtin_ctx(ctx, name).values(r)[12]
    x = commutator(a1, vals[1]) + commutator(a2, vals[2])
    y = mul(neumann_inverse(axis), x * axis, r)
    yield from element_residual("WMT", (x.homogeneous(r) + y).scale(HALF), r)


def gen_compose_fixed(ctx, r, name):
    other = _builtin_ctx(ctx, name)
    if other.kind != VECTORIAL:
        raise ValueError("composition needs a vectorial inner operation")
    inner = other.values(r)
    out = ctx.apply_to((inner[1], inner[2]))
    own = ctx.values(r)
    for s in COMPONENTS[ctx.kind]:
        yield from element_residual(f"ComposeFixed({name}) [{s}]", out[s] - own[s], r)


def gen_selfcompose(ctx, r, tag):
    if ctx.kind != VECTORIAL:
        raise ValueError(f"{tag} needs a vectorial operation")
    own = ctx.values(r)
    a1, a2 = ctx.pair(r)
    once = ctx.apply_to((own[1], own[2]))
    if tag == "Inv":
        target, got = {1: a1, 2: a2}, once
    elif tag == "Idm":
        target, got = own, once
    else:
        target, got = own, ctx.apply_to((once[1], once[2]))
    for s in (1, 2):
        yield from element_residual(f"{tag} [{s}]", got[s] - target[s], r)


def gen_fc(ctx, r, eps):
    from .library import floating_series

    if ctx.kind != VECTORIAL:
        raise ValueError("floating conservativity needs a vectorial operation")
    eps = int(eps)
    f4, f5 = floating_series(r)
    basis = CIRCULAR
    coords = [AlgebraElement.var(k, basis, r) for k in (1, 2, 3)] + [f4, f5]
    tab = ctx.table(CIRCULAR)
    one = AlgebraElement.scalar(1, basis, r)
    x = {1: AlgebraElement.var(1, basis, r) + AlgebraElement.var(2, basis, r)
            + AlgebraElement.var(3, basis, r) + f4}
    x[2] = (AlgebraElement.var(2, basis, r) + AlgebraElement.var(3, basis, r)
            - AlgebraElement.var(1, basis, r) - f4)
    for s, q in ((1, Q1), (2, Q2)):
        red = {w: c for w, c in tab.components[s].items() if is_reduced_word(w)}
        lhs = substitute_series(red, coords, basis, r)
        if eps > 0:
            rhs = one + x[s]
        else:
            a = (one + x[s]) * AlgebraElement.cliff(q, basis, r)
            rhs = -(neumann_inverse(a) * AlgebraElement.cliff(q, basis, r, c=-1))
        yield from element_residual(f"FC({eps}) [{s}]", lhs - rhs, r)


def residuals(ctx: OpContext, spec: PropertySpec, r: int) -> Iterator[Tuple[str, object]]:
    """All order-r residuals of ``spec`` on the context."""
    validate(spec)
    t, p = spec.tag, spec.params
    if t == "CC":
        yield from gen_cc(ctx, r, *p)
    elif t == "Nat":
        yield from gen_nat(ctx, r)
    elif t == "Opp":
        yield from gen_opp(ctx, r)
    elif t == "Sigma2":
        yield from gen_sigma2(ctx, r)
    elif t == "O2":
        yield from gen_o2(ctx, r)
    elif t == "Scaling":
        yield from gen_scaling(ctx, r, *p)
    elif t == "XE":
        yield from gen_circ_scaling(ctx, r, p[0], False)
    elif t == "CXE":
        yield from gen_circ_scaling(ctx, r, p[0], True)
    elif t == "Hyp":
        yield from gen_hyper(ctx, r, *p)
    elif t == "CD":
        yield from gen_cd(ctx, r, p[0])
    elif t in VARIANCE:
        yield from gen_variance(ctx, r, t)
    elif t == "Zero":
        yield from gen_zero(ctx, r)
    elif t == "Coeff":
        yield from gen_coeff(ctx, r, *p)
    elif t == "CP":
        yield from gen_cp(ctx, r)
    elif t == "FCP":
        yield from gen_fcp(ctx, r)
    elif t == "FC":
        yield from gen_fc(ctx, r, p[0])
    elif t in ("Inv", "Idm", "I3"):
        yield from gen_selfcompose(ctx, r, t)
    elif t == "AxisEquals":
        yield from gen_axis_equals(ctx, r, p[0])
    elif t == "WMT":
        yield from gen_wmt(ctx, r)
    elif t == "DScaling":
        yield from gen_dscaling(ctx, r, *p)
    elif t == "ComposeFixed":
        yield from gen_compose_fixed(ctx, r, p[0])
    else:
        raise ValueError(f"unsupported property {t!r}")


# -- constraint rows and checking ----------------------------------------

@dataclass
class ConstraintRow:
    """sum coeffs[(s, w)] * p[s]_w = rhs, at a single order (circular or given basis)."""

    order: int
    coeffs: Dict[Tuple[int, Word], Fraction]
    rhs: object
    label: str = ""


def generate_constraints(spec: PropertySpec, kind: str, basis: str, order: int,
                         known: Optional[FQOperation] = None) -> List[ConstraintRow]:
    """Rows in the order-r unknowns of ``basis``; lower orders come from ``known``.

    Without ``known`` the lower orders are zero except for the constant
    term 1, i.e. the rows are taken around the Clifford conservative point.
    """
    from .linsolve import Poly

    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    ids: Dict[Tuple[int, Word], int] = {}
    comps: Dict[int, Dict[Word, object]] = {}
    for s in COMPONENTS[kind]:
        base = known.to_basis(basis).components[s] if known is not None else {(): Fraction(1)}
        comps[s] = {w: c for w, c in base.items() if len(w) < order}
        for w in words(ALL_LETTERS, order):
            ids[(s, w)] = len(ids)
            comps[s][w] = Poly.var(ids[(s, w)])
    ctx = OpContext(FQOperation(kind, order, basis, comps))
    top = set(ids.values())
    back = {i: k for k, i in ids.items()}
    rows = []
    for label, v in residuals(ctx, spec, order):
        v = Poly.lift(v)
        lin, rest, bad = v.split_linear(top)
        if bad:
            raise ValueError(f"{spec}: not well-layered at order {order} ({label})")
        if not lin and not rest:
            continue
        rows.append(ConstraintRow(order, {back[i]: c for i, c in lin.items()}, -rest, label))
    return rows


@dataclass
class CheckReport:
    holds: bool
    order: Optional[int] = None
    label: str = ""
    value: object = None

    @property
    def detail(self) -> str:
        if self.holds:
            return "holds"
        return f"violated at order {self.order}: {self.label} = {self.value}"


def check(op: FQOperation, spec: PropertySpec, max_order: Optional[int] = None,
          reduced: bool = False) -> CheckReport:
    """Exact verdict on whether ``op`` satisfies ``spec`` through its order."""
    top = op.order if max_order is None else min(max_order, op.order)
    for r in range(top + 1):
        ctx = OpContext(op.truncate(r) if r < op.order else op, reduced=reduced)
        for label, v in residuals(ctx, spec, r):
            if v:
                return CheckReport(False, r, label, v)
    return CheckReport(True)


def check_all(op: FQOperation, specs: Iterable[PropertySpec], **kw) -> Dict[str, CheckReport]:
    return {str(s): check(op, s, **kw) for s in specs}
