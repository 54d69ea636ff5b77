"""Exact sparse linear algebra and the layered fiber-dimension engine.

Rows are sparse maps ``column -> Fraction`` with a right-hand side that is
either a Fraction or a :class:`Poly` in free parameters.  Elimination keeps
the pivot rows fully reduced (RREF), choosing the lowest column id as pivot
and feeding rows in order of increasing support.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

Mono = Tuple[int, ...]


class Poly:
    """Sparse polynomial over the rationals in integer-labelled variables."""

    __slots__ = ("t",)

    def __init__(self, terms: Optional[Dict[Mono, Fraction]] = None):
        self.t: Dict[Mono, Fraction] = terms if terms is not None else {}

    @staticmethod
    def var(i: int) -> "Poly":
        return Poly({(i,): Fraction(1)})

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({(): c} if c else {})

    @staticmethod
    def lift(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __bool__(self) -> bool:
        return bool(self.t)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.t == other.t
        if isinstance(other, (int, Fraction)):
            return self.t == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def __repr__(self) -> str:
        if not self.t:
            return "0"
        parts = []
        for m in sorted(self.t, key=lambda m: (len(m), m)):
            mon = "*".join(f"t{i}" for i in m)
            parts.append(f"{self.t[m]}*{mon}" if mon else str(self.t[m]))
        return " + ".join(parts)

    def __add__(self, other) -> "Poly":
        if isinstance(other, Poly):
            if len(other.t) > len(self.t):
                self, other = other, self
            out = dict(self.t)
            for m, c in other.t.items():
                v = out.get(m)
                if v is None:
                    out[m] = c
                else:
                    v += c
                    if v:
                        out[m] = v
                    else:
                        del out[m]
            return Poly(out)
        if not other:
            return self
        out = dict(self.t)
        v = out.get((), 0) + other
        if v:
            out[()] = Fraction(v)
        else:
            out.pop((), None)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.t.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            out: Dict[Mono, Fraction] = {}
            for m1, c1 in self.t.items():
                for m2, c2 in other.t.items():
                    m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
                    v = out.get(m)
                    out[m] = c1 * c2 if v is None else v + c1 * c2
            return Poly({m: c for m, c in out.items() if c})
        if not other:
            return Poly()
        return Poly({m: c * other for m, c in self.t.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        return self * (1 / Fraction(other))

    def degree(self) -> int:
        return max((len(m) for m in self.t), default=-1)

    def is_const(self) -> bool:
        return all(not m for m in self.t)

    def const_value(self) -> Fraction:
        return self.t.get((), Fraction(0))

    def variables(self) -> set:
        return {i for m in self.t for i in m}

    def subs(self, mapping: Dict[int, "Poly"]) -> "Poly":
        if not any(i in mapping for m in self.t for i in m):
            return self
        out = Poly()
        for m, c in self.t.items():
            term = Poly.const(c)
            keep = []
            for i in m:
                if i in mapping:
                    term = term * mapping[i]
                else:
                    keep.append(i)
            if keep:
                term = term * Poly({tuple(keep): Fraction(1)})
            out = out + term
        return out

    def split_linear(self, top: set) -> Tuple[Dict[int, Fraction], "Poly", List[Mono]]:
        """Split into (linear part in ``top`` variables, remainder, bad monomials).

        Bad monomials contain a top variable but are not of the form c*x.
        """
        lin: Dict[int, Fraction] = {}
        rest: Dict[Mono, Fraction] = {}
        bad: List[Mono] = []
        for m, c in self.t.items():
            hits = [i for i in m if i in top]
            if not hits:
                rest[m] = c
            elif len(m) == 1:
                lin[m[0]] = c
            else:
                bad.append(m)
        return lin, Poly(rest), bad


def as_poly(x) -> Poly:
    return Poly.lift(x)


# -- sparse elimination --------------------------------------------------

@dataclass
class Row:
    coeffs: Dict[int, Fraction]
    rhs: object = Fraction(0)
    label: str = ""


@dataclass
class Echelon:
    """Fully reduced pivot rows and the zero rows left over."""

    pivots: Dict[int, Row] = field(default_factory=dict)
    conditions: List[Row] = field(default_factory=list)

    def rank(self) -> int:
        return len(self.pivots)


def _reduce_row(row: Row, ech: Echelon) -> Row:
    coeffs = dict(row.coeffs)
    rhs = row.rhs
    for col in [c for c in coeffs if c in ech.pivots]:
        f = coeffs.get(col)
        if not f:
            continue
        prow = ech.pivots[col]
        for c, v in prow.coeffs.items():
            nv = coeffs.get(c, 0) - f * v
            if nv:
                coeffs[c] = nv
            else:
                coeffs.pop(c, None)
        rhs = rhs - prow.rhs * f
    return Row(coeffs, rhs, row.label)


def eliminate(rows: Iterable[Row], order_key=None) -> Echelon:
    """Incremental RREF over the rationals.

    ``order_key`` maps a column to a sort key; the smallest key is pivoted
    first.  Without it the column id itself is used.
    """
    key = order_key or (lambda c: c)
    ech = Echelon()
    col_users: Dict[int, set] = {}
    rows = sorted(rows, key=lambda r: len(r.coeffs))
    for row in rows:
        row = Row({c: Fraction(v) for c, v in row.coeffs.items() if v}, row.rhs, row.label)
        row = _reduce_row(row, ech)
        if not row.coeffs:
            if row.rhs:
                ech.conditions.append(row)
            continue
        piv = min(row.coeffs, key=key)
        inv = 1 / row.coeffs[piv]
        row = Row({c: v * inv for c, v in row.coeffs.items()}, row.rhs * inv, row.label)
        # clear the new pivot column from earlier pivot rows
        for other_col in list(col_users.get(piv, ())):
            prow = ech.pivots[other_col]
            f = prow.coeffs.get(piv)
            if not f:
                continue
            for c, v in row.coeffs.items():
                nv = prow.coeffs.get(c, 0) - f * v
                if nv:
                    prow.coeffs[c] = nv
                    col_users.setdefault(c, set()).add(other_col)
                else:
                    prow.coeffs.pop(c, None)
                    col_users.get(c, set()).discard(other_col)
            prow.rhs = prow.rhs - row.rhs * f
        ech.pivots[piv] = row
        for c in row.coeffs:
            if c != piv:
                col_users.setdefault(c, set()).add(piv)
    return ech


@dataclass
class Solution:
    rank: int
    kernel: List[Dict[int, Fraction]]
    particular: Optional[Dict[int, Fraction]]
    witness: Optional[Row] = None

    @property
    def consistent(self) -> bool:
        return self.witness is None


def rank_and_kernel(rows: Sequence[Row], unknowns: Sequence[int]) -> Solution:
    """Rank, kernel basis and a particular solution (or an inconsistency witness)."""
    ech = eliminate(rows)
    free = [u for u in unknowns if u not in ech.pivots]
    kernel = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, row in ech.pivots.items():
            v = row.coeffs.get(f)
            if v:
                vec[p] = -v
        kernel.append(vec)
    witness = next((r for r in ech.conditions if r.rhs), None)
    part = None
    if witness is None:
        part = {p: Fraction(row.rhs) for p, row in ech.pivots.items() if row.rhs}
    return Solution(ech.rank(), kernel, part, witness)


def matrix_rank(mat: Sequence[Sequence]) -> int:
    rows = [Row({j: Fraction(v) for j, v in enumerate(r) if v}) for r in mat]
    return eliminate(rows).rank()


# -- layered fiber-dimension engine --------------------------------------

class AFPViolation(ArithmeticError):
    """A solvability condition is not affine in the free parameters."""


@dataclass
class FiberTable:
    """d_r<j> for 0 <= j <= r <= R, with the order where inconsistency hit."""

    rows: List[List[int]] = field(default_factory=list)
    inconsistent_at: Optional[int] = None
    witness: str = ""

    def entry(self, r: int, j: int) -> int:
        return self.rows[r][j]

    def row(self, r: int) -> Tuple[int, ...]:
        return tuple(self.rows[r])

    def render(self) -> str:
        n = len(self.rows)
        width = max([len(str(x)) for row in self.rows for x in row] + [1]) + 1
        head = "   |" + "".join(f"{j:>{width}}" for j in range(n))
        lines = [head, "-" * len(head)]
        for r, row in enumerate(self.rows):
            lines.append(f"{r:>2} |" + "".join(f"{x:>{width}}" for x in row))
        if self.inconsistent_at is not None:
            lines.append(f"inconsistent at order {self.inconsistent_at}: {self.witness}")
        return "\n".join(lines)

    def records(self) -> List[str]:
        out = [f"d r={r} j={j} dim={x}" for r, row in enumerate(self.rows) for j, x in enumerate(row)]
        if self.inconsistent_at is not None:
            out.append(f"inconsistent r={self.inconsistent_at}")
        return out


@dataclass
class LayeredResult:
    table: FiberTable
    operation: object            # FQOperation with Poly coefficients
    levels: Dict[int, int]       # live parameter id -> expansion level


def _substitute_all(table: Dict[int, Dict], mapping: Dict[int, Poly]) -> None:
    for comp in table.values():
        for w, c in comp.items():
            if isinstance(c, Poly):
                comp[w] = c.subs(mapping)


def solve_layered(specs, kind: str, max_order: int, reduced: Optional[bool] = None,
                  log=None) -> LayeredResult:
    """Run the layered affine solver through ``max_order``.

    With ``reduced`` (the default whenever the property set is about
    natural operations, i.e. always for the built-in property tags) the
    unknowns are the circular {1..5}-coefficients.
    """
    from .fqop import COMPONENTS, FQOperation
    from .invariance import (
        REDUCED_LETTERS, ALL_LETTERS, OpContext, residuals, words,
    )
    from .bases import CIRCULAR

    reduced = True if reduced is None else reduced
    letters = REDUCED_LETTERS if reduced else ALL_LETTERS
    comps: Dict[int, Dict] = {s: {} for s in COMPONENTS[kind]}
    levels: Dict[int, int] = {}
    counter = 0
    table = FiberTable()
    for r in range(max_order + 1):
        ids: Dict[Tuple[int, tuple], int] = {}
        for s in COMPONENTS[kind]:
            for w in words(letters, r):
                ids[(s, w)] = counter
                comps[s][w] = Poly.var(counter)
                counter += 1
        top = set(ids.values())
        op = FQOperation(kind, r, CIRCULAR, comps)
        ctx = OpContext(op, reduced=reduced)
        linear: List[Row] = []
        nonlinear: List[Tuple[str, Poly]] = []
        for spec in specs:
            for label, v in residuals(ctx, spec, r):
                v = Poly.lift(v)
                if not v:
                    continue
                lin, rest, bad = v.split_linear(top)
                if bad:
                    nonlinear.append((label, v))
                    continue
                linear.append(Row(lin, -rest, label))
        ech = eliminate(linear)
        pivots = ech.pivots
        free = sorted(top - set(pivots))
        expr: Dict[int, Poly] = {}
        for p, row in pivots.items():
            e = Poly.lift(row.rhs)
            for c, v in row.coeffs.items():
                if c != p:
                    e = e - Poly.var(c) * v
            expr[p] = e
        conds: List[Tuple[str, Poly]] = [(row.label, Poly.lift(row.rhs)) for row in ech.conditions]
        for label, v in nonlinear:
            v = v.subs(expr)
            lin, rest, bad = v.split_linear(set(free))
            if bad or lin:
                raise ValueError(f"residual {label} is not linear in the order-{r} unknowns")
            if rest:
                conds.append((label, -rest))
        for i in free:
            levels[i] = r
        _substitute_all(comps, expr)
        # solvability conditions on lower parameters
        pending = [(label, Poly.lift(c)) for label, c in conds]
        while pending:
            label, c = pending.pop(0)
            if not c:
                continue
            if c.degree() > 1:
                raise AFPViolation(f"order {r}: condition {label} is not affine: {c}")
            if c.is_const():
                table.inconsistent_at = r
                table.witness = f"{label}: {c} = 0"
                break
            var = max(c.variables(), key=lambda i: (levels[i], i))
            coef = c.t[(var,)]
            mapping = {var: -(c - Poly.var(var) * coef) / coef}
            del levels[var]
            _substitute_all(comps, mapping)
            pending = [(lb, x.subs(mapping)) for lb, x in pending]
        row = [sum(1 for v in levels.values() if v == j) for j in range(r + 1)]
        table.rows.append(row)
        if log:
            log(f"order {r}: unknowns={len(ids)} rows={len(linear)} rank={len(pivots)} dims={row}")
        if table.inconsistent_at is not None:
            break
    op = FQOperation(kind, max_order, CIRCULAR, comps)
    return LayeredResult(table, op, levels)


def fiber_dimensions(specs, kind: str, max_order: int, **kw) -> FiberTable:
    return solve_layered(specs, kind, max_order, **kw).table


def solve_unique(specs, kind: str, order: int):
    """The unique operation (reduced circular data) satisfying ``specs``."""
    from .fqop import FQOperation

    res = solve_layered(specs, kind, order)
    if res.table.inconsistent_at is not None:
        raise ArithmeticError(f"properties are inconsistent: {res.table.witness}")
    if res.levels:
        raise ArithmeticError(f"properties leave {len(res.levels)} free parameters")
    return res.operation.map_coeffs(lambda c: Poly.lift(c).const_value())
