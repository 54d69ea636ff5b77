"""Operation calculus: composition, inversion and the layered slice maps.

Everything here works around the fixed Clifford system (Q1, Q2) in split
coordinates.  An order-r slice is a tuple of homogeneous degree-r algebra
elements with prescribed Clifford tails; linear maps between slices are
tabulated as sparse matrices so that kernels and images can be compared
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bases import ONE, Q1, Q2, Q12, SPLIT, MIXED, Word
from .fqop import (
    COMPONENTS, TAIL, VECTORIAL, FirstDifferential, FQOperation, constant_op,
    extract_coordinates, first_differential, from_elements, identity_differential,
    linear_operation, substitute_series,
)
from .linsolve import Poly, Row, eliminate
from .ncalgebra import AlgebraElement, anticommutator, commutator, conj_project, grade_project, mul, neumann_inverse

LETTERS = tuple(range(1, 9))

PRODUCTIVITY = "ProductivityAtQ"
INVOLUTIVE = "InvolutiveAtL"
IDEMPOTENT = "IdempotentAtL"
THREE_IDEMPOTENT = "ThreeIdempotentAtL"
CONTEXTS = (PRODUCTIVITY, INVOLUTIVE, IDEMPOTENT, THREE_IDEMPOTENT)


class PropertyViolation(ArithmeticError):
    def __init__(self, message: str, order: int):
        super().__init__(message)
        self.order = order


# -- composition and inversion ---------------------------------------------

def is_clifford_conservative(op: FQOperation) -> bool:
    return op.kind == VECTORIAL and all(op.coeff(s, ()) == 1 for s in (1, 2))


def _cliff(g: int, order: int, c=1) -> AlgebraElement:
    return AlgebraElement.cliff(g, SPLIT, order, c=c)


def compose(outer: FQOperation, inner: FQOperation, order: Optional[int] = None) -> FQOperation:
    """outer o inner, for a Clifford conservative vectorial inner operation.

    The inner output is read as a new perturbation of (Q1, Q2); its split
    coordinates are substituted into the split series of ``outer``.
    """
    if inner.kind != VECTORIAL:
        raise ValueError("inner operation must be vectorial")
    if not is_clifford_conservative(inner):
        raise ValueError("inner operation is not Clifford conservative "
                         "(substituted coordinates would have order-0 parts)")
    order = min(outer.order, inner.order) if order is None else order
    sp = inner.to_basis(SPLIT)
    r1 = sp.element(1, order) - _cliff(Q1, order)
    r2 = sp.element(2, order) - _cliff(Q2, order)
    coords = extract_coordinates(r1, r2, SPLIT)
    table = outer.to_basis(SPLIT)
    vals = {
        s: substitute_series(table.components[s], coords, SPLIT, order) * _cliff(TAIL[s], order)
        for s in COMPONENTS[outer.kind]
    }
    try:
        out = from_elements(vals, outer.kind, order=order)
    except ValueError as exc:
        raise ValueError(f"composition left a residual Clifford part: {exc}") from exc
    return _clean(out).to_basis(outer.basis)


def _clean(op: FQOperation) -> FQOperation:
    return FQOperation(op.kind, op.order, op.basis, {
        s: {w: c for w, c in t.items() if c} for s, t in op.components.items()})


def identity_op(order: int, basis: str = SPLIT) -> FQOperation:
    return linear_operation(identity_differential(), order, basis)


def clifford_op(order: int) -> FQOperation:
    """E: the operation returning (Q1, Q2) itself."""
    return constant_op(VECTORIAL, order, SPLIT)


def layer_op(op: FQOperation, r: int) -> FQOperation:
    """The homogeneous degree-r part, as an operation without order-0 term."""
    return FQOperation(op.kind, op.order, op.basis, {s: op.layer(s, r) for s in op.components})


def _mat2_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def differential_product(l2: FirstDifferential, l1: FirstDifferential) -> FirstDifferential:
    """Componentwise product l2 . l1."""
    return tuple(_mat2_mul(a, b) for a, b in zip(l2, l1))


class SingularDifferential(ArithmeticError):
    pass


def differential_inverse(L: FirstDifferential) -> FirstDifferential:
    out = []
    for k, ((a, b), (c, d)) in enumerate(L):
        det = Fraction(a) * d - Fraction(b) * c
        if not det:
            raise SingularDifferential(f"first differential block {k + 1} is singular")
        out.append(((d / det, -b / det), (-c / det, a / det)))
    return tuple(out)


def invert(op: FQOperation) -> FQOperation:
    """Compositional inverse by the fixed-point iteration Phi + Loc_{L^-1}(Id - Phi o Psi)."""
    if not is_clifford_conservative(op):
        raise ValueError("inversion needs a Clifford conservative vectorial operation")
    L = first_differential(op)
    linv = differential_inverse(L)
    order = op.order
    ident = identity_op(order)
    phi = linear_operation(linv, order, SPLIT)
    for r in range(2, order + 1):
        defect = layer_op(ident - compose(phi, op, r), r).with_order(r)
        if defect.is_zero():
            continue
        phi = phi + loc(linv, defect).with_order(order)
        phi = phi.with_order(order)
    return _clean(phi).to_basis(op.basis)


# -- Glob and Loc ----------------------------------------------------------

def _homogeneous_degree(lam: FQOperation) -> int:
    degrees = {len(w) for t in lam.components.values() for w, c in t.items() if c}
    if len(degrees) > 1:
        raise ValueError("Lambda must be homogeneous of a single order")
    if 0 in degrees:
        raise ValueError("Lambda must have no order-0 part")
    return degrees.pop() if degrees else lam.order


def _shift(lam: FQOperation, r: int) -> FQOperation:
    """E + Lambda at order r."""
    return clifford_op(r) + lam.to_basis(SPLIT).with_order(r)


def loc(L: FirstDifferential, lam: FQOperation) -> FQOperation:
    """(E + Lambda) o (E + T(L)) - E."""
    r = _homogeneous_degree(lam)
    out = compose(_shift(lam, r), linear_operation(L, r, SPLIT), r)
    return layer_op(out, r).to_basis(lam.basis)


def glob(L: FirstDifferential, lam: FQOperation) -> FQOperation:
    """(E + T(L)) o (E + Lambda) - E."""
    r = _homogeneous_degree(lam)
    out = compose(linear_operation(L, r, SPLIT), _shift(lam, r), r)
    return layer_op(out, r).to_basis(lam.basis)


def glob_loc(op: FQOperation, L: FirstDifferential, side: str) -> FQOperation:
    """Glob_L or Loc_L of Lambda, where op = E + Lambda."""
    if not is_clifford_conservative(op):
        raise ValueError("expected an operation of the form E + Lambda")
    lam = op.to_basis(SPLIT)
    lam = FQOperation(VECTORIAL, op.order, SPLIT,
                      {s: {w: c for w, c in t.items() if w} for s, t in lam.components.items()})
    if side == "Glob":
        return glob(L, lam)
    if side == "Loc":
        return loc(L, lam)
    raise ValueError("side must be Glob or Loc")


# -- the odot square ---------------------------------------------------------

@dataclass
class OdotSquare:
    s11: AlgebraElement
    s12: AlgebraElement
    s22: AlgebraElement

    def as_tuple(self):
        return self.s11, self.s12, self.s22

    def is_clifford(self) -> bool:
        o = self.s11.order
        minus = AlgebraElement.scalar(-1, self.s11.basis, o)
        return self.s11 == minus and not self.s12 and self.s22 == minus


def odot_square(op: FQOperation, order: Optional[int] = None) -> OdotSquare:
    if op.kind != VECTORIAL:
        raise ValueError("odot square needs a vectorial operation")
    order = op.order if order is None else order
    sp = op.to_basis(SPLIT)
    p1, p2 = sp.element(1, order), sp.element(2, order)
    return OdotSquare(p1 * p1, p1 * p2 + p2 * p1, p2 * p2)


# -- slices and linear maps --------------------------------------------------

Key = Tuple[int, Word]
Vector = Dict[Key, Fraction]


@dataclass(frozen=True)
class Slice:
    """Homogeneous degree-r tuples (f_i * tail_i) in split letters."""

    tails: Tuple[int, ...]
    order: int

    def keys(self) -> List[Key]:
        return [(i, w) for i in range(len(self.tails)) for w in product(LETTERS, repeat=self.order)]

    def dim(self) -> int:
        return len(self.tails) * 8 ** self.order

    def to_elements(self, vec: Vector) -> Tuple[AlgebraElement, ...]:
        parts: List[Dict] = [{} for _ in self.tails]
        for (i, w), c in vec.items():
            if c:
                parts[i][(w, self.tails[i])] = c
        return tuple(AlgebraElement(p, SPLIT, self.order) for p in parts)

    def from_elements(self, elems: Sequence[AlgebraElement]) -> Vector:
        out: Vector = {}
        for i, (x, g) in enumerate(zip(elems, self.tails)):
            for (w, h), c in x.terms.items():
                if not c:
                    continue
                if h != g or len(w) != self.order:
                    raise ValueError(f"element leaves the slice (component {i}, word {w}, part {h})")
                out[(i, w)] = c
        return out


SCALAR_SLICE = (ONE,)
VECTOR_SLICE = (Q1, Q2)
TRIPLE_SLICE = (ONE, Q12, ONE)


class Linear:
    """Sparse matrix between slices, stored by columns."""

    def __init__(self, dom: Slice, cod: Slice, cols: Dict[Key, Vector]):
        self.dom, self.cod, self.cols = dom, cod, cols

    @classmethod
    def tabulate(cls, fn: Callable[[Vector], Vector], dom: Slice, cod: Slice) -> "Linear":
        cols = {}
        for k in dom.keys():
            v = fn({k: Fraction(1)})
            cols[k] = {a: c for a, c in v.items() if c}
        return cls(dom, cod, cols)

    @classmethod
    def identity(cls, s: Slice) -> "Linear":
        return cls(s, s, {k: {k: Fraction(1)} for k in s.keys()})

    def __call__(self, vec: Vector) -> Vector:
        out: Dict[Key, object] = {}
        for k, x in vec.items():
            if not x:
                continue
            for a, c in self.cols.get(k, {}).items():
                out[a] = out.get(a, 0) + c * x
        return {a: c for a, c in out.items() if c}

    def __matmul__(self, other: "Linear") -> "Linear":
        return Linear(other.dom, self.cod, {k: self(v) for k, v in other.cols.items()})

    def __add__(self, other: "Linear") -> "Linear":
        cols = {}
        for k in set(self.cols) | set(other.cols):
            v = dict(self.cols.get(k, {}))
            for a, c in other.cols.get(k, {}).items():
                v[a] = v.get(a, 0) + c
            cols[k] = {a: c for a, c in v.items() if c}
        return Linear(self.dom, self.cod, cols)

    def __neg__(self) -> "Linear":
        return self.scale(-1)

    def __sub__(self, other: "Linear") -> "Linear":
        return self + (-other)

    def scale(self, a) -> "Linear":
        a = Fraction(a)
        return Linear(self.dom, self.cod, {k: {b: c * a for b, c in v.items()} for k, v in self.cols.items()})

    __rmul__ = scale

    def rank(self) -> int:
        index = {k: i for i, k in enumerate(self.cod.keys())}
        return eliminate([Row({index[a]: c for a, c in v.items()}) for v in self.cols.values() if v]).rank()

    def is_zero(self) -> bool:
        return not any(self.cols.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Linear):
            return NotImplemented
        return (self - other).is_zero()


@dataclass
class LayeredOperator:
    name: str
    context: str
    order: int
    matrix: Linear

    def __call__(self, vec: Vector) -> Vector:
        return self.matrix(vec)


def _elementwise(fn, dom: Slice, cod: Slice) -> Linear:
    return Linear.tabulate(lambda v: cod.from_elements(fn(*dom.to_elements(v))), dom, cod)


def _productivity_maps(r: int) -> Dict[str, Linear]:
    S, V, W = Slice(SCALAR_SLICE, r), Slice(VECTOR_SLICE, r), Slice(TRIPLE_SLICE, r)
    q1, q2, q12 = _cliff(Q1, r), _cliff(Q2, r), _cliff(Q12, r)
    q1inv, q2inv = _cliff(Q1, r, -1), _cliff(Q2, r, -1)
    h, q, e = Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)

    def kappa(v1, v2):
        a, b = v1 * q1inv, v2 * q2inv
        return (grade_project(a, 1, 0).scale(h) + grade_project(a, 1, 1).scale(q)
                + grade_project(b, 0, 1).scale(h) + grade_project(b, 1, 1).scale(q),)

    def cokappa(w1, w12, w2):
        m = anticommutator(w12, q12).scale(e)
        return (anticommutator(w1, q1).scale(-q) - m * q1,
                anticommutator(w2, q2).scale(-q) + m * q2)

    def coeta(w1, w12, w2):
        # The printed middle entry repeats (W1)^0_Q1 with both signs; the
        # second copy is read as (W2)^0_Q2.  Its kernel would still contain
        # the part of W12 Q12^-1 commuting with Q1 and Q2, which is never
        # hit by coλ, so (W12)^11 is added to make ker coη = im coλ.
        return (conj_project(w1, Q1, 1),
                commutator(conj_project(w1, Q1, 0), q12).scale(h) + conj_project(w12, Q12, 1)
                - commutator(conj_project(w2, Q2, 0), q12).scale(h) + grade_project(w12, 1, 1),
                conj_project(w2, Q2, 1))

    maps = {
        "η": _elementwise(lambda u: (grade_project(u, 0, 0),), S, S),
        "λ": _elementwise(lambda u: (u * q1 - q1 * u, u * q2 - q2 * u), S, V),
        "ϰ": _elementwise(kappa, V, S),
        "coλ": _elementwise(lambda v1, v2: (anticommutator(v1, q1),
                                            anticommutator(v2, q1) + anticommutator(v1, q2),
                                            anticommutator(v2, q2)), V, W),
        "coϰ": _elementwise(cokappa, W, V),
        "coη": _elementwise(coeta, W, W),
    }
    maps["π"] = maps["λ"] @ maps["ϰ"]
    maps["coπ"] = maps["coϰ"] @ maps["coλ"]
    return maps


def _vector_to_op(vec: Vector, r: int) -> FQOperation:
    comps = {1: {}, 2: {}}
    for (i, w), c in vec.items():
        comps[i + 1][w] = c
    return FQOperation(VECTORIAL, r, SPLIT, comps)


def _op_to_vector(op: FQOperation, r: int) -> Vector:
    sp = op.to_basis(SPLIT)
    return {(s - 1, w): c for s in (1, 2) for w, c in sp.layer(s, r).items() if c}


def action_matrix(L: FirstDifferential, r: int, side: str) -> Linear:
    V = Slice(VECTOR_SLICE, r)
    act = glob if side == "Glob" else loc
    return Linear.tabulate(lambda v: _op_to_vector(act(L, _vector_to_op(v, r)), r), V, V)


def _differential_maps(context: str, L: FirstDifferential, r: int) -> Dict[str, Linear]:
    V = Slice(VECTOR_SLICE, r)
    I = Linear.identity(V)
    Lc, G = action_matrix(L, r, "Loc"), action_matrix(L, r, "Glob")
    LG = Lc @ G
    h, q = Fraction(1, 2), Fraction(1, 4)
    if context == INVOLUTIVE:
        maps = {"λ": Lc - G, "coλ": Lc + G, "ϰ": (Lc - G).scale(q), "coϰ": (Lc + G).scale(q),
                "π": (I - LG).scale(h), "coπ": (I + LG).scale(h)}
    elif context == IDEMPOTENT:
        # ϰ_L is printed equal to λ_L here, without the factor 1/4
        maps = {"λ": Lc - G, "coλ": Lc + G - I, "ϰ": Lc - G, "coϰ": Lc + G - I,
                "coπ": I - Lc - G + LG.scale(2)}
        maps["π"] = maps["ϰ"] @ maps["λ"]
    elif context == THREE_IDEMPOTENT:
        L2, G2 = Lc @ Lc, G @ G
        t = Fraction(3, 4)
        maps = {"λ": Lc - G, "coλ": L2 + LG + G2 - I,
                "ϰ": Lc - G + (L2 @ G).scale(t) - (Lc @ G2).scale(t),
                "coϰ": (L2 @ G2).scale(-t) + LG.scale(q) + G2 + L2 - I,
                "coπ": I - L2 - G2 + (L2 @ G2).scale(Fraction(3, 2)) + LG.scale(h)}
        maps["π"] = maps["ϰ"] @ maps["λ"]
    else:
        raise ValueError(f"unknown context {context!r}")
    maps["Loc"], maps["Glob"] = Lc, G
    return maps


_MAP_CACHE: Dict[object, Dict[str, Linear]] = {}


def layered_maps(context: str, order: int, L: Optional[FirstDifferential] = None) -> Dict[str, LayeredOperator]:
    """The slice maps of ``context`` at ``order``."""
    if order < 1:
        raise ValueError("slice maps start at order 1")
    if context == PRODUCTIVITY:
        key = (context, order)
    else:
        if L is None:
            raise ValueError(f"{context} needs a first differential L")
        _check_type(context, L)
        key = (context, order, L)
    mats = _MAP_CACHE.get(key)
    if mats is None:
        mats = _productivity_maps(order) if context == PRODUCTIVITY else _differential_maps(context, L, order)
        _MAP_CACHE[key] = mats
    return {n: LayeredOperator(n, context, order, m) for n, m in mats.items()}


def _check_type(context: str, L: FirstDifferential) -> None:
    L2 = differential_product(L, L)
    if context == INVOLUTIVE:
        ok = L2 == identity_differential()
    elif context == IDEMPOTENT:
        ok = L2 == L
    else:
        ok = differential_product(L2, L) == L
    if not ok:
        raise ValueError(f"L does not have the type required by {context}")


# -- layered restrictive equations -------------------------------------------

@dataclass
class LayeredRow:
    order: int
    coeffs: Dict[Tuple[int, Word], Fraction]   # split unknowns p[s]_w
    rhs: Fraction
    label: str = ""


def _lower_part(op: FQOperation, r: int) -> FQOperation:
    sp = op.to_basis(SPLIT)
    return FQOperation(VECTORIAL, r, SPLIT, {s: {w: c for w, c in t.items() if len(w) < r}
                                             for s, t in sp.components.items()})


def _known_term(context: str, low: FQOperation, r: int) -> Vector:
    V = Slice(VECTOR_SLICE, r)
    if context == PRODUCTIVITY:
        sq = odot_square(low, r)
        W = Slice(TRIPLE_SLICE, r)
        return W.from_elements(tuple(x.homogeneous(r) for x in sq.as_tuple()))
    comp = compose(low, low, r)
    if context == THREE_IDEMPOTENT:
        comp = compose(low, comp, r)
    return V.from_elements((comp.element(1, r).homogeneous(r), comp.element(2, r).homogeneous(r)))


def layered_equations(context: str, op: FQOperation, r: int,
                      L: Optional[FirstDifferential] = None) -> List[LayeredRow]:
    """coπ Ψ^<r> + coϰ(known^<r>) = 0 as independent rows in the order-r split unknowns.

    The lower orders of ``op`` are taken as fixed; its order-r part is
    ignored.  ``known`` is Ψ^{<=r-1} ⊙ Ψ^{<=r-1} for productivity and the
    two- or threefold self-composition otherwise.
    """
    if context != PRODUCTIVITY and L is None:
        L = first_differential(op)
    maps = layered_maps(context, r, L)
    low = _lower_part(op, r)
    rhs = maps["coϰ"](_known_term(context, low, r))
    copi = maps["coπ"].matrix
    V = Slice(VECTOR_SLICE, r)
    keys = V.keys()
    index = {k: n for n, k in enumerate(keys)}
    rowdata: Dict[Key, Dict[int, Fraction]] = {}
    for k, col in copi.cols.items():
        for a, c in col.items():
            rowdata.setdefault(a, {})[index[k]] = c
    rows = [Row(rowdata.get(a, {}), -rhs.get(a, 0), f"{context} r={r} [{a[0] + 1}]{a[1]}")
            for a in keys if rowdata.get(a) or rhs.get(a)]
    ech = eliminate(rows)
    out = []
    for row in ech.conditions:
        out.append(LayeredRow(r, {}, Fraction(row.rhs), row.label))
    for p in sorted(ech.pivots):
        row = ech.pivots[p]
        out.append(LayeredRow(r, {(keys[c][0] + 1, keys[c][1]): v for c, v in row.coeffs.items()},
                              Fraction(row.rhs), row.label))
    return out


# -- conjugation forms --------------------------------------------------------

@dataclass
class ConjugationForm:
    context: str
    order: int
    modifiers: Dict[int, object] = field(default_factory=dict)   # r -> U^<r>
    L: Optional[FirstDifferential] = None

    def synthesize(self) -> FQOperation:
        if self.context == PRODUCTIVITY:
            return _synth_productive(self.modifiers, self.order)
        return _synth_involutive(self.L, self.modifiers, self.order)


def _synth_productive(mods: Dict[int, AlgebraElement], order: int) -> FQOperation:
    p = AlgebraElement.scalar(1, SPLIT, order)
    for r in sorted(mods):
        p = (AlgebraElement.scalar(1, SPLIT, order) + mods[r].with_order(order)) * p
    pinv = neumann_inverse(p)
    vals = {1: p * _cliff(Q1, order) * pinv, 2: p * _cliff(Q2, order) * pinv}
    return _clean(from_elements(vals, VECTORIAL, order=order))


def _synth_involutive(L, mods: Dict[int, FQOperation], order: int) -> FQOperation:
    psi = linear_operation(L, order, SPLIT)
    for r in sorted(mods):
        g = identity_op(order) + mods[r].with_order(order)
        psi = compose(g, compose(psi, invert(g), order), order)
    return _clean(psi)


def conjugation_form(op: FQOperation, context: str = PRODUCTIVITY) -> ConjugationForm:
    """Recover the economical modifiers U^<r> of ``op`` order by order."""
    if not is_clifford_conservative(op):
        raise ValueError("conjugation form needs a Clifford conservative vectorial operation")
    order = op.order
    sp = op.to_basis(SPLIT)
    if context == PRODUCTIVITY:
        form = ConjugationForm(context, order)
        start = 1
    elif context == INVOLUTIVE:
        L = first_differential(op)
        if differential_product(L, L) != identity_differential():
            raise PropertyViolation("first differential is not an involution", 1)
        form = ConjugationForm(context, order, L=L)
        start = 2
    else:
        raise ValueError("conjugation forms exist for productivity and involutivity")
    for r in range(start, order + 1):
        current = form.synthesize()
        diff = _op_to_vector(sp - current, r)
        maps = layered_maps(context, r, form.L)
        u = maps["ϰ"](diff)
        if maps["λ"](u) != diff:
            raise PropertyViolation(f"{context} fails at order {r}", r)
        if not u:
            continue
        if context == PRODUCTIVITY:
            form.modifiers[r] = Slice(SCALAR_SLICE, r).to_elements(u)[0]
        else:
            form.modifiers[r] = _vector_to_op(u, r)
    return form


# -- principal types ---------------------------------------------------------

PRINCIPAL_PROPS = "CC + Opp + O2"
PRINCIPAL_TAGS = ("Inv", "Idm", "I3")


def _principal_family():
    """Order-1 natural Opp + O2 operations: mixed split Poly data and its parameters."""
    from .invariance import natural_extend, parse_properties
    from .linsolve import solve_layered

    res = solve_layered(parse_properties(PRINCIPAL_PROPS), VECTORIAL, 1)
    return natural_extend(res.operation, MIXED), sorted(res.levels)


def principal_operation(a, b, c, order: int = 1) -> FQOperation:
    """The order-1 family member with p̂[1]_1 = p̂[1]_2 = a, p̂[1]_3 = b, p̂[1]_4 = p̂[1]_5 = c."""
    fam, params = _principal_family()
    rows = [Row(dict(Poly.lift(fam.coeff(1, (j,))).split_linear(set(params))[0]),
                Fraction(v) - Poly.lift(fam.coeff(1, (j,))).const_value())
            for j, v in ((1, a), (2, a), (3, b), (4, c), (5, c))]
    ech = eliminate(rows)
    if ech.conditions or len(ech.pivots) != len(params):
        raise ValueError("values do not single out a member of the principal family")
    sub = {p: Poly.const(ech.pivots[p].rhs) for p in params}
    op = fam.map_coeffs(lambda x: Poly.lift(x).subs(sub).const_value())
    return _clean(op).with_order(order)


def principal_types(tag: str) -> List[Dict[str, Fraction]]:
    """Order-1 members whose first differential is an involution (Inv),
    an idempotent (Idm) or a 3-idempotent (I3), listed by p̂[1]_1..p̂[1]_5.
    """
    import sympy

    if tag not in PRINCIPAL_TAGS:
        raise ValueError(f"tag must be one of {', '.join(PRINCIPAL_TAGS)}")
    fam, params = _principal_family()
    full = fam.to_basis(SPLIT)
    syms = {i: sympy.Symbol(f"t{i}") for i in params}

    def to_sym(c):
        expr = sympy.Integer(0)
        for mono, v in Poly.lift(c).t.items():
            term = sympy.Rational(v.numerator, v.denominator)
            for i in mono:
                term *= syms[i]
            expr += term
        return expr

    eqs = []
    for k in range(1, 5):
        m = sympy.Matrix([[to_sym(full.coeff(s, (j,))) for j in (k, k + 4)] for s in (1, 2)])
        lhs, rhs = {"Inv": (m * m, sympy.eye(2)), "Idm": (m * m, m), "I3": (m * m * m, m)}[tag]
        eqs.extend(x for x in (sympy.expand(y) for y in lhs - rhs) if x != 0)
    sols = sympy.solve(eqs, list(syms.values()), dict=True) if eqs else [{}]
    out = []
    for sol in sols:
        row = {}
        for j in range(1, 6):
            v = sympy.nsimplify(to_sym(fam.coeff(1, (j,))).subs(sol))
            if v.free_symbols:
                raise ArithmeticError(f"{tag}: order-1 solution set is not finite")
            row[f"p{j}"] = Fraction(int(v.p), int(v.q))
        out.append(row)
    out.sort(key=lambda d: tuple(d.values()))
    return out
