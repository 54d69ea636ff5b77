"""Fast golden-value checks behind ``fqops selftest``."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Tuple

from . import golden
from .bases import CHAR_TABLE, CIRCULAR, MIXED, char_mul
from .fqop import COMPONENTS, SCALAR, VECTORIAL

Check = Tuple[str, bool, str]


def coefficient_table(op, s: int, r: int):
    """Order-r data of component s: a scalar, an 8-row or an 8x8 matrix."""
    if r == 0:
        return op.coeff(s, ())
    if r == 1:
        return [op.coeff(s, (i,)) for i in range(1, 9)]
    if r == 2:
        return [[op.coeff(s, (i, j)) for j in range(1, 9)] for i in range(1, 9)]
    raise ValueError("tables are shown up to order 2")


def _expansions() -> Iterator[Check]:
    from .library import builtin

    for (name, s, basis), data in golden.EXPANSIONS.items():
        order = max(data)
        op = builtin(name, order, basis)
        for r, want in data.items():
            got = coefficient_table(op, s, r)
            ok = got == want
            yield f"{name}[{s}] {basis} order {r}", ok, "" if ok else f"got {got}"
        if name in ("One", "Id", "PseudoDet"):
            top = {"One": 0, "Id": 1, "PseudoDet": 2}[name]
            op5 = builtin(name, 5, basis)
            extra = [w for t in op5.components.values() for w in t if len(w) > top]
            yield f"{name} {basis} vanishes past order {top}", not extra, str(extra[:3])


def _characters() -> Iterator[Check]:
    ok = [list(r) for r in CHAR_TABLE] == golden.CHARACTER_TABLE
    yield "character table", ok, ""
    e = [i for i in range(1, 9) if all(char_mul(i, j) == j for j in range(1, 9))]
    yield "character identity is 3", e == [3], str(e)


def _p45_identity() -> Iterator[Check]:
    from .library import builtin

    for name in ("Id", "PseudoDet", "OSy"):
        op = builtin(name, 1, MIXED)
        circ = op.to_basis(CIRCULAR)
        for s in COMPONENTS[op.kind]:
            h4, h5 = op.coeff(s, (4,)), op.coeff(s, (5,))
            ok = (circ.coeff(s, (4,)) == (h4 + h5) / 2 and circ.coeff(s, (5,)) == (h4 - h5) / 2)
            yield f"p4/p5 circular identity on {name}[{s}]", ok, ""


def _naturality() -> Iterator[Check]:
    from .invariance import natural_extend, natural_reduce
    from .library import builtin, reduced_builtin

    for r in (1, 2):
        osy = builtin("OSy", r, MIXED)
        ok = natural_extend(natural_reduce(osy), MIXED) == osy
        yield f"OSy natural round trip order {r}", ok, ""
    red = reduced_builtin("OSy", 2)
    yield "OSy reduced data is (1, 1)", red.components == {1: {(): 1}, 2: {(): 1}}, str(red.components)


def _fibers() -> Iterator[Check]:
    from .invariance import parse_properties
    from .linsolve import fiber_dimensions

    for case in ("i", "iii"):
        t = fiber_dimensions(parse_properties(golden.fiber_properties(case)), VECTORIAL, 3)
        want = golden.FIBER_TABLES[case][:4]
        ok = tuple(t.row(r) for r in range(4)) == want and t.inconsistent_at is None
        yield f"fiber table ({case}) through order 3", ok, t.render()


def _classification() -> Iterator[Check]:
    from .invariance import parse_properties
    from .linsolve import solve_unique

    op = solve_unique(parse_properties("Liv + O2 + CC"), SCALAR, 3)
    ok = op.components == {0: {(): 1}}
    yield "left-variant scalar is constant 1", ok, str(op.components)


def _principal() -> Iterator[Check]:
    from .calculus import principal_types

    for tag, n in golden.PRINCIPAL_COUNTS.items():
        got = len(principal_types(tag))
        yield f"principal {tag} count", got == n, f"got {got}"


def _floating() -> Iterator[Check]:
    from .library import floating_series

    f4, f5 = floating_series(2)
    ok = f4.terms == {((2, 1), 0): Fraction(1)} and f5.terms == {((1, 2), 0): Fraction(1)}
    yield "floating leading terms", ok, f"{f4.terms} {f5.terms}"


# Clifford conservative: A^3 + A and A2 A1 A1 + A2 vanish on Clifford systems
SAMPLE_CC = "(A1 + (A1*A1*A1 + A1)/3, A2 - (A2*A1*A1 + A2)/3)"


def load_expression(text: str, order: int):
    from .cli import parse_expression
    from .fqop import evaluate_expression

    return evaluate_expression(parse_expression(text), VECTORIAL, order, MIXED)


def _calculus() -> Iterator[Check]:
    from .calculus import compose, invert
    from .fqop import first_differential
    from .library import builtin

    osy = builtin("OSy", 3, MIXED)
    yield "OSy is idempotent", compose(osy, osy, 3).to_basis(MIXED) == osy, ""
    psi = load_expression(SAMPLE_CC, 3)
    ident = builtin("Id", 3, MIXED)
    ok = compose(invert(psi), psi, 3).to_basis(MIXED) == ident
    yield "inverse of a sample CC operation composes to Id", ok, ""
    d = first_differential(ident)
    yield "D Id is the identity", all(m == ((1, 0), (0, 1)) for m in d), str(d)


def _cli() -> Iterator[Check]:
    import contextlib
    import io

    from .cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(["solve", "CC + Opp + O2 + CP", "--order", "2", "--records"])
    ok = code == 0 and "d r=2 j=2 dim=2" in buf.getvalue()
    yield "cli solve records", ok, buf.getvalue()
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        code = main(["check", "OSy", "Frobnicate"])
    yield "cli usage error exit code", code == 2, f"got {code}"


def _bases_examples() -> Iterator[Check]:
    from .bases import SPLIT, Q1, Q2, Q12, apply_derivation, conjugate_word, transform_element
    from .ncalgebra import AlgebraElement

    h = Fraction(1, 2)
    for (i, j), k in (((1, 1), 3), ((3, 7), 7), ((5, 7), 1)):
        yield f"char_mul({i},{j}) = {k}", char_mul(i, j) == k, ""
    var = AlgebraElement.var
    got = transform_element(var(3, MIXED), SPLIT)
    yield "mixed r3 in split", got == var(1, SPLIT, 1, h) + var(5, SPLIT, 1, h), repr(got)
    got = transform_element(var(1, SPLIT), MIXED)
    yield "split r1 in mixed", got == var(3, MIXED) + var(4, MIXED), repr(got)
    got = transform_element(var(4, CIRCULAR), MIXED)
    yield "circular r4 in mixed", got == var(4, MIXED) + var(5, MIXED), repr(got)
    for args, want in (((Q1, (7,), MIXED), (-1, (8,))), ((Q12, (3,), CIRCULAR), (1, (3,))),
                       ((Q2, (1, 2), MIXED), (1, (2, 1)))):
        got = conjugate_word(*args)
        yield f"conjugate_word{args}", got == want, str(got)
    got = apply_derivation(4, var(1, MIXED))
    yield "Delta4 r1 = r2", got == var(2, MIXED), repr(got)
    got = apply_derivation(3, var(3, MIXED))
    yield "Delta3 r3 = r3 + 1", got == var(3, MIXED) + AlgebraElement.scalar(1, MIXED, 1), repr(got)
    x = AlgebraElement.word((4, 5), CIRCULAR, 2)
    yield "Delta0 r4 r5 = 0", not apply_derivation(0, x), ""


def _order_one_patterns() -> Iterator[Check]:
    from .invariance import natural_extend, parse_properties
    from .linsolve import Poly, solve_layered

    def fam(props, kind):
        res = solve_layered(parse_properties(props), kind, 1)
        op = natural_extend(res.operation, MIXED)
        return res.table.row(1), {s: [Poly.lift(op.coeff(s, (i,))) for i in range(1, 6)]
                                  for s in op.components}

    dims, rows = fam("CC + Sigma2", SCALAR)
    p = rows[0]
    ok = dims[1] == 2 and not p[0] and not p[3] and not p[4] and p[1] and p[2]
    yield "Sigma2 scalar order 1 is [0, p2, p3, 0, 0]", ok, f"{dims} {p}"
    dims, rows = fam("CC + O2", VECTORIAL)
    a, b = rows[1], rows[2]
    signs = (-1, 1, 1, -1, -1)
    ok = dims[1] == 4 and a[3] == a[4] and all(b[i] == a[i] * sg for i, sg in enumerate(signs))
    yield "O2 vectorial order 1 pattern", ok, f"{dims} {a} {b}"
    dims, rows = fam("CC + Opp", "pseudoscalar")
    p = rows[12]
    ok = dims[1] == 2 and not p[0] and not p[1] and not p[4] and p[2] and p[3]
    yield "Opp pseudoscalar order 1 is [0, 0, p3, p4, 0]", ok, f"{dims} {p}"
    dims, rows = fam("CC + Scaling(3, 5/2)", VECTORIAL)
    ok = all(r[2] == Poly.const(Fraction(5, 2)) for r in rows.values())
    yield "Scaling(3, a) forces p3 = a", ok, str(rows)
    dims, _ = fam("Nat", VECTORIAL)
    yield "naturality leaves 2*5 order-1 coefficients", dims[1] == 10, str(dims)


def _checks() -> Iterator[Check]:
    from .invariance import check, natural_reduce, parse_properties
    from .library import builtin

    def holds(name, props, order=3):
        op = builtin(name, order, MIXED)
        return all(check(op, sp).holds for sp in parse_properties(props))

    yield "OSy natural", holds("OSy", "Nat"), ""
    yield "AxisL orthogonal invariant", holds("AxisL", "O2"), ""
    yield "Id 1-homogeneous", holds("Id", "Scaling(3, 1)", 2), ""
    yield "Id not 2-homogeneous", not holds("Id", "Scaling(3, 2)", 2), ""
    red = natural_reduce(builtin("OSy", 3, MIXED))
    yield "natural_reduce(OSy) keeps only order 0", all(
        set(t) == {()} for t in red.components.values()), ""


def _productivity_lemma() -> Iterator[Check]:
    from .bases import SPLIT
    from .calculus import (PRODUCTIVITY, SCALAR_SLICE, VECTOR_SLICE, Slice, layered_maps)
    from .fqop import GRADINGS
    from .ncalgebra import AlgebraElement, grade_project
    from .bases import Q1, Q2

    r = 2
    m = {k: v.matrix for k, v in layered_maps(PRODUCTIVITY, r).items()}
    S, V = Slice(SCALAR_SLICE, r), Slice(VECTOR_SLICE, r)
    yield "im kappa = ker eta", (m["η"] @ m["ϰ"]).is_zero() and \
        m["ϰ"].rank() + m["η"].rank() == S.dim(), ""
    ident = type(m["π"]).identity(V)
    yield "pi + copi = id (productivity)", m["π"] + m["coπ"] == ident, ""

    def coords(vec):
        v1, v2 = V.to_elements(vec)
        out = []
        for v, g in ((v1, Q1), (v2, Q2)):
            x = v * AlgebraElement.cliff(g, SPLIT, r, c=-1)
            out.extend(grade_project(x, *ij) for ij in GRADINGS)
        return out

    amb = co = True
    for key in S.keys():
        x = coords(m["λ"]({key: Fraction(1)}))
        amb &= not (x[0] or x[1] or x[4] or x[6]) and x[7] == x[3]
    for key in V.keys():
        x = coords(m["coπ"]({key: Fraction(1)}))
        co &= not (x[2] or x[5]) and x[7] == -x[3]
    yield "Amb shape [0,0,x3,x4,0,x6,0,x4]", amb, ""
    yield "CoAmb shape [x1,x2,0,x4,x5,0,x7,-x4]", co, ""


def _differential_lemmas() -> Iterator[Check]:
    from .calculus import (IDEMPOTENT, INVOLUTIVE, THREE_IDEMPOTENT, compose, differential_product,
                           glob, layered_maps, loc, principal_operation)
    from .fqop import first_differential, linear_operation

    l1 = first_differential(principal_operation(-1, 1, -1))
    l2 = first_differential(principal_operation(1, 0, 1))
    lin = lambda L: linear_operation(L, 2)
    d = first_differential(compose(lin(l2), lin(l1), 2))
    yield "D(E+T(L2) o E+T(L1)) = L2.L1", d == differential_product(l2, l1), ""
    lam = _sample_layer(2)
    ok = glob(l2, loc(l1, lam)) == loc(l1, glob(l2, lam))
    yield "Glob and Loc commute", ok, ""
    ok = loc(l1, lam + lam.scale(3)) == loc(l1, lam).scale(4)
    yield "Loc is linear", ok, ""
    for ctx, abc in ((INVOLUTIVE, (-1, -1, -1)), (IDEMPOTENT, (1, 0, 1)), (THREE_IDEMPOTENT, (-1, 0, 1))):
        L = first_differential(principal_operation(*abc))
        m = {k: v.matrix for k, v in layered_maps(ctx, 2, L).items()}
        ident = type(m["π"]).identity(m["π"].dom)
        yield f"pi + copi = id ({ctx})", m["π"] + m["coπ"] == ident, ""


def _sample_layer(r):
    from .bases import SPLIT
    from .fqop import FQOperation

    return FQOperation(VECTORIAL, r, SPLIT, {1: {(1, 2): Fraction(1), (3, 8): Fraction(-2)},
                                             2: {(5, 5): Fraction(1, 3), (2, 7): Fraction(1)}})


def _families() -> Iterator[Check]:
    from .calculus import INVOLUTIVE, PRODUCTIVITY, principal_operation
    from .families import family_rows, restricted_rows, same_row_space
    from .fqop import first_differential

    for r in (2, 3):
        params, rows = restricted_rows(PRODUCTIVITY, r)
        yield f"productivity families (I)-(III) at order {r}", \
            same_row_space(rows, family_rows(params, PRODUCTIVITY)), ""
    L = first_differential(principal_operation(-1, -1, -1))
    for natural in (False, True):
        params, rows = restricted_rows(INVOLUTIVE, 2, L, natural)
        yield f"involutive families (I)-(III), natural={natural}", \
            same_row_space(rows, family_rows(params, INVOLUTIVE)), ""


def _conjugation() -> Iterator[Check]:
    from .calculus import PRODUCTIVITY, conjugation_form, identity_op, clifford_op
    from .library import builtin

    osy = builtin("OSy", 3, MIXED)
    form = conjugation_form(osy, PRODUCTIVITY)
    yield "OSy conjugation form round trip", form.synthesize().to_basis(MIXED) == osy, ""
    yield "OSy has a nonzero order-2 modifier", bool(form.modifiers.get(2)), ""
    e = conjugation_form(clifford_op(3), PRODUCTIVITY)
    yield "E has zero modifiers", not any(e.modifiers.values()), ""


GROUPS = (_expansions, _characters, _bases_examples, _p45_identity, _naturality, _order_one_patterns,
          _checks, _classification, _floating, _calculus, _productivity_lemma, _differential_lemmas,
          _families, _conjugation, _fibers, _principal, _cli)


def run() -> Iterator[Check]:
    for group in GROUPS:
        try:
            yield from group()
        except Exception as exc:  # report, keep going
            yield group.__name__.strip("_"), False, f"{type(exc).__name__}: {exc}"
