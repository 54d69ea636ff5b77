"""Top-order restrictive equations seen on symmetric (and natural) operations.

The layered equations coπ Ψ^<r> = ... have a fixed linear part.  Restricted
to the order-r tangent space of symmetric, optionally natural, operations
and written in the mixed [1]-coefficients that parametrize that space,
their row space can be compared with the index families (I), (II), (III)
that describe it combinatorially.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .bases import MIXED, SPLIT, char_mul
from .fqop import VECTORIAL, FirstDifferential, FQOperation
from .linsolve import Row, eliminate

PTW = {1: 2, 2: 1, 3: 3, 4: 4, 5: 5, 6: 6, 7: 8, 8: 7}
IND = {1: -1, 2: -1, 3: -1, 4: -1, 5: -1, 6: 1, 7: 1, 8: 1}

Key = Tuple[int, Tuple[int, ...]]


def char_product(w) -> int:
    p = 3
    for k in w:
        p = char_mul(p, k)
    return p


def restricted_rows(context: str, r: int, L: Optional[FirstDifferential] = None,
                    natural: bool = True) -> Tuple[List[Key], List[Row]]:
    """Rows of coπ on the symmetric (natural) tangent space, in [1]-coordinates."""
    from .calculus import VECTOR_SLICE, Slice, layered_maps
    from .invariance import generate_constraints, parse_properties, words

    letters = range(1, 9)
    keys = [(s, w) for s in (1, 2) for w in words(letters, r)]
    params = sorted((1, w) for w in words(range(1, 6) if natural else letters, r))
    wanted = set(params)
    ids = {k: i for i, k in enumerate(keys)}
    rows = []
    for spec in parse_properties("Sigma2 + Nat" if natural else "Sigma2"):
        for cr in generate_constraints(spec, VECTORIAL, MIXED, r):
            rows.append(Row({ids[k]: c for k, c in cr.coeffs.items()}))
    # pivot on the dependent coefficients first so the parameters stay free
    ech = eliminate(rows, order_key=lambda c: (keys[c] in wanted, c))
    free = sorted(keys[c] for c in range(len(keys)) if c not in ech.pivots)
    if free != params:
        raise ArithmeticError("tangent space is not parametrized by the expected coefficients")
    copi = layered_maps(context, r, L)["coπ"].matrix
    images = []
    for f in params:
        comps = {1: {f[1]: Fraction(1)}, 2: {}}
        for p, row in ech.pivots.items():
            v = row.coeffs.get(ids[f])
            if v:
                s, w = keys[p]
                comps[s][w] = -v
        sp = FQOperation(VECTORIAL, r, MIXED, comps).to_basis(SPLIT)
        images.append(copi({(s - 1, w): c for s in (1, 2) for w, c in sp.components[s].items() if c}))
    out = {}
    for j, img in enumerate(images):
        for a, c in img.items():
            out.setdefault(a, {})[j] = c
    return params, [Row(v) for v in out.values()]


def family_rows(params: List[Key], context: str) -> List[Row]:
    """The families (I)-(III) as rows in the coordinates ``params``."""
    from .calculus import PRODUCTIVITY

    idx = {w: j for j, (_, w) in enumerate(params)}
    rows = []
    for _, w in params:
        p, letters = char_product(w), set(w)
        twin = tuple(PTW[k] for k in w)
        if context == PRODUCTIVITY:
            if p in (4, 5) or (letters <= {3, 4, 5} and p == 3):
                rows.append(Row({idx[w]: Fraction(1)}))
            elif not letters <= {3, 4, 5}:
                v = {idx[w]: Fraction(1)}
                v[idx[twin]] = v.get(idx[twin], 0) - IND[p]
                rows.append(Row(v))
        else:
            sign = 1
            for k in w:
                sign *= IND[k]
            if p in (4, 5):
                if sign == -1:
                    rows.append(Row({idx[w]: Fraction(1)}))
            elif letters <= {3, 4, 5, 6}:
                if IND[p] * sign == 1:
                    rows.append(Row({idx[w]: Fraction(1)}))
            else:
                v = {idx[w]: Fraction(1)}
                v[idx[twin]] = v.get(idx[twin], 0) + IND[p] * sign
                rows.append(Row(v))
    return rows


def same_row_space(a: List[Row], b: List[Row]) -> bool:
    ra, rb = eliminate(a).rank(), eliminate(b).rank()
    return ra == rb == eliminate(list(a) + list(b)).rank()
