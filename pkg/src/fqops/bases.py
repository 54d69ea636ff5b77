"""Coordinate systems for the perturbation variables.

Three bases are supported: ``split`` (r), ``mixed`` (r-hat) and ``circular``
(r-tilde).  Each comes with signed-permutation tables describing how the
Clifford parts Q1, Q2, Q1Q2 act by conjugation on the variables, and the
mixed basis carries the character group used by the scaling derivations.

Signed permutations are stored as tuples of length 9 with slot 0 unused:
``table[j] = +k`` means ``g r_j g^-1 = r_k`` and ``-k`` means ``-r_k``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

SPLIT = "split"
MIXED = "mixed"
CIRCULAR = "circular"
BASES = (SPLIT, MIXED, CIRCULAR)

# Clifford part codes.  Bit 0 is Q1, bit 1 is Q2.
ONE, Q1, Q2, Q12 = 0, 1, 2, 3
CLIFF_NAMES = {ONE: "1", Q1: "Q1", Q2: "Q2", Q12: "Q1Q2"}

Word = Tuple[int, ...]


def _perm(images: Sequence[int]) -> Tuple[int, ...]:
    return (0,) + tuple(images)


def _split_table(bit: int) -> Tuple[int, ...]:
    # r_j has grading (i1, i2) given by (j-1) % 4 in the order 00, 01, 10, 11;
    # conjugation by Q1 gives (-1)^i1 and by Q2 gives (-1)^i2.
    out = []
    for j in range(1, 9):
        i1, i2 = divmod((j - 1) % 4, 2)
        odd = i1 if bit == Q1 else i2 if bit == Q2 else (i1 + i2) % 2
        out.append(-j if odd else j)
    return _perm(out)


CONJ: Dict[str, Dict[int, Tuple[int, ...]]] = {
    SPLIT: {Q1: _split_table(Q1), Q2: _split_table(Q2), Q12: _split_table(Q12)},
    MIXED: {
        Q1: _perm([2, 1, 3, 4, -5, -6, -8, -7]),
        Q2: _perm([-2, -1, 3, 4, -5, -6, 8, 7]),
        Q12: _perm([-1, -2, 3, 4, 5, 6, -7, -8]),
    },
    CIRCULAR: {
        Q1: _perm([2, 1, 3, 5, 4, -6, -8, -7]),
        Q2: _perm([-2, -1, 3, 5, 4, -6, 8, 7]),
        Q12: _perm([-1, -2, 3, 4, 5, 6, -7, -8]),
    },
}

# Character group on mixed indices; 3 is the identity.
CHAR_TABLE = (
    (3, 4, 1, 2, 7, 8, 5, 6),
    (4, 3, 2, 1, 8, 7, 6, 5),
    (1, 2, 3, 4, 5, 6, 7, 8),
    (2, 1, 4, 3, 6, 5, 8, 7),
    (7, 8, 5, 6, 3, 4, 1, 2),
    (8, 7, 6, 5, 4, 3, 2, 1),
    (5, 6, 7, 8, 1, 2, 3, 4),
    (6, 5, 8, 7, 2, 1, 4, 3),
)


def char_mul(i: int, j: int) -> int:
    if not (1 <= i <= 8 and 1 <= j <= 8):
        raise ValueError(f"character index out of range: {i}, {j}")
    return CHAR_TABLE[i - 1][j - 1]


H = Fraction(1, 2)

# Mixed coordinates from split ones: rhat = ATTER1 . r
ATTER1 = tuple(
    tuple(H * x for x in row)
    for row in (
        (0, 1, 0, 0, 0, 0, -1, 0),
        (0, 1, 0, 0, 0, 0, 1, 0),
        (1, 0, 0, 0, 1, 0, 0, 0),
        (1, 0, 0, 0, -1, 0, 0, 0),
        (0, 0, 0, 1, 0, 0, 0, -1),
        (0, 0, 0, 1, 0, 0, 0, 1),
        (0, 0, 1, 0, 0, 1, 0, 0),
        (0, 0, 1, 0, 0, -1, 0, 0),
    )
)

# Circular coordinates from mixed ones: rtilde = ATTER2 . rhat
ATTER2 = tuple(
    tuple(Fraction(x) for x in row)
    for row in (
        (1, 0, 0, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0, 0, 0),
        (0, 0, 0, 1, 1, 0, 0, 0),
        (0, 0, 0, 1, -1, 0, 0, 0),
        (0, 0, 0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 0, 0, 1, 0),
        (0, 0, 0, 0, 0, 0, 0, 1),
    )
)

Matrix = Tuple[Tuple[Fraction, ...], ...]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b[0])
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(m))
        for i in range(n)
    )


def mat_inv(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _identity() -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(8)) for i in range(8))


@lru_cache(maxsize=None)
def coord_matrix(frm: str, to: str) -> Matrix:
    """Matrix C with (to-coordinates) = C . (frm-coordinates)."""
    rank = {SPLIT: 0, MIXED: 1, CIRCULAR: 2}
    steps = {(0, 1): ATTER1, (1, 2): ATTER2}
    a, b = rank[frm], rank[to]
    m = _identity()
    if a <= b:
        for k in range(a, b):
            m = mat_mul(steps[(k, k + 1)], m)
        return m
    return mat_inv(coord_matrix(to, frm))


@lru_cache(maxsize=None)
def letter_matrix(frm: str, to: str) -> Matrix:
    """Matrix M with frm-letter i = sum_j M[i][j] * to-letter j."""
    # letters are coordinates: frm = C(to->frm) . to
    return coord_matrix(to, frm)


@lru_cache(maxsize=None)
def letter_images(frm: str, to: str) -> Tuple[Tuple[Tuple[int, Fraction], ...], ...]:
    """Sparse rows of ``letter_matrix``; slot 0 unused."""
    m = letter_matrix(frm, to)
    rows: List[Tuple[Tuple[int, Fraction], ...]] = [()]
    for i in range(8):
        rows.append(tuple((j + 1, m[i][j]) for j in range(8) if m[i][j] != 0))
    return tuple(rows)


@lru_cache(maxsize=1 << 18)
def conjugate_word(g: int, w: Word, basis: str = MIXED) -> Tuple[int, Word]:
    """Conjugate a word letterwise: g w g^-1 = sign * w'."""
    if g == ONE:
        return 1, w
    table = CONJ[basis][g]
    sign = 1
    out = []
    for k in w:
        im = table[k]
        if im < 0:
            sign = -sign
            im = -im
        out.append(im)
    return sign, tuple(out)


def transform_element(x, to: str):
    """Rewrite an algebra element in another basis by linear substitution."""
    from .ncalgebra import AlgebraElement

    if x.basis == to:
        return x
    rows = letter_images(x.basis, to)
    out: Dict[Tuple[Word, int], object] = {}
    for (w, c), a in x.terms.items():
        for v, coef in _expand_word(w, rows):
            key = (v, c)
            out[key] = out.get(key, 0) + a * coef
    return AlgebraElement(out, to, x.order)


def _expand_word(w: Word, rows) -> List[Tuple[Word, Fraction]]:
    acc: List[Tuple[Word, Fraction]] = [((), Fraction(1))]
    for k in w:
        acc = [(v + (j,), c * m) for v, c in acc for j, m in rows[k]]
    return acc


def transform_series(series: Dict[Word, object], frm: str, to: str) -> Dict[Word, object]:
    """Transform a coefficient table Word -> value between bases.

    Applied one tensor slot at a time, so the cost per word length r is
    r * 8^(r+1) instead of 8^(2r).
    """
    if frm == to:
        return dict(series)
    rows = letter_images(frm, to)
    by_len: Dict[int, Dict[Word, object]] = {}
    for w, p in series.items():
        by_len.setdefault(len(w), {})[w] = p
    out: Dict[Word, object] = {}
    for r, layer in by_len.items():
        cur = layer
        for pos in range(r):
            nxt: Dict[Word, object] = {}
            for w, p in cur.items():
                head, tail = w[:pos], w[pos + 1:]
                for j, m in rows[w[pos]]:
                    v = head + (j,) + tail
                    # most entries are +-1; skip the Fraction product then
                    d = p if m == 1 else -p if m == -1 else p * m
                    nxt[v] = nxt.get(v, 0) + d
            cur = {w: p for w, p in nxt.items() if p}
        out.update(cur)
    return out


# Derivations.  Images are lists of (coefficient, word, clifford part).
DELTA0_CIRC = (0, 1, 0, 0, 1, -1, 0, 0, 1)


def derivation_rule(i: int) -> Tuple[str, Dict[int, List[Tuple[Fraction, Word, int]]]]:
    """Per-letter images of the derivation Delta_i (i=0 circular, else mixed)."""
    if i == 0:
        return CIRCULAR, {
            j: ([(Fraction(DELTA0_CIRC[j]), (j,), Q12)] if DELTA0_CIRC[j] else [])
            for j in range(1, 9)
        }
    if not 1 <= i <= 8:
        raise ValueError(f"no derivation Delta_{i}")
    rule = {}
    for j in range(1, 9):
        img = [(Fraction(1), (char_mul(i, j),), ONE)]
        if i == j:
            img.append((Fraction(1), (), ONE))
        rule[j] = img
    return MIXED, rule


def apply_derivation(i: int, x):
    """Leibniz extension of Delta_i; Clifford parts and constants are annihilated."""
    from .ncalgebra import AlgebraElement

    basis, rule = derivation_rule(i)
    if x.basis != basis:
        raise ValueError(f"Delta_{i} acts on the {basis} basis, got {x.basis}")
    out = AlgebraElement.zero(basis, x.order)
    for (w, c), a in x.terms.items():
        for k, letter in enumerate(w):
            img = AlgebraElement(
                {(v, g): coef for coef, v, g in rule[letter]}, basis, x.order
            )
            left = AlgebraElement({(w[:k], ONE): a}, basis, x.order)
            right = AlgebraElement({(w[k + 1:], c): 1}, basis, x.order)
            out = out + left * img * right
    return out


def delta0_eigenvalue(w: Word) -> int:
    """Scalar l with Delta_0(r~_w) = l r~_w Q1Q2 in the circular basis."""
    table = CONJ[CIRCULAR][Q12]
    lam = 0
    for k, letter in enumerate(w):
        sign = 1
        for m in w[k + 1:]:
            if table[m] < 0:
                sign = -sign
        lam += DELTA0_CIRC[letter] * sign
    return lam


def dump_tables() -> str:
    """Text dump of all conjugation rules, one line per rule."""
    lines = []
    for b in BASES:
        for g in (Q1, Q2, Q12):
            for j in range(1, 9):
                im = CONJ[b][g][j]
                s = "-" if im < 0 else "+"
                lines.append(f"{b} {CLIFF_NAMES[g]} r{j} -> {s}r{abs(im)}")
    for i in range(1, 9):
        lines.append("char " + " ".join(str(char_mul(i, j)) for j in range(1, 9)))
    return "\n".join(lines)
