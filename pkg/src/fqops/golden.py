"""Displayed reference values, transcribed verbatim.

Rows are order-1 coefficient rows [p_1 .. p_8]; matrices are order-2
tables [[p_ij]] with i the first letter.  Values given as "1/2 * M" in the
source are stored already scaled.
"""

from fractions import Fraction

H = Fraction(1, 2)


def _scaled(m, f):
    return [[f * x for x in row] for row in m]


CHARACTER_TABLE = [
    [3, 4, 1, 2, 7, 8, 5, 6],
    [4, 3, 2, 1, 8, 7, 6, 5],
    [1, 2, 3, 4, 5, 6, 7, 8],
    [2, 1, 4, 3, 6, 5, 8, 7],
    [7, 8, 5, 6, 3, 4, 1, 2],
    [8, 7, 6, 5, 4, 3, 2, 1],
    [5, 6, 7, 8, 1, 2, 3, 4],
    [6, 5, 8, 7, 2, 1, 4, 3],
]

# name, kind component, basis -> {order: row or matrix}; constants under order 0
EXPANSIONS = {
    ("One", 0, "split"): {0: 1},
    ("One", 0, "mixed"): {0: 1},
    ("One", 0, "circular"): {0: 1},
    ("Id", 1, "mixed"): {0: 1, 1: [1, 1, 1, 1, 1, 1, 1, 1], 2: [[0] * 8] * 8},
    ("Id", 2, "mixed"): {0: 1, 1: [-1, 1, 1, -1, -1, 1, 1, -1], 2: [[0] * 8] * 8},
    ("Id", 1, "circular"): {0: 1, 1: [1, 1, 1, 1, 0, 1, 1, 1], 2: [[0] * 8] * 8},
    ("Id", 2, "circular"): {0: 1, 1: [-1, 1, 1, -1, 0, 1, 1, -1], 2: [[0] * 8] * 8},
    ("PseudoDet", 12, "mixed"): {
        0: 1,
        1: [0, 0, 2, 0, 0, 0, 2, 0],
        2: [
            [1, 0, 0, -1, 1, 0, 0, -1],
            [0, -1, 1, 0, 0, -1, 1, 0],
            [0, -1, 1, 0, 0, -1, 1, 0],
            [1, 0, 0, -1, 1, 0, 0, -1],
            [1, 0, 0, -1, 1, 0, 0, -1],
            [0, -1, 1, 0, 0, -1, 1, 0],
            [0, -1, 1, 0, 0, -1, 1, 0],
            [1, 0, 0, -1, 1, 0, 0, -1],
        ],
    },
    ("OSy", 1, "circular"): {
        0: 1,
        1: [0, 0, 0, 0, 0, 1, 1, 1],
        2: _scaled([
            [0, 0, 0, 0, 0, -1, 0, -1],
            [0, 0, 0, 0, 0, -1, -1, 0],
            [0, 0, 0, 0, 0, -1, -1, -1],
            [0, 0, 0, 0, 0, 0, 0, -1],
            [0, 0, 0, 0, 0, 0, -1, 0],
            [-1, -1, -1, 0, 0, 1, 1, 1],
            [0, -1, -1, -1, 0, 1, 1, 2],
            [-1, 0, -1, 0, -1, 1, 0, 1],
        ], H),
    },
    ("OSy", 2, "circular"): {
        0: 1,
        1: [0, 0, 0, 0, 0, 1, 1, -1],
        2: _scaled([
            [0, 0, 0, 0, 0, 1, 0, -1],
            [0, 0, 0, 0, 0, -1, -1, 0],
            [0, 0, 0, 0, 0, -1, -1, 1],
            [0, 0, 0, 0, 0, 0, 0, -1],
            [0, 0, 0, 0, 0, 0, 1, 0],
            [1, -1, -1, 0, 0, 1, 1, -1],
            [0, -1, -1, 1, 0, 1, 1, -2],
            [-1, 0, 1, 0, -1, -1, 0, 1],
        ], H),
    },
    ("OfSy", 1, "circular"): {0: 1, 1: [1, 1, 1, 0, 0, 1, 1, 1]},
    ("OfSy", 2, "circular"): {0: 1, 1: [-1, 1, 1, 0, 0, 1, 1, -1]},
    ("OafSy", 1, "circular"): {0: 1, 1: [-1, -1, -1, 0, 0, 1, 1, 1]},
    ("OafSy", 2, "circular"): {0: 1, 1: [1, -1, -1, 0, 0, 1, 1, -1]},
    ("OSy", 1, "mixed"): {0: 1, 1: [0, 0, 0, 0, 0, 1, 1, 1]},
    ("AxisL", 12, "circular"): {0: 1, 1: [0, 2, 0, 0, 0, 0, 2, 0]},
    ("AxisR", 12, "circular"): {0: 1, 1: [0, -2, 0, 0, 0, 0, 2, 0]},
}

# fiber dimension triangles: row r lists d_r<0> .. d_r<r>
_T = {
    "i": [(0,), (0, 0), (0, 0, 2), (0, 0, 2, 12), (0, 0, 2, 12, 56), (0, 0, 2, 12, 56, 270)],
    "ii": [(0,), (0, 0), (0, 0, 1), (0, 0, 0, 5), (0, 0, 0, 5, 22), (0, 0, 0, 5, 16, 109)],
    "iii": [(0,), (0, 0), (0, 0, 0), (0, 0, 0, 4), (0, 0, 0, 4, 16), (0, 0, 0, 4, 16, 92)],
    "iv": [(0,) * (r + 1) for r in range(6)],
    "iv'": [(0,), (0, 0), (0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0, 3), (0, 0, 0, 0, 3, 0)],
}
FIBER_TABLES = {k: tuple(v) for k, v in _T.items()}

PRINCIPAL_COUNTS = {"Inv": 8, "Idm": 8, "I3": 27}


def fiber_properties(case: str) -> str:
    """Property sets of the fiber-table experiments."""
    base = "CC + Opp + O2 + CP"
    ds = " + ".join(f"DScaling({i}, 0)" for i in range(1, 6))
    sets = {
        "i": base,
        "ii": f"{base} + {ds}",
        "iii": f"{base} + {ds} + AxisEquals(AxisC)",
        "iv": f"{base} + {ds} + AxisEquals(AxisC) + WMT",
        "iv'": f"{base} + {ds} + AxisEquals(AxisC) + ComposeFixed(OfSy) + ComposeFixed(OafSy)",
    }
    return sets[case]
