"""Published closed forms used as golden data (fields, weights, brackets, matrices).

Expressions are written in the parser's syntax over the chart generators.
"""
from __future__ import annotations

PUBLISHED_R: dict[int, dict[str, str]] = {
    1: {
        "t1": "-t1*t2 - 9*(t1^3 - t3)",
        "t2": "81*t1*(t1^3 - t3) - t2^2",
        "t3": "-3*t2*t3",
    },
    2: {
        "t1": "t3 - t1*t2",
        "t2": "2*t1^2 - 1/2*t2^2",
        "t3": "-2*t2*t3 + 8*t1^3",
        "t4": "-4*t2*t4",
    },
    3: {
        "t1": "t3 - t1*t2",
        "t2": "(t3^3*t4 - 5^4*t2^2*(t1^5 - t5))/(5^4*(t1^5 - t5))",
        "t3": "(t3^3*t6 - 3*5^4*t2*t3*(t1^5 - t5))/(5^4*(t1^5 - t5))",
        "t4": "-t2*t4 - t7",
        "t5": "-5*t2*t5",
        "t6": "5^5*t1^3 - t2*t6 - 2*t3*t4",
        "t7": "-5^4*t1*t3 - t2*t7",
    },
    4: {
        "t1": "t3 - t1*t2",
        "t2": "(6^(-2)*t3^2*t4*t8 - t1^6*t2^2 + t2^2*t6)/(t1^6 - t6)",
        "t3": "(6^(-2)*t3^2*t5*t8 - 3*t1^6*t2*t3 + 3*t2*t3*t6)/(t1^6 - t6)",
        "t4": "(-6^(-2)*t3^2*t7*t8 - t1^6*t2*t4 + t2*t4*t6)/(t1^6 - t6)",
        "t5": "(6^(-2)*t3*t5^2*t8 - 4*t1^6*t2*t5 - 2*t1^6*t3*t4 + 5*t1^4*t3*t8"
              " + 4*t2*t5*t6 + 2*t3*t4*t6)/(2*(t1^6 - t6))",
        "t6": "-6*t2*t6",
        "t7": "(6^(-2)*t4^2 - t1^2)/(2*6^(-2))",
        "t8": "(-3*t1^6*t2*t8 + 3*t1^5*t3*t8 + 3*t2*t6*t8)/(t1^6 - t6)",
    },
}

# extra generator e with e^2 = K * (t1^{n+2} - t_{n+2})
PUBLISHED_RELATION: dict[int, tuple[str, int]] = {2: ("t3", 4), 4: ("t8", 36)}

PUBLISHED_H: dict[int, dict[str, str]] = {
    1: {"t1": "t1", "t2": "2*t2", "t3": "3*t3"},
    2: {"t1": "2*t1", "t2": "2*t2", "t3": "4*t3", "t4": "8*t4"},
    3: {"t1": "t1", "t2": "2*t2", "t3": "3*t3", "t5": "5*t5", "t6": "t6", "t7": "2*t7"},
    4: {"t1": "t1", "t2": "2*t2", "t3": "3*t3", "t4": "t4", "t5": "2*t5", "t6": "6*t6", "t8": "3*t8"},
}

PUBLISHED_F: dict[int, dict[str, str]] = {
    1: {"t2": "1"},
    2: {"t2": "2"},
    3: {"t2": "1", "t7": "-t4"},
    4: {"t2": "1"},
}

# D - R
PUBLISHED_D_SHIFT: dict[int, dict[str, str]] = {
    1: {},
    2: {},
    3: {"t4": "t2*t4", "t7": "-t2*t7"},
    4: {},
}

PUBLISHED_WEIGHTS: dict[int, dict[str, int]] = {
    1: {"t1": 1, "t2": 2, "t3": 3},
    2: {"t1": 2, "t2": 2, "t3": 4, "t4": 8},
    3: {"t1": 1, "t2": 2, "t3": 3, "t4": 0, "t5": 5, "t6": 1, "t7": 2},
    4: {"t1": 1, "t2": 2, "t3": 3, "t4": 1, "t5": 2, "t6": 6, "t7": 0, "t8": 3},
}


def general_weight_rules(n: int, d: int) -> dict[str, int]:
    """The weights stated in closed form for n >= 4 (subset of generators)."""
    out = {"t1": 1, "t2": 2, "t3": 3, f"t{n + 2}": n + 2}
    if n % 2 == 0:
        out[f"t{d}"] = 0
    else:
        out.update({f"t{d - 2}": 0, f"t{d - 1}": 1, f"t{d}": 2})
    return out


YUKAWA_N3 = "t3^3/(5^4*(t1^5 - t5))"
LAMBDA_LARGE_N = "-t3^2*t4/t6"

CONNECTION_D_N3 = [
    ["0", "1", "0", "0"],
    ["0", "0", YUKAWA_N3, "0"],
    ["t2*t4", "0", "0", "-1"],
    ["-t2*(t2*t4 + t7)", "t2*t4", "0", "0"],
]
CONNECTION_R_N3 = [
    ["0", "1", "0", "0"],
    ["0", "0", YUKAWA_N3, "0"],
    ["0", "0", "0", "-1"],
    ["0", "0", "0", "0"],
]

# (relation id, n, f, g, k, expected value); Delta = t_{n+2}(t1^{n+2} - t_{n+2})
PUBLISHED_BRACKETS: list[tuple[str, int, str, str, int, str]] = [
    ("n1.t1_t3_1", 1, "t1", "t3", 1, "27*Delta"),
    ("n1.t1_t3_2", 1, "t1", "t3", 2, "729*t1^2*Delta"),
    ("n1.t1_t1_2", 1, "t1", "t1", 2, "324*Delta"),
    ("n1.t3_t3_2", 1, "t3", "t3", 2, "-2916*t1*Delta"),
    ("n1.Delta_Delta_2", 1, "Delta", "Delta", 2, "-5103*t1^4*Delta^2"),
    ("n2.t1_t4_1", 2, "t1", "t4", 1, "-8*t3*t4"),
    ("n2.t1_t4_2", 2, "t1", "t4", 2, "192*t1^3*t4"),
    ("n2.t1_t1_2", 2, "t1", "t1", 2, "36*t4"),
    ("n2.t4_t4_2", 2, "t4", "t4", 2, "-576*t1^2*t4^2"),
    ("n2.Delta_Delta_2", 2, "Delta", "Delta", 2, "-1088*t1^2*t4*(t1^4 + 8*t4)*Delta"),
    ("n3.t1_t5_1", 3, "t1", "t5", 1, "-5*t3*t5"),
    ("n3.t1_t5_2", 3, "t1", "t5", 2, "(-4*t1*t3^3*t4*t5 + 3*t3^3*t5*t6)/(125*(t1^5 - t5))"),
    ("n3.t1_t1_2", 3, "t1", "t1", 2, "(-2500*t3^2*(t1^5 - t5) - 2*t1*t3^3*(t1*t4 - t6))/(625*(t1^5 - t5))"),
    ("n3.t5_t5_2", 3, "t5", "t5", 2, "-6*t3^3*t4*t5^2/(25*(t1^5 - t5))"),
    ("n3.Delta_Delta_2", 3, "Delta", "Delta", 2,
     "t3^2*t5^2/25*(t1^3*(-20625*t1^5 - 55000*t5 + 22*t1*t3*t6) - 44*t3*t4*(t1^5 - t5))"),
    ("n4.t1_t6_1", 4, "t1", "t6", 1, "-6*t3*t6"),
    ("n4.t1_t6_2", 4, "t1", "t6", 2, "(-9*t1*t3^2*t4*t6*t8 + 7*t3^2*t5*t6*t8)/(12*(t1^6 - t6))"),
    ("n4.t1_t1_2", 4, "t1", "t1", 2, "(-72*t3^2*(t1^6 - t6) - t1*t3^2*t8*(t1*t4 - t5))/(18*(t1^6 - t6))"),
    ("n4.t6_t6_2", 4, "t6", "t6", 2, "-7*t3^2*t4*t6^2*t8/(t1^6 - t6)"),
    ("n4.Delta_Delta_2", 4, "Delta", "Delta", 2,
     "t3^2*t6^2*(t1^4*(-1404*t1^6 - 4680*t6 + 26*t1*t5*t8) - 52*t4*t8*(t1^6 - t6))"),
]

# [t4, t5 (t1^5 - t5)]_1 for n = 3 with the derivations D and R
MEMBERSHIP_PAIR_N3 = {
    "f": "t4",
    "g": "t5*(t1^5 - t5)",
    "D": "10*t5*t7*(t1^5 - t5)",
    "R": "10*t5*(t1^5 - t5)*(t2*t4 + t7)",
}
