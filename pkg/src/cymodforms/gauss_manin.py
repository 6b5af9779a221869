"""The Gauss-Manin matrix of the two-parameter Dwork family and connection matrices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exact import ExactArithmeticError, MatrixRF, Ring, mat_inverse_lower_triangular, mat_mul


def stirling2(r: int, s: int) -> int:
    """Stirling number of the second kind via the alternating-sum formula."""
    if r < 0 or s < 0:
        raise ValueError("stirling2 needs non-negative arguments")
    if s > r:
        raise ValueError(f"stirling2({r}, {s}): s must not exceed r")
    total = sum((-1) ** i * comb(s, i) * (s - i) ** r for i in range(s + 1))
    value, rem = divmod(total, factorial(s))
    assert rem == 0
    return value


@dataclass(frozen=True)
class GaussManinMatrix:
    """B = dt1 * B1 + dt_{n+2} * B2."""

    n: int
    dt1: MatrixRF
    dtn2: MatrixRF

    def contract(self, v1, v2) -> MatrixRF:
        """B(V) for a field with dt1(V) = v1 and dt_{n+2}(V) = v2."""
        return self.dt1.scale(v1) + self.dtn2.scale(v2)


def _base_ring(n: int) -> Ring:
    return Ring(["t1", f"t{n + 2}"])


def gm_matrix(n: int, ring: Ring | None = None) -> GaussManinMatrix:
    if n < 1:
        raise ValueError("n must be a positive integer")
    ring = ring or _base_ring(n)
    t1, tn = ring.gen("t1"), ring.gen(f"t{n + 2}")
    size = n + 1
    disc = t1 ** (n + 2) - tn
    b1 = [[ring.zero()] * size for _ in range(size)]
    b2 = [[ring.zero()] * size for _ in range(size)]
    for i in range(1, n + 1):
        b2[i - 1][i - 1] = ring.const(Fraction(-i, n + 2)) / tn
        b1[i - 1][i] = ring.one()
        b2[i - 1][i] = -t1 / ((n + 2) * tn)
    for j in range(1, n + 1):
        s = stirling2(n + 2, j)
        b1[n][j - 1] = -s * t1 ** j / disc
        b2[n][j - 1] = s * t1 ** (j + 1) / ((n + 2) * tn * disc)
    b1[n][n] = -stirling2(n + 2, n + 1) * t1 ** (n + 1) / disc
    b2[n][n] = (Fraction(n * (n + 1), 2) * t1 ** (n + 2) + (n + 1) * tn) / ((n + 2) * tn * disc)
    return GaussManinMatrix(n, MatrixRF(ring, b1), MatrixRF(ring, b2))


def gm_matrix_of_R(n: int, s21, s22, ring: Ring | None = None) -> MatrixRF:
    """The closed form of B(R) in terms of s21, s22 (band matrix plus Stirling last row)."""
    if ring is None:
        ring = s21.ring
    t1, tn = ring.gen("t1"), ring.gen(f"t{n + 2}")
    disc = t1 ** (n + 2) - tn
    size = n + 1
    rows = [[ring.zero()] * size for _ in range(size)]
    for i in range(1, n + 1):
        rows[i - 1][i - 1] = i * s21
        rows[i - 1][i] = s22
    for j in range(1, n + 1):
        rows[n][j - 1] = -stirling2(n + 2, j) * t1 ** j * s22 / disc
    rows[n][n] = (n + 1) * s21 - Fraction((n + 1) * (n + 2), 2) * t1 ** (n + 1) * s22 / disc
    return MatrixRF(ring, rows)


def valid_g_index(n: int, alpha: int, beta: int) -> bool:
    m = (n + 1) // 2 if n % 2 else n // 2
    return 1 <= alpha <= m and alpha <= beta <= 2 * m + 1 - alpha


def gm_matrix_of_g(n: int, alpha: int, beta: int, ring: Ring | None = None) -> MatrixRF:
    """B(R_g) for a basis element g_ab: diag(1..n+1) for (1,1), zero otherwise."""
    if not valid_g_index(n, alpha, beta):
        raise ValueError(f"({alpha}, {beta}) is not a basis index for n={n}")
    ring = ring or _base_ring(n)
    if (alpha, beta) == (1, 1):
        return MatrixRF(ring, [[i + 1 if i == j else 0 for j in range(n + 1)] for i in range(n + 1)])
    return MatrixRF.zeros(ring, n + 1)


def contraction(gm: GaussManinMatrix, field) -> MatrixRF:
    """B(H) using only the t1 and t_{n+2} components of ``field``."""
    n = gm.n
    return gm.contract(field.component("t1"), field.component(f"t{n + 2}"))


def connection_matrix(S: MatrixRF, gm: GaussManinMatrix, field, s_dot: MatrixRF) -> MatrixRF:
    """A_H = (H(S) + S B(H)) S^-1, where ``s_dot`` is H applied entrywise to S."""
    try:
        s_inv = mat_inverse_lower_triangular(S)
    except ExactArithmeticError as exc:
        raise ExactArithmeticError(f"singular S: {exc}") from exc
    return mat_mul(s_dot + mat_mul(S, contraction(gm, field)), s_inv)
