"""Exact truncated q-series on the lattice (1/24)Z, eta and theta series, and the
explicit solutions of the n = 1 and n = 2 modular systems.

A series is stored as x^low * P(x) with x = q^(1/24) and P an fmpq_poly; every
coefficient with x-exponent below ``prec`` is exact, nothing at or above it is
stored.  The public cutoff is ``order = prec / 24`` in powers of q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Mapping

import flint

from .exact import to_fraction

STEP = 24  # lattice denominator


class SeriesError(ArithmeticError):
    """A series operation is undefined (zero leading term, non-square leading coefficient)."""


def _x_units(e: Fraction | int) -> int:
    e = Fraction(e) * STEP
    if e.denominator != 1:
        raise SeriesError(f"exponent {e / STEP} is off the (1/{STEP})Z lattice")
    return int(e)


def _rational_sqrt(c: Fraction) -> Fraction:
    if c <= 0:
        raise SeriesError(f"leading coefficient {c} has no positive rational square root")
    a, b = isqrt(c.numerator), isqrt(c.denominator)
    if a * a != c.numerator or b * b != c.denominator:
        raise SeriesError(f"leading coefficient {c} is not a rational square")
    return Fraction(a, b)


class QSeries:
    __slots__ = ("low", "poly", "prec")

    def __init__(self, low: int, poly, prec: int):
        poly = poly if isinstance(poly, flint.fmpq_poly) else flint.fmpq_poly(poly)
        self.low, self.prec = low, prec
        self.poly = poly.truncate(max(prec - low, 0)) if prec - low < poly.degree() + 1 else poly
        self._normalize()

    def _normalize(self):
        coeffs = self.poly.coeffs()
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        if k == len(coeffs):
            self.low, self.poly = self.prec, flint.fmpq_poly([])
        elif k:
            self.low += k
            self.poly = flint.fmpq_poly(coeffs[k:])

    # construction -------------------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping, order) -> "QSeries":
        prec = _x_units(order)
        xs = {_x_units(e): Fraction(c) for e, c in terms.items() if _x_units(e) < prec and c}
        if not xs:
            return cls(prec, [], prec)
        low = min(xs)
        coeffs = [0] * (max(xs) - low + 1)
        for e, c in xs.items():
            coeffs[e - low] = flint.fmpq(c.numerator, c.denominator)
        return cls(low, coeffs, prec)

    @classmethod
    def constant(cls, c, order) -> "QSeries":
        return cls.from_terms({0: c}, order)

    # views ----------------------------------------------------------------------
    @property
    def order(self) -> Fraction:
        return Fraction(self.prec, STEP)

    @property
    def coefficients(self) -> dict[Fraction, Fraction]:
        return {Fraction(self.low + i, STEP): to_fraction(c)
                for i, c in enumerate(self.poly.coeffs()) if c != 0}

    def coefficient(self, e) -> Fraction:
        i = _x_units(e) - self.low
        if _x_units(e) >= self.prec:
            raise SeriesError(f"coefficient at {e} is beyond the cutoff {self.order}")
        if i < 0 or i > self.poly.degree():
            return Fraction(0)
        return to_fraction(self.poly[i])

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def valuation(self) -> Fraction:
        if self.is_zero():
            raise SeriesError("zero series has no valuation")
        return Fraction(self.low, STEP)

    def leading_coefficient(self) -> Fraction:
        return to_fraction(self.poly[0])

    def truncate(self, order) -> "QSeries":
        return QSeries(self.low, self.poly, min(self.prec, _x_units(order)))

    # arithmetic -----------------------------------------------------------------
    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        return QSeries.constant(Fraction(other), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return QSeries(other.low, other.poly, prec)
        if other.is_zero():
            return QSeries(self.low, self.poly, prec)
        low = min(self.low, other.low)
        shifted = (self.poly * flint.fmpq_poly([0] * (self.low - low) + [1])
                   + other.poly * flint.fmpq_poly([0] * (other.low - low) + [1]))
        return QSeries(low, shifted, prec)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.low, -self.poly, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            c = Fraction(other)
            return QSeries(self.low, self.poly * flint.fmpq(c.numerator, c.denominator), self.prec)
        # x^a (P + O(x^(p-a))) * x^b (Q + O(x^(r-b))) is exact below min(p + b, r + a)
        if self.is_zero() or other.is_zero():
            low_a = self.low if not self.is_zero() else self.prec
            low_b = other.low if not other.is_zero() else other.prec
            prec = min(self.prec + low_b, other.prec + low_a)
            return QSeries(prec, [], prec)
        prec = min(self.prec + other.low, other.prec + self.low)
        low = self.low + other.low
        return QSeries(low, self.poly.mul_low(other.poly, max(prec - low, 0)), prec)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        if self.is_zero():
            raise SeriesError("cannot invert the zero series")
        rel = self.prec - self.low  # relative precision
        g = _inv_poly(self.poly, rel)
        return QSeries(-self.low, g, rel - self.low)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other):
        return self.inverse() * Fraction(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def sqrt(self) -> "QSeries":
        """The square root with positive leading coefficient."""
        if self.is_zero():
            raise SeriesError("square root of the zero series")
        if self.low % 2:
            raise SeriesError("odd leading exponent")
        lead = self.leading_coefficient()
        root = _rational_sqrt(lead)
        rel = self.prec - self.low
        unit = self.poly * flint.fmpq(lead.denominator, lead.numerator)
        s = _sqrt_unit_poly(unit, rel) * flint.fmpq(root.numerator, root.denominator)
        return QSeries(self.low // 2, s, rel + self.low // 2)

    def theta(self) -> "QSeries":
        """q d/dq."""
        coeffs = [c * flint.fmpq(self.low + i, STEP) for i, c in enumerate(self.poly.coeffs())]
        return QSeries(self.low, coeffs, self.prec)

    def derivation(self, scale) -> "QSeries":
        """scale * q d/dq."""
        return self.theta() * Fraction(scale)

    def __eq__(self, other):
        """Equality below the common cutoff."""
        other = self._coerce(other)
        diff = self - other
        return diff.is_zero()

    __hash__ = None

    def to_json(self) -> list[dict[str, str]]:
        return [{"exponent": str(e), "coefficient": str(c)} for e, c in sorted(self.coefficients.items())]

    def __repr__(self):
        items = sorted(self.coefficients.items())[:6]
        body = " + ".join(f"{c}*q^{e}" for e, c in items)
        return f"QSeries({body} + O(q^{self.order}))"


def _inv_poly(p, n: int):
    """Inverse of p modulo x^n (p[0] != 0) by Newton iteration."""
    c0 = p[0]
    g = flint.fmpq_poly([1 / c0])
    k = 1
    while k < n:
        k = min(2 * k, n)
        pk = p.truncate(k)
        g = (g * (2 - pk.mul_low(g, k))).truncate(k)
    return g.truncate(n)


def _sqrt_unit_poly(p, n: int):
    """Square root of p with p[0] = 1 modulo x^n, via the inverse square root."""
    h = flint.fmpq_poly([1])
    k = 1
    half = flint.fmpq(1, 2)
    while k < n:
        k = min(2 * k, n)
        pk = p.truncate(k)
        # h <- h (3 - p h^2) / 2
        h = (h * (3 - pk.mul_low(h.mul_low(h, k), k))).truncate(k) * half
    return p.mul_low(h, n)


def substitute_power(f: QSeries, k) -> QSeries:
    """f(q^k) for a positive rational k; exponents must stay on the lattice."""
    k = Fraction(k)
    if k <= 0:
        raise ValueError("k must be positive")
    terms = {e * k: c for e, c in f.coefficients.items()}
    return QSeries.from_terms(terms, f.order * k)


def flip_sign(f: QSeries, step=Fraction(1, 2)) -> QSeries:
    """f at -q for a series supported on step*Z: negate coefficients at odd multiples of step."""
    step = Fraction(step)
    terms = {}
    for e, c in f.coefficients.items():
        m = e / step
        if m.denominator != 1:
            raise SeriesError(f"exponent {e} is not a multiple of {step}")
        terms[e] = -c if m.numerator % 2 else c
    return QSeries.from_terms(terms, f.order)


# --- classical series -------------------------------------------------------------

def eta(order) -> QSeries:
    """q^(1/24) prod (1 - q^k), expanded with Euler's pentagonal theorem."""
    order = Fraction(order)
    terms: dict[Fraction, Fraction] = {}
    m = 0
    while True:
        hit = False
        for j in ((m, -m) if m else (0,)):
            e = Fraction(j * (3 * j - 1), 2)
            if e + Fraction(1, 24) < order:
                terms[e + Fraction(1, 24)] = Fraction((-1) ** (j % 2))
                hit = True
        if not hit and m > 0:
            break
        m += 1
    return QSeries.from_terms(terms, order)


def theta2(order) -> QSeries:
    """sum over k in Z of q^((1/2)((k+1)/2)^2), i.e. 2 sum_{j>=0} q^((2j+1)^2/8)."""
    order = Fraction(order)
    terms = {}
    j = 0
    while Fraction((2 * j + 1) ** 2, 8) < order:
        terms[Fraction((2 * j + 1) ** 2, 8)] = Fraction(2)
        j += 1
    return QSeries.from_terms(terms, order)


def theta3(order) -> QSeries:
    """1 + 2 sum q^(k^2/2)."""
    order = Fraction(order)
    terms = {Fraction(0): Fraction(1)}
    k = 1
    while Fraction(k * k, 2) < order:
        terms[Fraction(k * k, 2)] = Fraction(2)
        k += 1
    return QSeries.from_terms(terms, order)


def theta3_neg(order) -> QSeries:
    # theta3 lives on (1/2)Z; q^(k^2/2) at -q picks up (-1)^k, i.e. the sign of
    # the odd multiples of 1/2 since k^2 and k have the same parity
    return flip_sign(theta3(order), Fraction(1, 2))


def sigma(k: int, power: int = 1) -> int:
    return sum(d ** power for d in range(1, k + 1) if k % d == 0)


def eisenstein_e2(order) -> QSeries:
    order = Fraction(order)
    terms = {Fraction(0): Fraction(1)}
    k = 1
    while k < order:
        terms[Fraction(k)] = Fraction(-24 * sigma(k))
        k += 1
    return QSeries.from_terms(terms, order)


def _at(builder: Callable[[Fraction], QSeries], k, order) -> QSeries:
    """builder(q^k) to the given order."""
    k = Fraction(k)
    inner = Fraction(-((-Fraction(order) / k * STEP) // 1), STEP)  # rounded up onto the lattice
    return substitute_power(builder(inner), k).truncate(order)


# --- explicit solutions -------------------------------------------------------------

N1_SCALE = Fraction(3)       # the derivation is 3 q d/dq
N2_SCALE = Fraction(-1, 5)   # the derivation is -(1/5) q d/dq


def solution_n1(order, printed: bool = False) -> tuple[QSeries, QSeries, QSeries]:
    """(t1, t2, t3) for n = 1, from theta, E2 and eta.

    The theta arguments q^2, q^6 are in the half-exponent theta convention, so
    theta3(q^2) is the usual Jacobi theta in q.  E2 takes the same halving:
    t2 = (E2(q) - 9 E2(q^3)) / 8.  ``printed=True`` uses E2(q^2), E2(q^6) verbatim,
    which does not solve the system (kept for the record).
    """
    N = Fraction(order)
    t1 = (_at(theta3, 2, N) * _at(theta3, 6, N) * 2 - _at(theta3_neg, 2, N) * _at(theta3_neg, 6, N)) / 3
    k = 2 if printed else 1
    t2 = (_at(eisenstein_e2, k, N) - _at(eisenstein_e2, 3 * k, N) * 9) / 8
    # eta(q)^-3 has valuation -1/8, so a little extra order keeps t3 exact below N
    pad = N + 1
    t3 = (_at(eta, 3, pad) ** 9 * eta(pad) ** -3).truncate(N)
    return t1, t2, t3


def solution_n2(order, printed: bool = False) -> tuple[QSeries, QSeries, QSeries, QSeries]:
    """(T1, T2, T3, T4) with T_i(q) = t_i(q/10) for n = 2.

    T1 and T4 are the printed closed forms; T2 = (E2(q) + 2 E2(q^2)) / 60 with the
    E2 arguments halved as for n = 1 (``printed=True`` keeps q^2, q^4).  T3 is the
    square root of 4 (T1^4 - T4), signed so that the leading term of dT1 = T3 - T1 T2
    holds.
    """
    N = Fraction(order)
    th3, th2 = _at(theta3, 2, N), _at(theta2, 2, N)
    T1 = (th3 ** 4 + th2 ** 4) * Fraction(6, 10 * 24)
    k = 2 if printed else 1
    T2 = (_at(eisenstein_e2, k, N) + _at(eisenstein_e2, 2 * k, N) * 2) * Fraction(4, 10 * 24)
    T4 = (eta(N) ** 8 * _at(eta, 2, N) ** 8) * Fraction(1, 10 ** 4)
    T3 = ((T1 ** 4 - T4) * 4).sqrt()
    target = T1.derivation(N2_SCALE) + T1 * T2
    if not target.is_zero() and target.valuation() == T3.valuation() \
            and target.leading_coefficient() == -T3.leading_coefficient():
        T3 = -T3
    return T1, T2, T3, T4


@dataclass
class SeriesCheck:
    relation_id: str
    anchor: str
    lhs: QSeries
    rhs: QSeries

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def witness(self) -> str:
        diff = self.lhs - self.rhs
        if diff.is_zero():
            return ""
        e = diff.valuation()
        return f"first difference at q^{e}: {self.lhs.coefficient(e)} vs {self.rhs.coefficient(e)}"


def verify_R1_solution(order=50, printed: bool = False) -> list[SeriesCheck]:
    t1, t2, t3 = solution_n1(order, printed)
    d = lambda f: f.derivation(N1_SCALE)
    return [
        SeriesCheck("qseries.n1.dt1", "R1 first line", d(t1), -t1 * t2 - (t1 ** 3 - t3) * 9),
        SeriesCheck("qseries.n1.dt2", "R1 second line", d(t2), t1 * (t1 ** 3 - t3) * 81 - t2 ** 2),
        SeriesCheck("qseries.n1.dt3", "R1 third line", d(t3), t2 * t3 * -3),
    ]


def verify_R2_solution(order=50, printed: bool = False) -> list[SeriesCheck]:
    """Checks in the rescaled variable: T_i(q) = t_i(q/10), derivation -(1/5) q d/dq."""
    T1, T2, T3, T4 = solution_n2(order, printed)
    d = lambda f: f.derivation(N2_SCALE)
    return [
        SeriesCheck("qseries.n2.dt1", "R2 first line", d(T1), T3 - T1 * T2),
        SeriesCheck("qseries.n2.dt2", "R2 second line", d(T2), T1 ** 2 * 2 - T2 ** 2 * Fraction(1, 2)),
        SeriesCheck("qseries.n2.dt3", "R2 third line", d(T3), T2 * T3 * -2 + T1 ** 3 * 8),
        SeriesCheck("qseries.n2.dt4", "R2 fourth line", d(T4), T2 * T4 * -4),
        SeriesCheck("qseries.n2.relation", "t3^2 = 4(t1^4 - t4)", T3 ** 2, (T1 ** 4 - T4) * 4),
    ]


def cubic_theta_forms(order):
    """(theta form, eta form) of 3 t1.

    theta3(q) theta3(q^3) + theta2(q) theta2(q^3) in the half-exponent convention
    lives on (1/2)Z; (eta(q)^3 + 9 eta(q^9)^3) / eta(q^3) lives on Z.
    """
    N = Fraction(order)
    theta_form = theta3(N) * _at(theta3, 3, N) + theta2(N) * _at(theta2, 3, N)
    pad = N + 1
    eta_form = ((eta(pad) ** 3 + _at(eta, 9, pad) ** 3 * 9) / _at(eta, 3, pad)).truncate(N)
    return theta_form, eta_form


def verify_eta_identities(order=50) -> list[SeriesCheck]:
    """Eta/theta closed forms for n = 1.

    The theta form of 3 t1 is written in the half-exponent convention while the
    solution and the eta form use q itself, so the theta form is compared after
    q -> q^2 (the cross-convention identity).
    """
    N = Fraction(order)
    t1, t2, t3 = solution_n1(N)
    disc = t3 * (t1 ** 3 - t3)
    e1, e3, e9 = eta(N + 1), _at(eta, 3, N + 1), _at(eta, 9, N + 1)
    eta_disc = (e1 ** 6 * e3 ** 6 / 27).truncate(N)
    t1sq_disc = (e1 ** 6 * e3 ** 4 * (e1 ** 3 + e9 ** 3 * 9) ** 2 / 243).truncate(N)
    _, eta_form = cubic_theta_forms(N)
    theta_form_big, _ = cubic_theta_forms(2 * N)
    theta_at_q2 = substitute_power(theta_form_big, 2).truncate(N)
    return [
        SeriesCheck("qseries.n1.delta_eta", "Delta = eta(q)^6 eta(q^3)^6 / 27", disc, eta_disc),
        SeriesCheck("qseries.n1.t1sq_delta_eta", "t1^2 Delta eta form", t1 ** 2 * disc, t1sq_disc),
        SeriesCheck("qseries.n1.t1_eta_form", "3 t1 = (eta(q)^3 + 9 eta(q^9)^3) / eta(q^3)", t1 * 3, eta_form),
        SeriesCheck("qseries.n1.theta_eta_cross", "theta form at q^2 = eta form", theta_at_q2, eta_form),
        SeriesCheck("qseries.n1.t1_cross_convention", "t1 = (1/3) theta form at q^2", t1, theta_at_q2 / 3),
    ]


def verify_ode_422(order=50, scale=1) -> list[SeriesCheck]:
    """The second-order ODE for y = scale * t1 with ' = 3 q d/dq.

    ``ode.printed`` is 2 y y'' - 3 y'^2 = 4 eta(q)^6 eta(q^3)^6, which comes from
    the weight-2 expansion of [f, f]_2.  ``ode.weight1`` uses the weight-1 expansion
    [f, f]_2 = 2 f f'' - 4 f'^2 together with [t1, t1]_2 = 324 Delta.
    """
    N = Fraction(order)
    y = solution_n1(N)[0] * Fraction(scale)
    yd = y.derivation(N1_SCALE)
    ydd = yd.derivation(N1_SCALE)
    e6 = (eta(N + 1) ** 6 * _at(eta, 3, N + 1) ** 6).truncate(N)
    return [
        SeriesCheck("qseries.n1.ode.printed", "2 y y'' - 3 y'^2 = 4 eta^6(q) eta^6(q^3)",
                    y * ydd * 2 - yd ** 2 * 3, e6 * 4),
        SeriesCheck("qseries.n1.ode.weight1", "2 y y'' - 4 y'^2 = 12 eta^6(q) eta^6(q^3)",
                    y * ydd * 2 - yd ** 2 * 4, e6 * 12),
    ]


def representation_count(k: int) -> int:
    """Number of (x, y) in Z^2 with x^2 + 3 y^2 = k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    count = 0
    for y in range(-isqrt(k // 3), isqrt(k // 3) + 1):
        rest = k - 3 * y * y
        x = isqrt(rest)
        if x * x == rest:
            count += 1 if x == 0 else 2
    return count


def representation_report(order=30) -> dict:
    """t1 coefficients next to the counts of x^2 + 3y^2 = k; observational only."""
    N = Fraction(order)
    t1 = solution_n1(N)[0]
    theta_form, _ = cubic_theta_forms(N)
    rows = []
    for k in range(int(N)):
        rows.append({"k": k, "t1": str(t1.coefficient(k)), "count": representation_count(k),
                     "theta_form_at_q^(k/2)": str(theta_form.coefficient(Fraction(k, 2)))})
    return {
        "rows": rows,
        # t1 = (2 A(q) - A(-q)) / 3 with A = sum count(k) q^k
        "t1_odd_k_equals_count": all(t1.coefficient(k) == representation_count(k)
                                     for k in range(1, int(N), 2)),
        "t1_even_k_equals_count_over_3": all(3 * t1.coefficient(k) == representation_count(k)
                                             for k in range(0, int(N), 2)),
    }
