"""Vector fields on a chart: the modular field R, the Lie-algebra fields R_g,
the sl2 triple (R, H, F), the corrected field D and the quartic Lambda.

Every field is derived from a target connection matrix A through
``S' = A S - S B(V)``: the (1,1) and (1,2) entries fix the t1 and t_{n+2}
components, every other chart slot of S then yields exactly one component.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping

from .exact import ExactArithmeticError, MatrixRF, RationalFunction, mat_mul
from .gauss_manin import GaussManinMatrix, connection_matrix, gm_matrix, valid_g_index
from .moduli import (
    CALIBRATED_CN,
    ChartSpec,
    IntersectionData,
    build_chart,
    build_intersection,
    solve_dependent_params,
)


class FieldError(ExactArithmeticError):
    """A derived field is inconsistent with the chart."""


class VectorField:
    """sum_j V^j d/dt_j over the chart generators."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: ChartSpec, components: Mapping[str, RationalFunction | int | Fraction]):
        self.chart = chart
        comps = {}
        allowed = set(chart.chart_generators)
        for name, value in components.items():
            if name not in allowed:
                raise FieldError(f"{name} is not a chart generator")
            if not isinstance(value, RationalFunction):
                value = chart.ring.const(value)
            if not value.is_zero():
                comps[name] = value
        self.components = comps

    def component(self, name: str) -> RationalFunction:
        return self.components.get(name, self.chart.ring.zero())

    def __call__(self, f: RationalFunction) -> RationalFunction:
        acc = self.chart.ring.zero()
        for name, coeff in self.components.items():
            df = f.derivative(name)
            if not df.is_zero():
                acc = acc + coeff * df
        return acc

    apply = __call__

    def _check(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        if other.chart is not self.chart:
            raise FieldError("vector fields on different charts")
        return other

    def __add__(self, other):
        other = self._check(other)
        names = set(self.components) | set(other.components)
        return VectorField(self.chart, {k: self.component(k) + other.component(k) for k in names})

    def __sub__(self, other):
        other = self._check(other)
        names = set(self.components) | set(other.components)
        return VectorField(self.chart, {k: self.component(k) - other.component(k) for k in names})

    def __neg__(self):
        return VectorField(self.chart, {k: -v for k, v in self.components.items()})

    def scale(self, f) -> "VectorField":
        return VectorField(self.chart, {k: v * f for k, v in self.components.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        if other.chart is not self.chart:
            return False
        names = set(self.components) | set(other.components)
        return all(self.component(k) == other.component(k) for k in names)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.components

    def to_text(self) -> dict[str, str]:
        order = self.chart.chart_generators
        return {k: self.components[k].to_text() for k in order if k in self.components}

    def __repr__(self):
        inner = " + ".join(f"({v})*d/d{k}" for k, v in self.to_text().items()) or "0"
        return f"VectorField({inner})"


def lie_bracket(v: VectorField, w: VectorField) -> VectorField:
    if v.chart is not w.chart:
        raise FieldError("chart mismatch in Lie bracket")
    names = set(v.chart.chart_generators)
    return VectorField(v.chart, {j: v(w.component(j)) - w(v.component(j)) for j in names})


def constant_field(chart: ChartSpec, name: str, coeff=1) -> VectorField:
    return VectorField(chart, {name: coeff})


def g_matrix(n: int, alpha: int, beta: int) -> list[list[int]]:
    """The Lie-algebra element g_ab by the placement rule (no basis check)."""
    size = n + 1
    m = (n + 1) // 2 if n % 2 else n // 2
    g = [[0] * size for _ in range(size)]
    pa, pb = n + 2 - beta, n + 2 - alpha
    partner = 1 if (n % 2 and beta >= m + 1) else -1
    g[pa - 1][pb - 1] = partner
    g[alpha - 1][beta - 1] = 1
    return g


@dataclass
class WeightReport:
    ok: bool
    violations: list[str]


class CYSystem:
    """All derived objects for one chart (one n, one choice of c_n)."""

    def __init__(self, n: int, cn: Fraction | int | None = None):
        self.n = n
        self.chart = build_chart(n, cn)
        self.gm: GaussManinMatrix = gm_matrix(n, self.chart.ring)
        self.data: IntersectionData = build_intersection(self.chart, self.gm)
        self.chart.dependent = solve_dependent_params(self.chart, self.data)
        self.ring = self.chart.ring

    # --- matrices --------------------------------------------------------
    @property
    def S(self) -> MatrixRF:
        return self.chart.S

    def s(self, i: int, j: int) -> RationalFunction:
        return self.chart.s(i, j)

    @cached_property
    def yukawa(self) -> list[RationalFunction]:
        """Y_1..Y_{n-2}."""
        n, s = self.n, self.s
        if n < 3:
            return []
        ys: dict[int, RationalFunction] = {}
        upper = (n - 3) // 2 if n % 2 else (n - 2) // 2
        for i in range(1, upper + 1):
            ys[i] = s(2, 2) * s(i + 1, i + 1) / s(i + 2, i + 2)
            ys[n - (i + 1)] = -ys[i]
        if n % 2:
            t1, tn = self.ring.gen("t1"), self.ring.gen(f"t{n + 2}")
            h = (n + 1) // 2
            ys[(n - 1) // 2] = ((-1) ** ((3 * n + 3) // 2) * self.chart.cn_value() * (n + 2) ** n
                                * s(2, 2) * s(h, h) ** 2 / (t1 ** (n + 2) - tn))
        return [ys[i] for i in range(1, n - 1)]

    @cached_property
    def Y(self) -> MatrixRF:
        n = self.n
        size = n + 1
        rows = [[self.ring.zero()] * size for _ in range(size)]
        rows[0][1] = self.ring.one()
        if n >= 2:
            rows[n - 1][n] = self.ring.const(-1)
        for i, y in enumerate(self.yukawa, start=1):
            rows[i][i + 1] = y
        return MatrixRF(self.ring, rows)

    def s_dot(self, v: VectorField) -> MatrixRF:
        return self.S.map(v)

    def connection(self, v: VectorField) -> MatrixRF:
        return connection_matrix(self.S, self.gm, v, self.s_dot(v))

    # --- derivation of fields -------------------------------------------
    def derive_from(self, A: MatrixRF, check_dependent: bool = False) -> VectorField:
        n, ring = self.n, self.ring
        t1, tn = ring.gen("t1"), ring.gen(f"t{n + 2}")
        AS = mat_mul(A, self.S)
        v_n2 = -(n + 2) * tn * AS[0, 0]
        v_1 = AS[0, 1] - t1 * AS[0, 0]
        sdot = AS - mat_mul(self.S, self.gm.contract(v_1, v_n2))
        comps = {"t1": v_1, f"t{n + 2}": v_n2}
        chart_names = set(self.chart.chart_generators)
        for (i, j), name in self.chart.slots.items():
            if name in chart_names:
                comps[name] = sdot[i - 1, j - 1]
        field = VectorField(self.chart, comps)
        if check_dependent:
            for (i, j), name in self.chart.slots.items():
                if name in self.chart.dependent and field(self.chart.dependent[name]) != sdot[i - 1, j - 1]:
                    raise FieldError(f"dependent slot ({i}, {j}) is inconsistent")
        return field

    @cached_property
    def R(self) -> VectorField:
        return self.derive_from(self.Y)

    def g(self, alpha: int, beta: int) -> MatrixRF:
        return MatrixRF(self.ring, g_matrix(self.n, alpha, beta))

    @lru_cache(maxsize=None)
    def g_field(self, alpha: int, beta: int) -> VectorField:
        return self.derive_from(self.g(alpha, beta).transpose())

    @cached_property
    def H(self) -> VectorField:
        if self.n == 1:
            return -self.g_field(1, 1)
        if self.n == 2:
            return self.g_field(1, 1).scale(-2)
        return self.g_field(2, 2) - self.g_field(1, 1)

    @cached_property
    def F(self) -> VectorField:
        if self.n == 2:
            return self.g_field(1, 2).scale(2)
        return self.g_field(1, 2)

    @cached_property
    def weights(self) -> dict[str, int]:
        out = {}
        for name in self.chart.chart_generators:
            ratio = self.H.component(name) / self.ring.gen(name)
            if not ratio.is_constant():
                raise FieldError(f"H is not diagonal at {name}")
            w = ratio.constant_value()
            if w.denominator != 1:
                raise FieldError(f"non-integral weight at {name}")
            out[name] = int(w)
        return out

    @cached_property
    def d2(self) -> VectorField:
        return constant_field(self.chart, "t2")

    @cached_property
    def D(self) -> VectorField:
        factor = 2 if self.n == 2 else 1
        t2 = self.ring.gen("t2")
        inner = lie_bracket(self.R, self.d2.scale(factor)) - self.H
        return self.R + inner.scale(t2)

    @cached_property
    def Lambda(self) -> RationalFunction:
        r2 = self.R.component("t2")
        t2 = self.ring.gen("t2")
        if self.n == 2:
            return -r2 / 2 - t2 ** 2 / 4
        return -r2 - t2 ** 2


@lru_cache(maxsize=None)
def cy_system(n: int, cn: Fraction | None | str = "calibrated") -> CYSystem:
    """Cached system; ``cn="calibrated"`` uses CALIBRATED_CN when known, else symbolic."""
    if cn == "calibrated":
        cn = CALIBRATED_CN.get(n)
    return CYSystem(n, None if cn is None else Fraction(cn))


def system_for(chart: ChartSpec) -> CYSystem:
    sys_ = cy_system(chart.n, chart.cn)
    return sys_


# --- functional interface ----------------------------------------------------

def yukawa(system: CYSystem) -> list[RationalFunction]:
    return system.yukawa


def derive_R(system: CYSystem) -> VectorField:
    return system.R


def derive_g_field(system: CYSystem, alpha: int, beta: int) -> VectorField:
    if not valid_g_index(system.n, alpha, beta):
        raise ValueError(f"({alpha}, {beta}) is not a basis index for n={system.n}")
    return system.g_field(alpha, beta)


def radial_and_constant(system: CYSystem) -> tuple[VectorField, VectorField]:
    return system.H, system.F


def field_D(system: CYSystem) -> VectorField:
    return system.D


def lambda_(system: CYSystem) -> RationalFunction:
    return system.Lambda


# --- weighted degrees ----------------------------------------------------------

def monomial_weights(f: RationalFunction, weights: Mapping[str, int]) -> tuple[set[int], set[int]]:
    """Weighted degrees of the monomials of numerator and denominator."""
    names = f.ring.names
    w = [weights.get(nm, 0) for nm in names]

    def degs(poly):
        return {sum(a * b for a, b in zip(mon, w)) for mon in poly.terms}

    return degs(f.num), degs(f.den)


def weighted_degree(f: RationalFunction, weights: Mapping[str, int]):
    """The weight of f, or None when f is not quasi-homogeneous (zero has any weight)."""
    if f.is_zero():
        return None
    nd, dd = monomial_weights(f, weights)
    if len(nd) != 1 or len(dd) != 1:
        return None
    return next(iter(nd)) - next(iter(dd))


def check_quasi_homogeneous(v: VectorField, expected_degree: int, weights: Mapping[str, int]) -> WeightReport:
    violations = []
    for name, comp in v.components.items():
        nd, dd = monomial_weights(comp, weights)
        if len(dd) != 1:
            violations.append(f"{name}: inhomogeneous denominator")
            continue
        target = weights[name] + expected_degree + next(iter(dd))
        bad = sorted(x for x in nd if x != target)
        if bad:
            violations.append(f"{name}: monomial degrees {sorted(x - next(iter(dd)) for x in nd)} "
                              f"expected {weights[name] + expected_degree}")
    return WeightReport(not violations, violations)


def check_amsy_structure(system: CYSystem):
    """Yield (relation_id, lhs, rhs) for every bracket of the AMSY structure theorem."""
    n, m = system.n, system.chart.m
    R = system.R
    odd = n % 2
    ys = {0: system.ring.one(), n - 1: system.ring.const(-1)}
    for i, y in enumerate(system.yukawa, start=1):
        ys[i] = y
    if n == 1:
        ys[0] = system.ring.one()

    def delta(a, b):
        return 1 if a == b else 0

    out = []
    out.append(("amsy.g11", lie_bracket(R, system.g_field(1, 1)), R))
    if m >= 2:
        out.append(("amsy.g22", lie_bracket(R, system.g_field(2, 2)), -R))
    for a in range(3, m + 1):
        out.append((f"amsy.g{a}{a}", lie_bracket(R, system.g_field(a, a)),
                    VectorField(system.chart, {})))
    for a in range(1, m + 1):
        for b in range(a + 1, 2 * m + 2 - a):
            psi1 = (1 + odd * delta(a + b, 2 * m) - delta(a + b, 2 * m + 1)) * ys.get(a - 1, system.ring.zero())
            psi2 = (1 - 2 * odd * delta(b, m + 1)) * ys.get(n + 1 - b, system.ring.zero())
            rhs = VectorField(system.chart, {})
            if not psi1.is_zero():
                rhs = rhs + system.g_field(a + 1, b).scale(psi1)
            if not psi2.is_zero():
                rhs = rhs + system.g_field(a, b - 1).scale(psi2)
            out.append((f"amsy.g{a}_{b}", lie_bracket(R, system.g_field(a, b)), rhs))
    return out
