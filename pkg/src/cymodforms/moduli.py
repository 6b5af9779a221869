"""Charts of the enhanced moduli space: the S-matrix, the intersection matrices
Omega and Phi, and the elimination of dependent parameters from S Omega S^T = Phi.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .exact import ExactArithmeticError, MatrixRF, RationalFunction, Ring, mat_mul
from .gauss_manin import GaussManinMatrix

# c_n values that make the derived fields agree with the published ones
# (n = 1..4).  Obtained by calibrate_cn and pinned by the test-suite.
CALIBRATED_CN: dict[int, Fraction] = {
    1: Fraction(1, 27),
    2: Fraction(-1, 64),
    3: Fraction(1, 5 ** 7),
    4: Fraction(1, 6 ** 6),
}


class ChartError(ExactArithmeticError):
    """Inconsistency while building a chart (placement, Omega, elimination)."""


def chart_dimension(n: int) -> int:
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n % 2:
        return (n + 1) * (n + 3) // 4 + 1
    return n * (n + 2) // 4 + 1


def half_dimension(n: int) -> int:
    return (n + 1) // 2 if n % 2 else n // 2


@dataclass
class ChartSpec:
    n: int
    d: int
    m: int
    ring: Ring
    slots: dict[tuple[int, int], str]
    independent_generators: tuple[str, ...]
    dependent_generators: tuple[str, ...]
    extra_generator: str | None
    cn: Fraction | None
    cn_name: str
    dependent: dict[str, RationalFunction] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def base(self) -> tuple[str, str]:
        return "t1", f"t{self.n + 2}"

    @property
    def chart_generators(self) -> tuple[str, ...]:
        """Generators carrying a vector-field component (independent plus extra)."""
        names = list(self.independent_generators)
        if self.extra_generator:
            names.append(self.extra_generator)
        return tuple(sorted(names, key=lambda s: int(s[1:])))

    def cn_value(self) -> RationalFunction:
        if self.cn is None:
            return self.ring.gen(self.cn_name)
        return self.ring.const(self.cn)

    def slot_of(self, name: str) -> tuple[int, int]:
        for pos, gen in self.slots.items():
            if gen == name:
                return pos
        raise KeyError(name)

    def symbolic_S(self) -> MatrixRF:
        """S with every slot holding its own generator (dependent ones unsolved)."""
        size = self.size
        rows = [[0] * size for _ in range(size)]
        rows[0][0] = 1
        for (i, j), name in self.slots.items():
            rows[i - 1][j - 1] = self.ring.gen(name)
        return MatrixRF(self.ring, rows)

    @cached_property
    def S(self) -> MatrixRF:
        """S with dependent generators replaced by their solved expressions."""
        if not self.dependent:
            raise ChartError("dependent parameters not solved yet")
        size = self.size
        rows = [[0] * size for _ in range(size)]
        rows[0][0] = 1
        for (i, j), name in self.slots.items():
            rows[i - 1][j - 1] = self.dependent.get(name, None) or self.ring.gen(name)
        return MatrixRF(self.ring, rows)

    def s(self, i: int, j: int) -> RationalFunction:
        return self.S[i - 1, j - 1]

    def column_weights(self) -> dict[str, int]:
        """Weights from the column rule: a generator at slot (i, k) has weight k."""
        out = {"t1": 1, f"t{self.n + 2}": self.n + 2}
        for (i, k), name in self.slots.items():
            if name in self.independent_generators:
                out[name] = k
        return out


def _dependent_order(n: int, positions):
    # diagonals first (bottom-right outward), then each sub-diagonal from the bottom
    return sorted(positions, key=lambda p: (p[0] - p[1], -p[0]))


def build_chart(n: int, cn: Fraction | int | None = None) -> ChartSpec:
    """Place independent and dependent generators inside S.

    Independent generators fill the entries with i + j <= n + 2 (odd n) or
    i + j < n + 2 (even n) left to right and top to bottom, skipping (1, 1) and
    the name t_{n+2}.  Dependent ones are numbered along the diagonals.
    """
    d = chart_dimension(n)
    m = half_dimension(n)
    size = n + 1
    limit = (lambda i, j: i + j <= n + 2) if n % 2 else (lambda i, j: i + j < n + 2)
    slots: dict[tuple[int, int], str] = {}
    independent = ["t1", f"t{n + 2}"]
    counter = 2
    for i in range(1, size + 1):
        for j in range(1, i + 1):
            if (i, j) == (1, 1) or not limit(i, j):
                continue
            if counter == n + 2:
                counter += 1
            name = f"t{counter}"
            counter += 1
            slots[(i, j)] = name
            independent.append(name)
    if len(independent) != d:
        raise ChartError(f"placement produced {len(independent)} generators, expected d={d}")
    rest = [(i, j) for i in range(1, size + 1) for j in range(1, i + 1)
            if (i, j) != (1, 1) and (i, j) not in slots]
    extra = None
    dependent = []
    used = {int(s[1:]) for s in independent}
    for k, pos in enumerate(_dependent_order(n, rest), start=1):
        if n % 2 == 0 and pos == ((n + 2) // 2, (n + 2) // 2):
            extra = f"t{min(set(range(1, d + 2)) - used)}"
            slots[pos] = extra
            continue
        name = f"tc{k}"
        slots[pos] = name
        dependent.append(name)
    cn_name = f"c{n}"
    t_names = sorted(independent + ([extra] if extra else []), key=lambda s: int(s[1:]))
    names = t_names + dependent + ([cn_name] if cn is None else [])
    relation = None
    if extra:
        c_text = cn_name if cn is None else f"({Fraction(cn)})"
        sign = (-1) ** (n // 2)
        relation = (extra, f"{sign}*(t1^{n + 2} - t{n + 2})", f"{c_text}*{(n + 2) ** n}")
    ring = Ring(names, relation=relation)
    return ChartSpec(
        n=n, d=d, m=m, ring=ring, slots=slots,
        independent_generators=tuple(sorted(independent, key=lambda s: int(s[1:]))),
        dependent_generators=tuple(dependent), extra_generator=extra,
        cn=None if cn is None else Fraction(cn), cn_name=cn_name,
    )


def phi_matrix(n: int, ring: Ring) -> MatrixRF:
    size = n + 1
    rows = [[0] * size for _ in range(size)]
    if n % 2:
        m = (n + 1) // 2
        for i in range(m):
            rows[i][size - 1 - i] = 1
            rows[m + i][m - 1 - i] = -1
    else:
        for i in range(size):
            rows[i][size - 1 - i] = 1
    return MatrixRF(ring, rows)


@dataclass
class IntersectionData:
    Omega: MatrixRF
    Phi: MatrixRF


def _solve_linear(ring: Ring, equations, unknowns):
    """Gaussian elimination; equations are dicts {unknown or None: coefficient} (None = constant).

    Returns the unique solution or raises ChartError.
    """
    rows = []
    for eq in equations:
        row = [eq.get(u, ring.zero()) for u in unknowns] + [-eq.get(None, ring.zero())]
        rows.append(row)
    ncols = len(unknowns)
    pivot_row = 0
    pivots = []
    for col in range(ncols):
        sel = next((r for r in range(pivot_row, len(rows)) if not rows[r][col].is_zero()), None)
        if sel is None:
            raise ChartError("underdetermined propagation step")
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        inv = rows[pivot_row][col].inverse()
        rows[pivot_row] = [x * inv for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[pivot_row])]
        pivots.append(pivot_row)
        pivot_row += 1
    for r in range(pivot_row, len(rows)):
        if not rows[r][-1].is_zero():
            raise ChartError("inconsistent propagation step")
    return {u: rows[p][-1] for u, p in zip(unknowns, pivots)}


def build_intersection(chart: ChartSpec, gm: GaussManinMatrix) -> IntersectionData:
    """Seed the first non-zero anti-diagonal of Omega and propagate with d/dt1.

    For each anti-diagonal s the dt1 part of dOmega = B Omega + Omega B^T gives
    linear equations whose only unknowns lie on anti-diagonal s + 1; together
    with the (-1)^n symmetry they determine it.  The full identity (both
    differentials) is checked afterwards.
    """
    n, ring = chart.n, chart.ring
    size = n + 1
    t1, tn = ring.gen("t1"), ring.gen(f"t{n + 2}")
    sign = (-1) ** n
    seed = (-(n + 2)) ** n * chart.cn_value() / (t1 ** (n + 2) - tn)
    om: dict[tuple[int, int], RationalFunction] = {}
    for i in range(size):
        for j in range(size):
            if i + j + 2 <= n + 1:
                om[(i, j)] = ring.zero()
            elif i + j + 2 == n + 2:
                om[(i, j)] = (-1) ** i * seed
    b1 = gm.dt1
    for s in range(n + 2, 2 * n + 2):
        # zero-based index sums: known up to s-2, unknown on s-1
        unknowns = [(i, s - 1 - i) for i in range(size) if 0 <= s - 1 - i < size]
        eqs = []
        for i in range(size):
            j = s - 2 - i
            if not 0 <= j < size:
                continue
            eq: dict = {None: -om[(i, j)].derivative("t1")}
            for k in range(size):
                for key, coeff in (((k, j), b1[i, k]), ((i, k), b1[j, k])):
                    if coeff.is_zero():
                        continue
                    if key in om:
                        eq[None] = eq[None] + coeff * om[key]
                    else:
                        eq[key] = eq.get(key, ring.zero()) + coeff
            eqs.append(eq)
        for (i, j) in unknowns:
            if i < j:
                eqs.append({(i, j): ring.one(), (j, i): ring.const(-sign)})
        om.update(_solve_linear(ring, eqs, unknowns))
    omega = MatrixRF(ring, [[om[(i, j)] for j in range(size)] for i in range(size)])
    for name, b in (("t1", gm.dt1), (f"t{n + 2}", gm.dtn2)):
        lhs = omega.map(lambda x: x.derivative(name))
        rhs = mat_mul(b, omega) + mat_mul(omega, b.transpose())
        if lhs != rhs:
            raise ChartError(f"dOmega identity fails in the d{name} direction")
    return IntersectionData(Omega=omega, Phi=phi_matrix(n, ring))


def _linear_split(expr: RationalFunction, name: str):
    """expr = a*x + b with a, b free of x, or None if expr is not linear in x."""
    a = expr.derivative(name)
    if a.involves(name):
        return None
    b = expr.subs({name: 0})
    return a, b


def solve_dependent_params(chart: ChartSpec, data: IntersectionData) -> dict[str, RationalFunction]:
    """Solve S Omega S^T = Phi for the dependent generators.

    Equations are taken anti-diagonal by anti-diagonal, outermost first; each
    solvable step is linear in exactly one new unknown.
    """
    n, ring = chart.n, chart.ring
    size = n + 1
    S = chart.symbolic_S()
    omega = data.Omega
    unknown = set(chart.dependent_generators)
    solved: dict[str, RationalFunction] = {}
    slot = {name: pos for pos, name in chart.slots.items()}

    def entry(i, j):
        acc = ring.zero()
        for k in range(i + 1):
            for l in range(j + 1):
                w = omega[k, l]
                if w.is_zero() or S[i, k].is_zero() or S[j, l].is_zero():
                    continue
                acc = acc + _val(i, k) * w * _val(j, l)
        return acc

    def _val(i, k):
        x = S[i, k]
        name = chart.slots.get((i + 1, k + 1))
        if name in solved:
            return solved[name]
        return x

    pending = [(i, j) for s in range(n, 2 * n + 1) for i in range(size) for j in range(i, size) if i + j == s]
    progress = True
    while pending and progress:
        progress = False
        for (i, j) in list(pending):
            expr = entry(i, j) - data.Phi[i, j]
            open_ = sorted(x for x in unknown - set(solved) if expr.involves(x))
            if len(open_) > 1:
                continue
            if not open_:
                pending.remove((i, j))
                if not expr.is_zero():
                    raise ChartError(f"S Omega S^T = Phi fails at entry ({i + 1}, {j + 1})")
                continue
            x = open_[0]
            split = _linear_split(expr, x)
            if split is None or split[0].is_zero():
                continue
            a, b = split
            solved[x] = -b / a
            pending.remove((i, j))
            progress = True
    missing = unknown - set(solved)
    if missing:
        raise ChartError(f"could not eliminate {sorted(missing)}")
    # leftover equations are checked by check_chart_identity
    return {name: solved[name] for name in chart.dependent_generators}


def check_chart_identity(chart: ChartSpec, data: IntersectionData) -> bool:
    """S Omega S^T == Phi after substitution."""
    S = chart.S
    return mat_mul(mat_mul(S, data.Omega), S.transpose()) == data.Phi


def diagonal_relation_holds(chart: ChartSpec, i: int) -> bool:
    """s_{(n+2-i)(n+2-i)} = (-1)^{n+i+1}/(c (n+2)^n) (t1^{n+2} - t_{n+2}) / s_ii."""
    n, ring = chart.n, chart.ring
    t1, tn = ring.gen("t1"), ring.gen(f"t{n + 2}")
    rhs = (-1) ** (n + i + 1) * (t1 ** (n + 2) - tn) / (chart.cn_value() * (n + 2) ** n * chart.s(i, i))
    return chart.s(n + 2 - i, n + 2 - i) == rhs


def weights(chart: ChartSpec) -> dict[str, int]:
    """Weights read off the radial field H = sum w_i t_i d/dt_i."""
    from .fields import system_for

    return system_for(chart).weights
