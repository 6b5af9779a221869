"""Exact polynomial, rational-function and matrix arithmetic over Q.

Polynomials live in a :class:`Ring` of named generators.  A ring may carry a
single quadratic relation ``x**2 = a/b`` (``a``, ``b`` free of ``x``); elements
of such a ring are kept in the normal form "numerator of degree <= 1 in ``x``,
denominator free of ``x``", which makes zero-testing exact.

The heavy lifting (multiplication, gcd, exact division) is delegated to
``flint.fmpq_mpoly``.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import flint

Scalar = Union[int, Fraction]


class ExactArithmeticError(ValueError):
    """Raised on misuse of exact arithmetic (bad generator, shape, singularity)."""


def to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, flint.fmpq):
        return Fraction(int(q.p), int(q.q))
    if isinstance(q, flint.fmpz):
        return Fraction(int(q))
    if isinstance(q, str):
        return Fraction(q)
    raise TypeError(f"not an exact rational: {q!r}")


def _fmpq(q: Scalar) -> flint.fmpq:
    q = to_fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


def format_rational(q) -> str:
    q = to_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Ring:
    """Polynomial ring Q[names] with an optional quadratic relation.

    ``relation`` is ``(name, a, b)`` meaning ``name**2 == a / b`` where ``a`` and
    ``b`` are polynomials (flint or :class:`Polynomial`) not involving ``name``.
    """

    def __init__(self, names: Sequence[str], relation=None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ExactArithmeticError("duplicate generator names")
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "deglex")
        self._index = {name: i for i, name in enumerate(self.names)}
        self._one = self.ctx.from_dict({(0,) * len(self.names): 1})
        self._zero = self._one - self._one
        self.relation = None
        if relation is not None:
            name, a, b = relation
            a, b = self._relation_poly(a), self._relation_poly(b)
            idx = self.index(name)
            for poly in (a, b):
                if any(m[idx] for m in poly.monoms()):
                    raise ExactArithmeticError("relation right side involves its own generator")
            self.relation = (idx, a, b)

    def __repr__(self):
        rel = f", relation on {self.names[self.relation[0]]}" if self.relation else ""
        return f"Ring({', '.join(self.names)}{rel})"

    def _relation_poly(self, x):
        if isinstance(x, str):
            x = parse_expression(x, self)
        if isinstance(x, RationalFunction):
            if not x.is_polynomial():
                raise ExactArithmeticError("relation sides must be polynomials")
            return x._num / x._den.leading_coefficient()
        if isinstance(x, Polynomial):
            return x._p
        if isinstance(x, (int, Fraction)):
            return self._poly_const(x)
        return x

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ExactArithmeticError(f"unknown generator {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    @property
    def ngens(self) -> int:
        return len(self.names)

    def gen(self, name: str) -> "RationalFunction":
        i = self.index(name)
        exps = [0] * len(self.names)
        exps[i] = 1
        return RationalFunction._raw(self, self.ctx.from_dict({tuple(exps): 1}), self._one)

    def gens(self) -> list["RationalFunction"]:
        return [self.gen(name) for name in self.names]

    def const(self, value: Scalar) -> "RationalFunction":
        return RationalFunction._raw(self, self._poly_const(value), self._one)

    def zero(self) -> "RationalFunction":
        return RationalFunction._raw(self, self._zero, self._one)

    def one(self) -> "RationalFunction":
        return RationalFunction._raw(self, self._one, self._one)

    def _poly_const(self, value: Scalar):
        value = to_fraction(value)
        if value == 0:
            return self._zero
        return self.ctx.from_dict({(0,) * len(self.names): _fmpq(value)})

    def polynomial(self, terms: Mapping[tuple, Scalar]) -> "Polynomial":
        return Polynomial(self, self.ctx.from_dict({tuple(e): _fmpq(c) for e, c in terms.items() if c}))

    def parse(self, text: str) -> "RationalFunction":
        return parse_expression(text, self)

    # --- relation handling -------------------------------------------------
    def _reduce_poly(self, p):
        """Rewrite ``p`` as ``(A + B*x)/b**k`` using the relation; returns (A, B, k)."""
        idx, a, b = self.relation
        buckets: dict[int, dict] = {}
        for mon, coeff in zip(p.monoms(), p.coeffs()):
            e = mon[idx]
            rest = list(mon)
            rest[idx] = 0
            buckets.setdefault(e, {})[tuple(rest)] = coeff
        if not buckets:
            return self._zero, self._zero, 0
        top = max(buckets) // 2
        even, odd = self._zero, self._zero
        for e, terms in buckets.items():
            q, r = divmod(e, 2)
            part = self.ctx.from_dict(terms) * a ** q * b ** (top - q)
            if r:
                odd += part
            else:
                even += part
        return even, odd, top

    def _normalize(self, num, den):
        if self.relation is not None:
            num, den = self._apply_relation(num, den)
        if num.is_zero():
            return self._zero, self._one
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return num, den

    def _apply_relation(self, num, den):
        idx, a, b = self.relation
        if not any(m[idx] for m in den.monoms()):
            if all(m[idx] <= 1 for m in num.monoms()):
                return num, den
            A, B, k = self._reduce_poly(num)
            return A + B * self._x(idx), den * b ** k
        A, B, k1 = self._reduce_poly(num)
        C, D, k2 = self._reduce_poly(den)
        x = self._x(idx)
        # (A + B x) b^k2 / ((C + D x) b^k1), multiply through by (C - D x)
        new_num = (A * C * b - B * D * a) + (B * C - A * D) * b * x
        new_den = (C * C * b - D * D * a)
        k = k2 - k1
        if k >= 0:
            new_num = new_num * b ** k
        else:
            new_den = new_den * b ** (-k)
        return new_num, new_den

    def _x(self, idx):
        exps = [0] * len(self.names)
        exps[idx] = 1
        return self.ctx.from_dict({tuple(exps): 1})


def _term_text(coeff: Fraction, mon: Sequence[int], names: Sequence[str]) -> tuple[str, str]:
    """Return (sign, body) for one term."""
    factors = []
    for name, e in zip(names, mon):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    sign = "-" if coeff < 0 else "+"
    mag = abs(coeff)
    if not factors:
        return sign, format_rational(mag)
    if mag == 1:
        return sign, "*".join(factors)
    return sign, format_rational(mag) + "*" + "*".join(factors)


def _poly_text(p, names) -> str:
    if p.is_zero():
        return "0"
    terms = sorted(zip(p.monoms(), p.coeffs()), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
    out = []
    for k, (mon, c) in enumerate(terms):
        sign, body = _term_text(to_fraction(c), mon, names)
        if k == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("ring", "_p")

    def __init__(self, ring: Ring, p):
        self.ring = ring
        self._p = p

    @property
    def generators(self) -> tuple[str, ...]:
        return self.ring.names

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(m): to_fraction(c) for m, c in zip(self._p.monoms(), self._p.coeffs())}

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def degrees(self) -> dict[str, int]:
        return dict(zip(self.ring.names, self._p.degrees()))

    def total_degree(self) -> int:
        return int(self._p.total_degree())

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring:
                raise ExactArithmeticError("polynomials from different rings")
            return other._p
        if isinstance(other, (int, Fraction)):
            return self.ring._poly_const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(self.ring, -self._p)

    def __pow__(self, k: int):
        if k < 0:
            raise ExactArithmeticError("negative power of a polynomial")
        return Polynomial(self.ring, self._p ** k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self._p - o).is_zero()

    __hash__ = None

    def to_text(self) -> str:
        return _poly_text(self._p, self.ring.names)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"


class RationalFunction:
    """Quotient of two polynomials, kept with gcd removed and monic denominator."""

    __slots__ = ("ring", "_num", "_den")

    def __init__(self, num: Polynomial | Scalar, den: Polynomial | Scalar = 1, ring: Ring | None = None):
        if ring is None:
            ring = num.ring if isinstance(num, Polynomial) else den.ring
        n = num._p if isinstance(num, Polynomial) else ring._poly_const(num)
        d = den._p if isinstance(den, Polynomial) else ring._poly_const(den)
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.ring = ring
        self._num, self._den = ring._normalize(n, d)

    @classmethod
    def _raw(cls, ring, num, den):
        obj = object.__new__(cls)
        obj.ring = ring
        obj._num = num
        obj._den = den
        return obj

    @classmethod
    def _make(cls, ring, num, den):
        num, den = ring._normalize(num, den)
        return cls._raw(ring, num, den)

    @property
    def num(self) -> Polynomial:
        return Polynomial(self.ring, self._num)

    @property
    def den(self) -> Polynomial:
        return Polynomial(self.ring, self._den)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_polynomial(self) -> bool:
        return self._den.is_constant()

    def is_constant(self) -> bool:
        return self._num.is_constant() and self._den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ExactArithmeticError("not a constant")
        return _const_of(self._num) / _const_of(self._den)

    def variables(self) -> set[str]:
        used = set()
        for poly in (self._num, self._den):
            for i, e in enumerate(poly.degrees()):
                if e > 0:
                    used.add(self.ring.names[i])
        return used

    def involves(self, name: str) -> bool:
        i = self.ring.index(name)
        return self._num.degrees()[i] > 0 or self._den.degrees()[i] > 0

    # --- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.ring is not self.ring:
                raise ExactArithmeticError("rational functions from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction._raw(self.ring, self.ring._poly_const(other), self.ring._one)
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o._num.is_zero():
            return self
        if self._num.is_zero():
            return o
        if self._den == o._den:
            return RationalFunction._make(self.ring, self._num + o._num, self._den)
        return RationalFunction._make(self.ring, self._num * o._den + o._num * self._den, self._den * o._den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.ring, -self._num, self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._num.is_zero() or o._num.is_zero():
            return self.ring.zero()
        if self._den.is_one() and o._den.is_one() and self.ring.relation is None:
            return RationalFunction._raw(self.ring, self._num * o._num, self._den)
        return RationalFunction._make(self.ring, self._num * o._num, self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self._num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction._make(self.ring, self._den, self._num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if self.ring.relation is None:
            return RationalFunction._raw(self.ring, self._num ** k, self._den ** k)
        return RationalFunction._make(self.ring, self._num ** k, self._den ** k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return rf_equal(self, o)

    __hash__ = None

    # --- calculus and substitution ---------------------------------------
    def derivative(self, name: str) -> "RationalFunction":
        i = self.ring.index(name)
        dn = self._num.derivative(i)
        if self._den.is_constant():
            return RationalFunction._raw(self.ring, dn, self._den) if not dn.is_zero() else self.ring.zero()
        dd = self._den.derivative(i)
        if dd.is_zero():
            return RationalFunction._make(self.ring, dn, self._den)
        return RationalFunction._make(self.ring, dn * self._den - self._num * dd, self._den * self._den)

    def subs(self, mapping: Mapping[str, "RationalFunction | Scalar"]) -> "RationalFunction":
        """Substitute generators by rational functions of the same ring."""
        num, den = self._num, self._den
        extra = self.ring._one
        for name, value in mapping.items():
            i = self.ring.index(name)
            if isinstance(value, (int, Fraction)):
                value = self.ring.const(value)
            elif value.ring is not self.ring:
                raise ExactArithmeticError("substitution value from another ring")
            pn, qn = value._num, value._den
            num, kn = _subs_var(self.ring, num, i, pn, qn)
            den, kd = _subs_var(self.ring, den, i, pn, qn)
            # num/den picked up factors qn^-kn and qn^-kd respectively
            if kd > kn:
                num = num * qn ** (kd - kn)
            elif kn > kd:
                den = den * qn ** (kn - kd)
            if den.is_zero():
                raise ZeroDivisionError("substitution makes the denominator vanish")
        return RationalFunction._make(self.ring, num * extra, den)

    def to_text(self) -> str:
        n = _poly_text(self._num, self.ring.names)
        if self._den.is_one():
            return n
        d = _poly_text(self._den, self.ring.names)
        return f"({n})/({d})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"


def _const_of(p) -> Fraction:
    if p.is_zero():
        return Fraction(0)
    return to_fraction(p.coeffs()[0])


def _subs_var(ring: Ring, p, i: int, pn, qn):
    """Substitute x_i -> pn/qn in p; returns (P, k) with p(pn/qn) = P / qn**k."""
    buckets: dict[int, dict] = {}
    for mon, coeff in zip(p.monoms(), p.coeffs()):
        e = mon[i]
        rest = list(mon)
        rest[i] = 0
        buckets.setdefault(e, {})[tuple(rest)] = coeff
    if not buckets:
        return p, 0
    top = max(buckets)
    if top == 0:
        return p, 0
    out = ring._zero
    for e, terms in buckets.items():
        out += ring.ctx.from_dict(terms) * pn ** e * qn ** (top - e)
    return out, top


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    """Decide a == b by cross-multiplication: a.num*b.den - b.num*a.den == 0."""
    if a.ring is not b.ring:
        raise ExactArithmeticError("rational functions from different rings")
    cross = a._num * b._den - b._num * a._den
    if a.ring.relation is not None and not cross.is_zero():
        cross, _ = a.ring._apply_relation(cross, a.ring._one)
    return cross.is_zero()


def partial_derivative(f: RationalFunction, generator: str) -> RationalFunction:
    return f.derivative(generator)


# --- parsing -----------------------------------------------------------------

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_expression(text: str, ring: Ring) -> RationalFunction:
    """Parse canonical text (``81*t1^4 - 1/3*t2``) into a rational function."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExactArithmeticError(f"cannot parse expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return ring.const(node.value)
        if isinstance(node, ast.Name):
            return ring.gen(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            if isinstance(node.op, ast.Pow):
                exp = ev(node.right)
                if not exp.is_constant() or exp.constant_value().denominator != 1:
                    raise ExactArithmeticError("exponents must be integers")
                return ev(node.left) ** int(exp.constant_value())
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        raise ExactArithmeticError(f"unsupported syntax in {text!r}")

    return ev(tree)


# --- matrices ----------------------------------------------------------------

class MatrixRF:
    """Dense matrix of rational functions over one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, entries: Sequence[Sequence]):
        self.ring = ring
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ExactArithmeticError("empty matrix")
        self.rows, self.cols = len(rows), len(rows[0])
        if any(len(r) != self.cols for r in rows):
            raise ExactArithmeticError("ragged matrix")
        self.entries = [[_as_rf(ring, x) for x in r] for r in rows]

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int | None = None) -> "MatrixRF":
        cols = rows if cols is None else cols
        return cls(ring, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring: Ring, size: int) -> "MatrixRF":
        return cls(ring, [[1 if i == j else 0 for j in range(size)] for i in range(size)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def map(self, fn) -> "MatrixRF":
        return MatrixRF(self.ring, [[fn(x) for x in r] for r in self.entries])

    def transpose(self) -> "MatrixRF":
        return MatrixRF(self.ring, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    T = property(transpose)

    def __add__(self, other: "MatrixRF") -> "MatrixRF":
        self._same_shape(other)
        return MatrixRF(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "MatrixRF") -> "MatrixRF":
        self._same_shape(other)
        return MatrixRF(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c) -> "MatrixRF":
        return self.map(lambda x: x * c)

    def __matmul__(self, other: "MatrixRF") -> "MatrixRF":
        return mat_mul(self, other)

    def _same_shape(self, other):
        if self.shape() != other.shape():
            raise ExactArithmeticError(f"shape mismatch {self.shape()} vs {other.shape()}")

    def __eq__(self, other):
        if not isinstance(other, MatrixRF):
            return NotImplemented
        if self.shape() != other.shape():
            return False
        return all(rf_equal(a, b) for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.entries for x in r)

    def is_lower_triangular(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_upper_triangular(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.rows) for j in range(min(i, self.cols)))

    def to_text(self) -> list[list[str]]:
        return [[x.to_text() for x in r] for r in self.entries]

    def __repr__(self):
        return "MatrixRF(" + repr(self.to_text()) + ")"


def _as_rf(ring: Ring, x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        if x.ring is not ring:
            raise ExactArithmeticError("matrix entry from another ring")
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return ring.const(x)


def mat_mul(a: MatrixRF, b: MatrixRF) -> MatrixRF:
    if a.cols != b.rows:
        raise ExactArithmeticError(f"cannot multiply {a.shape()} by {b.shape()}")
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = a.ring.zero()
            for k in range(a.cols):
                x, y = a.entries[i][k], b.entries[k][j]
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return MatrixRF(a.ring, out)


def mat_inverse_lower_triangular(s: MatrixRF) -> MatrixRF:
    """Inverse of a lower-triangular matrix by forward substitution."""
    if s.rows != s.cols:
        raise ExactArithmeticError("matrix is not square")
    if not s.is_lower_triangular():
        raise ExactArithmeticError("matrix is not lower triangular")
    size = s.rows
    if any(s.entries[i][i].is_zero() for i in range(size)):
        raise ExactArithmeticError("zero diagonal entry")
    inv_diag = [s.entries[i][i].inverse() for i in range(size)]
    t = [[s.ring.zero() for _ in range(size)] for _ in range(size)]
    for j in range(size):
        t[j][j] = inv_diag[j]
        for i in range(j + 1, size):
            acc = s.ring.zero()
            for k in range(j, i):
                if not s.entries[i][k].is_zero() and not t[k][j].is_zero():
                    acc = acc + s.entries[i][k] * t[k][j]
            t[i][j] = -acc * inv_diag[i]
    return MatrixRF(s.ring, t)


def matrix_from_text(ring: Ring, rows: Iterable[Iterable[str]]) -> MatrixRF:
    return MatrixRF(ring, [[parse_expression(x, ring) if isinstance(x, str) else x for x in r] for r in rows])
