"""Fixing the normalization constant c_n against published closed forms.

For odd n the chart ring keeps c_n as a generator, so each difference between a
derived component and its published form is a rational function whose numerator,
after specializing the t's at random integers, becomes a univariate polynomial
in c_n.  Its rational roots are the candidates; candidates common to every
component and every specialization are then checked exactly.  For even n the
constant is read off the printed quadratic relation and checked the same way.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping

import flint

from .exact import ExactArithmeticError, to_fraction
from .fields import CYSystem


class CalibrationError(ExactArithmeticError):
    """No value of c_n reproduces the published data."""


def _rational_roots(poly) -> set[Fraction]:
    _, factors = poly.factor()
    roots = set()
    for f, _mult in factors:
        if f.degree() == 1:
            a, b = f.coeffs()  # f = b*x + a
            roots.add(to_fraction(-a / b))
    return roots


def _univariate_in(p, names, keep: str, values: Mapping[str, int]):
    spec = p.subs({k: v for k, v in values.items() if k != keep})
    idx = names.index(keep)
    coeffs: dict[int, flint.fmpq] = {}
    for mon, c in zip(spec.monoms(), spec.coeffs()):
        coeffs[mon[idx]] = coeffs.get(mon[idx], 0) + c
    if not coeffs:
        return flint.fmpq_poly([])
    return flint.fmpq_poly([coeffs.get(k, 0) for k in range(max(coeffs) + 1)])


def candidate_constants(n: int, published: Mapping[str, str], trials: int = 3,
                        seed: int = 0) -> set[Fraction]:
    """Values of c_n consistent with every published component of R (odd n)."""
    if n % 2 == 0:
        raise ValueError("the symbolic-constant search is for odd n")
    system = CYSystem(n, None)
    ring, cname = system.ring, system.chart.cn_name
    rng = random.Random(seed)
    names = list(ring.names)
    found: set[Fraction] | None = None
    for gen, text in published.items():
        diff = system.R.component(gen) - ring.parse(text)
        if diff.is_zero():
            continue
        p = diff.num._p
        for _ in range(trials):
            vals = {x: rng.randint(2, 97) for x in names}
            uni = _univariate_in(p, names, cname, vals)
            if uni.is_zero():
                continue
            roots = {r for r in _rational_roots(uni) if r != 0}
            found = roots if found is None else found & roots
    if found is None:
        raise CalibrationError("published data does not involve c_n")
    return found


def constant_from_relation(n: int, coefficient: int | Fraction) -> Fraction:
    """c_n from a printed relation e^2 = K (t1^{n+2} - t_{n+2}) (even n)."""
    if n % 2:
        raise ValueError("only even n carries the quadratic relation")
    return Fraction((-1) ** (n // 2)) / (Fraction(coefficient) * (n + 2) ** n)


def matches_published(system: CYSystem, published: Mapping[str, str]) -> bool:
    ring = system.ring
    return all(system.R.component(g) == ring.parse(t) for g, t in published.items())


def calibrate_cn(n: int, published: Mapping[str, str] | None = None,
                 relation_coefficient: int | Fraction | None = None) -> Fraction:
    """Compute c_n so that the derived R equals the published one exactly."""
    from .published import PUBLISHED_R, PUBLISHED_RELATION

    if published is None:
        if n not in PUBLISHED_R:
            raise CalibrationError(f"no published field for n={n}")
        published = PUBLISHED_R[n]
    if n % 2:
        candidates = sorted(candidate_constants(n, published))
    else:
        if relation_coefficient is None:
            if n not in PUBLISHED_RELATION:
                raise CalibrationError(f"no published relation for n={n}")
            relation_coefficient = PUBLISHED_RELATION[n][1]
        candidates = [constant_from_relation(n, relation_coefficient)]
    for c in candidates:
        if matches_published(CYSystem(n, c), published):
            return c
    raise CalibrationError(f"no candidate among {candidates} reproduces the published field")
