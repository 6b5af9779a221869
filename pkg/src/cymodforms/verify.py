"""Verification suites: each check is a relation id, an anchor naming the statement
being checked, and a pass/fail status with the two sides as canonical text.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .calibration import calibrate_cn
from .exact import ExactArithmeticError, MatrixRF
from .fields import (
    CYSystem,
    VectorField,
    check_amsy_structure,
    check_quasi_homogeneous,
    constant_field,
    cy_system,
    lie_bracket,
)
from .moduli import CALIBRATED_CN, chart_dimension, check_chart_identity, diagonal_relation_holds
from .published import (
    CONNECTION_D_N3,
    CONNECTION_R_N3,
    LAMBDA_LARGE_N,
    MEMBERSHIP_PAIR_N3,
    PUBLISHED_BRACKETS,
    PUBLISHED_D_SHIFT,
    PUBLISHED_F,
    PUBLISHED_H,
    PUBLISHED_R,
    PUBLISHED_WEIGHTS,
    YUKAWA_N3,
    general_weight_rules,
)
from . import qseries as qs
from . import rc

STATUSES = ("pass", "fail", "skipped")
DEFAULT_NS = (1, 2, 3, 4, 5, 6)


@dataclass
class CheckResult:
    relation_id: str
    anchor: str
    status: str
    lhs: str = ""
    rhs: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")


@dataclass
class VerificationReport:
    suite: str
    results: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    def add(self, relation_id: str, anchor: str, ok: bool, lhs=None, rhs=None):
        if ok:
            self.results.append(CheckResult(relation_id, anchor, "pass"))
        else:
            self.results.append(CheckResult(relation_id, anchor, "fail", _text(lhs), _text(rhs)))

    def skip(self, relation_id: str, anchor: str, reason: str = ""):
        self.results.append(CheckResult(relation_id, anchor, "skipped", reason, ""))

    def extend(self, other: "VerificationReport"):
        self.results.extend(other.results)

    @property
    def summary(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for r in self.results:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "fail"]

    def sorted(self) -> "VerificationReport":
        return VerificationReport(self.suite, sorted(self.results, key=lambda r: r.relation_id), self.elapsed)

    def to_dict(self, include_elapsed: bool = True) -> dict:
        rep = self.sorted()
        out = {"suite": rep.suite, "summary": rep.summary, "results": [asdict(r) for r in rep.results]}
        if include_elapsed:
            out["elapsed"] = round(rep.elapsed, 3)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        return cls(data["suite"], [CheckResult(**r) for r in data["results"]], data.get("elapsed", 0.0))

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(include_elapsed), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"suite {self.suite}: " + ", ".join(f"{k}={v}" for k, v in self.summary.items())]
        for r in self.sorted().results:
            lines.append(f"  [{r.status}] {r.relation_id}  ({r.anchor})")
            if r.status == "fail":
                lines.append(f"      lhs: {r.lhs}")
                lines.append(f"      rhs: {r.rhs}")
            elif r.status == "skipped" and r.lhs:
                lines.append(f"      {r.lhs}")
        return "\n".join(lines)


def _text(x) -> str:
    if x is None:
        return ""
    if isinstance(x, VectorField):
        return json.dumps(x.to_text(), sort_keys=True)
    if isinstance(x, MatrixRF):
        return json.dumps(x.to_text())
    if hasattr(x, "to_text"):
        return x.to_text()
    return str(x)


def _timed(suite: str, body: Callable[[VerificationReport], None]) -> VerificationReport:
    rep = VerificationReport(suite)
    start = time.perf_counter()
    body(rep)
    rep.elapsed = time.perf_counter() - start
    return rep


def _field_of(system: CYSystem, table: dict[str, str]) -> VectorField:
    ring = system.ring
    return VectorField(system.chart, {k: ring.parse(v) for k, v in table.items()})


# --- structure suites ---------------------------------------------------------------

def sl2_checks(system: CYSystem):
    """(id, anchor, lhs, rhs) for both sl2 triples."""
    n = system.n
    R, H, F, D = system.R, system.H, system.F, system.D
    d2 = constant_field(system.chart, "t2")
    return [
        (f"sl2.n{n}.RF", "[R, F] = H", lie_bracket(R, F), H),
        (f"sl2.n{n}.HR", "[H, R] = 2R", lie_bracket(H, R), R.scale(2)),
        (f"sl2.n{n}.HF", "[H, F] = -2F", lie_bracket(H, F), F.scale(-2)),
        (f"sl2.n{n}.Dd2", "[D, d/dt2] = H", lie_bracket(D, d2), H),
        (f"sl2.n{n}.HD", "[H, D] = 2D", lie_bracket(H, D), D.scale(2)),
        (f"sl2.n{n}.Hd2", "[H, d/dt2] = -2 d/dt2", lie_bracket(H, d2), d2.scale(-2)),
    ]


def suite_sl2(ns: Iterable[int] = DEFAULT_NS) -> VerificationReport:
    def body(rep):
        for n in ns:
            for rid, anchor, lhs, rhs in sl2_checks(cy_system(n)):
                rep.add(rid, anchor, lhs == rhs, lhs, rhs)
    return _timed("sl2", body)


def suite_homogeneity(ns: Iterable[int] = DEFAULT_NS) -> VerificationReport:
    def body(rep):
        for n in ns:
            system = cy_system(n)
            for name, v, deg in (("R", system.R, 2), ("D", system.D, 2), ("H", system.H, 0), ("F", system.F, -2)):
                res = check_quasi_homogeneous(v, deg, system.weights)
                rep.add(f"homogeneity.n{n}.{name}", f"{name} quasi-homogeneous of degree {deg}",
                        res.ok, "; ".join(res.violations), f"degree {deg}")
    return _timed("homogeneity", body)


def suite_amsy(ns: Iterable[int] = (2, 3, 4, 5, 6)) -> VerificationReport:
    def body(rep):
        for n in ns:
            system = cy_system(n)
            for rid, lhs, rhs in check_amsy_structure(system):
                rep.add(f"{rid}.n{n}", "AMSY bracket of R with R_g", lhs == rhs, lhs, rhs)
            A = system.connection(system.R)
            rep.add(f"connection.n{n}.A_R", "A_R = Y", A == system.Y, A, system.Y)
            for (a, b) in _g_indices(n):
                A = system.connection(system.g_field(a, b))
                gt = system.g(a, b).transpose()
                rep.add(f"connection.n{n}.A_g{a}{b}", "A_{R_g} = g^T", A == gt, A, gt)
    return _timed("amsy", body)


def _g_indices(n: int):
    from .gauss_manin import valid_g_index

    m = (n + 1) // 2 if n % 2 else n // 2
    return [(a, b) for a in range(1, m + 1) for b in range(a, 2 * m + 2 - a) if valid_g_index(n, a, b)]


def suite_serre(ns: Iterable[int] = DEFAULT_NS) -> VerificationReport:
    def body(rep):
        for n in ns:
            A = rc.CYModularForms(n)
            for g in A.system.chart.chart_generators:
                if g == "t2":
                    continue
                v = A.serre(A.gen(g))
                rep.add(f"serre.n{n}.{g}", "serre t_j is free of t2", rc.is_two_cy(v), v, "no t2")
    return _timed("serre", body)


def suite_chart(ns: Iterable[int] = DEFAULT_NS) -> VerificationReport:
    """S Omega S^T = Phi, the diagonal relation, and the dependent-slot consistency."""
    def body(rep):
        for n in ns:
            system = cy_system(n)
            rep.add(f"chart.n{n}.SOmegaST", "S Omega S^T = Phi", check_chart_identity(system.chart, system.data))
            for i in range(1, system.chart.m + 1):
                rep.add(f"chart.n{n}.diag{i}", "diagonal product relation", diagonal_relation_holds(system.chart, i))
            try:
                system.derive_from(system.Y, check_dependent=True)
                rep.add(f"chart.n{n}.dependent", "R differentiates dependent slots consistently", True)
            except ExactArithmeticError as exc:
                rep.add(f"chart.n{n}.dependent", "R differentiates dependent slots consistently", False, str(exc), "")
    return _timed("chart", body)


# --- brackets ------------------------------------------------------------------------

def suite_brackets() -> VerificationReport:
    def body(rep):
        for rid, n, f, g, k, expected in PUBLISHED_BRACKETS:
            A = rc.CYModularForms(n)
            val = rc.rc_bracket(A.parse(f), A.parse(g), k)
            exp = A.parse(expected)
            rep.add(f"bracket.{rid}", f"[{f}, {g}]_{k} for n={n}", val == exp, val, exp)
        A = rc.CYModularForms(2)
        b = rc.rc_bracket(A.gen("t1"), A.gen("t4"), 1)
        exp = A.parse("256*t4*Delta")
        rep.add("bracket.n2.t1_t4_1_squared", "[t1, t4]_1^2 = 256 t4 Delta", b * b == exp, b * b, exp)
        A = rc.CYModularForms(3)
        f, g = A.parse(MEMBERSHIP_PAIR_N3["f"]), A.parse(MEMBERSHIP_PAIR_N3["g"])
        for via, member in (("D", True), ("R", False)):
            val = rc.rc_bracket(f, g, 1, via)
            exp = A.parse(MEMBERSHIP_PAIR_N3[via])
            rep.add(f"bracket.n3.membership_{via}", f"[t4, Delta]_{{{via},1}} value", val == exp, val, exp)
            rep.add(f"bracket.n3.membership_{via}_in_M2", f"[t4, Delta]_{{{via},1}} in M2 is {member}",
                    rc.is_two_cy(val) == member, val, f"is_two_cy={member}")
        for n in range(3, 7):
            A = rc.CYModularForms(n)
            val = rc.rc_bracket(A.gen("t1"), A.gen(f"t{n + 2}"), 1)
            exp = A.element(-(n + 2) * A.ring.gen("t3") * A.ring.gen(f"t{n + 2}"))
            rep.add(f"bracket.n{n}.t1_tn2_1", "[t1, t_{n+2}]_1 = -(n+2) t3 t_{n+2}", val == exp, val, exp)
        for n in range(1, 5):
            A = rc.CYModularForms(n)
            val = rc.rc_bracket(A.discriminant, A.discriminant, 2)
            rep.add(f"bracket.n{n}.DeltaDelta_polynomial", "[Delta, Delta]_2 is a polynomial",
                    val.value.is_polynomial(), val, "polynomial")
    return _timed("brackets", body)


def suite_canonical(ns=(1, 2, 3, 4), pairs: int = 50, max_k: int = 4, seed: int = 0,
                    max_weight: int = 6) -> VerificationReport:
    def body(rep):
        for n in ns:
            A = rc.CYModularForms(n)
            rng = random.Random(seed * 1000 + n)
            bad_eq, bad_closed = [], []
            for p in range(pairs):
                f, g = rc.random_pair(A, rng, max_weight)
                for k in range(max_k + 1):
                    std = rc.rc_bracket(f, g, k)
                    if std != rc.canonical_bracket(f, g, k):
                        bad_eq.append((p, k, f, g))
                    if not rc.is_two_cy(std):
                        bad_closed.append((p, k, f, g))
            rep.add(f"canonical.n{n}.equal", f"canonical = standard, {pairs} pairs, k<={max_k}",
                    not bad_eq, *(_pair_text(bad_eq[0]) if bad_eq else ("", "")))
            rep.add(f"canonical.n{n}.closure", f"brackets of M2 pairs stay in M2, {pairs} pairs",
                    not bad_closed, *(_pair_text(bad_closed[0]) if bad_closed else ("", "")))
            lam_ok = A.D(A.lam) == A.Lambda + A.lam * A.lam
            rep.add(f"canonical.n{n}.D_lambda", "D lambda = Lambda + lambda^2", lam_ok)
    return _timed("canonical", body)


def _pair_text(item):
    p, k, f, g = item
    return f"pair {p} k={k}: f={f.to_text()}", f"g={g.to_text()}"


def suite_rc_identities(ns=(1, 2), triples: int = 20, seed: int = 0, variant: str = "printed",
                        max_weight: int = 6) -> VerificationReport:
    def body(rep):
        for n in ns:
            A = rc.CYModularForms(n)
            rng = random.Random(seed * 1000 + n)
            ws = rc.achievable_weights(A, max_weight)
            failures: dict[str, tuple] = {}
            ids: list[str] = []
            for t in range(triples):
                f, g, h = (rc.random_homogeneous(A, rng.choice(ws), rng) for _ in range(3))
                for rid, lhs, rhs in rc.check_rc_identities(f, g, h, variant=variant):
                    if rid not in ids:
                        ids.append(rid)
                    if lhs != rhs and rid not in failures:
                        failures[rid] = (t, lhs, rhs)
            for rid in ids:
                tag = f"rc.{variant}.n{n}.{rid}"
                if rid in failures:
                    t, lhs, rhs = failures[rid]
                    rep.add(tag, f"RC identity {rid} ({variant}), triple {t}", False, lhs, rhs)
                else:
                    rep.add(tag, f"RC identity {rid} ({variant}), {triples} triples", True)
    return _timed(f"rc_identities_{variant}", body)


# --- q-series ------------------------------------------------------------------------

def _series_checks(rep, checks):
    for c in checks:
        rep.add(c.relation_id, c.anchor, c.passed, c.witness(), "")


def suite_qseries(n: int | None = None, order=50) -> VerificationReport:
    def body(rep):
        if n in (None, 1):
            _series_checks(rep, qs.verify_R1_solution(order))
            _series_checks(rep, qs.verify_eta_identities(order))
            _series_checks(rep, qs.verify_ode_422(order))
        if n in (None, 2):
            _series_checks(rep, qs.verify_R2_solution(order))
    return _timed("qseries", body)


# --- golden ------------------------------------------------------------------------------

def suite_published_fields(cn_override: dict[int, Fraction] | None = None) -> VerificationReport:
    """R, H, F, D - R and weights against the published closed forms."""
    cn_override = cn_override or {}

    def body(rep):
        for n in (1, 2, 3, 4):
            system = cy_system(n, cn_override.get(n, "calibrated"))
            for name, table, field_ in (("R", PUBLISHED_R, system.R), ("H", PUBLISHED_H, system.H),
                                        ("F", PUBLISHED_F, system.F)):
                exp = _field_of(system, table[n])
                rep.add(f"golden.n{n}.{name}", f"published {name} for n={n}", field_ == exp, field_, exp)
            shift = system.D - system.R
            exp = _field_of(system, PUBLISHED_D_SHIFT[n])
            rep.add(f"golden.n{n}.D", f"published D for n={n}", shift == exp, shift, exp)
        for n in range(1, 6):
            w = cy_system(n).weights
            table = PUBLISHED_WEIGHTS[n] if n <= 3 else general_weight_rules(n, chart_dimension(n))
            sub = {k: w.get(k) for k in table}
            rep.add(f"golden.n{n}.weights", f"listed weights for n={n}", sub == table, sub, table)
        for n in (1, 2, 3, 4):
            c = calibrate_cn(n)
            rep.add(f"golden.n{n}.cn", "c_n calibrated from the published field", c == CALIBRATED_CN[n],
                    c, CALIBRATED_CN[n])
    return _timed("published_fields", body)


def suite_matrices(cn3=None) -> VerificationReport:
    def body(rep):
        system = cy_system(3, "calibrated" if cn3 is None else Fraction(cn3))
        ring = system.ring
        y = ring.parse(YUKAWA_N3)
        rep.add("golden.n3.yukawa", "Y1 for n=3", system.yukawa[0] == y, system.yukawa[0], y)
        for rid, field_, table in (("A_D", system.D, CONNECTION_D_N3), ("A_R", system.R, CONNECTION_R_N3)):
            exp = MatrixRF(ring, [[ring.parse(x) for x in row] for row in table])
            A = system.connection(field_)
            rep.add(f"golden.n3.{rid}", f"connection matrix {rid} for n=3", A == exp, A, exp)
        for n in (1, 2, 3, 4):
            s = cy_system(n)
            for (a, b) in _g_indices(n):
                A = s.connection(s.g_field(a, b))
                gt = s.g(a, b).transpose()
                rep.add(f"golden.n{n}.A_g{a}{b}", "A_{R_g} = g^T", A == gt, A, gt)
        for n in (5, 6):
            s = cy_system(n)
            exp = s.ring.parse(LAMBDA_LARGE_N)
            rep.add(f"golden.n{n}.Lambda", "Lambda for n >= 5", s.Lambda == exp, s.Lambda, exp)
            rep.add(f"golden.n{n}.Lambda_weight", "Lambda has weight 4",
                    rc.CYModularForms(n).Lambda.weight == 4)
    return _timed("matrices", body)


def suite_golden(order=50, seed: int = 0, ns=DEFAULT_NS, pairs: int = 10) -> VerificationReport:
    rep = VerificationReport("golden")
    start = time.perf_counter()
    for part in (suite_published_fields(), suite_matrices(), suite_brackets(), suite_qseries(None, order),
                 suite_sl2(ns), suite_homogeneity(ns), suite_amsy(tuple(n for n in ns if n >= 2)),
                 suite_serre(ns), suite_chart(ns),
                 suite_canonical(pairs=pairs, seed=seed, max_k=3),
                 suite_rc_identities(seed=seed, triples=5, variant="printed"),
                 suite_rc_identities(seed=seed, triples=5, variant="corrected")):
        rep.extend(part)
    rep.elapsed = time.perf_counter() - start
    return rep


# --- exploration (never blocking) ----------------------------------------------------

def explore_negative_weights(ns=(1, 2, 3, 4), samples: int = 5, seed: int = 0, max_k: int = 2) -> dict:
    """Closure of brackets when one argument has negative weight (f / Delta)."""
    out = {}
    for n in ns:
        A = rc.CYModularForms(n)
        rng = random.Random(seed + n)
        closed = total = 0
        for _ in range(samples):
            f, g = rc.random_pair(A, rng, 4)
            f = rc.with_negative_weight(f)
            for k in range(1, max_k + 1):
                total += 1
                closed += rc.is_two_cy(rc.rc_bracket(f, g, k))
        out[n] = {"closed": closed, "total": total, "weight_example": rc.with_negative_weight(A.one()).weight}
    return out


def explore_delta_polynomial(n: int = 5) -> dict:
    A = rc.CYModularForms(n)
    val = rc.rc_bracket(A.discriminant, A.discriminant, 2)
    return {"n": n, "polynomial": val.value.is_polynomial(), "weight": val.weight,
            "denominator": val.value.den.to_text()}


SUITES = {
    "sl2": lambda a: suite_sl2(a.ns),
    "amsy": lambda a: suite_amsy(tuple(n for n in a.ns if n >= 2)),
    "homogeneity": lambda a: suite_homogeneity(a.ns),
    "serre": lambda a: suite_serre(a.ns),
    "brackets": lambda a: suite_brackets(),
    "qseries": lambda a: suite_qseries(a.n, a.order),
    "golden": lambda a: suite_golden(a.order, a.seed, a.ns),
}
