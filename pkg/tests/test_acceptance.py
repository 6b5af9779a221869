"""One pass/fail test per acceptance criterion.

Criteria 3, 6, 8 and 10 fail: the published statements they check contain
misprints (see the decisions log for each witness and the corrected form).
"""
import time

import pytest

from cymodforms import verify as vf
from cymodforms.fields import CYSystem, VectorField
from cymodforms.moduli import CALIBRATED_CN
from cymodforms.published import PUBLISHED_R


def _failures(rep):
    return [(r.relation_id, r.lhs, r.rhs) for r in rep.failures()]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_01_published_vector_fields(n):
    start = time.perf_counter()
    system = CYSystem(n, CALIBRATED_CN[n])  # fresh, uncached
    expected = VectorField(system.chart, {k: system.ring.parse(v) for k, v in PUBLISHED_R[n].items()})
    for name in system.chart.chart_generators:
        assert system.R.component(name) == expected.component(name), name
    assert time.perf_counter() - start < 10
    rep = vf.suite_published_fields()
    assert not [f for f in _failures(rep) if f[0].startswith(f"golden.n{n}.")]


def test_02_weights():
    rep = vf.suite_published_fields()
    weights = [r for r in rep.results if r.relation_id.endswith(".weights")]
    assert len(weights) == 5
    assert all(r.status == "pass" for r in weights), _failures(rep)


def test_03_sl2_and_homogeneity():
    start = time.perf_counter()
    rep = vf.suite_sl2(range(1, 7))
    rep.extend(vf.suite_homogeneity(range(1, 7)))
    elapsed = time.perf_counter() - start
    assert elapsed < 120
    assert rep.ok, _failures(rep)


def test_04_amsy_structure():
    rep = vf.suite_amsy((3, 4, 5))
    assert rep.ok, _failures(rep)


def test_05_serre_closure():
    rep = vf.suite_serre(range(1, 7))
    assert len(rep.results) > 0
    assert rep.ok, _failures(rep)


def test_06_bracket_tables():
    rep = vf.suite_brackets()
    ids = {r.relation_id for r in rep.results}
    assert "bracket.n2.t1_t4_1_squared" in ids and "bracket.n3.membership_D_in_M2" in ids
    assert rep.ok, _failures(rep)


def test_07_canonical_equals_standard():
    rep = vf.suite_canonical(ns=(1, 2, 3, 4), pairs=50, max_k=4)
    assert rep.ok, _failures(rep)


def test_08_rc_identities():
    rep = vf.suite_rc_identities(ns=(1, 2), triples=20, variant="printed")
    assert rep.ok, sorted({f[0] for f in _failures(rep)})


def test_09_connection_matrices():
    rep = vf.suite_matrices()
    assert rep.ok, _failures(rep)
    assert {"golden.n3.A_D", "golden.n3.A_R"} <= {r.relation_id for r in rep.results}


def test_10_qseries():
    start = time.perf_counter()
    rep = vf.suite_qseries(None, 50)
    assert time.perf_counter() - start < 30
    assert rep.ok, _failures(rep)


def test_11_property_fallback_large_n():
    rep = vf.suite_sl2((5, 6))
    rep.extend(vf.suite_homogeneity((5, 6)))
    rep.extend(vf.suite_amsy((5, 6)))
    rep.extend(vf.suite_serre((5, 6)))
    rep.extend(vf.suite_chart((5, 6)))
    ids = {r.relation_id for r in rep.results}
    assert {"chart.n5.SOmegaST", "chart.n6.SOmegaST", "chart.n5.dependent", "chart.n6.dependent"} <= ids
    assert rep.ok, _failures(rep)


def test_12_exploration_report():
    neg = vf.explore_negative_weights()
    delta = vf.explore_delta_polynomial(5)
    # non-blocking: the test checks that the exploration runs and reports
    print("negative weights:", neg)
    print("[Delta, Delta]_2 for n=5:", delta)
    assert set(neg) == {1, 2, 3, 4}
    assert all(v["total"] > 0 for v in neg.values())
    assert delta["n"] == 5 and delta["weight"] == 2 * 14 + 4
