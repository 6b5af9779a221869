from cymodforms import verify as vf

# misprinted statements; each is analysed in the decisions log
KNOWN_MISPRINTS = {
    "sl2.n2.Dd2",
    "bracket.n1.t3_t3_2",
    "qseries.n1.ode.printed",
    *(f"rc.printed.n{n}.{i}" for n in (1, 2) for i in ("ap6", "ap7", "ap8", "ap10")),
}


def test_corrected_identities_full_sample():
    rep = vf.suite_rc_identities(ns=(1, 2), triples=20, variant="corrected")
    assert rep.ok, [r.relation_id for r in rep.failures()]


def test_golden_failures_are_exactly_the_misprints():
    rep = vf.suite_golden(order=30)
    assert {r.relation_id for r in rep.failures()} == KNOWN_MISPRINTS
    assert rep.summary["pass"] > 200


def test_chart_suite():
    assert vf.suite_chart().ok


def test_explore_delta_polynomial_small_n():
    for n in (1, 2, 3, 4):
        assert vf.explore_delta_polynomial(n)["polynomial"]
