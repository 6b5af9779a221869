from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cymodforms import qseries as qs
from cymodforms.qseries import QSeries, SeriesError


def naive_eta_tail(N):
    # oracle: prod_{k>=1} (1 - q^k) truncated below q^N, as a plain coefficient list
    coeffs = [Fraction(0)] * N
    coeffs[0] = Fraction(1)
    for k in range(1, N):
        for e in range(N - 1, k - 1, -1):
            coeffs[e] -= coeffs[e - k]
    return coeffs


def test_eta_against_product():
    N = 40
    e = qs.eta(N + Fraction(1, 24))
    tail = naive_eta_tail(N)
    for k in range(N):
        assert e.coefficient(k + Fraction(1, 24)) == tail[k]


def test_eta_examples():
    e = qs.eta(3)
    assert e.valuation() == Fraction(1, 24)
    assert e.coefficient(Fraction(25, 24)) == -1
    assert (qs.eta(5) ** 24).valuation() == 1
    assert qs.substitute_power(qs.eta(2), 3).valuation() == Fraction(1, 8)


def test_theta_examples():
    t3 = qs.theta3(5)
    assert t3.coefficients == {0: 1, Fraction(1, 2): 2, 2: 2, Fraction(9, 2): 2}
    t2 = qs.theta2(4)
    assert t2.coefficients == {Fraction(1, 8): 2, Fraction(9, 8): 2, Fraction(25, 8): 2}
    neg = qs.theta3_neg(5)
    assert neg.coefficient(Fraction(1, 2)) == -2 and neg.coefficient(2) == 2
    sq = qs.substitute_power(qs.theta3(5), 2)
    assert all(e.denominator == 1 for e in sq.coefficients)
    assert qs.substitute_power(qs.theta3(2), 6).coefficient(0) == 1


def test_e2():
    e2 = qs.eisenstein_e2(6)
    assert [e2.coefficient(k) for k in range(6)] == [1, -24, -72, -96, -168, -144]


def test_solution_n1_leading_terms():
    t1, t2, t3 = qs.solution_n1(10)
    assert t1.coefficient(0) == Fraction(1, 3)
    assert t2.coefficient(0) == -1
    assert t3.valuation() == 1 and t3.leading_coefficient() == 1


def test_solution_n2_leading_terms():
    T1, T2, T3, T4 = qs.solution_n2(10)
    # (10/6) T1 has constant term 1/24
    assert T1.coefficient(0) == Fraction(1, 40)
    assert T4.valuation() == 1 and T4.leading_coefficient() == Fraction(1, 10 ** 4)


@pytest.mark.parametrize("order", [2, 10, 50])
def test_R1_solution(order):
    for c in qs.verify_R1_solution(order):
        assert c.passed, (c.relation_id, c.witness())


@pytest.mark.parametrize("order", [10, 50])
def test_R2_solution(order):
    for c in qs.verify_R2_solution(order):
        assert c.passed, (c.relation_id, c.witness())


def test_printed_E2_arguments_fail_at_first_order():
    bad = [c for c in qs.verify_R1_solution(10, printed=True) if not c.passed]
    assert bad
    assert min((c.lhs - c.rhs).valuation() for c in bad) == 1
    assert not all(c.passed for c in qs.verify_R2_solution(10, printed=True))


def test_eta_identities():
    for c in qs.verify_eta_identities(50):
        assert c.passed, (c.relation_id, c.witness())


def test_ode_weight1_form_and_negative_control():
    checks = {c.relation_id: c for c in qs.verify_ode_422(20)}
    assert checks["qseries.n1.ode.weight1"].passed
    scaled = {c.relation_id: c for c in qs.verify_ode_422(20, scale=2)}
    assert not scaled["qseries.n1.ode.weight1"].passed
    # constant terms vanish on both sides
    c = checks["qseries.n1.ode.printed"]
    assert c.lhs.coefficient(0) == c.rhs.coefficient(0) == 0


def test_representation_count():
    assert qs.representation_count(0) == 1
    assert qs.representation_count(1) == 2
    assert qs.representation_count(4) == 6
    with pytest.raises(ValueError):
        qs.representation_count(-1)


def test_representation_report_relation():
    rep = qs.representation_report(30)
    assert rep["t1_odd_k_equals_count"]


def test_sqrt_requires_square_leading_coefficient():
    with pytest.raises(SeriesError):
        QSeries.from_terms({0: 2, 1: 1}, 5).sqrt()


def test_json_form():
    out = QSeries.from_terms({Fraction(1, 8): Fraction(-3, 2)}, 1).to_json()
    assert out == [{"exponent": "1/8", "coefficient": "-3/2"}]


# random series on the integer lattice with a non-zero constant term
def series(draw_coeffs, N=12):
    return QSeries.from_terms({k: c for k, c in enumerate(draw_coeffs)}, N)


coeff_lists = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=12)
unit_lists = st.tuples(st.sampled_from([Fraction(1), Fraction(-2), Fraction(3, 4)]), coeff_lists)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists)
def test_associativity_and_leibniz(a, b, c):
    f, g, h = series(a), series(b), series(c)
    assert (f * g) * h == f * (g * h)
    assert (f * g).theta() == f * g.theta() + g * f.theta()


@settings(max_examples=60, deadline=None)
@given(unit_lists)
def test_inverse(u):
    lead, rest = u
    f = series([lead] + rest[:11])
    assert f * f.inverse() == QSeries.constant(1, 12)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([Fraction(1), Fraction(4), Fraction(9, 4)]), coeff_lists)
def test_sqrt(lead, rest):
    f = series([lead] + rest[:11])
    r = f.sqrt()
    assert r * r == f


def test_derivation_scale():
    f = QSeries.from_terms({0: 1, 2: 5}, 4)
    assert f.derivation(3) == QSeries.from_terms({2: 30}, 4)
