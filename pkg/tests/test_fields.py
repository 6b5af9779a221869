import random

import pytest

from cymodforms.exact import mat_mul
from cymodforms.fields import (
    VectorField,
    check_amsy_structure,
    check_quasi_homogeneous,
    constant_field,
    cy_system,
    derive_g_field,
    lie_bracket,
    weighted_degree,
)
from cymodforms.published import LAMBDA_LARGE_N, YUKAWA_N3

NS = (1, 2, 3, 4, 5, 6)


def field(system, table):
    return VectorField(system.chart, {k: system.ring.parse(v) for k, v in table.items()})


def test_R_n1():
    s = cy_system(1)
    assert s.R == field(s, {"t1": "-t1*t2 - 9*(t1^3 - t3)", "t2": "81*t1*(t1^3 - t3) - t2^2",
                            "t3": "-3*t2*t3"})


def test_R_n2():
    s = cy_system(2)
    assert s.R == field(s, {"t1": "t3 - t1*t2", "t2": "2*t1^2 - t2^2/2", "t3": "-2*t2*t3 + 8*t1^3",
                            "t4": "-4*t2*t4"})


def test_R_n4_last_component():
    s = cy_system(4)
    assert s.R.component("t6") == s.ring.parse("-6*t2*t6")


def test_F_examples():
    s4, s3, s5 = cy_system(4), cy_system(3), cy_system(5)
    assert s4.F == constant_field(s4.chart, "t2")
    assert s3.F == field(s3, {"t2": "1", "t7": "-t4"})
    assert s5.F == field(s5, {"t2": "1", "t13": "-t11"})


def test_H_examples():
    s3 = cy_system(3)
    assert s3.H == field(s3, {"t1": "t1", "t2": "2*t2", "t3": "3*t3", "t5": "5*t5", "t6": "t6", "t7": "2*t7"})
    s2 = cy_system(2)
    assert s2.H == field(s2, {"t1": "2*t1", "t2": "2*t2", "t3": "4*t3", "t4": "8*t4"})


def test_D_examples():
    for n in (1, 4):
        s = cy_system(n)
        assert s.D == s.R
    s3 = cy_system(3)
    assert s3.D - s3.R == field(s3, {"t4": "t2*t4", "t7": "-t2*t7"})


def test_yukawa():
    s = cy_system(3)
    assert s.yukawa == [s.ring.parse(YUKAWA_N3)]
    # before dependent substitution the n=5 Y1 is s22^2/s33
    s5 = cy_system(5)
    assert s5.yukawa[0] == s5.ring.parse("t3^2/t6")
    for n in (4, 5, 6):
        ys = cy_system(n).yukawa
        for i in range(1, n - 1):
            if 2 * i == n - 1:
                continue  # the middle coupling has its own closed form
            assert ys[i - 1] == -ys[n - (i + 1) - 1]


@pytest.mark.parametrize("n", NS)
def test_yukawa_antisymmetry(n):
    s = cy_system(n)
    phi = s.data.Phi
    assert (mat_mul(s.Y, phi) + mat_mul(phi, s.Y.transpose())).is_zero()


@pytest.mark.parametrize("n", NS)
def test_connection_of_R_is_Y(n):
    s = cy_system(n)
    assert s.connection(s.R) == s.Y


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_connection_of_g_fields(n):
    s = cy_system(n)
    m = s.chart.m
    for a in range(1, m + 1):
        for b in range(a, 2 * m + 2 - a):
            assert s.connection(derive_g_field(s, a, b)) == s.g(a, b).transpose()


def test_bad_g_index():
    with pytest.raises(ValueError):
        derive_g_field(cy_system(3), 3, 3)


@pytest.mark.parametrize("n", NS)
def test_constraint_derivative(n):
    # R(S Omega S^T - Phi) = 0 with the full S' = Y S - S B(R), dependent slots included
    s = cy_system(n)
    S, om, gm = s.S, s.data.Omega, s.gm
    R = s.R
    b = gm.contract(R.component("t1"), R.component(f"t{n + 2}"))
    sdot = mat_mul(s.Y, S) - mat_mul(S, b)
    omdot = mat_mul(b, om) + mat_mul(om, b.transpose())
    total = (mat_mul(mat_mul(sdot, om), S.transpose()) + mat_mul(mat_mul(S, omdot), S.transpose())
             + mat_mul(mat_mul(S, om), sdot.transpose()))
    assert total.is_zero()
    # and the derived field really is R on the dependent slots
    s.derive_from(s.Y, check_dependent=True)
    assert S.map(R) == sdot


@pytest.mark.parametrize("n", NS)
def test_Lambda(n):
    s = cy_system(n)
    lam = s.Lambda
    assert weighted_degree(lam, s.weights) == 4
    assert lam.derivative("t2").is_zero()
    if n >= 5:
        assert lam == s.ring.parse(LAMBDA_LARGE_N)
    if n == 1:
        assert lam == s.ring.parse("-81*t1*(t1^3 - t3)")


@pytest.mark.parametrize("n", NS)
def test_quasi_homogeneous(n):
    s = cy_system(n)
    for v, d in ((s.R, 2), (s.D, 2), (s.H, 0), (s.F, -2)):
        rep = check_quasi_homogeneous(v, d, s.weights)
        assert rep.ok, rep.violations


def test_quasi_homogeneity_detects_violation():
    s = cy_system(1)
    bad = s.R + constant_field(s.chart, "t1")
    assert not check_quasi_homogeneous(bad, 2, s.weights).ok


def test_bracket_basics():
    s = cy_system(4)
    assert lie_bracket(s.R, s.R).is_zero()
    assert lie_bracket(s.H, s.F) == s.F.scale(-2)
    for n in (1, 2, 3, 4):
        t = cy_system(n)
        assert lie_bracket(t.R, t.F) == t.H


def _random_field(system, rng):
    ring, names = system.ring, system.chart.chart_generators
    comps = {}
    for name in rng.sample(names, 2):
        a, b = rng.sample(names, 2)
        comps[name] = rng.randint(-3, 3) * ring.gen(a) * ring.gen(b) + rng.randint(1, 4)
    return VectorField(system.chart, comps)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_jacobi(n):
    s = cy_system(n)
    rng = random.Random(n)
    pool = [s.R, s.H, s.F, s.D]
    for _ in range(6):
        u, v, w = rng.choice(pool), _random_field(s, rng), rng.choice(pool + [_random_field(s, rng)])
        total = (lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u))
                 + lie_bracket(w, lie_bracket(u, v)))
        assert total.is_zero()


def test_amsy_examples():
    s3 = cy_system(3)
    assert lie_bracket(s3.R, s3.g_field(2, 2)) == -s3.R
    s5 = cy_system(5)
    assert lie_bracket(s5.R, s5.g_field(3, 3)).is_zero()
    assert lie_bracket(s5.R, s5.g_field(1, 6)) == s5.g_field(1, 5)
    # the last generator's coordinate field is R_{g_{1(n+1)}}
    assert s5.g_field(1, 6) == constant_field(s5.chart, "t13")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_amsy(n):
    for rid, lhs, rhs in check_amsy_structure(cy_system(n)):
        assert lhs == rhs, rid
