from fractions import Fraction

import pytest

from cymodforms.exact import MatrixRF, Ring, mat_mul
from cymodforms.fields import cy_system
from cymodforms.moduli import (
    CALIBRATED_CN,
    build_chart,
    chart_dimension,
    check_chart_identity,
    diagonal_relation_holds,
    half_dimension,
    phi_matrix,
)

NS = (1, 2, 3, 4, 5, 6)


def test_chart_dimension_examples():
    assert chart_dimension(1) == 3
    assert chart_dimension(3) == 7
    assert chart_dimension(4) == 7
    with pytest.raises(ValueError):
        chart_dimension(0)


@pytest.mark.parametrize("n", range(1, 9))
def test_generator_count(n):
    chart = build_chart(n)
    assert len(chart.independent_generators) == chart.d == chart_dimension(n)
    # lower-triangular slots below (1, 1) are split between independent, dependent and extra
    slots = (n + 1) * (n + 2) // 2 - 1
    extra = 1 if n % 2 == 0 else 0
    assert len(chart.slots) == slots
    assert len(chart.dependent_generators) == slots - (chart.d - 2) - extra
    assert chart.m == half_dimension(n)


def test_printed_placement_n1():
    chart = build_chart(1)
    assert chart.slots == {(2, 1): "t2", (2, 2): "tc1"}


def test_printed_placement_n3():
    chart = build_chart(3)
    indep = {k: v for k, v in chart.slots.items() if not v.startswith("tc")}
    assert indep == {(2, 1): "t2", (2, 2): "t3", (3, 1): "t4", (3, 2): "t6", (4, 1): "t7"}
    assert set(chart.slots) - set(indep) == {(3, 3), (4, 2), (4, 3), (4, 4)}


def test_printed_placement_n5():
    chart = build_chart(5)
    indep = sorted((v, k) for k, v in chart.slots.items() if not v.startswith("tc"))
    assert [v for v, _ in indep] == sorted(f"t{i}" for i in range(2, 14) if i != 7)
    assert chart.slots[(6, 1)] == "t13" and chart.slots[(3, 3)] == "t6"


def test_even_charts_carry_extra_generator():
    assert build_chart(2).extra_generator == "t3"
    assert build_chart(4).extra_generator == "t8"
    assert build_chart(6).extra_generator == "t14"
    assert build_chart(3).extra_generator is None


@pytest.mark.parametrize("n", range(1, 9))
def test_phi_squared(n):
    r = Ring(["x"])
    phi = phi_matrix(n, r)
    assert mat_mul(phi, phi) == MatrixRF.identity(r, n + 1).scale((-1) ** n)


@pytest.mark.parametrize("n", NS)
def test_omega_shape(n):
    system = cy_system(n)
    om, ring = system.data.Omega, system.ring
    t1, tn = ring.gen("t1"), ring.gen(f"t{n + 2}")
    for i in range(n + 1):
        for j in range(n + 1):
            if i + j + 2 <= n + 1:
                assert om[i, j].is_zero()
            # (-1)^n symmetry
            assert om[i, j] == (-1) ** n * om[j, i]
    assert om[0, n] == (-(n + 2)) ** n * system.chart.cn_value() / (t1 ** (n + 2) - tn)
    if n == 2:
        assert om[1, 1] == -om[0, 2]


@pytest.mark.parametrize("n", NS)
def test_omega_flatness(n):
    system = cy_system(n)
    om, gm = system.data.Omega, system.gm
    for name, b in (("t1", gm.dt1), (f"t{n + 2}", gm.dtn2)):
        assert om.map(lambda x: x.derivative(name)) == mat_mul(b, om) + mat_mul(om, b.transpose())


@pytest.mark.parametrize("n", NS)
def test_chart_identity(n):
    system = cy_system(n)
    assert check_chart_identity(system.chart, system.data)


@pytest.mark.parametrize("n", NS)
def test_diagonal_relation(n):
    chart = cy_system(n).chart
    for i in range(1, chart.m + 1):
        assert diagonal_relation_holds(chart, i)


def test_dependent_n1():
    system = cy_system(1)
    ring = system.ring
    t1, t3 = ring.gen("t1"), ring.gen("t3")
    assert system.s(2, 2) == -(t1 ** 3 - t3) / (CALIBRATED_CN[1] * 3)


@pytest.mark.parametrize("n", NS)
def test_corner_entry(n):
    # the (1, n+1) entry of S Omega S^T = Phi reads Omega[1][n+1] s_{(n+1)(n+1)} = 1
    system = cy_system(n)
    assert system.data.Omega[0, n] * system.s(n + 1, n + 1) == system.ring.one()


def test_symbolic_constant_chart():
    system = cy_system(3, None)
    assert "c3" in system.ring.names
    assert check_chart_identity(system.chart, system.data)


def test_weights():
    assert cy_system(1).weights == {"t1": 1, "t2": 2, "t3": 3}
    assert cy_system(2).weights == {"t1": 2, "t2": 2, "t3": 4, "t4": 8}
    assert cy_system(3).weights == {"t1": 1, "t2": 2, "t3": 3, "t4": 0, "t5": 5, "t6": 1, "t7": 2}


@pytest.mark.parametrize("n", [4, 6])
def test_extra_generator_weight(n):
    system = cy_system(n)
    assert system.weights[system.chart.extra_generator] == (n + 2) // 2


def test_extra_generator_weight_n2():
    # the printed H for n = 2 scales t3 by 4, not by (n+2)/2
    assert cy_system(2).weights["t3"] == 4


def test_calibrated_constants():
    assert CALIBRATED_CN == {1: Fraction(1, 27), 2: Fraction(-1, 64), 3: Fraction(1, 5 ** 7),
                             4: Fraction(1, 6 ** 6)}
