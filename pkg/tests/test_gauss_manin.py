from functools import lru_cache

import pytest

from cymodforms.exact import MatrixRF, Ring
from cymodforms.fields import cy_system
from cymodforms.gauss_manin import (
    contraction,
    gm_matrix,
    gm_matrix_of_R,
    gm_matrix_of_g,
    stirling2,
    valid_g_index,
)


@lru_cache(maxsize=None)
def partitions(r, s):
    # oracle: the set-partition recursion
    if r == s:
        return 1
    if s == 0 or s > r:
        return 0
    return s * partitions(r - 1, s) + partitions(r - 1, s - 1)


@pytest.mark.parametrize("r", range(0, 11))
def test_stirling_against_recursion(r):
    for s in range(0, r + 1):
        assert stirling2(r, s) == partitions(r, s)


def test_stirling_examples():
    assert stirling2(5, 4) == 10
    assert stirling2(5, 2) == 15
    assert all(stirling2(r, 1) == 1 for r in range(1, 9))
    for n in range(1, 8):
        assert stirling2(n + 2, n + 1) == (n + 1) * (n + 2) // 2


def test_stirling_domain():
    with pytest.raises(ValueError):
        stirling2(3, 4)
    with pytest.raises(ValueError):
        stirling2(-1, 0)


def test_gm_entries():
    for n in (1, 2, 3, 5):
        gm = gm_matrix(n)
        r = gm.dt1.ring
        t1, tn = r.gen("t1"), r.gen(f"t{n + 2}")
        assert gm.dt1[0, 0].is_zero()
        assert gm.dtn2[0, 0] == -1 / ((n + 2) * tn)
        assert gm.dt1[0, 1] == r.one()
        assert gm.dtn2[0, 1] == -t1 / ((n + 2) * tn)
        assert gm.dt1[n, n - 1] == -stirling2(n + 2, n) * t1 ** n / (t1 ** (n + 2) - tn)


def test_gm_rejects_bad_n():
    with pytest.raises(ValueError):
        gm_matrix(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_closed_form_of_B_R_matches_contraction(n):
    system = cy_system(n)
    closed = gm_matrix_of_R(n, system.s(2, 1), system.s(2, 2))
    assert closed == contraction(system.gm, system.R)


def test_closed_form_entries_n3():
    system = cy_system(3)
    m = gm_matrix_of_R(3, system.s(2, 1), system.s(2, 2))
    assert m[1, 1] == 2 * system.ring.gen("t2")
    assert m[0, 1] == system.s(2, 2)


def test_B_of_g():
    r = Ring(["t1", "t5"])
    diag = MatrixRF(r, [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]])
    assert gm_matrix_of_g(3, 1, 1, r) == diag
    assert gm_matrix_of_g(3, 1, 2, r).is_zero()
    assert gm_matrix_of_g(3, 2, 2, r).is_zero()
    with pytest.raises(ValueError):
        gm_matrix_of_g(3, 3, 3, r)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_B_of_g_matches_contraction_of_derived_field(n):
    system = cy_system(n)
    m = system.chart.m
    for a in range(1, m + 1):
        for b in range(a, 2 * m + 2 - a):
            if valid_g_index(n, a, b):
                field = system.g_field(a, b)
                assert contraction(system.gm, field) == gm_matrix_of_g(n, a, b, system.ring)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_first_row_of_s_dot(n):
    # t1' = s22 - t1 s21 and t_{n+2}' = -(n+2) s21 t_{n+2}
    system = cy_system(n)
    R, ring = system.R, system.ring
    t1, tn = ring.gen("t1"), ring.gen(f"t{n + 2}")
    assert R.component("t1") == system.s(2, 2) - t1 * system.s(2, 1)
    assert R.component(f"t{n + 2}") == -(n + 2) * system.s(2, 1) * tn
