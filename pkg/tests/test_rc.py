import random
from fractions import Fraction
from math import comb

import pytest

from cymodforms import rc
from cymodforms.rc import (
    INHOMOGENEOUS,
    CYModularForms,
    GradingError,
    apply_derivation,
    binomial,
    canonical_bracket,
    check_rc_identities,
    is_two_cy,
    rc_bracket,
    weight_of,
)


def algebra(n):
    return CYModularForms(n)


def sample(n, seed, count, max_weight=6):
    A = algebra(n)
    rng = random.Random(seed)
    ws = rc.achievable_weights(A, max_weight)
    return [rc.random_homogeneous(A, rng.choice(ws), rng) for _ in range(count)]


def naive_bracket(f, g, k):
    # oracle: iterate the vector field D directly and use math.comb
    D = f.algebra.system.D
    r, s = f.weight, g.weight
    fs, gs = [f.value], [g.value]
    for _ in range(k):
        fs.append(D(fs[-1]))
        gs.append(D(gs[-1]))
    acc = f.algebra.ring.zero()
    for j in range(k + 1):
        i = k - j
        acc = acc + (-1) ** j * comb(k + r - 1, i) * comb(k + s - 1, j) * fs[j] * gs[i]
    return acc


def test_binomial_matches_comb():
    for a in range(0, 12):
        for i in range(0, 12):
            assert binomial(a, i) == comb(a, i)


def test_binomial_negative_upper_index():
    for k in range(1, 6):
        for r in range(0, 6):
            assert binomial(-k, r) == (-1) ** r * comb(k + r - 1, r)
    assert binomial(5, -1) == 0


def test_weight_examples():
    A1, A3 = algebra(1), algebra(3)
    assert weight_of(A1.gen("t3")) == 3
    assert weight_of(A3.parse("1/(t5*(t1^5 - t5))")) == -10
    assert weight_of(A1.parse("t1 + t2")) == INHOMOGENEOUS


def test_grading_errors():
    A = algebra(1)
    with pytest.raises(GradingError):
        rc_bracket(A.parse("t1 + t2"), A.gen("t1"), 1)
    with pytest.raises(GradingError):
        A.serre(A.parse("t1 + t2"))


def test_derivation_examples():
    A3, A1 = algebra(3), algebra(1)
    assert apply_derivation(A3.D, A3.gen("t1")) == A3.parse("t3 - t1*t2")
    assert A1.serre(A1.gen("t1")) == A1.parse("-9*(t1^3 - t3)")
    assert A1.D(A1.gen("t3")).weight == 5


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_serre_leibniz_and_degree(n):
    A = algebra(n)
    for f, g in zip(sample(n, 1, 4), sample(n, 2, 4)):
        lhs = A.serre(f * g)
        assert lhs == f * A.serre(g) + g * A.serre(f)
        assert lhs.weight == f.weight + g.weight + 2
        assert is_two_cy(lhs)
        for kind in ("R", "D"):
            op = A.derivation(kind)
            assert op(f * g) == f * op(g) + g * op(f)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bracket_against_oracle(n):
    fs = sample(n, 10 + n, 6)
    for f, g in zip(fs[::2], fs[1::2]):
        for k in range(4):
            val = rc_bracket(f, g, k)
            assert val.value == naive_bracket(f, g, k)
            assert val.weight == f.weight + g.weight + 2 * k


@pytest.mark.parametrize("n", [1, 2])
def test_bracket_laws(n):
    fs = sample(n, 20 + n, 6)
    for f, g in zip(fs[::2], fs[1::2]):
        assert rc_bracket(f, g, 0) == f * g
        for k in range(4):
            assert rc_bracket(f, g, k) == (-1) ** k * rc_bracket(g, f, k)
        for k in (1, 3):
            assert rc_bracket(f, f, k).is_zero()


def test_published_bracket_examples():
    A1, A4 = algebra(1), algebra(4)
    assert rc_bracket(A1.gen("t1"), A1.gen("t3"), 1) == A1.parse("27*t3*(t1^3 - t3)")
    assert rc_bracket(A1.gen("t1"), A1.gen("t3"), 1) == 27 * A1.discriminant
    assert rc_bracket(A4.gen("t1"), A4.gen("t6"), 1) == A4.parse("-6*t3*t6")


def test_canonical_examples():
    A = algebra(1)
    f, g = A.gen("t1"), A.gen("t3")
    assert canonical_bracket(f, g, 0) == f * g
    assert canonical_bracket(f, g, 1) == 27 * A.discriminant
    first = rc.canonical_iterates(f, 1, A.serre, A.Lambda)
    assert first[1] == A.serre(f)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_canonical_equals_standard(n):
    fs = sample(n, 30 + n, 6, max_weight=4)
    for f, g in zip(fs[::2], fs[1::2]):
        for k in range(4):
            assert canonical_bracket(f, g, k) == rc_bracket(f, g, k)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_D_lambda(n):
    A = algebra(n)
    assert A.D(A.lam) == A.Lambda + A.lam * A.lam


def test_is_two_cy_examples():
    A = algebra(3)
    assert not is_two_cy(A.gen("t2"))
    f, g = A.gen("t4"), A.parse("t5*(t1^5 - t5)")
    via_d = rc_bracket(f, g, 1, "D")
    assert via_d == A.parse("10*t5*t7*(t1^5 - t5)") and is_two_cy(via_d)
    assert not is_two_cy(rc_bracket(f, g, 1, "R"))


@pytest.mark.parametrize("n", [1, 2])
def test_corrected_identities(n):
    fs = sample(n, 40 + n, 9, max_weight=5)
    for f, g, h in zip(fs[::3], fs[1::3], fs[2::3]):
        for rid, lhs, rhs in check_rc_identities(f, g, h, variant="corrected"):
            assert lhs == rhs, rid


def test_identities_on_named_triple():
    A = algebra(1)
    for rid, lhs, rhs in check_rc_identities(A.gen("t1"), A.gen("t3"), A.discriminant, variant="corrected"):
        assert lhs == rhs, rid


def test_symmetric_weights_sum_vanishes():
    # with equal weights the three coefficient choices coincide, so the
    # printed and corrected forms of the weighted cyclic sum agree
    A = algebra(1)
    f, g, h = A.gen("t3"), A.parse("t1^3"), A.parse("t1*t2")
    printed = dict((rid, lhs) for rid, lhs, _ in check_rc_identities(f, g, h, variant="printed"))
    assert printed["ap6"].is_zero()


def test_unknown_variant():
    A = algebra(1)
    with pytest.raises(ValueError):
        check_rc_identities(A.gen("t1"), A.gen("t1"), A.gen("t1"), variant="other")


def test_negative_weight_samples():
    A = algebra(1)
    f = rc.with_negative_weight(A.gen("t1"))
    assert f.weight == 1 - 6
    val = rc_bracket(f, A.gen("t3"), 1)
    assert val.weight == 1 - 6 + 3 + 2
    assert binomial(-5, 2) == Fraction(15)
