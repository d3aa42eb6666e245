import random
from fractions import Fraction

import pytest

from cp2q.qarith import (
    LaurentScalar,
    QArithError,
    UnsupportedModeError,
    qbinom,
    qfact,
    qint,
    qparam_exact,
    qparam_float,
    qpow,
)

P5 = qparam_float(0.5)
PE = qparam_exact()
QS = (0.3, 0.5, 0.9)


def test_qint_trivial_cases():
    assert qint(1, P5) == pytest.approx(1.0)
    assert qint(0, P5) == 0.0


def test_qint_direct_value():
    # (q^2 - q^-2)/(q - q^-1) = q + q^-1
    assert qint(2, P5) == pytest.approx(2.5, abs=1e-14)


def test_qint_odd_on_lattice():
    for q in QS:
        p = qparam_float(q)
        for tw in range(-24, 25):
            z = Fraction(tw, 12)
            assert qint(-z, p) == pytest.approx(-qint(z, p), abs=1e-12)


def test_qint_rejects_off_lattice():
    with pytest.raises(QArithError):
        qint(Fraction(1, 7), P5)


def test_qint_exact_matches_float_on_integers():
    for q in QS:
        p = qparam_float(q)
        for n in range(-8, 9):
            exact = qint(n, PE).evaluate(q)
            flt = qint(n, p)
            assert exact == pytest.approx(flt, rel=1e-12, abs=1e-12)


def test_qint_exact_rejects_fractional():
    with pytest.raises(UnsupportedModeError):
        qint(Fraction(1, 2), PE)


def test_qfact_values():
    assert qfact(0, P5) == 1.0
    assert qfact(1, P5) == 1.0
    assert qfact(3, P5) == pytest.approx(13.125, abs=1e-12)  # [3][2][1] = 5.25*2.5*1
    with pytest.raises(QArithError):
        qfact(-1, P5)


def test_qbinom_values():
    for n in range(5):
        assert qbinom(n, 0, P5) == pytest.approx(1.0)
    assert qbinom(2, 1, P5) == pytest.approx(2.5, abs=1e-13)
    # classical limit
    p = qparam_float(1 - 1e-7)
    assert qbinom(4, 2, p) == pytest.approx(6.0, abs=1e-4)
    assert qbinom(4, 2, PE).evaluate_at_one() == Fraction(6)
    with pytest.raises(QArithError):
        qbinom(2, 3, P5)


def test_qbinom_symmetry():
    for n in range(7):
        for m in range(n + 1):
            assert qbinom(n, m, P5) == pytest.approx(qbinom(n, n - m, P5), rel=1e-12)
            assert qbinom(n, m, PE) == qbinom(n, n - m, PE)


def test_qbinom_exact_times_factorials_is_factorial():
    for n in range(8):
        for m in range(n + 1):
            assert qbinom(n, m, PE) * qfact(m, PE) * qfact(n - m, PE) == qfact(n, PE)


def test_spectrum_lemma_identities_exact():
    # [n+1]^2 - 1 = [n][n+2], used to rewrite the Casimir gap on V(n,n)
    one = LaurentScalar.one()
    for n in range(9):
        lhs = qint(n + 1, PE) * qint(n + 1, PE) - one
        rhs = qint(n, PE) * qint(n + 2, PE)
        assert lhs == rhs
    # [a]^2 + [a+1]^2 - 1 = [2][a][a+1], the off-diagonal family rewrite
    for a in range(9):
        lhs = qint(a, PE) * qint(a, PE) + qint(a + 1, PE) * qint(a + 1, PE) - one
        rhs = qint(2, PE) * qint(a, PE) * qint(a + 1, PE)
        assert lhs == rhs


def _random_scalar(rng) -> LaurentScalar:
    out = LaurentScalar.zero()
    for _ in range(rng.randrange(1, 5)):
        out = out + LaurentScalar.t_power(rng.randrange(-20, 21),
                                          Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)))
    return out


def test_evaluation_homomorphism():
    rng = random.Random(42)
    for _ in range(40):
        a, b = _random_scalar(rng), _random_scalar(rng)
        for q in QS:
            prod = (a * b).evaluate(q)
            sum_ = (a + b).evaluate(q)
            scale = max(abs(prod), abs(sum_), 1.0)
            assert abs(prod - a.evaluate(q) * b.evaluate(q)) < 1e-12 * scale
            assert abs(sum_ - (a.evaluate(q) + b.evaluate(q))) < 1e-12 * scale


def test_laurent_no_zero_coeffs_stored():
    a = LaurentScalar.t_power(3) - LaurentScalar.t_power(3)
    assert not a.coeffs
    assert a == LaurentScalar.zero()


def test_qpow_both_modes():
    assert qpow(Fraction(1, 2), P5) == pytest.approx(0.5**0.5)
    assert qpow(Fraction(1, 12), PE).evaluate(0.5) == pytest.approx(0.5 ** (1 / 12))


def test_qparam_validation():
    with pytest.raises(QArithError):
        qparam_float(1.5)
    with pytest.raises(QArithError):
        qparam_float(0.0)
