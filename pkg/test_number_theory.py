import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirberg.number_theory.arithmetic import (
    ArithmeticSequence,
    Exponents,
    convolution_power,
    dirichlet_convolve,
    dirichlet_power,
    divisor_count,
    divisor_count_table,
    euler_product,
    factorize,
    generalized_divisor,
    generalized_divisor_table,
    prime_omega_table,
    prime_power_tail,
    zeta_power_coeffs,
)
from dirberg.number_theory.primes import first_primes, nth_prime, prime_index, primes_up_to
from dirberg.services.errors import DomainError

sequences = st.lists(st.integers(-20, 20), min_size=40, max_size=40)


def test_primes():
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert nth_prime(1) == 2
    assert nth_prime(10) == 29
    assert nth_prime(1000) == 7919
    assert prime_index(7919) == 1000
    assert first_primes(4).tolist() == [2, 3, 5, 7]
    with pytest.raises(DomainError):
        prime_index(91)


def test_factorize():
    e = factorize(360)
    assert e == Exponents(((1, 3), (2, 2), (3, 1)))
    assert e.value() == 360
    assert e.total_degree() == 6
    assert factorize(1) == Exponents()
    assert factorize(7919) == Exponents(((1000, 1),))
    with pytest.raises(DomainError):
        factorize(0)


def test_exponents_must_increase():
    with pytest.raises(DomainError):
        Exponents(((2, 1), (1, 1)))
    with pytest.raises(DomainError):
        Exponents(((1, 0),))


def test_divisor_functions():
    assert divisor_count(12) == 6
    assert generalized_divisor(3, 12) == 18
    assert generalized_divisor(1, 97) == 1
    table = generalized_divisor_table(3, 200)
    assert [int(v) for v in table] == [generalized_divisor(3, n) for n in range(1, 201)]
    for m in range(1, 7):
        for k in range(21):
            assert generalized_divisor(m, 3 ** k) == math.comb(m + k - 1, m - 1)


def test_divisor_table_is_convolution_of_ones():
    N = 500
    ones = ArithmeticSequence(np.ones(N, dtype=np.int64))
    assert np.array_equal(dirichlet_convolve(ones, ones).values, divisor_count_table(N))
    cubed = convolution_power(ones, 3)
    assert np.array_equal(np.asarray(cubed.values, dtype=np.int64), generalized_divisor_table(3, N))


def test_prime_omega():
    assert prime_omega_table(12).tolist() == [0, 1, 1, 2, 1, 2, 1, 3, 2, 2, 1, 3]


@settings(max_examples=50, deadline=None)
@given(sequences, sequences)
def test_convolution_commutes(a, b):
    a, b = ArithmeticSequence(np.array(a)), ArithmeticSequence(np.array(b))
    assert np.array_equal(dirichlet_convolve(a, b).values, dirichlet_convolve(b, a).values)


@settings(max_examples=30, deadline=None)
@given(sequences, sequences, sequences)
def test_convolution_associates(a, b, c):
    a, b, c = (ArithmeticSequence(np.array(x)) for x in (a, b, c))
    left = dirichlet_convolve(dirichlet_convolve(a, b), c)
    right = dirichlet_convolve(a, dirichlet_convolve(b, c))
    assert np.array_equal(left.values, right.values)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3000), st.integers(1, 3000))
def test_divisor_count_multiplicative(m, n):
    if math.gcd(m, n) == 1:
        assert divisor_count(m * n) == divisor_count(m) * divisor_count(n)


def test_convolution_length_mismatch():
    with pytest.raises(DomainError):
        dirichlet_convolve(ArithmeticSequence.ones(5), ArithmeticSequence.ones(6))


def test_zeta_power_coeffs():
    assert zeta_power_coeffs(2, 300).to_list() == [int(v) for v in divisor_count_table(300)]
    half = zeta_power_coeffs(Fraction(1, 2), 16)
    assert half[2] == Fraction(1, 2)
    assert half[4] == Fraction(3, 8)
    assert half[6] == Fraction(1, 4)
    with pytest.raises(DomainError):
        zeta_power_coeffs(0, 10)


def test_dirichlet_power_of_zeta():
    N = 300
    ones = ArithmeticSequence.ones(N)
    for q in (0.5, 1.5):
        direct = np.asarray(zeta_power_coeffs(q, N).values, dtype=float)
        assert np.allclose(dirichlet_power(ones, q).values, direct, rtol=1e-12, atol=1e-12)
    # zeta^{-1} has the Moebius coefficients, and zeta^{-1} * zeta = 1
    mobius = ArithmeticSequence(np.real(np.asarray(dirichlet_power(ones, -1.0).values, dtype=complex)))
    assert np.allclose(mobius.values[:10], [1, -1, -1, 0, -1, 1, -1, 0, 0, 1], atol=1e-12)
    assert np.allclose(dirichlet_convolve(mobius, ones).values, ArithmeticSequence.delta(N).values, atol=1e-9)


def test_dirichlet_power_needs_leading_coefficient():
    with pytest.raises(DomainError):
        dirichlet_power(ArithmeticSequence(np.array([0.0, 1.0])), 0.5)


def test_euler_product_of_zeta_two():
    product = euler_product(lambda p: 1 / (1 - p ** -2.0), 100_000)
    assert product.value == pytest.approx(math.pi ** 2 / 6, rel=1e-5)
    assert product.primes_used == 9592
    assert product.truncation_estimate < 1e-5


def test_euler_product_rejects_non_positive_factors():
    with pytest.raises(DomainError):
        euler_product(lambda p: 1 - 2.0 / p, 100)


def test_prime_power_tail():
    assert prime_power_tail(1e4, 2.0) > prime_power_tail(1e5, 2.0) > 0
    with pytest.raises(DomainError):
        prime_power_tail(100, 1.0)


@pytest.mark.parametrize("q, r", [(1, 1), (Fraction(1, 2), Fraction(1, 2)), (2, 1)])
def test_zeta_powers_multiply(q, r):
    N = 400
    product = dirichlet_convolve(zeta_power_coeffs(q, N), zeta_power_coeffs(r, N))
    assert product.to_list() == zeta_power_coeffs(q + r, N).to_list()


def test_generalized_divisor_is_convolution_power():
    N = 600
    ones = ArithmeticSequence.ones(N, exact=True)
    for m in range(1, 7):
        assert convolution_power(ones, m).to_list() == [int(v) for v in generalized_divisor_table(m, N)]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 2000), st.integers(1, 2000))
def test_generalized_divisor_multiplicative(k, m, n):
    if math.gcd(m, n) == 1:
        assert generalized_divisor(k, m * n) == generalized_divisor(k, m) * generalized_divisor(k, n)


def test_euler_product_converges_at_one_million():
    product = euler_product(lambda p: 1 / (1 - p ** -2.0), 1_000_000)
    assert product.value == pytest.approx(math.pi ** 2 / 6, rel=1e-6)
