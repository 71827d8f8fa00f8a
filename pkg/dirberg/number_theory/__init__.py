from dirberg.number_theory.arithmetic import (
    ArithmeticSequence,
    EulerProduct,
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
    multiplicative_table,
    prime_omega_table,
    prime_power_tail,
    zeta_power_coeffs,
)
from dirberg.number_theory.primes import first_primes, nth_prime, prime_index, primes_up_to
