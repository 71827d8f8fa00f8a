import math

import numpy as np
import pytest

from dirberg.evaluation.annexe import annexe_compare, power_identity_gap
from dirberg.evaluation.evaluation import (
    bergman_disk_kernel_norm,
    bp_kernel_witness,
    disk_dirichlet_eval_bound,
    disk_eval_bound,
    eval_bound_ap_even,
    eval_bound_ap_general,
    eval_bound_ap_zero,
    eval_bound_dp,
    eval_lower_ap,
    eval_norm_a2,
    eval_norm_bp,
    eval_norm_hp,
    eval_norm_polydisk,
    kernel_a2,
    kernel_bp,
)
from dirberg.evaluation.zeta import log_weighted_zeta, zeta, zeta_minus_one, zeta_prime, zeta_upper
from dirberg.measures.measures import AlphaMeasure, DiracAtZero, gamma_density
from dirberg.measures.weights import weight_sequence
from dirberg.number_theory.primes import first_primes
from dirberg.services.errors import DomainError

ZETA_PRIME_2 = -0.93754825431584375


def test_zeta_values():
    assert zeta(2) == pytest.approx(math.pi ** 2 / 6, rel=1e-12)
    assert zeta(4) == pytest.approx(math.pi ** 4 / 90, rel=1e-12)
    assert zeta_minus_one(2) == pytest.approx(math.pi ** 2 / 6 - 1, rel=1e-12)
    assert zeta_prime(2) == pytest.approx(ZETA_PRIME_2, rel=1e-10)
    assert log_weighted_zeta(2, 1.0) == pytest.approx(math.pi ** 2 / 6 - ZETA_PRIME_2, rel=1e-10)
    assert zeta(1.5) < zeta_upper(1.5)
    with pytest.raises(DomainError):
        zeta(1.0)


def test_hardy_and_bp_evaluation():
    assert eval_norm_hp(1.0, 2).value == pytest.approx(math.sqrt(math.pi ** 2 / 6))
    assert eval_norm_hp(1.0 + 5j, 2).value == eval_norm_hp(1.0, 2).value
    assert eval_norm_bp(1.0, 2).value == pytest.approx(math.pi ** 2 / 6)
    assert eval_norm_bp(1.0, 4).value == pytest.approx(eval_norm_hp(1.0, 2).value)
    assert eval_norm_hp(0.8, 3).kind == "exact"
    for s in (0.5, 0.2 + 1j, -1.0):
        with pytest.raises(DomainError):
            eval_norm_hp(s, 2)
    with pytest.raises(DomainError):
        eval_norm_bp(1.0, 0.5)


def test_polydisk_evaluation():
    assert eval_norm_polydisk([0.5], 2).value == pytest.approx(4 / 3)
    point = first_primes(200).astype(float) ** -0.8
    assert eval_norm_polydisk(point, 2).value < eval_norm_bp(0.8, 2).value
    with pytest.raises(DomainError):
        eval_norm_polydisk([1.0], 2)


def test_bp_kernel():
    kernel = kernel_bp(1.0, 1.0)
    exact = (math.pi ** 2 / 6) ** 2
    assert kernel.value.real < exact
    assert exact - kernel.value.real <= 1.1 * kernel.tail_bound


def test_bp_kernel_witness():
    witness = bp_kernel_witness(0.6, prime_bound=100_000, max_exponent=40)
    assert witness["bound"] == pytest.approx(zeta(1.2))
    assert 0.9 <= witness["ratio"] <= 1.0


def test_a2_kernel(mu0):
    kernel = kernel_a2(mu0, 1.0, 1.0)
    exact = log_weighted_zeta(2.0, 1.0)
    assert 0 <= exact - kernel.value.real <= kernel.tail_bound + 1e-12
    assert eval_norm_a2(mu0, 1.0).value == pytest.approx(math.sqrt(exact))


def test_dirac_measure_evaluates_like_hardy():
    mu = DiracAtZero()
    assert eval_norm_a2(mu, 0.8).value == pytest.approx(eval_norm_hp(0.8, 2).value, rel=1e-12)
    for p in (1.5, 2.0, 3.0):
        general = eval_bound_ap_general(mu, 0.8, p)
        assert general.value == pytest.approx(eval_norm_hp(0.8, p).value, rel=1e-12)


def test_even_bergman_bounds(mu0):
    exact = eval_norm_a2(mu0, 0.8)
    at_two = eval_bound_ap_even(mu0, 0.8, 2)
    assert at_two.kind == "exact"
    assert at_two.value == exact.value
    at_four = eval_bound_ap_even(mu0, 0.8, 4)
    assert at_four.kind == "upper-bound"
    assert at_four.value == pytest.approx(math.sqrt(exact.value))
    with pytest.raises(DomainError):
        eval_bound_ap_even(mu0, 0.8, 3)


def test_general_bound_sits_above_exact(mu0):
    for sigma in (0.6, 0.8, 1.5):
        bound = eval_bound_ap_general(mu0, sigma, 2)
        assert bound.kind == "upper-bound"
        assert bound.value >= eval_norm_a2(mu0, sigma).value
        assert 0 < bound.parameters["eta"] < sigma - 0.5
    with pytest.raises(DomainError):
        eval_bound_ap_general(mu0, 0.8, 2, grid=[0.5])


def test_zero_constant_evaluation(mu0):
    at_two = eval_bound_ap_zero(mu0, 0.8, 2)
    assert at_two.kind == "exact"
    assert at_two.value < eval_norm_a2(mu0, 0.8).value
    assert eval_bound_ap_zero(mu0, 0.8, 3).kind == "upper-bound"


def test_lower_bound_below_exact(mu0):
    lower = eval_lower_ap(mu0, 0.8, 2, N=2000)
    assert lower.kind == "lower-bound"
    assert 1.0 <= lower.value <= eval_norm_a2(mu0, 0.8).value * (1 + 1e-9)
    assert lower.parameters["test_function"] == "kernel_power"


def test_dirichlet_space_bound(mu0):
    bound = eval_bound_dp(mu0, 0.8, 2)
    assert bound.kind == "upper-bound"
    assert bound.value >= math.sqrt(2)
    assert bound.parameters["integral"] > 0


def test_disk_bounds():
    assert bergman_disk_kernel_norm(0.5) == pytest.approx(4 / 3)
    # the radial space with weight dr has kernel (1 + r^2) / (1 - r^2)^2
    bound = disk_eval_bound(None, 0.5, 2)
    assert bound.value >= math.sqrt(1.25) / 0.75
    assert disk_dirichlet_eval_bound(None, 0.5, 2).value >= math.sqrt(2)
    with pytest.raises(DomainError):
        bergman_disk_kernel_norm(1.0)
    with pytest.raises(DomainError):
        disk_eval_bound(None, 1.2, 2)


def test_power_identity_is_equality():
    for space in ("Hp", "Bp"):
        assert power_identity_gap(space, 0.8, 2.0, 2) < 1e-12
        assert power_identity_gap(space, 0.7, 1.5, 3) < 1e-12
    with pytest.raises(DomainError):
        power_identity_gap("Ap", 0.8, 2.0, 2)


def test_annexe_relations(mu0):
    hardy = annexe_compare("Hp", 0.8, [1.0, 2.0, 4.0])
    assert hardy.passed
    assert {check["relation"] for check in hardy.checks} >= {"sandwich", "product", "monotone", "power"}
    bergman = annexe_compare("Ap", 0.8, [2.0, 4.0], mu0, N=300)
    assert bergman.passed
    assert list(bergman.table.columns) == ["p", "lower", "upper", "std_error"]
    assert np.all(bergman.table["lower"] <= bergman.table["upper"])
    with pytest.raises(DomainError):
        annexe_compare("Dp", 0.8, [2.0])


def test_evaluation_depends_on_real_part_only(mu0):
    sigma, s = 0.8, 0.8 + 17j
    assert eval_norm_hp(s, 3).value == eval_norm_hp(sigma, 3).value
    assert eval_norm_bp(s, 3).value == eval_norm_bp(sigma, 3).value
    assert eval_norm_a2(mu0, s).value == eval_norm_a2(mu0, sigma).value
    assert eval_bound_ap_even(mu0, s, 4).value == eval_bound_ap_even(mu0, sigma, 4).value
    assert eval_bound_ap_general(mu0, s, 3).value == eval_bound_ap_general(mu0, sigma, 3).value
    assert eval_bound_ap_zero(mu0, s, 2).value == eval_bound_ap_zero(mu0, sigma, 2).value
    assert eval_bound_dp(mu0, s, 2).value == eval_bound_dp(mu0, sigma, 2).value


@pytest.mark.parametrize("mu", [AlphaMeasure(0.0), AlphaMeasure(1.0), gamma_density(2.0, 3.0, 40.0)],
                         ids=["alpha0", "alpha1", "gamma"])
def test_a2_evaluation_is_kernel_sum(mu):
    sigma, N = 1.5, 100_000
    n = np.arange(1, N + 1, dtype=float)
    direct = np.sum(n ** (-2 * sigma) / weight_sequence(mu).values(N))
    assert eval_norm_a2(mu, sigma).value ** 2 == pytest.approx(direct, rel=1e-6)
