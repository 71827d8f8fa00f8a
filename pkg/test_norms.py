import math

import numpy as np
import pytest

from dirberg.dirichlet_poly.polynomial import Character, DirichletPolynomial, translate, twist
from dirberg.measures.measures import DiracAtZero, gamma_density
from dirberg.norms.norms import (
    a2_norm,
    ap_norm,
    b2_norm,
    bp_norm_mc,
    d2_norm,
    dirichlet_space_norm,
    even_ap_norm,
    even_bp_norm,
    even_hp_norm,
    h2_norm,
    mc_hp_norm,
    sample_power_means,
    sampler_for,
)
from dirberg.norms.sampling import SamplerConfig, character_mean, log_coordinates, map_blocks, sample_character
from dirberg.services.errors import BudgetExceeded, DomainError
from dirberg.verification.random_model import random_polynomials

SEED = 7


def test_norms_of_readme_example(two_plus_three):
    assert h2_norm(two_plus_three).value == pytest.approx(math.sqrt(2), rel=1e-15)
    assert b2_norm(two_plus_three).value == pytest.approx(1.0, rel=1e-15)


def test_exact_hilbert_norms(one_plus_two, mu0):
    assert h2_norm(one_plus_two).value == pytest.approx(math.sqrt(2))
    assert b2_norm(one_plus_two).value == pytest.approx(math.sqrt(1.5))
    assert a2_norm(one_plus_two, mu0).value == pytest.approx(math.sqrt(1 + 1 / (1 + math.log(2))))
    assert a2_norm(one_plus_two, DiracAtZero()).value == pytest.approx(math.sqrt(2))
    log2 = math.log(2)
    assert d2_norm(one_plus_two, mu0).value == pytest.approx(math.sqrt(1 + log2 ** 2 / (1 + log2)))


def test_even_norms(one_plus_two, mu0):
    # ||1 + z||_{L^4(T)}^4 = 6 and ||z||_{B^4}^4 = 1/3
    assert even_hp_norm(one_plus_two, 4).value == pytest.approx(6 ** 0.25)
    assert even_bp_norm(DirichletPolynomial.monomial(2), 4).value == pytest.approx(3 ** -0.25)
    assert even_hp_norm(one_plus_two, 2).value == pytest.approx(h2_norm(one_plus_two).value)
    assert even_ap_norm(one_plus_two, mu0, 4).value == pytest.approx(ap_norm(one_plus_two, mu0, 4).value)
    with pytest.raises(DomainError):
        even_hp_norm(one_plus_two, 3)
    with pytest.raises(BudgetExceeded):
        even_hp_norm(DirichletPolynomial.monomial(1000), 6, budget=10_000)


def test_ap_norm_at_two_is_a2(mu0):
    f = DirichletPolynomial.from_terms({1: 1.0, 2: -0.5j, 3: 0.25, 6: 1.0})
    assert ap_norm(f, mu0, 2).value == pytest.approx(a2_norm(f, mu0).value, rel=1e-14)
    with pytest.raises(DomainError):
        ap_norm(f, mu0, 3)
    with pytest.raises(DomainError):
        ap_norm(f, mu0, 0.5)


def test_ap_norm_for_densities_uses_quadrature(mu0):
    f = DirichletPolynomial.from_terms({1: 1.0, 2: 1.0, 5: -1.0})
    mu = gamma_density(1.0, 2.0, 40.0)
    for p in (2, 4):
        estimate = ap_norm(f, mu, p)
        assert estimate.method == "quadrature"
        assert estimate.value == pytest.approx(ap_norm(f, mu0, p).value, rel=1e-6)


def test_dirichlet_space_norm(one_plus_two, mu0):
    assert dirichlet_space_norm(one_plus_two, mu0, 2).value == pytest.approx(d2_norm(one_plus_two, mu0).value)
    assert dirichlet_space_norm(DirichletPolynomial.constant(-3.0), mu0, 1.5).value == 3.0


def test_sampler_config_validation():
    with pytest.raises(DomainError):
        SamplerConfig(K=0)
    with pytest.raises(DomainError):
        SamplerConfig(K=1, samples=0)
    with pytest.raises(DomainError):
        SamplerConfig(K=1, seed=-1)
    with pytest.raises(DomainError):
        SamplerConfig(K=1, domain="ball")


def test_samples_are_a_function_of_seed_and_index():
    cfg = SamplerConfig(K=3, samples=5000, seed=SEED, block=1024)
    chi = sample_character(cfg, 1500)
    assert np.allclose(chi.coords, np.exp(log_coordinates(cfg, 1)[1500 - 1024]))
    assert np.allclose(np.abs(chi.coords), 1.0)
    assert np.array_equal(sample_character(cfg, 1500).coords, chi.coords)
    disk = sample_character(SamplerConfig(K=3, samples=10, seed=SEED, domain="polydisk"), 3)
    assert disk.mode == "polydisk"
    assert np.all(np.abs(disk.coords) < 1)


def test_blocks_are_thread_independent():
    cfg = SamplerConfig(K=4, samples=10_000, seed=SEED)
    worker = lambda logs: np.abs(1 + np.exp(logs[:, 0]) + np.exp(logs[:, 3])) ** 3
    assert np.array_equal(map_blocks(cfg, worker, threads=1), map_blocks(cfg, worker, threads=4))
    assert len(map_blocks(cfg, worker)) == 10_000


def test_haar_and_area_moments():
    torus = SamplerConfig(K=2, samples=50_000, seed=SEED)
    assert abs(character_mean(torus)) < 0.02
    disk = SamplerConfig(K=1, samples=50_000, seed=SEED, domain="polydisk")
    # E |z|^2 = 1/2 for the normalized area measure
    second_moment = np.mean(map_blocks(disk, lambda logs: np.exp(2 * logs[:, 0].real)))
    assert second_moment == pytest.approx(0.5, abs=0.01)


def test_monte_carlo_matches_exact_norms():
    f = DirichletPolynomial.from_terms({1: 1.0, 2: 0.5, 3: -0.5j, 6: 0.25})
    estimate = mc_hp_norm(f, 2.0, sampler_for(f, samples=50_000, seed=SEED))
    assert estimate.method == "monte-carlo"
    assert estimate.samples == 50_000
    assert abs(estimate.value - h2_norm(f).value) <= 5 * estimate.std_error
    estimate = bp_norm_mc(f, 2.0, sampler_for(f, samples=50_000, seed=SEED, domain="polydisk"))
    assert abs(estimate.value - b2_norm(f).value) <= 5 * estimate.std_error
    estimate = mc_hp_norm(f, 4.0, sampler_for(f, samples=50_000, seed=SEED))
    assert abs(estimate.value - even_hp_norm(f, 4).value) <= 5 * estimate.std_error


def test_monte_carlo_is_deterministic():
    f = DirichletPolynomial.from_terms({1: 1.0, 2: 1.0, 3: 1.0})
    cfg = sampler_for(f, samples=3000, seed=SEED)
    assert mc_hp_norm(f, 3.0, cfg) == mc_hp_norm(f, 3.0, cfg)
    other = sampler_for(f, samples=3000, seed=SEED + 1)
    assert mc_hp_norm(f, 3.0, cfg).value != mc_hp_norm(f, 3.0, other).value


def test_sampler_domain_must_match(one_plus_two):
    with pytest.raises(DomainError):
        mc_hp_norm(one_plus_two, 3.0, SamplerConfig(K=1, domain="polydisk"))
    with pytest.raises(DomainError):
        bp_norm_mc(one_plus_two, 3.0, SamplerConfig(K=1, domain="torus"))


def test_paired_estimates_share_samples(mu0):
    fs = random_polynomials(SEED, 4, (1, 12))
    cfg = SamplerConfig(K=5, samples=2048, seed=SEED)
    rows = sample_power_means(fs, [1.0, 3.0], cfg)
    assert len(rows) == 4 and all(len(row) == 2 for row in rows)
    for f, row in zip(fs, rows):
        assert row[1].value == pytest.approx(mc_hp_norm(f, 3.0, cfg).value, rel=1e-12)
    bergman = sample_power_means(fs, [3.0], cfg, mu0)
    assert bergman[0][0].value == pytest.approx(ap_norm(fs[0], mu0, 3.0, cfg).value, rel=1e-12)


def test_constant_polynomial_has_no_sampling_error(mu0):
    one = DirichletPolynomial.constant(1.0)
    estimate = ap_norm(one, mu0, 1.0, SamplerConfig(K=1, samples=100, seed=SEED))
    assert estimate.value == pytest.approx(1.0, abs=1e-12)
    assert estimate.std_error == pytest.approx(0.0, abs=1e-12)


def test_exact_contractions(mu0):
    for f in random_polynomials(SEED, 25, (1, 40)):
        hardy = h2_norm(f).value
        assert a2_norm(f, mu0).value <= hardy * (1 + 1e-12)
        assert even_bp_norm(f, 4).value <= hardy * (1 + 1e-12)
        assert b2_norm(f).value <= hardy * (1 + 1e-12)


def test_twist_preserves_norms(mu0):
    rng = np.random.default_rng(SEED)
    for f in random_polynomials(SEED, 10, (1, 40)):
        chi = Character(np.exp(2j * np.pi * rng.random(12)))
        g = twist(f, chi)
        assert h2_norm(g).value == pytest.approx(h2_norm(f).value, rel=1e-12)
        assert even_hp_norm(g, 4).value == pytest.approx(even_hp_norm(f, 4).value, rel=1e-12)
        assert ap_norm(g, mu0, 4).value == pytest.approx(ap_norm(f, mu0, 4).value, rel=1e-12)
        assert b2_norm(g).value == pytest.approx(b2_norm(f).value, rel=1e-12)


def test_power_means_increase_on_shared_samples():
    fs = random_polynomials(SEED, 6, (1, 20))
    cfg = SamplerConfig(K=8, samples=2048, seed=SEED)
    for row in sample_power_means(fs, [1.0, 1.5, 2.0, 3.0, 5.0], cfg):
        values = [estimate.value for estimate in row]
        assert all(a <= b * (1 + 1e-12) for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("eps", [0.1, 0.5, 2.0])
def test_translation_contracts(mu0, eps):
    for f in random_polynomials(SEED, 10, (1, 40)):
        shifted = translate(f, eps)
        for p in (2, 4):
            assert ap_norm(shifted, mu0, p).value <= ap_norm(f, mu0, p).value * (1 + 1e-12)
            assert even_hp_norm(shifted, p).value <= even_hp_norm(f, p).value * (1 + 1e-12)
