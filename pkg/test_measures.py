import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirberg.measures.measures import (
    AlphaMeasure,
    Density,
    DiracAtZero,
    beta_h,
    bergman_weight,
    bergman_weight_quadrature,
    density,
    gamma_density,
    integrate,
    laguerre_rule,
    mass_below,
    measure_from_config,
    quadrature_rule,
    tilde_weight,
    uniform_density,
)
from dirberg.measures.weights import weight_sequence
from dirberg.services.config import MeasureConfig
from dirberg.services.errors import DomainError


def test_alpha_measure_domain():
    with pytest.raises(DomainError):
        AlphaMeasure(-1.0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.5])
def test_alpha_measure_is_a_probability(alpha):
    mu = AlphaMeasure(alpha)
    assert integrate(mu, lambda s: np.ones_like(np.asarray(s, dtype=float))) == pytest.approx(1.0, abs=1e-12)
    sigma, weights = laguerre_rule(alpha, 32)
    assert weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(sigma > 0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.5])
def test_weight_closed_form(alpha):
    mu = AlphaMeasure(alpha)
    for n in (2, 10, 1000, 10_000):
        closed = bergman_weight(mu, n)
        assert closed == pytest.approx((1 + math.log(n)) ** (-1 - alpha), rel=1e-14)
        assert bergman_weight_quadrature(mu, n, method="adaptive").value == pytest.approx(closed, abs=1e-9)


def test_weight_at_one_and_domain(mu0):
    assert bergman_weight(mu0, 1) == 1.0
    with pytest.raises(DomainError):
        bergman_weight(mu0, 0.5)


def test_tilde_weight(mu0):
    assert tilde_weight(mu0, 100) == pytest.approx(1 / (1 + math.log(100) / 2))
    assert tilde_weight(DiracAtZero(), 100) == 1.0


def test_dirac_collapses_to_hardy():
    mu = DiracAtZero()
    assert bergman_weight(mu, 1234) == 1.0
    assert integrate(mu, lambda s: 2 + s) == 2.0
    assert np.all(weight_sequence(mu).values(50) == 1.0)
    with pytest.raises(DomainError):
        density(mu, 0.1)


def test_mass_below(mu0):
    assert mass_below(mu0, 0.5) == pytest.approx(1 - math.exp(-1.0))
    assert mass_below(mu0, -1.0) == 0.0
    assert mass_below(DiracAtZero(), 0.0) == 1.0


def test_gamma_density_matches_alpha_zero(mu0):
    # gamma(1, 2) is mu_0 written as a user density
    mu = gamma_density(1.0, 2.0, 40.0)
    assert mu.tail_mass < 1e-30
    for n in (2, 50, 1000):
        assert bergman_weight(mu, n) == pytest.approx(bergman_weight(mu0, n), rel=1e-8)
    assert np.allclose(weight_sequence(mu).values(1000), weight_sequence(mu0).values(1000), rtol=1e-7)
    assert mass_below(mu, 0.5) == pytest.approx(mass_below(mu0, 0.5), rel=1e-8)


def test_density_validation():
    with pytest.raises(DomainError):
        Density(lambda s: np.where(np.asarray(s) <= 1.0, 2.0, 0.0), 1.0, 0.0)
    with pytest.raises(DomainError):
        # no mass near 0
        Density(lambda s: np.where((np.asarray(s) >= 0.5) & (np.asarray(s) <= 1.5), 1.0, 0.0), 1.5, 0.0)
    with pytest.raises(DomainError):
        uniform_density(0.0)


def test_uniform_density_weights():
    mu = uniform_density(1.0)
    n = 10.0
    exact = (1 - n ** -2) / (2 * math.log(n))
    assert bergman_weight(mu, n) == pytest.approx(exact, rel=1e-9)


def test_quadrature_rules(mu0):
    for mu in (mu0, DiracAtZero(), gamma_density(2.0, 3.0, 40.0)):
        sigma, weights = quadrature_rule(mu, 16)
        assert len(sigma) == len(weights)
        assert weights.sum() == pytest.approx(1.0, abs=1e-8)


def test_beta_h(mu0):
    # beta_h(sigma) = sigma - (1 - e^{-2 sigma}) / 2 for mu_0
    for sigma in (0.1, 1.0, 3.0):
        assert beta_h(mu0, sigma) == pytest.approx(sigma - (1 - math.exp(-2 * sigma)) / 2, rel=1e-10)
    assert beta_h(mu0, 0.0) == 0.0
    with pytest.raises(DomainError):
        beta_h(DiracAtZero(), 1.0)


def test_weight_sequence_grows_on_demand(mu0):
    sequence = weight_sequence(mu0)
    assert sequence is weight_sequence(AlphaMeasure(0.0))
    small = sequence.values(10).copy()
    large = sequence.values(5000)
    assert np.array_equal(large[:10], small)
    assert sequence[100] == pytest.approx(1 / (1 + math.log(100)))
    assert np.all(np.diff(large) < 0)


def test_slow_decay_witness(mu0):
    witness = weight_sequence(mu0).slow_decay_witness(0.1, 100_000)
    assert witness["increasing_at_end"]
    assert witness["argmin"] < 100_000


def test_measure_from_config():
    assert measure_from_config(MeasureConfig()) == AlphaMeasure(0.0)
    assert measure_from_config(MeasureConfig(type="alpha", alpha=1.5)) == AlphaMeasure(1.5)
    assert isinstance(measure_from_config(MeasureConfig(type="dirac0")), DiracAtZero)
    mu = measure_from_config(MeasureConfig(type="density", family="gamma", shape=2.0, rate=3.0, cutoff=40.0))
    assert isinstance(mu, Density)
    assert mu.describe()["cutoff"] == 40.0


def test_family_densities_share_weights():
    mu = gamma_density(1.0, 2.0, 40.0)
    same = gamma_density(1.0, 2.0, 40.0)
    assert mu == same and hash(mu) == hash(same)
    assert mu != gamma_density(1.0, 2.0, 30.0)
    assert weight_sequence(mu) is weight_sequence(same)
    assert weight_sequence(mu) is not weight_sequence(uniform_density(1.0))
    assert weight_sequence.cache_info().maxsize == 32


def test_unkeyed_densities_compare_by_identity():
    h = lambda s: np.where((np.asarray(s) >= 0) & (np.asarray(s) <= 2.0), 0.5, 0.0)
    mu, other = Density(h, 2.0, 0.0), Density(h, 2.0, 0.0)
    assert mu == mu and mu != other
    assert weight_sequence(mu) is weight_sequence(mu)
    assert weight_sequence(mu) is not weight_sequence(other)


@pytest.mark.parametrize("mu", [AlphaMeasure(0.0), AlphaMeasure(1.5), gamma_density(2.0, 3.0, 40.0)],
                         ids=["alpha0", "alpha1.5", "gamma"])
def test_beta_h_second_difference_is_density(mu):
    step = 1e-2
    for sigma in (0.2, 0.7, 1.5):
        second = (beta_h(mu, sigma + step) - 2 * beta_h(mu, sigma) + beta_h(mu, sigma - step)) / step ** 2
        assert second == pytest.approx(float(density(mu, sigma)), rel=2e-4)


MEASURES = [AlphaMeasure(0.0), AlphaMeasure(2.0), DiracAtZero(), gamma_density(2.0, 3.0, 40.0), uniform_density(1.5)]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(MEASURES), st.floats(-5.0, 5.0), st.floats(-5.0, 5.0))
def test_integrate_is_linear(mu, a, b):
    f = lambda s: np.exp(-np.asarray(s, dtype=float))
    g = lambda s: np.cos(np.asarray(s, dtype=float)) ** 2
    combined = integrate(mu, lambda s: a * f(s) + b * g(s))
    assert combined == pytest.approx(a * integrate(mu, f) + b * integrate(mu, g), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("mu", MEASURES, ids=["alpha0", "alpha2", "dirac", "gamma", "uniform"])
def test_integrate_is_positive(mu):
    assert integrate(mu, lambda s: np.sin(3 * np.asarray(s, dtype=float)) ** 2) >= 0
    assert integrate(mu, lambda s: np.exp(-np.asarray(s, dtype=float))) > 0


@pytest.mark.parametrize("mu", MEASURES, ids=["alpha0", "alpha2", "dirac", "gamma", "uniform"])
def test_weights_below_tilde_weights(mu):
    sequence = weight_sequence(mu)
    assert np.all(sequence.values(5000) <= sequence.tilde_values(5000) * (1 + 1e-12))
    assert bergman_weight(mu, 50.0) <= tilde_weight(mu, 50.0) * (1 + 1e-12)
