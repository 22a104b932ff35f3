"""Complete-graph law, likelihood maximisation and self-consistency."""

import math

import numpy as np
import pytest

from isingqre import (
    CompleteGraphGame,
    GameParams,
    GumbelNoise,
    ProbitNoise,
    bernoulli_entropy,
)
from isingqre.errors import DomainError
from conftest import gumbel_game, probit_game

# Frozen with mpmath (40 digits).
LN2 = 0.69314718055994530942
ENTROPY_HALF = 0.56233514461880835029
TANH_HALF = 0.4621171572600097585
V_AT_TANH_HALF = 0.81326168751822283405   # tanh(.5)*0.5 + entropy(tanh(.5))
TANH2_ROOT = 0.95750402407726874068       # positive root of m = tanh(2m)


class TestBernoulliEntropy:
    def test_symmetric_maximum(self):
        assert bernoulli_entropy(0.0) == pytest.approx(LN2, abs=1e-15)

    def test_endpoints_zero(self):
        assert bernoulli_entropy(1.0) == 0.0
        assert bernoulli_entropy(-1.0) == 0.0

    def test_value_at_half(self):
        assert bernoulli_entropy(0.5) == pytest.approx(ENTROPY_HALF, abs=1e-15)

    def test_even_function(self):
        ms = np.linspace(-1.0, 1.0, 41)
        np.testing.assert_allclose(bernoulli_entropy(ms),
                                   bernoulli_entropy(-ms), rtol=0, atol=1e-16)

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            bernoulli_entropy(1.0001)
        with pytest.raises(DomainError):
            bernoulli_entropy(float("nan"))


class TestLogLikelihoodDensity:
    def test_entropy_only_at_m_zero(self):
        game = gumbel_game()
        assert game.log_likelihood_density(0.0, 0.3) == pytest.approx(LN2, abs=1e-15)

    def test_value_at_best_response(self):
        game = gumbel_game()
        m = math.tanh(0.5)
        assert game.log_likelihood_density(m, 0.5) == pytest.approx(
            V_AT_TANH_HALF, abs=1e-14)

    def test_beta_zero_reduces_to_entropy(self):
        game = gumbel_game(beta=0.0)
        for m in (-0.8, -0.2, 0.0, 0.4, 0.9):
            assert game.log_likelihood_density(m, 0.6) == pytest.approx(
                bernoulli_entropy(m), abs=1e-15)


class TestBestResponseMean:
    def test_tanh_value(self):
        assert gumbel_game().best_response_mean(0.5) == pytest.approx(
            TANH_HALF, abs=1e-15)

    def test_zero_field_zero_response(self):
        assert gumbel_game().best_response_mean(0.0) == 0.0
        assert probit_game().best_response_mean(0.0) == 0.0

    def test_field_assembly(self):
        # H=0.2, m_exp=0.3 gives the same field h=0.5 as H=0, m_exp=0.5.
        assert gumbel_game(H=0.2).best_response_mean(0.3) == pytest.approx(
            TANH_HALF, abs=1e-15)

    def test_first_order_condition_duality(self, rng):
        for _ in range(200):
            game = gumbel_game(beta=rng.uniform(0, 2), J=rng.uniform(0.1, 2),
                               H=rng.uniform(-1, 1))
            m_exp = float(rng.uniform(-1, 1))
            m = game.best_response_mean(m_exp)
            if abs(m) < 0.999:
                a = 0.5 * game.noise.g(2 * game.params.beta * (game.params.H
                                       + game.params.J * m_exp))
                assert abs(math.atanh(m) - a) <= 1e-10


class TestLikelihoodProfile:
    @pytest.mark.parametrize("make", [gumbel_game, probit_game])
    def test_strictly_concave(self, make):
        game = make(beta=1.3, J=0.8, H=0.2)
        profile = game.likelihood_profile(0.4)
        assert profile.m_grid.size == 2001
        second = np.diff(profile.v_values, 2)
        assert np.all(second < 0)

    def test_maximum_at_best_response(self):
        game = gumbel_game(beta=1.2, H=0.1)
        profile = game.likelihood_profile(0.3)
        m_star = profile.m_grid[int(np.argmax(profile.v_values))]
        assert abs(m_star - game.best_response_mean(0.3)) <= 2e-3


class TestLikelihoodEquilibrium:
    def test_zero_expectation(self):
        root = gumbel_game().likelihood_equilibrium(0.0)
        assert root.m == 0.0
        assert root.stability is None and root.map_derivative is None

    def test_closed_form_and_residual(self):
        root = gumbel_game().likelihood_equilibrium(0.5)
        assert root.m == pytest.approx(TANH_HALF, abs=1e-15)
        assert root.residual < 1e-12

    def test_matches_finite_law_argmax_large_n(self):
        game = gumbel_game(H=0.1)
        n = 10_000
        dist = game.mean_choice_distribution(n, 0.5)
        root = game.likelihood_equilibrium(0.5)
        assert abs(dist.mode() - root.m) <= 2.0 / n


class TestMeanChoiceDistribution:
    def test_single_agent_reproduces_choice_probability(self):
        game = gumbel_game(H=0.2)
        dist = game.mean_choice_distribution(1, 0.3)
        p = game.choice_probability_plus(0.3)
        np.testing.assert_allclose(dist.probs(), [1 - p, p], rtol=0, atol=1e-15)

    def test_mode_example(self):
        # h = 0.2 + 0.3 -> p = logistic(1), floor(11p) = 8, m = 0.6.
        game = gumbel_game(H=0.2)
        dist = game.mean_choice_distribution(10, 0.3)
        assert dist.mode() == pytest.approx(0.6, abs=1e-12)

    def test_normalised(self):
        game = probit_game(beta=2.0, H=-0.4)
        dist = game.mean_choice_distribution(20, -0.2)
        assert abs(dist.probs().sum() - 1.0) <= 1e-12

    def test_expectation_identity_randomised(self, rng):
        for _ in range(200):
            game = gumbel_game(beta=rng.uniform(0, 3), J=rng.uniform(0.05, 2),
                               H=rng.uniform(-1, 1))
            n = int(rng.integers(1, 201))
            m_exp = float(rng.uniform(-1, 1))
            dist = game.mean_choice_distribution(n, m_exp)
            assert abs(dist.mean() - game.best_response_mean(m_exp)) <= 1e-12

    def test_rejects_bad_agent_count(self):
        with pytest.raises(DomainError):
            gumbel_game().mean_choice_distribution(0, 0.0)


class TestQreRoots:
    def test_contraction_regime_single_stable_root(self):
        roots = gumbel_game(beta=0.5).qre_roots()
        assert len(roots) == 1
        assert roots[0].m == 0.0
        assert roots[0].stability == "stable"

    def test_supercritical_three_roots(self):
        roots = gumbel_game(beta=2.0).qre_roots()
        assert len(roots) == 3
        ms = [r.m for r in roots]
        assert ms[0] == pytest.approx(-TANH2_ROOT, abs=1e-12)
        assert ms[1] == 0.0
        assert ms[2] == pytest.approx(TANH2_ROOT, abs=1e-12)
        assert [r.stability for r in roots] == ["stable", "unstable", "stable"]
        assert all(r.residual <= 1e-12 for r in roots)

    def test_exactly_critical_is_marginal(self):
        roots = gumbel_game(beta=1.0).qre_roots()
        assert len(roots) == 1
        assert roots[0].m == 0.0
        assert roots[0].stability == "marginal"

    def test_root_set_symmetric_at_zero_field(self):
        roots = probit_game(beta=1.9).qre_roots()
        ms = np.array([r.m for r in roots])
        np.testing.assert_allclose(ms, -ms[::-1], rtol=0, atol=1e-11)

    def test_roots_self_reproduce(self):
        for game in (gumbel_game(beta=1.6), probit_game(beta=2.2, H=0.1),
                     gumbel_game(beta=0.7, H=-0.3)):
            for root in game.qre_roots():
                assert abs(game.best_response_mean(root.m) - root.m) <= 1e-10

    def test_derivative_analytic_vs_finite_difference(self):
        game = gumbel_game(beta=1.4, H=0.2)
        for m in (-0.5, 0.0, 0.3, 0.8):
            analytic = game.response_derivative(m)
            fd = (game.best_response_mean(m + 1e-6)
                  - game.best_response_mean(m - 1e-6)) / 2e-6
            assert analytic == pytest.approx(fd, rel=1e-6, abs=1e-8)


class TestLogPartitionFunction:
    def test_lnz_matches_cosh_identity(self):
        # sum_n C(N,n) e^{(2n-N)a} = (2 cosh a)^N exactly.
        game = gumbel_game(H=0.2)
        for n, m_exp in ((1, 0.0), (10, 0.3), (257, -0.6)):
            ln_z, _ = game.log_partition_function(n, m_exp)
            a = 0.5 * game.noise.g(2 * game.params.beta
                                   * (game.params.H + game.params.J * m_exp))
            expected = n * (math.log(2.0) + math.log(math.cosh(a)))
            assert ln_z == pytest.approx(expected, rel=1e-13)

    def test_dominant_m_symmetric_case(self):
        _, dom = gumbel_game().log_partition_function(100, 0.0)
        assert dom == 0.0

    def test_dominant_m_equals_law_mode_exactly(self, rng):
        for _ in range(50):
            game = gumbel_game(beta=rng.uniform(0, 2.5), J=rng.uniform(0.1, 2),
                               H=rng.uniform(-1, 1))
            n = int(rng.integers(1, 1001))
            m_exp = float(rng.uniform(-1, 1))
            _, dom = game.log_partition_function(n, m_exp)
            dist = game.mean_choice_distribution(n, m_exp)
            assert dom == dist.m_grid[int(np.argmax(dist.log_probs))]

    def test_dominant_m_near_tanh_for_large_n(self):
        game = gumbel_game()
        n = 10_000
        _, dom = game.log_partition_function(n, 0.5)
        assert abs(dom - TANH_HALF) <= 2.0 / n
