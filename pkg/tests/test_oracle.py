"""Exhaustive enumeration against closed forms."""

import math

import numpy as np
import pytest

from isingqre import (
    GameParams,
    GumbelNoise,
    ProbitNoise,
    binomial_mode,
    enumerate_complete,
    enumerate_random_small,
)
from isingqre.complete import CompleteGraphGame
from isingqre.errors import DomainError, TooLarge, UnknownDegreeLabel

GUMBEL = GumbelNoise()

# logistic(1), frozen with mpmath; field H + J*m_exp = 0.2 + 0.3 at beta=1.
P_EXAMPLE = 0.73105857863000487925
PARAMS_EXAMPLE = GameParams(J=1.0, beta=1.0, H=0.2)


def test_single_agent_law():
    result = enumerate_complete(GUMBEL, PARAMS_EXAMPLE, 1, 0.3)
    np.testing.assert_allclose(np.exp(result.log_probs),
                               [1 - P_EXAMPLE, P_EXAMPLE], atol=1e-15)
    assert result.argmax_config == (1,)
    assert result.argmax_m == (1.0,)


def test_three_agent_example():
    result = enumerate_complete(GUMBEL, PARAMS_EXAMPLE, 3, 0.3)
    assert result.argmax_config == (1, 1, 1)
    # P(m = 1/3) = 3 p^2 (1-p); frozen with mpmath.
    law = np.exp(result.log_probs)
    assert law[2] == pytest.approx(0.43120452137164539297, abs=1e-14)
    assert law[3] == pytest.approx(0.39071180493130789572, abs=1e-14)
    assert abs(result.total_mass - 1.0) <= 1e-12


def test_argmax_config_follows_majority_probability():
    below_half = GameParams(J=1.0, beta=1.0, H=-0.6)
    result = enumerate_complete(GUMBEL, below_half, 4, 0.2)
    assert result.argmax_config == (-1, -1, -1, -1)


def test_argmax_config_tie_is_lexicographically_smallest():
    result = enumerate_complete(GUMBEL, GameParams(J=1.0, beta=0.0, H=0.0), 3, 0.5)
    assert result.argmax_config == (-1, -1, -1)
    # All 2^3 configurations tie, so every grid value of m ties too.
    assert result.argmax_m == tuple(result.m_grid)


@pytest.mark.parametrize("noise", [GUMBEL, ProbitNoise()], ids=lambda n: n.kind)
def test_enumeration_matches_closed_form(noise, rng):
    for _ in range(25):
        params = GameParams(J=float(rng.uniform(0.1, 2.0)),
                            beta=float(rng.uniform(0.0, 3.0)),
                            H=float(rng.uniform(-1.0, 1.0)))
        n = int(rng.integers(1, 17))
        m_exp = float(rng.uniform(-1.0, 1.0))
        result = enumerate_complete(noise, params, n, m_exp)
        game = CompleteGraphGame(params=params, noise=noise)
        dist = game.mean_choice_distribution(n, m_exp)
        assert np.abs(np.exp(result.log_probs) - dist.probs()).sum() <= 1e-14
        assert abs(result.total_mass - 1.0) <= 1e-12


def test_enumeration_size_limits():
    with pytest.raises(TooLarge):
        enumerate_complete(GUMBEL, PARAMS_EXAMPLE, 25, 0.0)
    with pytest.raises(DomainError):
        enumerate_complete(GUMBEL, PARAMS_EXAMPLE, 0, 0.0)


class TestEnumerateRandomSmall:
    def test_single_class_reduces_to_complete(self):
        params = GameParams(J=0.5, beta=1.0, H=0.1)
        z, m_e = 3, 0.4
        labelled = enumerate_random_small(GUMBEL, params, [z] * 4, {z: m_e})
        # All agents share degree z, so m_w = m_e and the field is H + J*z*m_e:
        # identical to a complete-graph run at coupling J*z.
        packed = enumerate_complete(GUMBEL, GameParams(J=0.5 * z, beta=1.0, H=0.1),
                                    4, m_e)
        law = labelled.classes[0]
        np.testing.assert_allclose(np.exp(law.log_probs), np.exp(packed.log_probs),
                                   rtol=0, atol=1e-14)
        assert labelled.argmax_config == packed.argmax_config

    def test_two_classes_factorise(self):
        params = GameParams(J=1.0, beta=0.8, H=0.05)
        result = enumerate_random_small(GUMBEL, params, [1, 1, 3, 3],
                                        {1: 0.4, 3: 0.8})
        assert result.degrees == (1, 3)
        assert result.sizes == (2, 2)
        # Empirical edge weights: w_1 = 2/8, w_3 = 6/8.
        assert result.m_w_exp == pytest.approx(0.25 * 0.4 + 0.75 * 0.8, abs=1e-15)
        joint = np.exp(result.joint_log_probs)
        marg1 = np.exp(result.classes[0].log_probs)
        marg3 = np.exp(result.classes[1].log_probs)
        np.testing.assert_allclose(joint, np.outer(marg1, marg3),
                                   rtol=0, atol=1e-13)
        assert abs(result.total_mass - 1.0) <= 1e-12

    def test_class_marginals_match_binomial_closed_form(self):
        params = GameParams(J=1.0, beta=0.8, H=0.05)
        result = enumerate_random_small(GUMBEL, params, [1, 1, 1, 3, 3],
                                        {1: 0.2, 3: 0.6})
        from isingqre import choice_probability
        for law in result.classes:
            h = params.H + params.J * law.degree * result.m_w_exp
            p = choice_probability(GUMBEL, params, h, +1)
            n = np.arange(law.size + 1)
            binom = ([float(np.math.comb(law.size, int(v))) for v in n]
                     * p ** n * (1 - p) ** (law.size - n))
            np.testing.assert_allclose(np.exp(law.log_probs), binom,
                                       rtol=0, atol=1e-13)
            assert set(law.argmax_m) == set(binomial_mode(law.size, p))

    def test_symmetric_under_sign_flip_when_unbiased(self):
        params = GameParams(J=1.0, beta=0.9, H=0.0)
        result = enumerate_random_small(GUMBEL, params, [2, 2, 4, 4],
                                        {2: 0.0, 4: 0.0})
        for law in result.classes:
            np.testing.assert_allclose(law.log_probs, law.log_probs[::-1],
                                       rtol=0, atol=1e-13)

    def test_isolated_agents_feel_only_the_external_field(self):
        params = GameParams(J=1.0, beta=1.0, H=0.3)
        result = enumerate_random_small(GUMBEL, params, [0, 0], {0: 0.9})
        from isingqre import choice_probability
        p = choice_probability(GUMBEL, params, 0.3, +1)
        np.testing.assert_allclose(np.exp(result.classes[0].log_probs),
                                   [(1 - p) ** 2, 2 * p * (1 - p), p ** 2],
                                   atol=1e-14)

    def test_unknown_label_rejected(self):
        with pytest.raises(UnknownDegreeLabel):
            enumerate_random_small(GUMBEL, PARAMS_EXAMPLE, [1, 2], {1: 0.0})

    def test_too_many_agents(self):
        with pytest.raises(TooLarge):
            enumerate_random_small(GUMBEL, PARAMS_EXAMPLE, [1] * 25, {1: 0.0})


class TestBinomialMode:
    def test_degenerate_endpoints(self):
        assert binomial_mode(5, 0.0) == (-1.0,)
        assert binomial_mode(5, 1.0) == (1.0,)

    def test_example_mode(self):
        assert binomial_mode(10, P_EXAMPLE) == (pytest.approx(0.6, abs=1e-12),)

    def test_symmetric_tie(self):
        modes = binomial_mode(3, 0.5)
        assert len(modes) == 2
        np.testing.assert_allclose(modes, [-1 / 3, 1 / 3], atol=1e-12)

    def test_enumerated_argmax_matches(self, rng):
        for _ in range(30):
            params = GameParams(J=float(rng.uniform(0.1, 2.0)),
                                beta=float(rng.uniform(0.0, 2.5)),
                                H=float(rng.uniform(-1.0, 1.0)))
            n = int(rng.integers(1, 15))
            m_exp = float(rng.uniform(-1.0, 1.0))
            result = enumerate_complete(GUMBEL, params, n, m_exp)
            game = CompleteGraphGame(params=params, noise=GUMBEL)
            p = game.choice_probability_plus(m_exp)
            assert set(result.argmax_m) == set(binomial_mode(n, p))

    def test_mode_tracks_mean_for_large_n(self):
        import math
        for n in (1000, 10_000, 100_000):
            for p in (0.2, 0.5, 0.731, 0.99):
                modes = binomial_mode(n, p)
                target = 2 * p - 1
                assert all(abs(m - target) <= 2.0 / n + 1e-12 for m in modes)

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            binomial_mode(0, 0.5)
        with pytest.raises(DomainError):
            binomial_mode(5, 1.2)
