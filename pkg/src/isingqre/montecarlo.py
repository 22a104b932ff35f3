"""Seeded stochastic verification of the choice laws and fixed points.

Sampling draws i.i.d. choices from the exact per-class probabilities with a
counter-based Philox generator, so reports are bit-identical for a fixed
(seed, n_samples) under the single-worker, class-major partition policy.
Damped expectation iteration locates stable self-consistent points
independently of the sign-change scanner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complete import CompleteGraphGame
from .core import choice_probability
from .errors import DomainError
from .randomgraph import RandomGraphGame

__all__ = ["SampleReport", "IterationTrace", "sample_mean_choice", "iterate_to_qre"]


@dataclass(frozen=True)
class SampleReport:
    """Empirical per-class mean choices with binomial standard errors.

    degrees is None for the complete graph, where there is a single class;
    standard errors are sqrt((1 - mean^2)/n_samples).
    """

    n_samples: int
    seed: int
    degrees: tuple[int, ...] | None
    means: tuple[float, ...]
    standard_errors: tuple[float, ...]

    @property
    def mean(self) -> float:
        """Single-class convenience accessor."""
        return self.means[0]

    @property
    def standard_error(self) -> float:
        return self.standard_errors[0]


@dataclass(frozen=True)
class IterationTrace:
    """Damped fixed-point iterates of the expectation map."""

    iterates: tuple[float, ...]
    damping: float
    converged: bool
    residual: float

    @property
    def final(self) -> float:
        return self.iterates[-1]


def _class_stream(seed: int, index: int) -> np.random.Generator:
    # Philox is counter-based: keying by (seed, class index) gives streams
    # that do not depend on how many draws other classes consumed.
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def _sample_class(p_plus: float, n_samples: int, rng) -> tuple[float, float]:
    u = rng.random(n_samples)
    choices = np.where(u < p_plus, 1.0, -1.0)
    m_hat = float(choices.mean())
    se = math.sqrt(max(1.0 - m_hat * m_hat, 0.0) / n_samples)
    return m_hat, se


def sample_mean_choice(game, expectations, n_samples: int,
                       seed: int = 0) -> SampleReport:
    """Empirical mean choice from n_samples i.i.d. draws per class.

    For a CompleteGraphGame, expectations is the common scalar m_exp; for a
    RandomGraphGame it is either one scalar shared by all degree classes or a
    per-degree array aligned with the support.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be positive")
    if isinstance(game, CompleteGraphGame):
        p = game.choice_probability_plus(float(expectations))
        m_hat, se = _sample_class(p, n_samples, _class_stream(seed, 0))
        return SampleReport(n_samples=n_samples, seed=seed, degrees=None,
                            means=(m_hat,), standard_errors=(se,))
    if isinstance(game, RandomGraphGame):
        degrees = game.degree_dist.degrees
        m_k_exp = np.broadcast_to(np.asarray(expectations, dtype=float),
                                  degrees.shape)
        m_w = game.degree_dist.weighted_mean(m_k_exp)
        means, ses = [], []
        for idx, k in enumerate(degrees):
            h = game.params.H + game.params.J * int(k) * m_w
            p = choice_probability(game.noise, game.params, h, +1)
            m_hat, se = _sample_class(p, n_samples, _class_stream(seed, idx))
            means.append(m_hat)
            ses.append(se)
        return SampleReport(n_samples=n_samples, seed=seed,
                            degrees=tuple(int(k) for k in degrees),
                            means=tuple(means), standard_errors=tuple(ses))
    raise DomainError("game must be a CompleteGraphGame or RandomGraphGame")


def iterate_to_qre(game, m0: float, damping: float = 0.5, tol: float = 1e-12,
                   max_iter: int = 10_000) -> IterationTrace:
    """Damped iteration m <- (1-a)m + a*T(m) of the expectation map.

    Non-convergence within max_iter is reported in the trace rather than
    raised: slow mixing near criticality is a property of the model.
    """
    if not -1.0 <= m0 <= 1.0:
        raise DomainError("starting point m0 must lie in [-1, 1]")
    if not 0.0 < damping <= 1.0:
        raise DomainError("damping must lie in (0, 1]")
    if tol <= 0 or max_iter < 1:
        raise DomainError("tol must be positive and max_iter at least 1")

    if isinstance(game, CompleteGraphGame):
        response = game.best_response_mean
    elif isinstance(game, RandomGraphGame):
        response = game.weighted_response
    else:
        raise DomainError("game must be a CompleteGraphGame or RandomGraphGame")

    m = float(m0)
    iterates = [m]
    converged = False
    residual = math.inf
    for _ in range(max_iter):
        target = float(response(m))
        residual = abs(target - m)
        m = (1.0 - damping) * m + damping * target
        iterates.append(m)
        if residual <= tol:
            converged = True
            break
    return IterationTrace(iterates=tuple(iterates), damping=damping,
                          converged=converged, residual=residual)
