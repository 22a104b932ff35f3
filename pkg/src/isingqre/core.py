"""Game-level parameters and the per-agent choice maps they induce.

Every agent weighs a deterministic local field h (external field plus the
coupled expectation aggregate) against additive utility noise; the induced
choice law is the logistic of g(2*beta*h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DomainError
from .noise import NoiseModel

__all__ = ["GameParams", "half_log_odds", "choice_probability", "mean_choice"]


@dataclass(frozen=True)
class GameParams:
    """Scalar triple (J, beta, H): coupling, noise level, external field."""

    J: float
    beta: float
    H: float

    def __post_init__(self):
        for name in ("J", "beta", "H"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite number")
        if self.J <= 0:
            raise DomainError("coupling J must be positive")
        if self.beta < 0:
            raise DomainError("noise level beta must be nonnegative")


def half_log_odds(noise: NoiseModel, params: GameParams, h):
    """Half log-odds a = g(2*beta*h)/2 of choosing +1 at local field h."""
    return 0.5 * noise.g(2.0 * params.beta * np.asarray(h, dtype=float))


def choice_probability(noise: NoiseModel, params: GameParams, h, s: int):
    """Probability of choosing s in {-1, +1} at local field h.

    Uses the overflow-free logistic form 1/(1 + exp(-s*g(2*beta*h))); the
    two choices are complementary to within one rounding of the logistic.
    """
    if s not in (-1, 1):
        raise DomainError("choice s must be -1 or +1")
    p = expit(s * noise.g(2.0 * params.beta * np.asarray(h, dtype=float)))
    return float(p) if np.ndim(h) == 0 else p


def mean_choice(noise: NoiseModel, params: GameParams, h):
    """Expected choice tanh(g(2*beta*h)/2) = p(+1) - p(-1)."""
    t = np.tanh(half_log_odds(noise, params, h))
    return float(t) if np.ndim(h) == 0 else t
