"""Mean-field (complete-graph) equilibria of the noisy binary-choice game.

With a common expectation m_e every agent feels the local field H + J*m_e
and chooses +1 with probability p = logistic(g(2*beta*(H + J*m_e))).  The
average choice m of N agents then follows an exact binomial law on the grid
{-1 + 2n/N}; its per-agent log-likelihood (up to an m-independent
normalisation) is

    v(m | m_e) = m * a + entropy(m),      a = g(2*beta*(H + J*m_e)) / 2,

which is strictly concave with the unique maximiser m = tanh(a).
Self-consistent expectations m_e = tanh(a(m_e)) are located by a sign-change
scan plus bisection and classified by the slope of the iteration map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, log_expit, logsumexp, xlogy

from .core import GameParams, choice_probability, half_log_odds, mean_choice
from .errors import DomainError
from .noise import GumbelNoise, NoiseModel
from .rootfind import classify_stability, find_roots

__all__ = [
    "CompleteGraphGame",
    "EquilibriumRoot",
    "LikelihoodProfile",
    "MeanChoiceDistribution",
    "bernoulli_entropy",
]

# Profile grids stay this far away from +-1, where atanh and the likelihood
# derivative diverge; no root sits there for finite noise.
GRID_EDGE_MARGIN = 1e-9
_FD_STEP = 1e-6
_ATANH_SAFE = 1.0 - 1e-5


def bernoulli_entropy(m):
    """Per-agent log-multiplicity of configurations with mean choice m.

    entropy(m) = -(1-m)/2 ln((1-m)/2) - (1+m)/2 ln((1+m)/2), with the
    0 ln 0 = 0 convention at the endpoints.  Accepts scalars or arrays.
    """
    arr = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1.0):
        raise DomainError("mean choice must lie in [-1, 1]")
    lo = 0.5 * (1.0 - arr)
    hi = 0.5 * (1.0 + arr)
    out = -xlogy(lo, lo) - xlogy(hi, hi)
    return float(out) if np.ndim(m) == 0 else out


@dataclass(frozen=True)
class EquilibriumRoot:
    """One solution of a scalar self-consistency equation.

    map_derivative and stability are None for single likelihood solves,
    where no iteration map is involved.
    """

    m: float
    residual: float
    map_derivative: float | None = None
    stability: str | None = None


@dataclass(frozen=True, eq=False)
class MeanChoiceDistribution:
    """Exact law of the average choice of n_agents independent agents."""

    n_agents: int
    m_exp: float
    m_grid: np.ndarray
    log_probs: np.ndarray

    def probs(self) -> np.ndarray:
        return np.exp(self.log_probs)

    def mean(self) -> float:
        return float(self.probs() @ self.m_grid)

    def mode(self) -> float:
        """Grid value with the largest probability; ties pick the smaller m."""
        return float(self.m_grid[int(np.argmax(self.log_probs))])

    def modes(self, log_tol: float = 1e-9) -> tuple[float, ...]:
        """All grid values within log_tol of the maximal log-probability."""
        top = float(np.max(self.log_probs))
        return tuple(float(m) for m, lp in zip(self.m_grid, self.log_probs)
                     if top - lp <= log_tol)


@dataclass(frozen=True, eq=False)
class LikelihoodProfile:
    """v(m | m_exp) sampled on a uniform interior grid."""

    m_exp: float
    m_grid: np.ndarray
    v_values: np.ndarray


def _log_binomial_coefficients(n_agents: int) -> np.ndarray:
    """ln C(n_agents, k) for k = 0..n_agents, in log space."""
    k = np.arange(n_agents + 1)
    return gammaln(n_agents + 1) - gammaln(k + 1) - gammaln(n_agents - k + 1)


def _check_expectation(m_exp) -> None:
    arr = np.asarray(m_exp, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1.0):
        raise DomainError("expectation m_exp must lie in [-1, 1]")


@dataclass(frozen=True)
class CompleteGraphGame:
    """Binary-choice game where every agent couples to the common mean."""

    params: GameParams
    noise: NoiseModel

    def local_field(self, m_exp):
        """Deterministic utility argument H + J*m_exp."""
        return self.params.H + self.params.J * np.asarray(m_exp, dtype=float)

    def choice_probability_plus(self, m_exp: float) -> float:
        """p(+1) under the common expectation m_exp."""
        _check_expectation(m_exp)
        return choice_probability(self.noise, self.params,
                                  self.local_field(m_exp), +1)

    def best_response_mean(self, m_exp):
        """Likelihood-maximising mean choice tanh(g(2*beta*(H + J*m_exp))/2)."""
        _check_expectation(m_exp)
        return mean_choice(self.noise, self.params, self.local_field(m_exp))

    def log_likelihood_density(self, m, m_exp: float):
        """Per-agent log-likelihood m*a + entropy(m).

        The m-independent normalisation -ln(2 cosh a) is deliberately left
        out; it cancels in every argmax.
        """
        _check_expectation(m_exp)
        a = half_log_odds(self.noise, self.params, self.local_field(m_exp))
        out = np.asarray(m, dtype=float) * a + bernoulli_entropy(m)
        return float(out) if np.ndim(m) == 0 else out

    def likelihood_profile(self, m_exp: float,
                           grid_size: int = 2001) -> LikelihoodProfile:
        """Sample v(.|m_exp) on a uniform grid clear of the +-1 edges."""
        if grid_size < 3:
            raise DomainError("grid_size must be at least 3")
        grid = np.linspace(-1.0 + GRID_EDGE_MARGIN, 1.0 - GRID_EDGE_MARGIN,
                           grid_size)
        return LikelihoodProfile(m_exp=m_exp, m_grid=grid,
                                 v_values=self.log_likelihood_density(grid, m_exp))

    def likelihood_equilibrium(self, m_exp: float) -> EquilibriumRoot:
        """Maximiser of v(.|m_exp), closed-form tanh of the half log-odds.

        The residual is reported against the atanh form of the first-order
        condition, except within one part in 1e5 of saturation where that
        form amplifies a single rounding of tanh beyond usefulness.
        """
        _check_expectation(m_exp)
        a = float(half_log_odds(self.noise, self.params,
                                self.local_field(m_exp)))
        m = float(np.tanh(a))
        if abs(m) <= _ATANH_SAFE:
            residual = abs(float(np.arctanh(m)) - a)
        else:
            residual = abs(m - float(np.tanh(a)))
        return EquilibriumRoot(m=m, residual=residual)

    def mean_choice_distribution(self, n_agents: int,
                                 m_exp: float) -> MeanChoiceDistribution:
        """Exact binomial law of the average choice on {-1 + 2n/N}.

        Built entirely in log space, so it is usable up to N ~ 1e5 and
        beyond; the expectation reproduces tanh(a) identically.
        """
        if n_agents < 1:
            raise DomainError("n_agents must be a positive integer")
        _check_expectation(m_exp)
        g_val = 2.0 * float(half_log_odds(self.noise, self.params,
                                          self.local_field(m_exp)))
        n = np.arange(n_agents + 1)
        log_probs = (_log_binomial_coefficients(n_agents)
                     + n * log_expit(g_val)
                     + (n_agents - n) * log_expit(-g_val))
        m_grid = 2.0 * n / n_agents - 1.0
        return MeanChoiceDistribution(n_agents=n_agents, m_exp=m_exp,
                                      m_grid=m_grid, log_probs=log_probs)

    def log_partition_function(self, n_agents: int,
                               m_exp: float) -> tuple[float, float]:
        """Log-sum-exp of the unnormalised configuration weights over the
        mean-choice grid, and the grid value dominating the sum.

        Returns (lnZ, dominant_m).  The exponent is ln C(N,n) + N*m*a, i.e.
        the exact log-multiplicity plus the linear tilt, which differs from
        the normalised finite-N law only by an m-independent constant; the
        dominant grid value therefore coincides with the law's mode exactly
        (ties resolve to the smaller m).
        """
        dist = self.mean_choice_distribution(n_agents, m_exp)
        a = float(half_log_odds(self.noise, self.params,
                                self.local_field(m_exp)))
        exponents = (_log_binomial_coefficients(n_agents)
                     + n_agents * dist.m_grid * a)
        return float(logsumexp(exponents)), dist.mode()

    def response_derivative(self, m: float) -> float:
        """Slope of the iteration map T(m) = best_response_mean(m).

        Gumbel noise admits the closed form beta*J*(1 - T^2); any other
        noise uses a central difference with step 1e-6, clamped to [-1, 1].
        """
        if isinstance(self.noise, GumbelNoise):
            t = self.best_response_mean(m)
            return self.params.beta * self.params.J * (1.0 - t * t)
        lo = max(m - _FD_STEP, -1.0)
        hi = min(m + _FD_STEP, 1.0)
        return (self.best_response_mean(hi) - self.best_response_mean(lo)) / (hi - lo)

    def qre_roots(self, scan_step: float = 1e-3,
                  tol: float = 1e-12) -> list[EquilibriumRoot]:
        """All self-consistent expectations m = T(m) on [-1, 1], ascending.

        Each root carries the iteration-map slope and its stability class;
        for H = 0 the root set is symmetric about 0.
        """
        def residual(m):
            return self.best_response_mean(m) - np.asarray(m, dtype=float)

        out = []
        for m in find_roots(residual, -1.0, 1.0, scan_step, tol):
            deriv = self.response_derivative(m)
            out.append(EquilibriumRoot(
                m=m,
                residual=abs(float(self.best_response_mean(m)) - m),
                map_derivative=deriv,
                stability=classify_stability(deriv)))
        return out
