"""Noise models for noisy binary choice, exposed through their log-odds maps.

A symmetric utility-noise distribution enters the choice law only through an
odd nondecreasing function g: at deterministic utility difference x the
probability of the favoured alternative is

    F(x) = e^{g(x)/2} / (2 cosh(g(x)/2)) = logistic(g(x)).

Gumbel noise gives g(x) = x (logit choice), Gaussian noise gives
g(x) = ln Phi(x) - ln Phi(-x) (probit choice), and any other symmetric noise
can be supplied as a tabulated map on x >= 0 with implicit odd extension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import log_ndtr

from .errors import DomainError, OutOfTabulatedRange

__all__ = ["NoiseModel", "GumbelNoise", "ProbitNoise", "TabulatedNoise"]


class NoiseModel:
    """Base class; subclasses define the log-odds map on x >= 0."""

    kind = "abstract"

    def _g_abs(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def g(self, x):
        """Evaluate the log-odds function g at x (scalar or array).

        Computed as sign(x) * g(|x|), which makes the odd symmetry
        g(-x) == -g(x) hold bit-exactly and pins g(0) == 0 without
        evaluating the underlying map at the origin.
        """
        arr = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise DomainError("g requires finite arguments")
        out = np.sign(arr) * self._g_abs(np.abs(arr))
        return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class GumbelNoise(NoiseModel):
    """Gumbel utility noise: g(x) = x, i.e. logit choice."""

    kind = "gumbel"

    def _g_abs(self, x):
        return x


@dataclass(frozen=True)
class ProbitNoise(NoiseModel):
    """Gaussian utility noise: g(x) = ln Phi(x) - ln Phi(-x).

    Both terms are evaluated with the log-space normal CDF, which is
    asymptotically accurate for large |x|; the naive ratio
    Phi(x)/(1 - Phi(x)) would lose all precision beyond x ~ 8.
    """

    kind = "probit"

    def _g_abs(self, x):
        return log_ndtr(x) - log_ndtr(-x)


@dataclass(frozen=True, eq=False)
class TabulatedNoise(NoiseModel):
    """Log-odds map sampled on a grid of nonnegative abscissas.

    The grid must start at x = 0 with g(0) = 0 and be strictly increasing
    in x and nondecreasing in g; values between grid points are linearly
    interpolated and queries beyond the last grid point are refused, so the
    model stays checkably monotone.
    """

    x_grid: np.ndarray
    g_grid: np.ndarray
    kind = "tabulated"

    def __post_init__(self):
        xs = np.asarray(self.x_grid, dtype=float)
        gs = np.asarray(self.g_grid, dtype=float)
        if xs.ndim != 1 or gs.ndim != 1 or xs.size != gs.size:
            raise DomainError("x and g grids must be 1-d and equally long")
        if xs.size < 2:
            raise DomainError("tabulated noise needs at least two grid points")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(gs))):
            raise DomainError("tabulated grids must be finite")
        if xs[0] != 0.0:
            raise DomainError("tabulated x grid must start at 0")
        if np.any(np.diff(xs) <= 0):
            raise DomainError("tabulated x grid must be strictly increasing")
        if gs[0] != 0.0:
            raise DomainError("tabulated g grid must start at g(0) = 0")
        if np.any(np.diff(gs) < 0):
            raise DomainError("tabulated g grid must be nondecreasing")
        xs.setflags(write=False)
        gs.setflags(write=False)
        object.__setattr__(self, "x_grid", xs)
        object.__setattr__(self, "g_grid", gs)

    @classmethod
    def from_json(cls, source) -> "TabulatedNoise":
        """Load {"x": [...], "g": [...]} from a mapping, a path or a JSON string."""
        if isinstance(source, dict):
            doc = source
        else:
            doc = json.loads(Path(source).read_text())
        try:
            return cls(x_grid=doc["x"], g_grid=doc["g"])
        except KeyError as missing:
            raise DomainError(f"tabulated noise document lacks key {missing}") from None

    def _g_abs(self, x):
        xmax = self.x_grid[-1]
        if np.any(x > xmax):
            raise OutOfTabulatedRange(
                f"|x| exceeds the tabulated range [0, {xmax:g}]")
        return np.interp(x, self.x_grid, self.g_grid)
