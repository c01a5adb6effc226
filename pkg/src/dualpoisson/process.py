"""Dual Poisson renewal processes on a discrete time grid.

A gap between consecutive events (1s) lasts at least ``n`` steps with the
survival probability

    Phi(n) = p * Gamma1**n + (1 - p) * Gamma2**n,   Gamma_j = exp(-gamma_j * dt).

Everything else here (conditional gap law, per-state emission probability,
steady-state occupation of the causal states) is derived from ``Phi``.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

#: Absolute bound on neglected probability mass when truncating infinite sums.
TAIL_TOL = 1e-12


class RenewalSurvival(ABC):
    """Survival function of a discrete-time renewal process.

    Only :meth:`survival` is required; the conditional gap law and emission
    probabilities below work for any subclass.
    """

    @abstractmethod
    def survival(self, n):
        """Probability that a gap lasts at least ``n`` steps (scalar or array)."""


@dataclass(frozen=True)
class ProcessParams:
    """Continuous-time rates of a dual Poisson process plus the time step."""

    gamma1: float
    gamma2: float
    p: float
    dt: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "dt"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameterError(f"{name} must be finite and > 0, got {v!r}")
        if not (0.0 <= self.p <= 1.0):
            raise InvalidParameterError(f"p must lie in [0, 1], got {self.p!r}")

    @property
    def non_extremal(self) -> bool:
        return self.p not in (0.0, 1.0) and self.gamma1 != self.gamma2


@dataclass(frozen=True)
class DiscreteParams(RenewalSurvival):
    """Per-step survival factors ``Gamma1``, ``Gamma2`` and channel weight ``p``."""

    Gamma1: float
    Gamma2: float
    p: float

    def __post_init__(self):
        for name in ("Gamma1", "Gamma2"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise InvalidParameterError(f"{name} must lie in (0, 1), got {v!r}")
        if not (0.0 <= self.p <= 1.0):
            raise InvalidParameterError(f"p must lie in [0, 1], got {self.p!r}")

    @property
    def q(self) -> float:
        """Weight of the second channel, ``1 - p``."""
        return 1.0 - self.p

    @property
    def Gamma_max(self) -> float:
        # A channel with zero weight does not shape the tail.
        if self.p == 1.0:
            return self.Gamma1
        if self.p == 0.0:
            return self.Gamma2
        return max(self.Gamma1, self.Gamma2)

    @property
    def non_extremal(self) -> bool:
        return self.p not in (0.0, 1.0) and self.Gamma1 != self.Gamma2

    def survival(self, n):
        n = np.asarray(n)
        out = self.p * self.Gamma1**n + self.q * self.Gamma2**n
        return float(out) if out.ndim == 0 else out

    def swapped(self) -> DiscreteParams:
        """The same process with the channel labels exchanged."""
        return DiscreteParams(self.Gamma2, self.Gamma1, self.q)


def discretize(params: ProcessParams) -> DiscreteParams:
    return DiscreteParams(
        math.exp(-params.gamma1 * params.dt),
        math.exp(-params.gamma2 * params.dt),
        params.p,
    )


def survival(dp: RenewalSurvival, n):
    return dp.survival(n)


def conditional_gap(dp: RenewalSurvival, n_past, n_future):
    """P(next gap has exactly ``n_future`` more 0s | ``n_past`` 0s seen so far)."""
    m = np.asarray(n_past) + np.asarray(n_future)
    return (dp.survival(m) - dp.survival(m + 1)) / dp.survival(n_past)


def emission_prob(dp: RenewalSurvival, n):
    """Probability of emitting a 1 from causal state ``n``."""
    return 1.0 - dp.survival(np.asarray(n) + 1) / dp.survival(n)


def normalization_mu(dp: DiscreteParams) -> float:
    """Inverse of the mean gap length, ``1 / sum_n Phi(n)``."""
    a, b = 1.0 - dp.Gamma1, 1.0 - dp.Gamma2
    return a * b / (dp.p * b + dp.q * a)


def steady_state_prob(dp: DiscreteParams, n):
    return normalization_mu(dp) * dp.survival(n)


def tail_sum(dp: DiscreteParams, n):
    """Closed form of ``sum_{k >= n} Phi(k)``."""
    n = np.asarray(n)
    out = dp.p * dp.Gamma1**n / (1.0 - dp.Gamma1) + dp.q * dp.Gamma2**n / (1.0 - dp.Gamma2)
    return float(out) if out.ndim == 0 else out


def tail_cutoff(dp: DiscreteParams, tol: float = TAIL_TOL) -> int:
    """Smallest ``N`` whose steady-state tail past ``N`` is bounded by ``tol``.

    Uses ``sum_{n > N} mu * Phi(n) <= mu * Gmax**(N+1) / (1 - Gmax)``.
    """
    gmax = dp.Gamma_max
    mu = normalization_mu(dp)
    # mu * gmax**(N+1) / (1 - gmax) < tol
    bound = math.log(tol * (1.0 - gmax) / mu) / math.log(gmax) - 1.0
    return max(0, math.ceil(bound))


def steady_state_distribution(dp: DiscreteParams, tol: float = TAIL_TOL) -> np.ndarray:
    """``mu * Phi(n)`` for ``n = 0..N`` with the tail past ``N`` below ``tol``."""
    n = np.arange(tail_cutoff(dp, tol) + 1)
    return normalization_mu(dp) * dp.survival(n)
