"""Truncated epsilon-machine of a dual Poisson process.

Causal states count the 0s since the last 1.  States at or beyond
``n_term`` are merged into one terminal state that loops on 0 and resets to
state 0 on 1, like every other state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .process import (
    DiscreteParams,
    emission_prob,
    normalization_mu,
    steady_state_distribution,
    tail_sum,
)

DEFAULT_DELTA = 0.01


def _entropy_bits(probs) -> float:
    probs = np.asarray(probs, dtype=float)
    probs = probs[probs > 0]
    return float(-np.sum(probs * np.log2(probs)))


def compute_n_term(dp: DiscreteParams, delta: float = DEFAULT_DELTA) -> int:
    """First ``n`` with ``Phi(n) <= delta * (1 - Phi(1))``."""
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    threshold = delta * (1.0 - dp.survival(1))
    # Phi(n) <= Gmax**n gives an upper bound to start the search from.
    hi = max(1, math.ceil(math.log(threshold) / math.log(dp.Gamma_max)))
    n = np.arange(hi + 1)
    return int(np.argmax(dp.survival(n) <= threshold))


@dataclass(frozen=True)
class TruncatedEpsilonMachine:
    dp: DiscreteParams
    n_term: int
    emit_prob: np.ndarray  # indexed 0..n_term; the last entry is terminal_emit
    terminal_emit: float

    @property
    def n_states(self) -> int:
        return self.n_term + 1

    def next_state(self, state: int, symbol: int) -> int:
        if symbol:
            return 0
        return min(state + 1, self.n_term)

    def transition_matrix(self) -> np.ndarray:
        """Row-stochastic matrix ``T[i, j] = P(i -> j)``."""
        k = self.n_states
        T = np.zeros((k, k))
        T[:, 0] = self.emit_prob
        idx = np.arange(k)
        T[idx, np.minimum(idx + 1, self.n_term)] += 1.0 - self.emit_prob
        return T


def build_machine(dp: DiscreteParams, delta: float = DEFAULT_DELTA) -> TruncatedEpsilonMachine:
    n_term = compute_n_term(dp, delta)
    # Stationary-weighted average of emission over merged states telescopes to
    # Phi(n_term) / sum_{n >= n_term} Phi(n).
    terminal = dp.survival(n_term) / tail_sum(dp, n_term)
    emit = np.empty(n_term + 1)
    emit[:n_term] = emission_prob(dp, np.arange(n_term))
    emit[n_term] = terminal
    emit.setflags(write=False)
    return TruncatedEpsilonMachine(dp, n_term, emit, float(terminal))


def stationary_distribution(machine: TruncatedEpsilonMachine) -> np.ndarray:
    """Stationary law of the truncated chain, by solving ``pi T = pi``.

    Diagnostic only: complexity uses the aggregated exact distribution.
    """
    T = machine.transition_matrix()
    k = machine.n_states
    A = T.T - np.eye(k)
    A[-1, :] = 1.0
    b = np.zeros(k)
    b[-1] = 1.0
    return np.linalg.solve(A, b)


def aggregated_distribution(dp: DiscreteParams, n_term: int) -> np.ndarray:
    """Exact steady-state probabilities with all states ``>= n_term`` lumped."""
    mu = normalization_mu(dp)
    probs = np.empty(n_term + 1)
    probs[:n_term] = mu * dp.survival(np.arange(n_term))
    probs[n_term] = mu * tail_sum(dp, n_term)
    return probs


def stat_complexity_truncated(dp: DiscreteParams, delta: float = DEFAULT_DELTA) -> float:
    return _entropy_bits(aggregated_distribution(dp, compute_n_term(dp, delta)))


def top_complexity_truncated(n_term: int) -> float:
    if n_term < 0:
        raise ValueError("n_term must be non-negative")
    return math.log2(n_term + 1)


def stat_complexity_exact(dp: DiscreteParams) -> float:
    """Entropy of the untruncated causal-state distribution, tail below 1e-12."""
    return _entropy_bits(steady_state_distribution(dp))


def simulate(
    machine: TruncatedEpsilonMachine,
    start_state: int,
    steps: int,
    seed: int,
    stream_index: int = 0,
) -> np.ndarray:
    """Sample ``steps`` output symbols starting in ``start_state``.

    Returns a ``uint8`` array of 0s and 1s.  Uses child stream
    ``stream_index`` of ``seed`` (see :mod:`dualpoisson.rng`).
    """
    if not (0 <= start_state <= machine.n_term):
        raise ValueError(f"start_state must lie in [0, {machine.n_term}], got {start_state}")
    if steps <= 0:
        raise ValueError("steps must be positive")
    u = _rng.stream(seed, stream_index).random(steps).tolist()
    emit = machine.emit_prob.tolist()
    last = machine.n_term
    out = bytearray(steps)
    s = start_state
    for i in range(steps):
        if u[i] < emit[s]:
            out[i] = 1
            s = 0
        elif s < last:
            s += 1
    return np.frombuffer(bytes(out), dtype=np.uint8)
