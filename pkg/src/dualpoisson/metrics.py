"""Memory metrics of the classical and quantum models.

``Cq`` and ``Dq`` come from the steady-state density matrix of the quantum
memory, ``rho = sum_n mu Phi(n) |s(n)><s(n)|``, which has a closed 2x2 form.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import classical, quantum
from .errors import DegenerateParametersError
from .process import (
    DiscreteParams,
    ProcessParams,
    discretize,
    normalization_mu,
    steady_state_distribution,
)

RANK_TOL = 1e-12


def density_matrix(dp: DiscreteParams) -> np.ndarray:
    """Closed-form steady-state density matrix of the quantum memory."""
    g = quantum.overlap_g(dp)
    if dp.Gamma1 == dp.Gamma2 or g >= 1.0:
        raise DegenerateParametersError("equal decay rates: quantum model undefined")
    mu = normalization_mu(dp)
    p, q = dp.p, dp.q
    s2 = quantum.overlap_complement(dp) ** 2
    d1, d2 = 1.0 - dp.Gamma1, 1.0 - dp.Gamma2
    cross = 1.0 - math.sqrt(dp.Gamma1 * dp.Gamma2)
    r00 = p / d1 + g * g * q / d2
    r11 = s2 * q / d2
    off = g * math.sqrt(s2) * q / d2 - 1j * math.sqrt(s2 * p * q) / cross
    return mu * np.array([[r00, off], [off.conjugate(), r11]], dtype=complex)


def density_matrix_sum(dp: DiscreteParams) -> np.ndarray:
    """``sum_n P(n) |s(n)><s(n)|`` summed until the neglected mass is < 1e-12."""
    g = quantum.overlap_g(dp)
    if dp.Gamma1 == dp.Gamma2 or g >= 1.0:
        raise DegenerateParametersError("equal decay rates: quantum model undefined")
    P = steady_state_distribution(dp)
    states = quantum._memory_matrix(dp, np.arange(P.size), g)  # 2 x N
    return (states * P) @ states.conj().T


def pure_density_matrix(dp: DiscreteParams) -> np.ndarray:
    """Density matrix for extremal parameters, where every memory state coincides.

    With ``p`` in {0, 1} only one channel is ever used, and with equal rates
    the generator states coincide; either way ``rho = |s(0)><s(0)|``.
    """
    if dp.non_extremal:
        raise ValueError("pure-state shortcut applies only to extremal parameters")
    g = min(1.0, quantum.overlap_g(dp))
    v = quantum._memory_vector(dp, 0, g)
    return np.outer(v, v.conj())


def eigvals2(rho: np.ndarray) -> tuple[float, float]:
    """Eigenvalues of a 2x2 Hermitian matrix, largest first."""
    a, d = rho[0, 0].real, rho[1, 1].real
    b = abs(rho[0, 1])
    mean = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), b)
    return mean + rad, mean - rad


def _spectrum(rho) -> tuple[float, float]:
    l1, l2 = eigvals2(rho)
    return max(l1, 0.0), max(l2, 0.0)


def cq(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits."""
    return float(sum(-l * math.log2(l) for l in _spectrum(rho) if l > 0))


def dq(rho: np.ndarray, rank_tol: float = RANK_TOL) -> float:
    """``log2`` of the number of eigenvalues above ``rank_tol * lambda_max``."""
    l1, l2 = _spectrum(rho)
    rank = sum(1 for l in (l1, l2) if l > rank_tol * l1)
    return math.log2(rank)


@dataclass(frozen=True)
class MetricsReport:
    gamma1: float
    gamma2: float
    p: float
    dt: float
    delta: float
    g: float
    mu: float
    n_term: int
    cmu_exact: float
    cmu_trunc: float
    dmu_trunc: float
    cq: float
    dq: float

    def as_dict(self) -> dict:
        return asdict(self)


def quantum_metrics(dp: DiscreteParams, allow_degenerate: bool = False) -> tuple[float, float]:
    """``(Cq, Dq)`` at one parameter point.

    Extremal points (``p`` in {0, 1}) use the analytic pure state.  Equal
    rates raise :class:`DegenerateParametersError` unless ``allow_degenerate``.
    """
    if dp.non_extremal:
        rho = density_matrix(dp)
        return cq(rho), dq(rho)
    if dp.Gamma1 == dp.Gamma2 and not allow_degenerate:
        raise DegenerateParametersError("equal decay rates: quantum model undefined")
    return 0.0, 0.0


def report(
    params: ProcessParams,
    delta: float = classical.DEFAULT_DELTA,
    allow_degenerate: bool = False,
) -> MetricsReport:
    dp = discretize(params)
    cq_, dq_ = quantum_metrics(dp, allow_degenerate)
    n_term = classical.compute_n_term(dp, delta)
    return MetricsReport(
        gamma1=params.gamma1,
        gamma2=params.gamma2,
        p=params.p,
        dt=params.dt,
        delta=delta,
        g=min(1.0, quantum.overlap_g(dp)),
        mu=normalization_mu(dp),
        n_term=n_term,
        cmu_exact=classical.stat_complexity_exact(dp),
        cmu_trunc=classical.stat_complexity_truncated(dp, delta),
        dmu_trunc=classical.top_complexity_truncated(n_term),
        cq=cq_,
        dq=dq_,
    )


def continuum_cq(
    gamma1: float,
    gamma2: float,
    p: float,
    tol: float = 1e-4,
    max_halvings: int = 60,
) -> float:
    """Approximate the ``dt -> 0`` limit of ``Cq`` by repeated halving of ``dt``.

    Starts at ``dt = 0.1 / max(gamma1, gamma2)`` and stops once successive
    values differ by less than ``tol``.
    """
    dt = 0.1 / max(gamma1, gamma2)
    prev = quantum_metrics(discretize(ProcessParams(gamma1, gamma2, p, dt)))[0]
    for _ in range(max_halvings):
        dt *= 0.5
        cur = quantum_metrics(discretize(ProcessParams(gamma1, gamma2, p, dt)))[0]
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev
