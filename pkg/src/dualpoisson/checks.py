"""Invariant suite evaluated at a single parameter point."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import classical, quantum
from .metrics import cq, density_matrix, density_matrix_sum
from .process import (
    DiscreteParams,
    ProcessParams,
    conditional_gap,
    discretize,
    emission_prob,
    steady_state_distribution,
    tail_cutoff,
)


@dataclass(frozen=True)
class Tolerances:
    unitarity: float = 1e-10
    kraus: float = 1e-10
    recurrence: float = 1e-9
    survival: float = 1e-9
    rho: float = 1e-8
    symmetry: float = 1e-12
    normalization: float = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skip"
    value: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        if self.status == "skip":
            return f"SKIP {self.name} (degenerate parameters)"
        return f"{self.status.upper()} {self.name} err={self.value:.3e} tol={self.tol:.1e}"


def _le(name, value, tol) -> CheckResult:
    return CheckResult(name, "pass" if value <= tol else "fail", float(value), tol)


def recurrence_errors(model: quantum.QuantumModel, n_max: int) -> tuple[float, float]:
    """Worst amplitude error and worst infidelity of the update rule over ``n = 0..n_max``.

    For each ``n`` the probe-|0> branch of ``U |s(n)>|0>`` must be
    ``sqrt(Phi(n+1)/Phi(n)) |s(n+1)>`` and the probe-|1> branch
    ``sqrt(1 - Phi(n+1)/Phi(n)) |s(0)>``.
    """
    dp = model.dp
    n = np.arange(n_max + 2)
    S = quantum.memory_states(dp, n)  # 2 x (n_max + 2)
    ratio = dp.survival(n[1:]) / dp.survival(n[:-1])
    # U acting on |s>|0> only touches the probe-|0> input columns
    out = model.U[:, 0::2] @ S[:, :-1]  # rows: |m, j> in memory-major order
    c0, c1 = out[0::2], out[1::2]
    n0, n1 = np.linalg.norm(c0, axis=0), np.linalg.norm(c1, axis=0)
    amp_err = max(np.max(np.abs(n0 - np.sqrt(ratio))), np.max(np.abs(n1 - np.sqrt(1.0 - ratio))))
    fid0 = np.abs(np.sum(S[:, 1:].conj() * c0, axis=0)) / n0
    fid1 = np.abs(S[:, :1].conj().T @ c1)[0] / n1
    infid = max(np.max(1.0 - fid0), np.max(1.0 - fid1))
    return float(amp_err), float(max(infid, 0.0))


def classical_checks(dp: DiscreteParams, delta: float, tol: Tolerances) -> list[CheckResult]:
    out = []
    P = steady_state_distribution(dp)
    out.append(_le("steady_state_normalization", abs(P.sum() - 1.0), tol.normalization))

    K = tail_cutoff(dp)
    worst = 0.0
    for n_past in range(6):
        total = float(np.sum(conditional_gap(dp, n_past, np.arange(K + 1))))
        expected = 1.0 - dp.survival(n_past + K + 1) / dp.survival(n_past)
        worst = max(worst, abs(total - expected))
    out.append(_le("conditional_gap_normalization", worst, tol.normalization))

    machine = classical.build_machine(dp, delta)
    agg = classical.aggregated_distribution(dp, machine.n_term)
    diag = np.max(np.abs(classical.stationary_distribution(machine) - agg))
    out.append(_le("truncated_chain_stationary", diag, tol.normalization))

    excess = classical.stat_complexity_truncated(dp, delta) - classical.stat_complexity_exact(dp)
    out.append(_le("merging_lowers_entropy", max(excess, 0.0), tol.normalization))

    lo, hi = 1.0 - dp.Gamma_max, float(emission_prob(dp, machine.n_term))
    slack = max(lo - machine.terminal_emit, machine.terminal_emit - hi, 0.0)
    out.append(_le("terminal_emit_bounds", slack, tol.normalization))
    return out


def quantum_checks(dp: DiscreteParams, delta: float, tol: Tolerances) -> list[CheckResult]:
    out = []
    model = quantum.build_model(dp)
    n_term = classical.compute_n_term(dp, delta)
    out.append(_le("unitarity", quantum.unitarity_error(model.U), tol.unitarity))
    out.append(_le("kraus_completeness", quantum.kraus_completeness_error(model.E0, model.E1), tol.kraus))

    amp, infid = recurrence_errors(model, n_term + 10)
    out.append(_le("recurrence_amplitudes", amp, tol.recurrence))
    out.append(_le("recurrence_fidelity", infid, tol.recurrence))

    n = np.arange(2 * n_term + 1)
    qs = quantum.quantum_survival_curve(model, 2 * n_term)
    out.append(_le("quantum_survival", np.max(np.abs(qs - dp.survival(n))), tol.survival))

    rho, rho_sum = density_matrix(dp), density_matrix_sum(dp)
    out.append(_le("density_matrix_closed_vs_sum", np.max(np.abs(rho - rho_sum)), tol.rho))
    out.append(_le("cq_closed_vs_sum", abs(cq(rho) - cq(rho_sum)), tol.rho))
    out.append(_le("cq_exchange_symmetry", abs(cq(rho) - cq(density_matrix(dp.swapped()))), tol.symmetry))
    return out


QUANTUM_CHECK_NAMES = (
    "unitarity",
    "kraus_completeness",
    "recurrence_amplitudes",
    "recurrence_fidelity",
    "quantum_survival",
    "density_matrix_closed_vs_sum",
    "cq_closed_vs_sum",
    "cq_exchange_symmetry",
)


def run_checks(params: ProcessParams, delta: float = classical.DEFAULT_DELTA, tol: Tolerances = Tolerances()) -> list[CheckResult]:
    """All invariant checks; quantum checks are skipped at extremal parameters."""
    dp = discretize(params)
    results = classical_checks(dp, delta, tol)
    if params.non_extremal:
        results += quantum_checks(dp, delta, tol)
    else:
        results += [CheckResult(name, "skip", math.nan, math.nan) for name in QUANTUM_CHECK_NAMES]
    return results
