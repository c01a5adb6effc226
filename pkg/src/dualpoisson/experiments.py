"""Parameter sweeps and the classical/quantum Monte Carlo comparison."""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import classical, quantum
from .errors import DegenerateParametersError, InvalidParameterError
from .metrics import continuum_cq, quantum_metrics, report
from .process import ProcessParams, discretize

PRECISION_COLUMNS = ("dt", "cmu_exact", "cmu_trunc", "dmu_trunc", "cq", "dq")
FAMILY_COLUMNS = ("gamma", "p", "cq", "dq", "degenerate")


@dataclass(frozen=True)
class SweepSpec:
    mode: str = "precision"
    gamma1: float = 12.0
    gamma2: float = 1.0
    p: float = 0.9
    dt_start: float = 0.2
    dt_stop: float = 0.2 / 2**10
    dt_points: int = 11
    gamma_min: float = 1.1
    gamma_max: float = 1e3
    gamma_points: int = 40
    p_min: float = 0.02
    p_max: float = 0.98
    p_points: int = 40
    delta: float = classical.DEFAULT_DELTA
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("precision", "family"):
            raise InvalidParameterError(f"unknown sweep mode {self.mode!r}")
        for name in ("dt_points", "gamma_points", "p_points"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f"{name} must be >= 1")
        if self.dt_stop <= 0 or self.dt_start <= 0:
            raise InvalidParameterError("dt bounds must be positive")
        # dt grid runs from coarse to fine
        if self.dt_start < self.dt_stop or (self.dt_points > 1 and self.dt_start == self.dt_stop):
            raise InvalidParameterError("dt grid must run from dt_start down to a smaller dt_stop")
        if self.gamma_min <= 0 or self.gamma_min > self.gamma_max:
            raise InvalidParameterError("need 0 < gamma_min <= gamma_max")
        if not (0.0 <= self.p_min <= self.p_max <= 1.0):
            raise InvalidParameterError("need 0 <= p_min <= p_max <= 1")

    def dt_grid(self) -> np.ndarray:
        return np.geomspace(self.dt_start, self.dt_stop, self.dt_points)

    def gamma_grid(self) -> np.ndarray:
        return np.geomspace(self.gamma_min, self.gamma_max, self.gamma_points)

    def p_grid(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.p_points)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


@dataclass
class SweepTable:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()

    def to_records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # map preserves input order


def _precision_row(args):
    gamma1, gamma2, p, dt, delta = args
    r = report(ProcessParams(gamma1, gamma2, p, float(dt)), delta)
    return (float(dt), r.cmu_exact, r.cmu_trunc, r.dmu_trunc, r.cq, r.dq)


def sweep_precision(spec: SweepSpec) -> SweepTable:
    if spec.mode != "precision":
        raise InvalidParameterError("sweep_precision needs mode='precision'")
    fixed = ProcessParams(spec.gamma1, spec.gamma2, spec.p, spec.dt_start)
    if not fixed.non_extremal:
        raise DegenerateParametersError(
            "precision sweep needs p not in {0, 1} and gamma1 != gamma2"
        )
    jobs = [(spec.gamma1, spec.gamma2, spec.p, dt, spec.delta) for dt in spec.dt_grid()]
    return SweepTable(PRECISION_COLUMNS, _map(_precision_row, jobs, spec.workers))


def _family_row(args):
    gamma, p = args
    degenerate = gamma == 1.0 or p in (0.0, 1.0)
    if degenerate:
        return (gamma, p, 0.0, 0.0, True)
    # Dq does not depend on dt; read it off at the coarsest step.
    _, dq = quantum_metrics(discretize(ProcessParams(gamma, 1.0, p, 0.1 / max(gamma, 1.0))))
    return (gamma, p, continuum_cq(gamma, 1.0, p), dq, False)


def sweep_family(spec: SweepSpec) -> SweepTable:
    """Continuum-limit ``Cq`` over ``gamma = gamma1 / gamma2`` and ``p``.

    Rows are ordered gamma-major.  Points on the lines ``gamma == 1`` or
    ``p`` in {0, 1} are marked degenerate and given ``Cq = Dq = 0``.
    """
    if spec.mode != "family":
        raise InvalidParameterError("sweep_family needs mode='family'")
    jobs = [(float(g), float(p)) for g in spec.gamma_grid() for p in spec.p_grid()]
    return SweepTable(FAMILY_COLUMNS, _map(_family_row, jobs, spec.workers))


def run_sweep(spec: SweepSpec) -> SweepTable:
    return sweep_precision(spec) if spec.mode == "precision" else sweep_family(spec)


# -- Monte Carlo equivalence ------------------------------------------------


def gap_lengths(seq) -> np.ndarray:
    """Lengths of the 0-runs between consecutive 1s (unterminated ends dropped)."""
    ones = np.flatnonzero(np.asarray(seq))
    return np.diff(ones) - 1


def empirical_survival(gaps: np.ndarray, n_max: int) -> np.ndarray:
    counts = np.bincount(gaps, minlength=n_max + 1)
    at_least = counts[::-1].cumsum()[::-1]
    return at_least[: n_max + 1] / gaps.size


def gap_histogram(gaps: np.ndarray, n_max: int) -> np.ndarray:
    """Fraction of gaps of each length ``0..n_max`` (normalised over all gaps)."""
    return np.bincount(gaps, minlength=n_max + 1)[: n_max + 1] / gaps.size


def total_variation(h1: np.ndarray, h2: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(h1 - h2)))


@dataclass
class EquivalenceReport:
    n: np.ndarray
    analytic: np.ndarray
    classical: np.ndarray
    quantum: np.ndarray
    sigma_classical: np.ndarray
    sigma_quantum: np.ndarray
    tv_distance: float
    survival_ok: bool
    tv_ok: bool

    @property
    def passed(self) -> bool:
        return self.survival_ok and self.tv_ok


def equivalence_study(
    params: ProcessParams,
    steps: int = 10**6,
    seed: int = 0,
    delta: float = classical.DEFAULT_DELTA,
    n_max: int = 10,
    tv_gap_max: int = 20,
    sigmas: float = 4.0,
    tv_threshold: float = 0.01,
) -> EquivalenceReport:
    """Sample both engines and compare their gap statistics with ``Phi``.

    The classical machine uses child stream 0 of ``seed`` and the quantum
    model child stream 1, so the two samples are independent.
    """
    if steps <= 0:
        raise InvalidParameterError("steps must be positive")
    dp = discretize(params)
    machine = classical.build_machine(dp, delta)
    model = quantum.build_model(dp)
    gaps_c = gap_lengths(classical.simulate(machine, 0, steps, seed, stream_index=0))
    gaps_q = gap_lengths(quantum.simulate(model, 0, steps, seed, stream_index=1))
    if gaps_c.size == 0 or gaps_q.size == 0:
        raise InvalidParameterError("too few events sampled to form gaps; increase steps")

    n = np.arange(n_max + 1)
    phi = dp.survival(n)
    emp_c = empirical_survival(gaps_c, n_max)
    emp_q = empirical_survival(gaps_q, n_max)
    sig_c = np.sqrt(phi * (1 - phi) / gaps_c.size)
    sig_q = np.sqrt(phi * (1 - phi) / gaps_q.size)
    # 1e-12 absorbs rounding of Phi(0) = p + (1 - p), where sigma vanishes
    survival_ok = bool(
        np.all(np.abs(emp_c - phi) <= sigmas * sig_c + 1e-12)
        and np.all(np.abs(emp_q - phi) <= sigmas * sig_q + 1e-12)
    )
    tv = total_variation(gap_histogram(gaps_c, tv_gap_max), gap_histogram(gaps_q, tv_gap_max))
    return EquivalenceReport(n, phi, emp_c, emp_q, sig_c, sig_q, tv, survival_ok, tv < tv_threshold)
