"""Exit criteria for the package, one test per criterion.

Each test prints ``#k PASS|FAIL <name> (<seconds>s) <detail>``; the lines are
repeated in the pytest terminal summary.  Runtime limits are part of the
criteria.
"""

import math
import time

import numpy as np
import pytest

from dualpoisson import classical, quantum
from dualpoisson.checks import recurrence_errors
from dualpoisson.experiments import SweepSpec, equivalence_study, sweep_family, sweep_precision
from dualpoisson.metrics import continuum_cq, cq, density_matrix, density_matrix_sum, report
from dualpoisson.process import ProcessParams, discretize

from conftest import ACCEPTANCE_LINES, FIG2, random_points

RANDOM_POINTS = random_points(100, seed=20240601)


def _record(number, name, ok, elapsed, limit, detail):
    ok = bool(ok) and (limit is None or elapsed < limit)
    budget = f" limit={limit}s" if limit is not None else ""
    line = f"#{number} {'PASS' if ok else 'FAIL'} {name} ({elapsed:.2f}s{budget}) {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_model_faithfulness():
    t0 = time.perf_counter()
    worst = 0.0
    for dt in (0.2, 0.1, 0.05, 0.0125):
        dp = discretize(ProcessParams(12.0, 1.0, 0.9, dt))
        n_term = classical.compute_n_term(dp)
        model = quantum.build_model(dp)
        qs = quantum.quantum_survival_curve(model, 2 * n_term)
        worst = max(worst, float(np.max(np.abs(qs - dp.survival(np.arange(2 * n_term + 1))))))
    elapsed = time.perf_counter() - t0
    _record(1, "model faithfulness", worst <= 1e-9, elapsed, 1.0, f"max|Phi_q - Phi|={worst:.2e} tol=1e-9")


def test_2_dimension_advantage_scaling():
    t0 = time.perf_counter()
    table = sweep_precision(SweepSpec(gamma1=12.0, gamma2=1.0, p=0.9))
    elapsed = time.perf_counter() - t0
    dmu, cmu = table.column("dmu_trunc"), table.column("cmu_trunc")
    cq_, dq_ = table.column("cq"), table.column("dq")
    checks = {
        "rows": len(table.rows) == 11,
        "dmu_nondecreasing": bool(np.all(np.diff(dmu) >= 0)),
        "dmu_gain>=3": dmu[-1] - dmu[0] >= 3.0,
        "cmu_nondecreasing": bool(np.all(np.diff(cmu) >= 0)),
        "dq==1": bool(np.all(dq_ == 1.0)),
        "cq<=1": bool(np.all(cq_ <= 1.0)),
        "cq_tail<0.05": abs(cq_[-1] - cq_[-2]) < 0.05,
    }
    detail = " ".join(f"{k}={v}" for k, v in checks.items())
    detail += f" dmu_gain={dmu[-1] - dmu[0]:.3f} cq_tail={abs(cq_[-1] - cq_[-2]):.2e}"
    _record(2, "dimension advantage scaling", all(checks.values()), elapsed, 10.0, detail)


def test_3_recurrence_identity():
    t0 = time.perf_counter()
    worst_amp = worst_infid = 0.0
    for params in RANDOM_POINTS:
        dp = discretize(params)
        amp, infid = recurrence_errors(quantum.build_model(dp), classical.compute_n_term(dp) + 10)
        worst_amp, worst_infid = max(worst_amp, amp), max(worst_infid, infid)
    elapsed = time.perf_counter() - t0
    ok = worst_amp <= 1e-9 and worst_infid < 1e-9
    _record(3, "recurrence identity", ok, elapsed, 10.0, f"amp_err={worst_amp:.2e} infidelity={worst_infid:.2e} tol=1e-9")


def test_4_unitarity_and_kraus():
    t0 = time.perf_counter()
    worst_u = worst_k = 0.0
    for params in RANDOM_POINTS:
        m = quantum.build_model(discretize(params))
        worst_u = max(worst_u, quantum.unitarity_error(m.U))
        worst_k = max(worst_k, quantum.kraus_completeness_error(m.E0, m.E1))
    elapsed = time.perf_counter() - t0
    ok = worst_u <= 1e-10 and worst_k <= 1e-10
    _record(4, "unitarity and Kraus completeness", ok, elapsed, None, f"unitarity={worst_u:.2e} kraus={worst_k:.2e} tol=1e-10")


def test_5_monte_carlo_equivalence():
    t0 = time.perf_counter()
    rep = equivalence_study(FIG2, steps=10**6, seed=2024)
    elapsed = time.perf_counter() - t0
    z_c = np.max(np.abs(rep.classical - rep.analytic)[1:] / rep.sigma_classical[1:])
    z_q = np.max(np.abs(rep.quantum - rep.analytic)[1:] / rep.sigma_quantum[1:])
    detail = f"max_z_classical={z_c:.2f} max_z_quantum={z_q:.2f} (<=4) tv={rep.tv_distance:.4f} (<0.01)"
    _record(5, "Monte Carlo equivalence", rep.passed, elapsed, 30.0, detail)


def test_6_density_matrix_cross_check():
    t0 = time.perf_counter()
    worst_rho = worst_cq = 0.0
    for params in RANDOM_POINTS:
        dp = discretize(params)
        closed, summed = density_matrix(dp), density_matrix_sum(dp)
        worst_rho = max(worst_rho, float(np.max(np.abs(closed - summed))))
        worst_cq = max(worst_cq, abs(cq(closed) - cq(summed)))
    elapsed = time.perf_counter() - t0
    ok = worst_rho <= 1e-8 and worst_cq <= 1e-8
    _record(6, "density-matrix cross-check", ok, elapsed, None, f"rho_err={worst_rho:.2e} cq_err={worst_cq:.2e} tol=1e-8")


def test_7_family_symmetry():
    rng = np.random.default_rng(77)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        gamma = math.exp(rng.uniform(math.log(1.1), math.log(1e3)))
        p = rng.uniform(0.02, 0.98)
        worst = max(worst, abs(continuum_cq(gamma, 1.0, p) - continuum_cq(1.0 / gamma, 1.0, 1.0 - p)))
    elapsed = time.perf_counter() - t0
    _record(7, "symmetry (gamma, p) <-> (1/gamma, 1-p)", worst <= 1e-9, elapsed, None, f"max|dCq|={worst:.2e} tol=1e-9")


def test_8_degenerate_lines():
    t0 = time.perf_counter()
    cases = []
    for dt in (0.2, 0.1, 0.01):
        cases += [ProcessParams(12.0, 1.0, 0.0, dt), ProcessParams(12.0, 1.0, 1.0, dt), ProcessParams(3.0, 3.0, 0.4, dt)]
    values = [(report(c, allow_degenerate=True).cq, report(c, allow_degenerate=True).dq) for c in cases]
    family = sweep_family(
        SweepSpec(mode="family", gamma_min=1.0, gamma_max=1.0, gamma_points=1, p_min=0.0, p_max=1.0, p_points=5)
    ).rows + sweep_family(
        SweepSpec(mode="family", gamma_min=2.0, gamma_max=50.0, gamma_points=3, p_min=0.0, p_max=0.0, p_points=1)
    ).rows + sweep_family(
        SweepSpec(mode="family", gamma_min=2.0, gamma_max=50.0, gamma_points=3, p_min=1.0, p_max=1.0, p_points=1)
    ).rows
    values += [(row[2], row[3]) for row in family]
    ok = all(c == 0.0 and d == 0.0 for c, d in values) and all(row[4] for row in family)
    elapsed = time.perf_counter() - t0
    _record(8, "degenerate lines Cq=Dq=0", ok, elapsed, None, f"points={len(values)}")


def test_9_heatmap_qualitative():
    t0 = time.perf_counter()
    spec = SweepSpec(mode="family")
    table = sweep_family(spec)
    elapsed = time.perf_counter() - t0
    cq_ = table.column("cq")
    best = table.rows[int(np.argmax(cq_))]
    c_hi, c_lo, c_near = continuum_cq(100.0, 1.0, 0.9), continuum_cq(100.0, 1.0, 0.1), continuum_cq(1.1, 1.0, 0.9)
    checks = {
        "rows": len(table.rows) == 1600,
        "argmax_gamma>=10": best[0] >= 10.0,
        "argmax_p>0.5": best[1] > 0.5,
        "Cq(100,.9)>Cq(100,.1)": c_hi > c_lo,
        "Cq(100,.9)>Cq(1.1,.9)": c_hi > c_near,
        "dq==1": bool(np.all(table.column("dq") == 1.0)),
    }
    detail = " ".join(f"{k}={v}" for k, v in checks.items())
    detail += f" argmax=(gamma={best[0]:.3g}, p={best[1]:.3g}, Cq={best[2]:.3f})"
    _record(9, "heatmap qualitative claim", all(checks.values()), elapsed, 300.0, detail)


def test_10_truncation_rule():
    t0 = time.perf_counter()
    n_term = classical.compute_n_term(discretize(FIG2), 0.01)
    _record(10, "truncation rule n_term", n_term == 28, time.perf_counter() - t0, None, f"n_term={n_term} expected=28")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
