"""Two-qubit quantum causal model of a dual Poisson process.

One qubit holds the memory, a second (probe) qubit is prepared in |0>,
coupled to the memory by a fixed unitary ``U`` and measured each step.  The
measurement outcome is the emitted symbol.  Tensor order is
``|memory> (x) |probe>``, so basis index ``2 * m + j`` is memory ``m``, probe ``j``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import CompletionError, DegenerateParametersError
from .process import DiscreteParams

NORM_TOL = 1e-12


@dataclass(frozen=True)
class QubitState:
    amp0: complex
    amp1: complex

    def __post_init__(self):
        norm = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"qubit state not normalized (|psi|^2 = {norm!r})")

    @classmethod
    def from_vector(cls, v) -> QubitState:
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)


def fidelity(a: QubitState, b: QubitState) -> float:
    """``|<a|b>|``; insensitive to global phase."""
    return abs(np.vdot(a.vector, b.vector))


def overlap_g(dp: DiscreteParams) -> float:
    """Overlap ``<phi1|phi2>`` of the two generator states (real, positive)."""
    G1, G2 = dp.Gamma1, dp.Gamma2
    return math.sqrt((1.0 - G1) * (1.0 - G2)) / (1.0 - math.sqrt(G1 * G2))


def overlap_complement(dp: DiscreteParams) -> float:
    """``sqrt(1 - g**2)`` evaluated without cancellation as ``g -> 1``.

    Uses ``1 - g**2 = (sqrt(G1) - sqrt(G2))**2 / (1 - sqrt(G1 G2))**2``.
    """
    r1, r2 = math.sqrt(dp.Gamma1), math.sqrt(dp.Gamma2)
    return abs(r1 - r2) / (1.0 - r1 * r2)


def _require_distinct(dp: DiscreteParams) -> float:
    g = overlap_g(dp)
    if dp.Gamma1 == dp.Gamma2 or g >= 1.0:
        raise DegenerateParametersError(
            "equal decay rates: generator states coincide and the model is undefined"
        )
    return g


def generator_states(dp: DiscreteParams) -> tuple[QubitState, QubitState]:
    g = _require_distinct(dp)
    return QubitState(1.0, 0.0), QubitState(g, overlap_complement(dp))


def _channel_weights(dp: DiscreteParams, n: int) -> tuple[float, float]:
    """``p G1^n / Phi(n)`` and ``(1-p) G2^n / Phi(n)`` without underflow."""
    logs = []
    for w, G in ((dp.p, dp.Gamma1), (dp.q, dp.Gamma2)):
        logs.append(math.log(w) + n * math.log(G) if w > 0 else -math.inf)
    top = max(logs)
    r = [math.exp(l - top) for l in logs]
    total = r[0] + r[1]
    return r[0] / total, r[1] / total


def _memory_vector(dp: DiscreteParams, n: int, g: float) -> np.ndarray:
    w1, w2 = _channel_weights(dp, n)
    a = math.sqrt(w1)
    b = math.sqrt(w2)
    return np.array([a + 1j * g * b, 1j * overlap_complement(dp) * b], dtype=complex)


def _memory_matrix(dp: DiscreteParams, ns, g: float) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    with np.errstate(divide="ignore"):
        l1 = np.log(dp.p) + ns * math.log(dp.Gamma1)
        l2 = np.log(dp.q) + ns * math.log(dp.Gamma2)
    top = np.maximum(l1, l2)
    r1, r2 = np.exp(l1 - top), np.exp(l2 - top)
    a, b = np.sqrt(r1 / (r1 + r2)), np.sqrt(r2 / (r1 + r2))
    return np.stack([a + 1j * g * b, 1j * overlap_complement(dp) * b])


def memory_states(dp: DiscreteParams, ns) -> np.ndarray:
    """Memory states for each index in ``ns`` as the columns of a 2 x N array."""
    return _memory_matrix(dp, ns, _require_distinct(dp))


def memory_state(dp: DiscreteParams, n: int) -> QubitState:
    """Memory state after ``n`` 0s since the last 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    g = _require_distinct(dp)
    return QubitState(*_memory_vector(dp, n, g))


def reset_state(dp: DiscreteParams) -> QubitState:
    """``sqrt(p)|phi1> + i sqrt(1-p)|phi2>``, the memory right after an event."""
    phi1, phi2 = generator_states(dp)
    return QubitState.from_vector(math.sqrt(dp.p) * phi1.vector + 1j * math.sqrt(dp.q) * phi2.vector)


def _complete_unitary(U: np.ndarray, fixed: list[int], free: list[int]) -> None:
    """Fill columns ``free`` of ``U`` with an orthonormal complement of ``fixed``.

    Deterministic: candidates are the canonical basis vectors, taken in order
    of decreasing residual norm (ties by index), with Gram-Schmidt applied twice.
    """
    basis = [U[:, c] for c in fixed]
    dim = U.shape[0]
    for col in free:
        best, best_norm = None, -1.0
        for k in range(dim):
            v = np.zeros(dim, dtype=complex)
            v[k] = 1.0
            for _ in range(2):
                for b in basis:
                    v = v - np.vdot(b, v) * b
            nv = np.linalg.norm(v)
            if nv > best_norm + 1e-12:
                best, best_norm = v, nv
        if best_norm < 1e-6:
            raise CompletionError("orthonormal completion lost rank")
        best = best / best_norm
        U[:, col] = best
        basis.append(best)


def build_unitary(dp: DiscreteParams) -> np.ndarray:
    """The 4x4 interaction unitary in ``|memory, probe>`` order.

    Columns for inputs |0>|0> and |1>|0> are fixed by the model; the two
    probe-|1> input columns are a canonical orthonormal completion.
    """
    g = _require_distinct(dp)
    s = overlap_complement(dp)
    q = dp.q
    rG1, rG2 = math.sqrt(dp.Gamma1), math.sqrt(dp.Gamma2)
    rD1, rD2 = math.sqrt(1.0 - dp.Gamma1), math.sqrt(1.0 - dp.Gamma2)
    reset0 = math.sqrt(dp.p) + 1j * math.sqrt(q) * g  # <0|phi_R>
    sign = 1.0 if rG1 > rG2 else -1.0

    U = np.zeros((4, 4), dtype=complex)
    # U|0>|0>
    U[0, 0] = rG1
    U[1, 0] = rD1 * reset0
    U[3, 0] = 1j * rD1 * math.sqrt(q) * s
    # U|1>|0>.  With c = sqrt(1-G2) - sqrt(1-G1) g the textbook entries are
    # (rG2 - rG1) g / s, c reset0 / s and i c sqrt(q); they reduce to the forms
    # below, which avoid dividing two small differences when G1 ~ G2.
    U[0, 2] = -sign * rD1 * rD2
    U[1, 2] = sign * rD2 * rG1 * reset0
    U[2, 2] = rG2
    U[3, 2] = 1j * sign * rD2 * rG1 * s * math.sqrt(q)
    _complete_unitary(U, fixed=[0, 2], free=[1, 3])
    return U


def kraus_ops(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``E_j = <j|_probe U |0>_probe`` as 2x2 memory operators."""
    U4 = np.asarray(U).reshape(2, 2, 2, 2)  # [m_out, j_out, m_in, j_in]
    return U4[:, 0, :, 0].copy(), U4[:, 1, :, 0].copy()


def unitarity_error(U: np.ndarray) -> float:
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def kraus_completeness_error(E0: np.ndarray, E1: np.ndarray) -> float:
    return float(np.max(np.abs(E0.conj().T @ E0 + E1.conj().T @ E1 - np.eye(2))))


@dataclass(frozen=True)
class QuantumModel:
    dp: DiscreteParams
    g: float
    U: np.ndarray
    E0: np.ndarray
    E1: np.ndarray

    def memory_state(self, n: int) -> QubitState:
        return QubitState(*_memory_vector(self.dp, n, self.g))

    def to_json(self) -> str:
        """U, E0, E1 as row-major lists of ``[re, im]`` pairs."""

        def enc(M):
            return [[[float(z.real), float(z.imag)] for z in row] for row in M]

        doc = {
            "basis": "memory (x) probe: |00>, |01>, |10>, |11>",
            "Gamma1": self.dp.Gamma1,
            "Gamma2": self.dp.Gamma2,
            "p": self.dp.p,
            "g": self.g,
            "U": enc(self.U),
            "E0": enc(self.E0),
            "E1": enc(self.E1),
        }
        return json.dumps(doc, indent=2)


def build_model(dp: DiscreteParams) -> QuantumModel:
    g = _require_distinct(dp)
    U = build_unitary(dp)
    E0, E1 = kraus_ops(U)
    for M in (U, E0, E1):
        M.setflags(write=False)
    return QuantumModel(dp, g, U, E0, E1)


def step(model: QuantumModel, memory: QubitState, rng: np.random.Generator) -> tuple[int, QubitState]:
    """One probe interaction and measurement, driven by a single uniform draw."""
    return _step_kraus(model, memory.vector, rng.random())


def _step_kraus(model, m, u):
    v1 = model.E1 @ m
    p1 = float(np.vdot(v1, v1).real)
    if u < p1:
        return 1, QubitState.from_vector(v1)
    return 0, QubitState.from_vector(model.E0 @ m)


def step_statevector(model: QuantumModel, memory: QubitState, u: float) -> tuple[int, QubitState]:
    """Same as :func:`step` but through the full 4-dimensional state."""
    psi = model.U @ np.kron(memory.vector, np.array([1.0, 0.0]))
    psi = psi.reshape(2, 2)  # [memory, probe]
    p1 = float(np.sum(np.abs(psi[:, 1]) ** 2))
    if u < p1:
        return 1, QubitState.from_vector(psi[:, 1])
    return 0, QubitState.from_vector(psi[:, 0])


def simulate(
    model: QuantumModel,
    start_n: int,
    steps: int,
    seed: int,
    stream_index: int = 0,
    mode: str = "kraus",
) -> np.ndarray:
    """Sample ``steps`` outputs with the memory initialised to state ``start_n``.

    ``mode="kraus"`` evolves the 2-dimensional memory with ``E0``/``E1``;
    ``mode="statevector"`` runs the full two-qubit state each step.  Both
    consume the same uniforms, one per step, so they agree draw for draw.
    """
    if start_n < 0:
        raise ValueError("start_n must be non-negative")
    if steps <= 0:
        raise ValueError("steps must be positive")
    u = _rng.stream(seed, stream_index).random(steps).tolist()
    out = bytearray(steps)
    if mode == "statevector":
        mem = model.memory_state(start_n)
        for i in range(steps):
            out[i], mem = step_statevector(model, mem, u[i])
        return np.frombuffer(bytes(out), dtype=np.uint8)
    if mode != "kraus":
        raise ValueError(f"unknown mode {mode!r}")

    # Scalar complex arithmetic: ~10x faster than 2x2 numpy products per step.
    (a00, a01), (a10, a11) = model.E0.tolist()
    (b00, b01), (b10, b11) = model.E1.tolist()
    m0, m1 = (complex(z) for z in model.memory_state(start_n).vector)
    sqrt = math.sqrt
    for i in range(steps):
        v0 = b00 * m0 + b01 * m1
        v1 = b10 * m0 + b11 * m1
        p1 = v0.real * v0.real + v0.imag * v0.imag + v1.real * v1.real + v1.imag * v1.imag
        if u[i] < p1:
            out[i] = 1
            nrm = sqrt(p1)
        else:
            v0 = a00 * m0 + a01 * m1
            v1 = a10 * m0 + a11 * m1
            nrm = sqrt(v0.real * v0.real + v0.imag * v0.imag + v1.real * v1.real + v1.imag * v1.imag)
        m0 = v0 / nrm
        m1 = v1 / nrm
    return np.frombuffer(bytes(out), dtype=np.uint8)


def quantum_survival(model: QuantumModel, n: int) -> float:
    """Probability of ``n`` consecutive 0s from the reset state.

    Applies ``Pi0 U`` (probe projected onto |0>) ``n`` times to
    ``|phi_R>|0>`` in the full two-qubit space and returns the squared norm.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    P0 = np.kron(np.eye(2), np.diag([1.0, 0.0]))
    A = P0 @ model.U
    psi = np.kron(model.memory_state(0).vector, np.array([1.0, 0.0]))
    for _ in range(n):
        psi = A @ psi
    return float(np.vdot(psi, psi).real)


def quantum_survival_curve(model: QuantumModel, n_max: int) -> np.ndarray:
    """:func:`quantum_survival` for ``n = 0..n_max`` in one pass."""
    P0 = np.kron(np.eye(2), np.diag([1.0, 0.0]))
    A = P0 @ model.U
    psi = np.kron(model.memory_state(0).vector, np.array([1.0, 0.0]))
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        out[n] = np.vdot(psi, psi).real
        psi = A @ psi
    return out
