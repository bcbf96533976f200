"""Statevector simulation of u3/CNOT circuits and shot-based estimation.

Qubit 0 is the most significant bit of the basis index, matching the
most-significant-first convention of the Pauli strings in `pauli`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin

import numpy as np

from .pauli import MeasurementGroup, PauliSum, group_by_basis, string_action


@dataclass(frozen=True)
class U3:
    qubit: int
    theta: float
    phi: float
    lam: float


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target must differ")


Gate = U3 | CNOT


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for gate in self.gates:
            qubits = (gate.qubit,) if isinstance(gate, U3) else (gate.control, gate.target)
            if any(q < 0 or q >= self.n_qubits for q in qubits):
                raise ValueError(f"gate {gate} out of range for {self.n_qubits} qubits")


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    return np.array(
        [
            [cos(theta / 2), -np.exp(1j * lam) * sin(theta / 2)],
            [np.exp(1j * phi) * sin(theta / 2), np.exp(1j * (phi + lam)) * cos(theta / 2)],
        ]
    )


# basis changes mapping X and Y measurement onto the computational basis
X_BASIS_ROTATION = (np.pi / 2, 0.0, np.pi)
Y_BASIS_ROTATION = (np.pi / 2, 0.0, np.pi / 2)


def _apply_u3(state: np.ndarray, gate: U3, n: int) -> np.ndarray:
    mat = u3_matrix(gate.theta, gate.phi, gate.lam)
    psi = state.reshape([2] * n)
    psi = np.moveaxis(psi, gate.qubit, 0)
    psi = np.tensordot(mat, psi, axes=([1], [0]))
    return np.moveaxis(psi, 0, gate.qubit).reshape(-1)


def _apply_cnot(state: np.ndarray, gate: CNOT, n: int) -> np.ndarray:
    psi = state.reshape([2] * n).copy()
    idx1 = [slice(None)] * n
    idx1[gate.control] = 1
    sub = psi[tuple(idx1)]
    psi[tuple(idx1)] = np.flip(sub, axis=gate.target if gate.target < gate.control else gate.target - 1)
    return psi.reshape(-1)


def run(circuit: Circuit, initial: int = 0) -> np.ndarray:
    """Apply the circuit's gates in order to basis state |initial>."""
    n = circuit.n_qubits
    dim = 2**n
    if not 0 <= initial < dim:
        raise ValueError(f"initial basis index {initial} out of range for {n} qubits")
    state = np.zeros(dim, dtype=complex)
    state[initial] = 1.0
    for gate in circuit.gates:
        if isinstance(gate, U3):
            state = _apply_u3(state, gate, n)
        else:
            state = _apply_cnot(state, gate, n)
    return state


@dataclass(frozen=True)
class AnsatzShape:
    """Layered hardware-efficient ansatz: u3 layers separated by CNOT chains."""

    n_qubits: int
    depth: int

    @property
    def parameter_count(self) -> int:
        return 3 * self.n_qubits * (self.depth + 1)


def build_ansatz(shape: AnsatzShape, params) -> Circuit:
    """One u3 per qubit, then depth x [CNOT chain, u3 layer].

    Parameters are consumed layer-major, qubit-minor: three angles per qubit.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (shape.parameter_count,):
        raise ValueError(
            f"expected {shape.parameter_count} parameters, got {params.shape}"
        )
    gates: list[Gate] = []
    it = iter(params)
    for layer in range(shape.depth + 1):
        if layer > 0:
            gates.extend(CNOT(q, q + 1) for q in range(shape.n_qubits - 1))
        for q in range(shape.n_qubits):
            gates.append(U3(q, next(it), next(it), next(it)))
    return Circuit(shape.n_qubits, tuple(gates))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_counts(state: np.ndarray, shots: int, seed) -> dict[str, int]:
    """Multinomial shot histogram over basis bit strings, deterministic per seed."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    probs = np.abs(state) ** 2
    probs = probs / probs.sum()
    counts = _as_rng(seed).multinomial(shots, probs)
    n = len(state).bit_length() - 1
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c}


def _parity_signs(mask_bits: np.ndarray, dim: int) -> np.ndarray:
    """(-1)^popcount(i & mask) for all basis indices i; mask given per qubit."""
    signs = np.ones(dim)
    n = dim.bit_length() - 1
    idx = np.arange(dim)
    for q in np.flatnonzero(mask_bits):
        bit = (idx >> (n - 1 - q)) & 1
        signs *= 1 - 2 * bit
    return signs


def _group_circuit(circuit: Circuit, group: MeasurementGroup) -> Circuit:
    extra = []
    for q, basis in enumerate(group.basis):
        if basis == "X":
            extra.append(U3(q, *X_BASIS_ROTATION))
        elif basis == "Y":
            extra.append(U3(q, *Y_BASIS_ROTATION))
    return Circuit(circuit.n_qubits, circuit.gates + tuple(extra))


def expectation(
    circuit: Circuit,
    observable: PauliSum,
    shots: int | None = None,
    seed=None,
) -> tuple[float, float]:
    """<psi|O|psi> for the circuit's output state.

    Exact mode (shots=None): per-string statevector contraction, stderr 0.
    Shot mode: strings are grouped qubit-wise, each group is measured in its
    rotated basis with a multinomial draw, and each string's expectation comes
    from the bit-parity average over its non-identity qubits.
    """
    if observable.n_qubits != circuit.n_qubits:
        raise ValueError("observable and circuit qubit counts differ")
    state = run(circuit)
    if shots is None:
        value = 0.0
        for coeff, string in observable.terms:
            perm, phase = string_action(string)
            value += coeff * np.real(np.vdot(state, phase * state[perm]))
        return float(value), 0.0
    rng = _as_rng(seed)
    dim = len(state)
    value = 0.0
    var_sum = 0.0
    for group in group_by_basis(observable):
        rotated = _group_circuit(circuit, group)
        probs = np.abs(run(rotated)) ** 2
        counts = rng.multinomial(shots, probs / probs.sum())
        freq = counts / shots
        for coeff, string in group.terms:
            mask = np.array([c != "I" for c in string])
            if not mask.any():
                value += coeff
                continue
            est = float(freq @ _parity_signs(mask, dim))
            value += coeff * est
            var_sum += coeff**2 * max(1.0 - est**2, 0.0) / shots
    return float(value), float(np.sqrt(var_sum))


def to_text(circuit: Circuit) -> str:
    """Gate-per-line text form: header "qubits N", then "u3 q t p l" / "cx c t"."""
    lines = [f"qubits {circuit.n_qubits}"]
    for gate in circuit.gates:
        if isinstance(gate, U3):
            lines.append(f"u3 {gate.qubit} {gate.theta:.17g} {gate.phi:.17g} {gate.lam:.17g}")
        else:
            lines.append(f"cx {gate.control} {gate.target}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError('circuit text must start with a "qubits N" header')
    n = int(lines[0].split()[1])
    gates: list[Gate] = []
    for line in lines[1:]:
        parts = line.split()
        if parts[0] == "u3":
            gates.append(U3(int(parts[1]), float(parts[2]), float(parts[3]), float(parts[4])))
        elif parts[0] == "cx":
            gates.append(CNOT(int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"unknown gate line: {line}")
    return Circuit(n, tuple(gates))
