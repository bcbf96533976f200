"""Truncated-oscillator operator algebra and model Hamiltonians.

All operators are dense matrices in the harmonic-oscillator number basis,
truncated to a power-of-two dimension so they can be mapped onto qubits.
Position and momentum are built from the truncated ladder matrices first and
then multiplied, so the last row/column of x^2, p^2 etc. carry the usual
truncation artifacts; convergence is handled by increasing the qubit count,
not by patching entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

HERMITICITY_ATOL = 1e-12

# Quartic coefficients as printed in the source models, kept as exact rationals.
COEFF_0275_OVER_4 = Fraction(275, 1000) / 4
COEFF_015_OVER_4 = Fraction(15, 100) / 4


class Family(str, Enum):
    """The six model Hamiltonians.

    One-mode quantum mechanics:
      HARMONIC_OSC:    H = p^2/2 + x^2/2
      ANHARMONIC_OSC:  H = p^2/2 + x^2/2 + c x^4
      DOUBLE_WELL:     H = p^2/2 - x^2   + c x^4

    Two-mode mini-superspace universes (modes a and chi):
      CLOSED_FREE:  H = -p_a^2/4 + p_chi^2/4 - a^2 + chi^2
      CLOSED_PHI4:  H = CLOSED_FREE - |L| a^4 + c chi^4
      OPEN_PHI4:    H = -p_a^2/4 + p_chi^2/4 + a^2 - chi^2 - |L| a^4 + c chi^4
    """

    HARMONIC_OSC = "HarmonicOsc"
    ANHARMONIC_OSC = "AnharmonicOsc"
    DOUBLE_WELL = "DoubleWell"
    CLOSED_FREE = "ClosedFree"
    CLOSED_PHI4 = "ClosedPhi4"
    OPEN_PHI4 = "OpenPhi4"


ONE_MODE_FAMILIES = (Family.HARMONIC_OSC, Family.ANHARMONIC_OSC, Family.DOUBLE_WELL)
TWO_MODE_FAMILIES = (Family.CLOSED_FREE, Family.CLOSED_PHI4, Family.OPEN_PHI4)

# Default couplings per family; families absent here ignore both coefficients.
DEFAULT_COUPLINGS = {
    Family.ANHARMONIC_OSC: (0.0, float(COEFF_0275_OVER_4)),
    Family.DOUBLE_WELL: (0.0, float(COEFF_015_OVER_4)),
    Family.CLOSED_PHI4: (float(COEFF_0275_OVER_4), float(COEFF_0275_OVER_4)),
    Family.OPEN_PHI4: (float(COEFF_015_OVER_4), float(COEFF_015_OVER_4)),
}


class DimensionError(ValueError):
    """Raised for truncation dimensions that cannot hold a ladder operator."""


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of which Hamiltonian to build.

    lambda_abs is |Lambda| (the a^4 coefficient magnitude) and quartic_c is c
    (the chi^4 / x^4 coefficient); hbar = 1 throughout.  omega sets the
    frequency scale of the ladder basis used for the quadratures.
    """

    family: Family
    qubits_per_mode: int
    lambda_abs: float = field(default=None)  # type: ignore[assignment]
    quartic_c: float = field(default=None)  # type: ignore[assignment]
    omega: float = 1.0

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if self.qubits_per_mode < 1:
            raise ValueError("qubits_per_mode must be positive")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        default_lam, default_c = DEFAULT_COUPLINGS.get(family, (0.0, 0.0))
        if self.lambda_abs is None:
            object.__setattr__(self, "lambda_abs", default_lam)
        if self.quartic_c is None:
            object.__setattr__(self, "quartic_c", default_c)
        if self.lambda_abs < 0 or self.quartic_c < 0:
            raise ValueError("lambda_abs and quartic_c must be nonnegative")

    @property
    def n_modes(self) -> int:
        return 2 if self.family in TWO_MODE_FAMILIES else 1

    @property
    def total_qubits(self) -> int:
        return self.n_modes * self.qubits_per_mode

    @property
    def mode_dim(self) -> int:
        return 2**self.qubits_per_mode

    @property
    def dim(self) -> int:
        return 2**self.total_qubits


@dataclass(frozen=True)
class OperatorMatrix:
    """A dense Hermitian operator with its mode/qubit layout.

    layout maps mode labels to qubit counts, most significant block first.
    """

    entries: np.ndarray
    layout: tuple[tuple[str, int], ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        dim = entries.shape[0]
        if entries.shape != (dim, dim) or dim & (dim - 1) or dim < 2:
            raise ValueError(f"entries must be square with power-of-two size, got {entries.shape}")
        if dim != 2 ** sum(n for _, n in self.layout):
            raise ValueError("layout qubit count does not match matrix dimension")
        if np.max(np.abs(entries - entries.conj().T)) > HERMITICITY_ATOL:
            raise ValueError("operator is not Hermitian to 1e-12")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_qubits(self) -> int:
        return sum(n for _, n in self.layout)


def ladder(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated lowering and raising operators of size dim.

    lower[n-1, n] = sqrt(n); raising is the conjugate transpose.
    """
    if dim < 2:
        raise DimensionError(f"ladder needs dim >= 2, got {dim}")
    lower = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    return lower, lower.conj().T


def quadratures(dim: int, omega: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Dimensionless position and momentum matrices at frequency scale omega."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    low, high = ladder(dim)
    x = (low + high) / np.sqrt(2.0 * omega)
    p = 1j * np.sqrt(omega / 2.0) * (high - low)
    return x, p


def _one_mode_hamiltonian(family: Family, spec: ModelSpec) -> np.ndarray:
    x, p = quadratures(spec.mode_dim, spec.omega)
    x2 = x @ x
    p2 = p @ p
    x4 = x2 @ x2
    if family is Family.HARMONIC_OSC:
        return p2 / 2 + x2 / 2
    if family is Family.ANHARMONIC_OSC:
        return p2 / 2 + x2 / 2 + spec.quartic_c * x4
    if family is Family.DOUBLE_WELL:
        return p2 / 2 - x2 + spec.quartic_c * x4
    raise ValueError(f"not a one-mode family: {family}")


def _two_mode_hamiltonian(spec: ModelSpec) -> np.ndarray:
    d = spec.mode_dim
    eye = np.eye(d)
    x, p = quadratures(d, spec.omega)
    x2 = x @ x
    p2 = p @ p
    x4 = x2 @ x2
    if spec.family is Family.OPEN_PHI4:
        # -p_a^2/4 + a^2 - |L| a^4   and   p_chi^2/4 - chi^2 + c chi^4
        piece_a = p2 / 4 - x2 + spec.lambda_abs * x4
        piece_chi = p2 / 4 - x2 + spec.quartic_c * x4
    else:
        # CLOSED_FREE / CLOSED_PHI4: -p_a^2/4 - a^2 - |L| a^4  vs  +...
        piece_a = p2 / 4 + x2 + spec.lambda_abs * x4
        piece_chi = p2 / 4 + x2 + spec.quartic_c * x4
    # mode a occupies the most significant qubit block
    return -np.kron(piece_a, eye) + np.kron(eye, piece_chi)


def build_model(spec: ModelSpec) -> OperatorMatrix:
    """Build the dense Hamiltonian for a model spec."""
    if spec.family in ONE_MODE_FAMILIES:
        h = _one_mode_hamiltonian(spec.family, spec)
        layout = (("x", spec.qubits_per_mode),)
    else:
        h = _two_mode_hamiltonian(spec)
        layout = (("a", spec.qubits_per_mode), ("chi", spec.qubits_per_mode))
    # enforce exact Hermiticity against float roundoff in the products
    h = (h + h.conj().T) / 2
    return OperatorMatrix(h, layout)


def matrix_square(op: OperatorMatrix) -> OperatorMatrix:
    """H -> H @ H, the objective for zero-eigenstate searches."""
    sq = op.entries @ op.entries
    sq = (sq + sq.conj().T) / 2
    return OperatorMatrix(sq, op.layout)


def export_csv(op: OperatorMatrix | np.ndarray, path) -> None:
    """Write a matrix as row-major CSV with "re,im" cell pairs."""
    entries = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op)
    with open(path, "w") as fh:
        for row in entries:
            fh.write(",".join(f"{z.real:.17g},{z.imag:.17g}" for z in row) + "\n")
