"""Truncated-oscillator toolkit: exact spectra and shot-sampled VQE for
quantum-mechanical potentials and Wheeler-DeWitt mini-superspace models."""

from .circuits import AnsatzShape, Circuit, CNOT, U3, build_ansatz, expectation, run, sample_counts
from .oscillator import (
    Family,
    ModelSpec,
    OperatorMatrix,
    build_model,
    ladder,
    matrix_square,
    quadratures,
)
from .pauli import PauliSum, decompose, group_by_basis, reconstruct
from .spectrum import (
    SpectrumResult,
    WavefunctionGrid,
    convergence_scan,
    eigendecompose,
    nearest_zero_state,
    reconstruct_wavefunction,
)
from .vqe import SpsaConfig, VqeResult, estimate_error, spsa_minimize, vqe_run

__all__ = [
    "AnsatzShape",
    "Circuit",
    "CNOT",
    "U3",
    "Family",
    "ModelSpec",
    "OperatorMatrix",
    "PauliSum",
    "SpectrumResult",
    "SpsaConfig",
    "VqeResult",
    "WavefunctionGrid",
    "build_ansatz",
    "build_model",
    "convergence_scan",
    "decompose",
    "eigendecompose",
    "estimate_error",
    "expectation",
    "group_by_basis",
    "ladder",
    "matrix_square",
    "nearest_zero_state",
    "quadratures",
    "reconstruct",
    "reconstruct_wavefunction",
    "run",
    "sample_counts",
    "spsa_minimize",
    "vqe_run",
]
