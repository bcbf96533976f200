import numpy as np
import pytest

from mssq.circuits import AnsatzShape, Circuit, U3
from mssq.oscillator import Family, ModelSpec, build_model
from mssq.pauli import PauliSum, decompose
from mssq.spectrum import eigendecompose
from mssq.vqe import SpsaConfig, SpsaDiverged, estimate_error, spsa_minimize, vqe_run


def test_spsa_quadratic():
    config = SpsaConfig(iterations=200, seed=0)
    best, traj = spsa_minimize(lambda t: float(np.sum(t**2)), np.array([1.0, 1.0]), config)
    assert len(traj) == 200
    assert np.linalg.norm(best) < 0.05


def test_spsa_noisy_quadratic_many_seeds():
    successes = 0
    for seed in range(100):
        noise = np.random.default_rng(10_000 + seed)

        def objective(t):
            return float(np.sum(t**2) + noise.normal(0, 0.01))

        best, _ = spsa_minimize(
            objective, np.array([1.0, 1.0]), SpsaConfig(iterations=200, seed=seed)
        )
        successes += np.linalg.norm(best) < 0.15
    assert successes >= 90


def test_spsa_empty_params():
    best, traj = spsa_minimize(lambda t: 0.0, np.array([]), SpsaConfig(iterations=10))
    assert best.size == 0 and traj == []


def test_spsa_nonfinite_objective():
    with pytest.raises(SpsaDiverged, match="iteration"):
        spsa_minimize(lambda t: float("nan"), np.ones(2), SpsaConfig(iterations=5))


def test_spsa_gain_sequences_decrease():
    cfg = SpsaConfig(iterations=50, a=1.0)
    ks = np.arange(50)
    a_k = cfg.a / (ks + 1 + cfg.stability_const) ** cfg.alpha
    c_k = cfg.c / (ks + 1) ** cfg.gamma
    assert np.all(np.diff(a_k) < 0) and np.all(np.diff(c_k) < 0)


def test_spsa_config_validation():
    with pytest.raises(ValueError):
        SpsaConfig(iterations=10, alpha=0.4)
    with pytest.raises(ValueError):
        SpsaConfig(iterations=10, gamma=0.6)
    with pytest.raises(ValueError):
        SpsaConfig(iterations=10, c=0.0)


def test_spsa_deterministic():
    def objective(t):
        return float(np.sum(t**2))

    runs = [
        spsa_minimize(objective, np.array([0.3, -0.2]), SpsaConfig(iterations=50, seed=9))
        for _ in range(2)
    ]
    assert np.array_equal(runs[0][0], runs[1][0])
    assert [o for _, o in runs[0][1]] == [o for _, o in runs[1][1]]


def test_estimate_error_exact_mode_zero_spread():
    circuit = Circuit(1, ())
    observable = PauliSum(1, ((1.0, "Z"),))
    # Z on |0> is deterministic, so every shot run returns exactly 1
    mean, std = estimate_error(circuit, observable, shots=512, repetitions=10, seed=0)
    assert mean == 1.0 and std == 0.0


def test_estimate_error_binomial_scale():
    circuit = Circuit(1, (U3(0, np.pi / 2, 0, np.pi),))  # |+>
    observable = PauliSum(1, ((1.0, "Z"),))
    mean, std = estimate_error(circuit, observable, shots=8192, repetitions=100, seed=1)
    assert abs(mean) < 0.005
    assert 0.008 < std < 0.015


def test_estimate_error_shot_doubling():
    circuit = Circuit(1, (U3(0, np.pi / 2, 0, np.pi),))
    observable = PauliSum(1, ((1.0, "Z"),))
    _, std1 = estimate_error(circuit, observable, shots=4096, repetitions=300, seed=2)
    _, std2 = estimate_error(circuit, observable, shots=8192, repetitions=300, seed=2)
    assert 0.6 < std2 / std1 < 0.8


def test_estimate_error_rejects_single_repetition():
    with pytest.raises(ValueError):
        estimate_error(Circuit(1, ()), PauliSum(1, ((1.0, "Z"),)), 100, 1, 0)


def test_vqe_closed_free_single_qubit_modes():
    # at one qubit per mode the Hamiltonian is exactly zero
    spec = ModelSpec(Family.CLOSED_FREE, 1)
    result = vqe_run(
        spec,
        AnsatzShape(2, 1),
        objective_kind="constraint",
        spsa=SpsaConfig(iterations=10, calibration_samples=2, seed=0),
        repetitions=3,
    )
    assert result.h_mean == 0.0 and result.h2_mean == 0.0


def test_vqe_harmonic_upper_bound():
    spec = ModelSpec(Family.HARMONIC_OSC, 2)
    exact = eigendecompose(build_model(spec)).eigenvalues[0]
    result = vqe_run(spec, AnsatzShape(2, 2), spsa=SpsaConfig(iterations=200, seed=4))
    assert abs(result.energy - exact) <= 0.03 * abs(exact)
    assert result.energy >= exact - 2 * result.stderr


def test_vqe_result_contents():
    spec = ModelSpec(Family.HARMONIC_OSC, 2)
    result = vqe_run(
        spec,
        AnsatzShape(2, 1),
        spsa=SpsaConfig(iterations=20, calibration_samples=3, seed=5),
        repetitions=5,
    )
    assert len(result.trajectory) == 20
    assert result.final_probabilities.sum() == pytest.approx(1.0, abs=1e-9)
    assert result.h2_mean is None
    assert result.objective_kind == "energy"


def test_vqe_constraint_variance_inequality():
    spec = ModelSpec(Family.CLOSED_FREE, 1)
    result = vqe_run(
        spec,
        AnsatzShape(2, 1),
        objective_kind="constraint",
        spsa=SpsaConfig(iterations=10, calibration_samples=2, seed=6),
        repetitions=5,
    )
    spread = 2 * (result.h_stderr + (result.h2_stderr or 0.0))
    assert result.h2_mean >= result.h_mean**2 - spread


def test_vqe_deterministic_trajectory():
    spec = ModelSpec(Family.HARMONIC_OSC, 2)
    runs = [
        vqe_run(
            spec,
            AnsatzShape(2, 1),
            spsa=SpsaConfig(iterations=15, calibration_samples=3, seed=7),
            repetitions=3,
        )
        for _ in range(2)
    ]
    obj0 = [o for _, o in runs[0].trajectory]
    obj1 = [o for _, o in runs[1].trajectory]
    assert obj0 == obj1
    assert runs[0].energy == runs[1].energy


def test_vqe_rejects_mismatched_shape():
    with pytest.raises(ValueError):
        vqe_run(ModelSpec(Family.HARMONIC_OSC, 2), AnsatzShape(3, 1))


def test_vqe_rejects_unknown_objective():
    with pytest.raises(ValueError):
        vqe_run(ModelSpec(Family.HARMONIC_OSC, 2), AnsatzShape(2, 1), objective_kind="foo")


def test_vqe_restarts_and_refinements_run():
    spec = ModelSpec(Family.HARMONIC_OSC, 2)
    result = vqe_run(
        spec,
        AnsatzShape(2, 1),
        spsa=SpsaConfig(iterations=15, calibration_samples=3, seed=8),
        repetitions=3,
        restarts=2,
        refinements=((10, 0.05, 4096),),
    )
    assert len(result.trajectory) == 15 * 2 + 10
