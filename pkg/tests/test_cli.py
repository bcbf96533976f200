import numpy as np
import pytest

from mssq.cli import main, noise_scan
from mssq.config import ConfigError, parse_config, resolve


def write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


BASE_SPECTRUM = """
model.family = HarmonicOsc
model.qubits_per_mode = 3
output.dir = {out}
"""

FAST_VQE = """
model.family = HarmonicOsc
model.qubits_per_mode = 2
ansatz.depth = 1
spsa.iterations = 20
spsa.calibration_samples = 3
run.repetitions = 3
run.seed = 11
spectrum.scan_dims = 4,8
output.dir = {out}
"""


def test_parse_defaults(tmp_path):
    cfg = parse_config(
        write_config(tmp_path, f"model.family = HarmonicOsc\noutput.dir = {tmp_path}/o\n")
    )
    assert cfg["run.shots"] == 8192
    assert cfg["model.omega"] == 1.0
    assert cfg["ansatz.depth"] == 2


def test_parse_unknown_key(tmp_path):
    path = write_config(tmp_path, "model.family = HarmonicOsc\nmodel.bogus = 3\n")
    with pytest.raises(ConfigError, match=r":2.*model\.bogus"):
        parse_config(path)


def test_parse_type_error_has_line_number(tmp_path):
    path = write_config(tmp_path, "run.shots = many\n")
    with pytest.raises(ConfigError, match=":1"):
        parse_config(path)


def test_parse_empty_file_lists_required_keys(tmp_path):
    path = write_config(tmp_path, "")
    with pytest.raises(ConfigError, match="model.family, output.dir"):
        parse_config(path)


def test_resolve_overrides():
    cfg = resolve(
        [(1, "model.family", "DoubleWell"), (2, "output.dir", "x")],
        overrides=[("run.shots", "1024")],
    )
    assert cfg["run.shots"] == 1024


def test_echo_roundtrip(tmp_path):
    cfg = parse_config(
        write_config(tmp_path, f"model.family = DoubleWell\noutput.dir = {tmp_path}/o\n")
    )
    echoed = write_config(tmp_path, cfg.echo_text(), "echo.cfg")
    assert parse_config(echoed).values == cfg.values


def test_spectrum_command(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, BASE_SPECTRUM.format(out=out))
    assert main(["spectrum", "-c", str(cfg)]) == 0
    summary = (out / "summary.txt").read_text()
    assert "ground_energy = 0.5" in summary
    assert (out / "spectrum.csv").exists()
    assert (out / "convergence.csv").exists()
    assert (out / "config.txt").exists()


def test_spectrum_anharmonic_value(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(
        tmp_path,
        f"model.family = AnharmonicOsc\nmodel.qubits_per_mode = 5\noutput.dir = {out}\n",
    )
    assert main(["spectrum", "-c", str(cfg)]) == 0
    ground = float((out / "summary.txt").read_text().split("ground_energy = ")[1].split()[0])
    assert abs(ground - 0.543116) < 1e-3


def test_spectrum_closed_free_near_zero(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(
        tmp_path,
        f"model.family = ClosedFree\nmodel.qubits_per_mode = 2\noutput.dir = {out}\n",
    )
    assert main(["spectrum", "-c", str(cfg)]) == 0
    near = float(
        (out / "summary.txt").read_text().split("nearest_zero_eigenvalue = ")[1].split()[0]
    )
    assert abs(near) < 1e-9


def test_vqe_command_outputs_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cfg1 = write_config(tmp_path, FAST_VQE.format(out=out1), "a.cfg")
    cfg2 = write_config(tmp_path, FAST_VQE.format(out=out2), "b.cfg")
    assert main(["vqe", "-c", str(cfg1)]) == 0
    assert main(["vqe", "-c", str(cfg2)]) == 0
    for name in ["trajectory.csv", "probabilities.csv", "vqe_density.csv", "exact_density.csv"]:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    rerun = tmp_path / "a"
    assert main(["vqe", "-c", str(cfg1)]) == 0
    assert (rerun / "trajectory.csv").exists()


def test_constraint_rejects_one_mode(tmp_path):
    cfg = write_config(
        tmp_path, f"model.family = DoubleWell\noutput.dir = {tmp_path}/o\n"
    )
    assert main(["constraint", "-c", str(cfg)]) == 2


def test_constraint_command_runs(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(
        tmp_path,
        "model.family = ClosedFree\nmodel.qubits_per_mode = 1\nansatz.depth = 1\n"
        "spsa.iterations = 10\nspsa.calibration_samples = 2\nrun.repetitions = 3\n"
        f"grid.points = 41\noutput.dir = {out}\n",
    )
    assert main(["constraint", "-c", str(cfg)]) == 0
    result = (out / "result.txt").read_text()
    assert "h2_mean" in result
    assert (out / "density_2d.csv").exists()
    assert (out / "reference_density.csv").exists()


def test_reference_density_is_product_gaussian(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(
        tmp_path,
        "model.family = ClosedFree\nmodel.qubits_per_mode = 1\nansatz.depth = 1\n"
        "spsa.iterations = 5\nspsa.calibration_samples = 2\nrun.repetitions = 3\n"
        f"grid.extent = 4\ngrid.points = 33\noutput.dir = {out}\n",
    )
    assert main(["constraint", "-c", str(cfg)]) == 0
    rows = np.loadtxt(out / "reference_density.csv", delimiter=",", skiprows=1)
    expected = np.exp(-rows[:, 0] ** 2 - rows[:, 1] ** 2) / np.pi
    assert np.max(np.abs(rows[:, 2] - expected)) < 1e-6


def test_cli_config_error_exit_code(tmp_path):
    cfg = write_config(tmp_path, "model.family = HarmonicOsc\nmodel.bogus = 1\n")
    assert main(["spectrum", "-c", str(cfg)]) == 2


def test_cli_unknown_family_exit_code(tmp_path):
    cfg = write_config(tmp_path, f"model.family = Nope\noutput.dir = {tmp_path}/o\n")
    assert main(["spectrum", "-c", str(cfg)]) == 2


def test_cli_set_override(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, BASE_SPECTRUM.format(out=tmp_path / "ignored"))
    assert main(["spectrum", "-c", str(cfg), "--set", f"output.dir={out}"]) == 0
    assert (out / "summary.txt").exists()


def test_env_seed_override(tmp_path, monkeypatch):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cfg1 = write_config(tmp_path, FAST_VQE.format(out=out1), "a.cfg")
    cfg2 = write_config(tmp_path, FAST_VQE.format(out=out2), "b.cfg")
    assert main(["vqe", "-c", str(cfg1)]) == 0
    monkeypatch.setenv("MSSQ_SEED", "99")
    assert main(["vqe", "-c", str(cfg2)]) == 0
    assert (out1 / "trajectory.csv").read_bytes() != (out2 / "trajectory.csv").read_bytes()


def test_noise_scan_small(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(
        tmp_path,
        "model.family = AnharmonicOsc\nmodel.qubits_per_mode = 2\nansatz.depth = 1\n"
        "noise.shots_grid = 256,512,1024,2048\nnoise.repetitions = 30\n"
        f"output.dir = {out}\n",
    )
    assert main(["noise-scan", "-c", str(cfg)]) == 0
    report = (out / "noise_report.txt").read_text()
    beta = float(report.split("fit_exponent = ")[1].split()[0])
    assert 0.3 < beta < 0.7  # coarse grid; the tight bound is in acceptance
    assert (out / "noise.csv").exists()


def test_noise_scan_requires_four_points(tmp_path):
    cfg = write_config(
        tmp_path,
        "model.family = AnharmonicOsc\nnoise.shots_grid = 256,512\n"
        f"output.dir = {tmp_path}/o\n",
    )
    assert main(["noise-scan", "-c", str(cfg)]) == 2


def test_noise_scan_coefficient_linearity():
    # doubling every observable coefficient doubles the fitted amplitude
    from mssq.circuits import AnsatzShape, build_ansatz
    from mssq.oscillator import Family, ModelSpec, build_model
    from mssq.pauli import PauliSum, decompose
    from mssq.vqe import estimate_error

    psum = decompose(build_model(ModelSpec(Family.ANHARMONIC_OSC, 2)).entries)
    doubled = PauliSum(2, tuple((2 * c, s) for c, s in psum.terms))
    shape = AnsatzShape(2, 1)
    params = np.random.default_rng(0).uniform(-np.pi, np.pi, shape.parameter_count)
    circuit = build_ansatz(shape, params)
    grid = [256, 512, 1024, 2048, 4096]

    def fit(observable):
        stds = [
            estimate_error(circuit, observable, shots, 200, seed=7 * shots)[1]
            for shots in grid
        ]
        slope, intercept = np.polyfit(np.log(grid), np.log(stds), 1)
        return np.exp(intercept), -slope

    a1, beta1 = fit(psum)
    a2, beta2 = fit(doubled)
    assert a2 / a1 == pytest.approx(2.0, rel=0.1)
    assert beta2 == pytest.approx(beta1, abs=0.02)
