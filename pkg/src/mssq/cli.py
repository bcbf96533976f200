"""Command-line harness: spectrum | vqe | constraint | noise-scan.

Every command reads one config file, echoes the fully-resolved config into the
output directory, and writes plot-ready CSV.  All randomness flows from the
single run.seed (overridable via MSSQ_SEED), so a rerun with the same config
reproduces every output byte for byte.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import spectrum as spec_mod
from .circuits import AnsatzShape, build_ansatz
from .config import ConfigError, ExperimentConfig, parse_config
from .oscillator import Family, ModelSpec, ONE_MODE_FAMILIES, build_model
from .pauli import decompose
from .vqe import SpsaConfig, estimate_error, vqe_run


@dataclass(frozen=True)
class ShotNoiseReport:
    shots_grid: tuple[int, ...]
    stddevs: tuple[float, ...]
    fit_a: float
    fit_exponent: float
    residual: float


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def _model_spec(cfg: ExperimentConfig) -> ModelSpec:
    try:
        family = Family(cfg["model.family"])
    except ValueError as exc:
        raise ConfigError(f"unknown model.family {cfg['model.family']!r}") from exc
    return ModelSpec(
        family=family,
        qubits_per_mode=cfg["model.qubits_per_mode"],
        lambda_abs=cfg["model.lambda_abs"],
        quartic_c=cfg["model.quartic_c"],
        omega=cfg["model.omega"],
    )


def _spsa_config(cfg: ExperimentConfig, seed: int) -> SpsaConfig:
    return SpsaConfig(
        iterations=cfg["spsa.iterations"],
        a=cfg["spsa.a"],
        c=cfg["spsa.c"],
        stability=cfg["spsa.stability"],
        alpha=cfg["spsa.alpha"],
        gamma=cfg["spsa.gamma"],
        calibration_samples=cfg["spsa.calibration_samples"],
        seed=seed,
    )


def _prepare_outdir(cfg: ExperimentConfig) -> Path:
    outdir = Path(cfg["output.dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.txt").write_text(cfg.echo_text())
    return outdir


def _seed(cfg: ExperimentConfig) -> int:
    env = os.environ.get("MSSQ_SEED")
    return int(env) if env else cfg["run.seed"]


def _grid(cfg: ExperimentConfig) -> np.ndarray:
    return spec_mod.default_grid(cfg["grid.extent"], cfg["grid.points"])


def _density_rows(grid_result: spec_mod.WavefunctionGrid):
    if len(grid_result.axes) == 1:
        (xs,) = grid_result.axes
        return [(float(x), float(d)) for x, d in zip(xs, grid_result.density)]
    xa, xc = grid_result.axes
    return [
        (float(xa[i]), float(xc[j]), float(grid_result.density[i, j]))
        for i in range(len(xa))
        for j in range(len(xc))
    ]


def cmd_spectrum(cfg: ExperimentConfig) -> Path:
    outdir = _prepare_outdir(cfg)
    model = _model_spec(cfg)
    result = spec_mod.eigendecompose(build_model(model))
    _write_csv(
        outdir / "spectrum.csv",
        "index,eigenvalue",
        [(i, float(v)) for i, v in enumerate(result.eigenvalues)],
    )
    dims = [d for d in cfg["spectrum.scan_dims"] if model.n_modes == 1 or d <= 16]
    scan = spec_mod.convergence_scan(model, dims)
    _write_csv(outdir / "convergence.csv", "dim,energy,delta", scan)
    ground = float(result.eigenvalues[0])
    near_zero = spec_mod.nearest_zero_state(result, 1)[0][0]
    (outdir / "summary.txt").write_text(
        f"family = {model.family.value}\n"
        f"dim = {model.dim}\n"
        f"ground_energy = {_fmt(ground)}\n"
        f"nearest_zero_eigenvalue = {_fmt(near_zero)}\n"
        f"max_residual = {_fmt(result.residual)}\n"
    )
    return outdir


def _write_vqe_outputs(cfg, outdir: Path, model: ModelSpec, result) -> None:
    _write_csv(
        outdir / "trajectory.csv",
        "iteration,objective," + ",".join(f"p{i}" for i in range(len(result.best_params))),
        [
            (k, float(obj), *[float(p) for p in params])
            for k, (params, obj) in enumerate(result.trajectory)
        ],
    )
    _write_csv(
        outdir / "probabilities.csv",
        "basis_index,probability",
        [(i, float(p)) for i, p in enumerate(result.final_probabilities)],
    )
    lines = [
        f"family = {model.family.value}",
        f"objective = {result.objective_kind}",
        f"seed = {result.seed}",
        f"energy = {_fmt(result.energy)}",
        f"stderr = {_fmt(result.stderr)}",
        f"h_mean = {_fmt(result.h_mean)}",
        f"h_stderr = {_fmt(result.h_stderr)}",
    ]
    if result.h2_mean is not None:
        lines.append(f"h2_mean = {_fmt(result.h2_mean)}")
        lines.append(f"h2_stderr = {_fmt(result.h2_stderr)}")
    lines.append("config:")
    lines.extend("  " + ln for ln in cfg.echo_text().splitlines())
    (outdir / "result.txt").write_text("\n".join(lines) + "\n")


def cmd_vqe(cfg: ExperimentConfig) -> Path:
    outdir = _prepare_outdir(cfg)
    model = _model_spec(cfg)
    seed = _seed(cfg)
    shape = AnsatzShape(model.total_qubits, cfg["ansatz.depth"])
    result = vqe_run(
        model,
        shape,
        objective_kind="energy",
        shots=cfg["run.shots"],
        spsa=_spsa_config(cfg, seed),
        repetitions=cfg["run.repetitions"],
        restarts=cfg["spsa.restarts"],
        refinements=cfg["spsa.refinements"],
    )
    _write_vqe_outputs(cfg, outdir, model, result)
    xs = _grid(cfg)
    axes = (xs,) * model.n_modes
    from .circuits import run as run_circuit

    vqe_state = run_circuit(result.circuit)
    vqe_grid = spec_mod.reconstruct_wavefunction(vqe_state, axes, model.omega)
    _, exact_vec, _ = spec_mod.ground_or_nearest_zero(model)
    exact_grid = spec_mod.reconstruct_wavefunction(exact_vec, axes, model.omega)
    header = "x,density" if model.n_modes == 1 else "x_a,x_chi,density"
    _write_csv(outdir / "vqe_density.csv", header, _density_rows(vqe_grid))
    _write_csv(outdir / "exact_density.csv", header, _density_rows(exact_grid))
    return outdir


def cmd_constraint(cfg: ExperimentConfig) -> Path:
    outdir = _prepare_outdir(cfg)
    model = _model_spec(cfg)
    if model.family in ONE_MODE_FAMILIES:
        raise ConfigError("constraint command needs a two-mode family")
    seed = _seed(cfg)
    shape = AnsatzShape(model.total_qubits, cfg["ansatz.depth"])
    result = vqe_run(
        model,
        shape,
        objective_kind="constraint",
        shots=cfg["run.shots"],
        spsa=_spsa_config(cfg, seed),
        repetitions=cfg["run.repetitions"],
        restarts=cfg["spsa.restarts"],
        refinements=cfg["spsa.refinements"],
    )
    _write_vqe_outputs(cfg, outdir, model, result)
    xs = _grid(cfg)
    axes = (xs, xs)
    from .circuits import run as run_circuit

    state_grid = spec_mod.reconstruct_wavefunction(run_circuit(result.circuit), axes, model.omega)
    _write_csv(outdir / "density_2d.csv", "x_a,x_chi,density", _density_rows(state_grid))
    reference = np.zeros(model.dim)
    reference[0] = 1.0
    ref_grid = spec_mod.reconstruct_wavefunction(reference, axes, model.omega)
    _write_csv(outdir / "reference_density.csv", "x_a,x_chi,density", _density_rows(ref_grid))
    return outdir


def noise_scan(cfg: ExperimentConfig) -> ShotNoiseReport:
    """Measure stddev-vs-shots for a fixed seeded circuit and fit A / x^beta."""
    grid = cfg["noise.shots_grid"]
    if len(grid) < 4:
        raise ConfigError("noise.shots_grid needs at least 4 points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("noise.shots_grid must be strictly increasing")
    repetitions = cfg["noise.repetitions"]
    model = _model_spec(cfg)
    observable = decompose(build_model(model).entries)
    shape = AnsatzShape(model.total_qubits, cfg["ansatz.depth"])
    root = np.random.SeedSequence(_seed(cfg))
    ss_params, ss_reps = root.spawn(2)
    params = np.random.default_rng(ss_params).uniform(-np.pi, np.pi, shape.parameter_count)
    circuit = build_ansatz(shape, params)
    stddevs = []
    for shots, child in zip(grid, ss_reps.spawn(len(grid))):
        _, std = estimate_error(circuit, observable, shots, repetitions, child)
        stddevs.append(std)
    log_x = np.log(np.asarray(grid, dtype=float))
    log_y = np.log(np.asarray(stddevs))
    slope, intercept = np.polyfit(log_x, log_y, 1)
    resid = np.sqrt(np.mean((log_y - (slope * log_x + intercept)) ** 2))
    return ShotNoiseReport(
        shots_grid=tuple(int(s) for s in grid),
        stddevs=tuple(float(s) for s in stddevs),
        fit_a=float(np.exp(intercept)),
        fit_exponent=float(-slope),
        residual=float(resid),
    )


def cmd_noise_scan(cfg: ExperimentConfig) -> Path:
    outdir = _prepare_outdir(cfg)
    report = noise_scan(cfg)
    _write_csv(
        outdir / "noise.csv",
        "shots,stddev",
        list(zip(report.shots_grid, report.stddevs)),
    )
    (outdir / "noise_report.txt").write_text(
        f"fit_A = {_fmt(report.fit_a)}\n"
        f"fit_exponent = {_fmt(report.fit_exponent)}\n"
        f"loglog_rms_residual = {_fmt(report.residual)}\n"
    )
    return outdir


COMMANDS = {
    "spectrum": cmd_spectrum,
    "vqe": cmd_vqe,
    "constraint": cmd_constraint,
    "noise-scan": cmd_noise_scan,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mssq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("-c", "--config", required=True)
        cmd.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="section.key=value",
            help="override a config key",
        )
    args = parser.parse_args(argv)
    try:
        overrides = []
        for item in args.overrides:
            if "=" not in item:
                raise ConfigError(f"--set expects section.key=value, got {item!r}")
            key, _, value = item.partition("=")
            overrides.append((key.strip(), value.strip()))
        cfg = parse_config(args.config, overrides)
        COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
