"""Strict line-oriented experiment configuration.

Format: one "section.key = value" assignment per line; blank lines and lines
starting with '#' are ignored.  Unknown keys, bad types, and missing required
keys are hard errors carrying the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass


class ConfigError(ValueError):
    """Any configuration problem; maps to CLI exit code 2."""


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(","))


def _refinement_list(text: str) -> tuple[tuple[int, float, int], ...]:
    """Comma-separated iterations:c:shots triples, e.g. "1000:0.04:65536"."""
    if not text.strip():
        return ()
    stages = []
    for part in text.split(","):
        iters, c, shots = part.split(":")
        stages.append((int(iters), float(c), int(shots)))
    return tuple(stages)


# key -> (converter, default); default None with required=True keys listed below
SCHEMA = {
    "model.family": (str, None),
    "model.qubits_per_mode": (int, 2),
    "model.lambda_abs": (float, None),
    "model.quartic_c": (float, None),
    "model.omega": (float, 1.0),
    "ansatz.depth": (int, 2),
    "spsa.iterations": (int, 300),
    "spsa.a": (float, None),
    "spsa.c": (float, 0.1),
    "spsa.stability": (float, None),
    "spsa.alpha": (float, 0.602),
    "spsa.gamma": (float, 0.101),
    "spsa.calibration_samples": (int, 25),
    "spsa.restarts": (int, 1),
    "spsa.refinements": (_refinement_list, ()),
    "run.shots": (int, 8192),
    "run.repetitions": (int, 30),
    "run.seed": (int, 0),
    "noise.shots_grid": (_int_list, (256, 512, 1024, 2048, 4096, 8192, 16384)),
    "noise.repetitions": (int, 100),
    "spectrum.scan_dims": (_int_list, (4, 8, 16, 32, 64, 128, 256)),
    "grid.extent": (float, 8.0),
    "grid.points": (int, 321),
    "output.dir": (str, None),
}

REQUIRED_KEYS = ("model.family", "output.dir")


@dataclass(frozen=True)
class ExperimentConfig:
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    def echo_text(self) -> str:
        """The fully-resolved config in its own file format."""
        lines = []
        for key in sorted(self.values):
            value = self.values[key]
            if value is None:
                continue
            if isinstance(value, tuple):
                if value and isinstance(value[0], tuple):
                    value = ",".join(f"{i}:{c:g}:{s}" for i, c, s in value)
                else:
                    value = ",".join(str(v) for v in value)
            elif isinstance(value, float):
                value = f"{value:.17g}"
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def _parse_assignments(lines, source: str):
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'section.key = value', got {line!r}")
        key, _, value = line.partition("=")
        yield lineno, key.strip(), value.strip()


def resolve(assignments, source: str = "<config>", overrides=()) -> ExperimentConfig:
    """Apply schema defaults, typed parsing, and required-key checks."""
    values = {key: default for key, (_, default) in SCHEMA.items()}
    seen = set()
    items = list(assignments) + [(0, k, v) for k, v in overrides]
    for lineno, key, raw_value in items:
        where = f"{source}:{lineno}" if lineno else f"override --set {key}"
        if key not in SCHEMA:
            raise ConfigError(f"{where}: unknown key {key!r}")
        convert, _ = SCHEMA[key]
        try:
            values[key] = convert(raw_value)
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key}: {exc}") from exc
        seen.add(key)
    missing = [key for key in REQUIRED_KEYS if values[key] is None]
    if missing:
        raise ConfigError(f"{source}: missing required keys: {', '.join(missing)}")
    return ExperimentConfig(values)


def parse_config(path, overrides=()) -> ExperimentConfig:
    """Parse a config file; overrides are (key, value) string pairs."""
    with open(path) as fh:
        lines = fh.readlines()
    return resolve(_parse_assignments(lines, str(path)), str(path), overrides)
