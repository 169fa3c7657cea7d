"""Plain-text configuration: `key = value` lines, `#` comments, [sections].

Section headers are organizational only; keys are global. Parsing is
fail-fast: every bad line and violated invariant is collected and reported in
one aggregated error before any computation starts.
"""

from dataclasses import dataclass, field, fields

from .dissipation import BathParams
from .model import DickeParams


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid configuration:\n" + "\n".join(problems))


@dataclass
class SimulationConfig:
    """Defaults are the standard benchmark parameter set (delta = omega = 1 units)."""

    n: int = 8
    delta: float = 1.0
    omega: float = 1.0
    coupling: float = 0.0
    alpha: float = 0.001
    omega_c: float = 10.0
    t_q: float = 0.05
    t_c: float = 0.05
    n_tr: int = 50
    k_levels: int | None = None
    oracle_n_f: int = 150
    lambda_c_variant: str = "sqrt"
    lambda_min: float = 0.05
    lambda_max: float = 1.2
    lambda_points: int = 60
    t_min: float = 0.05
    t_max: float = 0.5
    t_points: int = 8
    n_values: tuple[int, ...] = (4, 8, 16, 32, 64)
    workers: int = 1
    out: str = ""
    cache_dir: str = ""

    def dicke_params(self) -> DickeParams:
        return DickeParams(n_qubits=self.n, delta=self.delta,
                           omega=self.omega, coupling=self.coupling)

    def bath_params(self) -> BathParams:
        return BathParams(alpha=self.alpha, omega_c=self.omega_c,
                          t_q=self.t_q, t_c=self.t_c)


def _parse_int(text: str) -> int:
    value = int(text)
    return value


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.replace(",", " ").split())


_CONVERTERS = {
    "n": _parse_int,
    "delta": float,
    "omega": float,
    "lambda": float,
    "alpha": float,
    "omega_c": float,
    "t_q": float,
    "t_c": float,
    "n_tr": _parse_int,
    "k_levels": _parse_int,
    "oracle_n_f": _parse_int,
    "lambda_c_variant": str,
    "lambda_min": float,
    "lambda_max": float,
    "lambda_points": _parse_int,
    "t_min": float,
    "t_max": float,
    "t_points": _parse_int,
    "n_values": _parse_int_list,
    "workers": _parse_int,
    "out": str,
    "cache_dir": str,
}

# config key -> dataclass field, where they differ
_FIELD_NAMES = {"lambda": "coupling"}


def parse_config(text: str) -> SimulationConfig:
    """Parse and validate; raises ConfigError listing every problem at once."""
    config = SimulationConfig()
    problems: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            continue  # sections group keys visually, nothing more
        if "=" not in line:
            problems.append(f"line {lineno}: expected `key = value`, got {raw.strip()!r}")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        converter = _CONVERTERS.get(key)
        if converter is None:
            problems.append(f"line {lineno}: unknown key {key!r}")
            continue
        try:
            setattr(config, _FIELD_NAMES.get(key, key), converter(value))
        except ValueError:
            problems.append(f"line {lineno}: malformed value {value!r} for {key!r}")

    problems.extend(validate(config))
    if problems:
        raise ConfigError(problems)
    return config


def validate(config: SimulationConfig) -> list[str]:
    problems = []
    try:
        config.dicke_params()
    except ValueError as exc:
        problems.append(f"model parameters: {exc}")
    try:
        config.bath_params()
    except ValueError as exc:
        problems.append(f"bath parameters: {exc}")
    if config.n_tr < 1:
        problems.append(f"n_tr must be >= 1, got {config.n_tr}")
    if config.k_levels is not None and config.k_levels < 2:
        problems.append(f"k_levels must be >= 2, got {config.k_levels}")
    if config.oracle_n_f < 10:
        problems.append(f"oracle_n_f must be >= 10, got {config.oracle_n_f}")
    if config.lambda_c_variant not in ("sqrt", "plain"):
        problems.append(f"lambda_c_variant must be sqrt or plain, "
                        f"got {config.lambda_c_variant!r}")
    for name, points in (("lambda_points", config.lambda_points),
                         ("t_points", config.t_points)):
        if points < 2:
            problems.append(f"{name} must be >= 2, got {points}")
    if config.lambda_min >= config.lambda_max:
        problems.append("lambda_min must be < lambda_max")
    if config.t_min >= config.t_max:
        problems.append("t_min must be < t_max")
    if config.lambda_min < 0:
        problems.append("lambda_min must be >= 0")
    if config.t_min < 0:
        problems.append("t_min must be >= 0")
    if len(config.n_values) < 1:
        problems.append("n_values must not be empty")
    if config.workers < 1:
        problems.append(f"workers must be >= 1, got {config.workers}")
    return problems
