"""Deterministic CSV emission: `#` metadata comments, header, LF endings.

Floats are written with repr (shortest round-trip decimal), so a parse of the
emitted file reproduces the values bit-exactly.
"""

import csv
import hashlib
import io
from pathlib import Path

_NEEDS_QUOTING = set(',"\n\r')


def _format_value(value) -> str:
    if isinstance(value, str):
        if any(ch in _NEEDS_QUOTING for ch in value):
            return '"' + value.replace('"', '""') + '"'
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def emit_csv(rows: list[dict], schema: list[str], path,
             metadata: dict | None = None) -> Path:
    """Write rows in schema order; missing keys are an error, extras ignored."""
    path = Path(path)
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}={value}")
    lines.append(",".join(schema))
    for index, row in enumerate(rows):
        missing = [col for col in schema if col not in row]
        if missing:
            raise KeyError(f"row {index} is missing columns {missing}")
        lines.append(",".join(_format_value(row[col]) for col in schema))
    try:
        path.write_text("\n".join(lines) + "\n", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def read_csv(path) -> tuple[list[str], list[dict]]:
    """Round-trip reader: skips `#` comments, floats parsed where possible."""
    header: list[str] | None = None
    rows: list[dict] = []
    lines = [raw for raw in Path(path).read_text().splitlines()
             if raw and not raw.startswith("#")]
    for cells in csv.reader(io.StringIO("\n".join(lines))):
        if header is None:
            header = cells
            continue
        row = {}
        for key, cell in zip(header, cells):
            try:
                row[key] = int(cell)
            except ValueError:
                try:
                    row[key] = float(cell)
                except ValueError:
                    row[key] = cell
        rows.append(row)
    if header is None:
        raise ValueError(f"{path}: no header line found")
    return header, rows


SWEEP_LAMBDA_SCHEMA = (["lambda"] + [f"E{i}" for i in range(5)]
                       + ["g2", "one_photon_norm", "two_photon_norm"]
                       + [f"parity{i}" for i in range(5)] + ["error"])

SWEEP_TEMPERATURE_SCHEMA = ["lambda", "t", "g2", "one_photon", "two_photon",
                            "error"]

BIAS_GRID_SCHEMA = ["t_q", "t_c", "lambda", "g2", "one_photon", "two_photon",
                    "error"]

SCALING_SCHEMA = ["n", "lambda_min", "g2_min", "lambda_max", "g2_max",
                  "offset_min", "offset_max", "error"]
