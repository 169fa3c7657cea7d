"""Reader for the dicke-g2 CSV interchange format.

The format is plain CSV with optional `# key=value` metadata comment lines
before the header. Floats are stored in shortest round-trip form, so parsing
reproduces them bit-exactly.
"""

import csv
import io
from pathlib import Path


class CsvFormatError(ValueError):
    pass


def _coerce(cell: str):
    try:
        return int(cell)
    except ValueError:
        try:
            return float(cell)
        except ValueError:
            return cell


def read_csv(path) -> tuple[list[str], list[dict], dict]:
    """Return (header, rows, metadata) for one interchange CSV file."""
    path = Path(path)
    metadata = {}
    data_lines = []
    for raw in path.read_text().splitlines():
        if not raw:
            continue
        if raw.startswith("#"):
            body = raw.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = value.strip()
            continue
        data_lines.append(raw)
    if not data_lines:
        raise CsvFormatError(f"{path}: no header line found")
    parsed = list(csv.reader(io.StringIO("\n".join(data_lines))))
    header = parsed[0]
    rows = [{key: _coerce(cell) for key, cell in zip(header, cells)}
            for cells in parsed[1:]]
    return header, rows, metadata
