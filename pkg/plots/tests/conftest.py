import numpy as np
import pytest


def _write_csv(path, header, rows, metadata=None):
    lines = [f"# {k}={v}" for k, v in (metadata or {}).items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v)
                              for v in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


@pytest.fixture
def sweep_csv(tmp_path):
    """Synthetic coupling sweep shaped like the real output: dip then peak."""
    lams = np.linspace(0.3, 1.2, 31)
    header = ["lambda", "E0", "E1", "E2", "E3", "E4", "g2",
              "one_photon_norm", "two_photon_norm",
              "parity0", "parity1", "parity2", "parity3", "parity4", "error"]
    rows = []
    for lam in lams:
        g2 = 2.0 + 300.0 * np.exp(-((lam - 0.85) / 0.03) ** 2) \
            - 1.99 * np.exp(-((lam - 0.65) / 0.05) ** 2)
        energies = [float(-(0.5 + lam ** 2) + 0.9 * k) for k in range(5)]
        rows.append([float(lam)] + energies + [float(g2), 1.0, 1.0,
                                               1, -1, -1, 1, 1, ""])
    return _write_csv(tmp_path / "sweep.csv", header, rows,
                      {"version": "0.1.0", "config_sha256": "abc"})


@pytest.fixture
def surface_csv(tmp_path):
    header = ["lambda", "t", "g2", "one_photon", "two_photon", "error"]
    rows = []
    for lam in np.linspace(0.3, 1.0, 8):
        for t in np.linspace(0.05, 0.5, 6):
            g2 = 2.0 + 50.0 * t * np.exp(-((lam - 0.8) / 0.1) ** 2)
            rows.append([float(lam), float(t), float(g2), 1e-6, 1e-12, ""])
    return _write_csv(tmp_path / "surface.csv", header, rows)


@pytest.fixture
def bias_csv(tmp_path):
    header = ["t_q", "t_c", "lambda", "g2", "one_photon", "two_photon",
              "error"]
    rows = []
    for tq in np.linspace(0.05, 0.5, 8):
        for tc in np.linspace(0.05, 0.5, 8):
            rows.append([float(tq), float(tc), 0.4,
                         float(2.0 + 3.0 * tc - tq), 1e-6, 1e-12, ""])
    return _write_csv(tmp_path / "bias.csv", header, rows)


@pytest.fixture
def write_csv():
    return _write_csv
