import os

import numpy as np
import pytest

from hillzone import exponential, fourier_potential, mathieu, sample_function, sawtooth

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record():
    """Print and keep one pass/fail line per acceptance criterion."""
    def _record(label, ok, detail):
        line = f"{label}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok
    return _record


@pytest.fixture
def free():
    return fourier_potential({})


@pytest.fixture
def mat():
    return mathieu()


@pytest.fixture
def saw():
    return sawtooth()


@pytest.fixture
def expo():
    return exponential()


@pytest.fixture
def sampled_mat():
    return sample_function(lambda x: 2 * np.cos(2 * np.pi * x), 256)


@pytest.fixture
def potential_dir(tmp_path):
    """A directory with a few valid potential files."""
    (tmp_path / "mathieu.yaml").write_text(
        "representation: fourier\nfourier:\n  - [1, 1.0, 0.0]\n  - [-1, 1.0, 0.0]\n"
        "smoothness_s: 2\n")
    (tmp_path / "saw.yaml").write_text(
        "representation: piecewise\npieces:\n  - interval: [0.0, 1.0]\n"
        "    poly_re: [0.0]\n    poly_im: [0.5, -1.0]\n"
        "jumps:\n  - {location: 0.0, component: im, order: 0, size: 1.0}\n")
    x = np.arange(64) / 64
    rows = ["x,re,im"] + [f"{float(a)!r},{float(2 * np.cos(2 * np.pi * a))!r},0.0" for a in x]
    (tmp_path / "grid.csv").write_text("\n".join(rows) + "\n")
    (tmp_path / "sampled.yaml").write_text("representation: sampled\nsamples: grid.csv\n")
    return tmp_path


def pytest_configure(config):
    os.environ.setdefault("HILLZONE_THREADS", "1")
