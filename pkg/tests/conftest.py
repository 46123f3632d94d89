import os
from pathlib import Path

import numpy as np
import pytest

from cspnn.data_io import load_normalized, read_manifest

REPO = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.environ.get("CSPNN_DATA_DIR", REPO / "data"))


def dataset_or_skip(name):
    """Normalized (train, test) for a manifest dataset, skipping when absent."""
    spec = read_manifest(data_dir=DATA_DIR)[name]
    if not (spec.train.exists() and spec.test.exists()):
        pytest.skip(f"{name} not present under {DATA_DIR} (run scripts/fetch_datasets.py)")
    train, test, _ = load_normalized(spec)
    return train, test


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def data_dir():
    return DATA_DIR


def pytest_terminal_summary(terminalreporter):
    import acceptance_log
    if not acceptance_log.results:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.lines():
        terminalreporter.write_line(line)
