import numpy as np
import pytest

from cspnn import protocols
from cspnn.dataset import LabeledDataset
from cspnn.exceptions import ConfigError
from cspnn.protocols import ProtocolConfig


@pytest.fixture
def toy(rng):
    n_classes = 6
    centers = rng.uniform(-1, 1, size=(n_classes, 3))
    y = np.tile(np.arange(n_classes), 20)
    X = centers[y] + rng.normal(scale=0.05, size=(len(y), 3))
    return LabeledDataset(X[:90], y[:90]), LabeledDataset(X[90:], y[90:])


def test_config_validation():
    with pytest.raises(ConfigError):
        ProtocolConfig("d", "cil", task=5).validate()
    with pytest.raises(ConfigError):
        ProtocolConfig("d", "cuil", task=1).validate()
    with pytest.raises(ConfigError):
        ProtocolConfig("d", "nope").validate()
    with pytest.raises(ConfigError):
        ProtocolConfig("d", "standard", runs=0).validate()


def test_standard_records(toy):
    recs = protocols.run(ProtocolConfig("toy", "standard"), *toy)
    assert [r.stage for r in recs] == ["cs-pnn", "pnn"]
    assert recs[1].hidden_count == 90


def test_cil_stages_and_average(toy):
    recs = protocols.run(ProtocolConfig("toy", "cil", task=4, runs=3, seed=11), *toy)
    per_seed = [r for r in recs if r.seed != "avg"]
    assert [r.seed for r in per_seed] == [11, 11, 12, 12, 13, 13]
    assert [r.n_classes for r in per_seed[:2]] == [4, 6]
    avg = protocols.averaged(recs)
    assert [r.stage for r in avg] == ["1", "2"]
    assert avg[-1].accuracy == pytest.approx(np.mean([r.accuracy for r in per_seed[1::2]]))


def test_cil_needs_more_than_five_classes(toy):
    train, test = toy
    small = train.only([0, 1, 2, 3, 4])
    with pytest.raises(ConfigError):
        protocols.run(ProtocolConfig("toy", "cil", task=1, runs=1), small, test)


def test_cuil_stage_names_and_counts(toy):
    recs = protocols.run(ProtocolConfig("toy", "cuil", task=2, runs=2), *toy)
    avg = protocols.averaged(recs)
    assert [r.stage for r in avg] == ["Ini.", "1U", "1C", "2U", "2C", "3U", "3C", "4U", "4C"]
    assert all(r.n_classes == 3 for r in avg if r.stage.endswith("U"))
    assert all(r.n_classes == 6 for r in avg if r.stage.endswith("C"))


def test_parallel_matches_serial(toy):
    cfg = ProtocolConfig("toy", "cuil", task=3, runs=2, iterations=2)
    serial = protocols.run(cfg, *toy)
    parallel = protocols.run(ProtocolConfig("toy", "cuil", task=3, runs=2, iterations=2,
                                            n_jobs=2), *toy)
    assert protocols.to_csv(serial) == protocols.to_csv(parallel)


def test_csv_and_json_output(toy):
    recs = protocols.run(ProtocolConfig("toy", "cil", task=2, runs=1), *toy)
    text = protocols.to_csv(recs)
    assert text.splitlines()[0] == ",".join(protocols.CSV_COLUMNS)
    assert len(text.splitlines()) == 1 + len(recs)
    assert '"stage": "1"' in protocols.to_json(recs)
    assert "task2" in protocols.summary_table(recs)
