import numpy as np
import pytest

from cspnn.data_io import (DatasetSpec, NormalizationParams, XorShift64Star, apply_normalizer,
                           cil_group_sizes, fit_normalizer, load_csv, load_idx,
                           read_manifest, seeded_class_permutation, split_by_classes,
                           splitmix64, write_idx)
from cspnn.dataset import LabeledDataset
from cspnn.exceptions import ConfigError, ContractViolation, DataParseError


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


# -- CSV -----------------------------------------------------------------

def test_csv_two_rows(tmp_path):
    d = load_csv(write(tmp_path, "0.5,1.0,A\n-0.5,0.0,B\n"))
    assert len(d) == 2 and d.dimension == 2
    assert d.y.tolist() == ["A", "B"]
    assert d.X.tolist() == [[0.5, 1.0], [-0.5, 0.0]]


def test_csv_integer_labels_and_first_column(tmp_path):
    d = load_csv(write(tmp_path, "3,0.1,0.2\n7,0.3,0.4\n"), label_position="first")
    assert d.y.tolist() == [3, 7]
    assert d.X.tolist() == [[0.1, 0.2], [0.3, 0.4]]


def test_csv_header_is_skipped(tmp_path):
    d = load_csv(write(tmp_path, "f1,f2,class\n1,2,x\n"))
    assert len(d) == 1


def test_csv_blank_lines_ignored(tmp_path):
    assert len(load_csv(write(tmp_path, "1,2,a\n\n3,4,b\n"))) == 2


def test_csv_ragged_row_reports_line(tmp_path):
    with pytest.raises(DataParseError) as err:
        load_csv(write(tmp_path, "1,2,a\n3,4,b\n5,b\n"))
    assert err.value.line == 3
    assert ":3:" in str(err.value)


def test_csv_non_numeric_feature(tmp_path):
    with pytest.raises(DataParseError) as err:
        load_csv(write(tmp_path, "1,2,a\n3,oops,b\n"))
    assert err.value.line == 2
    assert "oops" in str(err.value)


def test_csv_missing_file(tmp_path):
    with pytest.raises(DataParseError):
        load_csv(tmp_path / "nope.csv")


def test_csv_empty_file(tmp_path):
    with pytest.raises(DataParseError):
        load_csv(write(tmp_path, ""))


# -- IDX -----------------------------------------------------------------

def test_idx_round_trip(tmp_path):
    images = np.arange(2 * 3 * 4, dtype=np.uint8).reshape(2, 3, 4)
    write_idx(images, [5, 9], tmp_path / "img", tmp_path / "lab")
    d = load_idx(tmp_path / "img", tmp_path / "lab")
    assert d.dimension == 12
    assert d.y.tolist() == [5, 9]
    assert d.X[1].tolist() == list(range(12, 24))


def test_idx_header_is_big_endian(tmp_path):
    write_idx(np.zeros((1, 2, 2), np.uint8), [1], tmp_path / "img", tmp_path / "lab")
    raw = (tmp_path / "img").read_bytes()
    assert raw[:16] == bytes.fromhex("00000803" "00000001" "00000002" "00000002")


def test_idx_bad_magic(tmp_path):
    write_idx(np.zeros((1, 2, 2), np.uint8), [1], tmp_path / "img", tmp_path / "lab")
    with pytest.raises(DataParseError, match="magic"):
        load_idx(tmp_path / "lab", tmp_path / "lab")


def test_idx_truncated(tmp_path):
    write_idx(np.zeros((2, 2, 2), np.uint8), [1, 2], tmp_path / "img", tmp_path / "lab")
    p = tmp_path / "img"
    p.write_bytes(p.read_bytes()[:-1])
    with pytest.raises(DataParseError):
        load_idx(p, tmp_path / "lab")


def test_idx_count_mismatch(tmp_path):
    write_idx(np.zeros((2, 2, 2), np.uint8), [1], tmp_path / "img", tmp_path / "lab")
    with pytest.raises(DataParseError):
        load_idx(tmp_path / "img", tmp_path / "lab")


# -- normalization ---------------------------------------------------------

def test_normalizer_maps_onto_unit_range():
    train = LabeledDataset([[0.0, 5.0, 2.0], [10.0, 5.0, 4.0]], ["a", "b"])
    p = fit_normalizer(train)
    out = apply_normalizer(p, train).X
    assert out.tolist() == [[-1.0, 0.0, -1.0], [1.0, 0.0, 1.0]]


def test_normalizer_does_not_clamp_test_values():
    p = NormalizationParams(np.array([0.0]), np.array([10.0]))
    assert p.transform([[20.0], [-10.0], [5.0]]).ravel().tolist() == [3.0, -3.0, 0.0]


def test_normalizer_rejects_inverted_bounds():
    with pytest.raises(ContractViolation):
        NormalizationParams(np.array([1.0]), np.array([0.0]))


# -- class grouping ----------------------------------------------------------

def test_split_by_classes_keeps_order():
    d = LabeledDataset([[0.0], [1.0], [2.0], [3.0]], ["a", "b", "a", "c"])
    ab, c = split_by_classes(d, [["b", "a"], ["c"]])
    assert ab.X.ravel().tolist() == [0.0, 1.0, 2.0]
    assert c.y.tolist() == ["c"]


def test_split_by_classes_overlap():
    d = LabeledDataset([[0.0], [1.0]], ["a", "b"])
    with pytest.raises(ContractViolation):
        split_by_classes(d, [["a"], ["a", "b"]])


@pytest.mark.parametrize("n, task, sizes", [
    (10, 1, [2, 1, 1, 1, 1, 1, 1, 1, 1]),
    (10, 2, [2, 2, 2, 2, 2]),
    (10, 3, [3, 3, 3, 1]),
    (10, 4, [4, 4, 2]),
    (7, 4, [4, 3]),
    (26, 3, [3] * 8 + [2]),
])
def test_cil_group_sizes(n, task, sizes):
    assert cil_group_sizes(n, task) == sizes
    assert sum(sizes) == n


def test_cil_group_sizes_bad_task():
    with pytest.raises(ConfigError):
        cil_group_sizes(10, 0)


# -- seeded permutations ---------------------------------------------------------

def test_splitmix64_reference_value():
    # published first output of SplitMix64 seeded with 0
    assert splitmix64(0)[1] == 0xE220A8397B1DCDAF


def test_xorshift_reproducible():
    a, b = XorShift64Star(42), XorShift64Star(42)
    assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]
    assert XorShift64Star(1).next_u64() != XorShift64Star(2).next_u64()


def test_below_in_range():
    g = XorShift64Star(3)
    draws = [g.below(7) for _ in range(2000)]
    assert set(draws) == set(range(7))


def test_permutation_is_a_permutation():
    labels = list("abcdefghij")
    perm = seeded_class_permutation(labels, 5)
    assert sorted(perm) == labels
    assert perm == seeded_class_permutation(labels, 5)
    assert perm != seeded_class_permutation(labels, 6)


def test_sample_distinct():
    out = XorShift64Star(9).sample(range(10), 5)
    assert len(set(out)) == 5
    with pytest.raises(ContractViolation):
        XorShift64Star(9).sample(range(3), 4)


# -- manifest ---------------------------------------------------------------------

def test_bundled_manifest_lists_nine_datasets(tmp_path):
    specs = read_manifest(data_dir=tmp_path)
    assert len(specs) == 9
    assert specs["optdigits"].n_classes == 10
    assert specs["optdigits"].n_features == 64
    assert specs["mnist"].format == "idx"
    assert specs["ionosphere"].train == tmp_path / "ionosphere.train.csv"


def test_data_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("CSPNN_DATA_DIR", str(tmp_path))
    assert read_manifest()["sat"].train.parent == tmp_path


def test_manifest_missing_key(tmp_path):
    p = write(tmp_path, "[toy]\ntrain = a.csv\n", "m.ini")
    with pytest.raises(ConfigError):
        read_manifest(p)


def test_spec_checks_feature_count(tmp_path):
    write(tmp_path, "1,2,a\n", "t.csv")
    spec = DatasetSpec("toy", tmp_path / "t.csv", tmp_path / "t.csv", 2, 3)
    with pytest.raises(DataParseError, match="features"):
        spec.load("train")


def test_spec_checks_class_count(tmp_path):
    write(tmp_path, "1,a\n2,b\n3,c\n", "t.csv")
    spec = DatasetSpec("toy", tmp_path / "t.csv", tmp_path / "t.csv", 2, 1)
    with pytest.raises(DataParseError, match="classes"):
        spec.load("test")
