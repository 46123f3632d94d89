"""Dataset ingestion, normalization, class grouping and seeded permutations."""
from __future__ import annotations

import configparser
import csv
import os
import struct
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .dataset import LabeledDataset
from .exceptions import ConfigError, ContractViolation, DataParseError
from .validation import as_label, check_matrix

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801

DATA_DIR_ENV = "CSPNN_DATA_DIR"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _label_column(label_position, width: int) -> int:
    if label_position in ("last", None):
        return width - 1
    if label_position == "first":
        return 0
    pos = int(label_position)
    if pos < 0:
        pos += width
    if not 0 <= pos < width:
        raise ContractViolation(f"label position {label_position} outside row of width {width}")
    return pos


def _parse_label_tokens(tokens: list[str]) -> np.ndarray:
    try:
        return np.array([int(t) for t in tokens], dtype=np.int64)
    except ValueError:
        return np.array(tokens, dtype=object)


def load_csv(path, label_position="last", name: str = "") -> LabeledDataset:
    """Read a comma-separated file with one pattern per row.

    A first row containing non-numeric feature tokens is treated as a
    header. Labels are kept verbatim: integers when every label token is an
    integer, strings otherwise.

    Raises
    ------
    DataParseError
        On an unreadable or empty file, ragged rows or non-numeric features.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [(n, [tok.strip() for tok in row])
                    for n, row in enumerate(csv.reader(fh), start=1)
                    if any(tok.strip() for tok in row)]
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise DataParseError(f"cannot read file ({exc})", path) from exc
    if not rows:
        raise DataParseError("empty file", path)

    width = len(rows[0][1])
    if width < 2:
        raise DataParseError("need at least one feature and a label per row", path, rows[0][0])
    col = _label_column(label_position, width)
    first = rows[0][1]
    if not all(_is_number(t) for i, t in enumerate(first) if i != col):
        rows = rows[1:]
        if not rows:
            raise DataParseError("file has a header but no data", path)

    features = np.empty((len(rows), width - 1))
    labels = []
    for r, (line, toks) in enumerate(rows):
        if len(toks) != width:
            raise DataParseError(f"expected {width} fields, found {len(toks)}", path, line)
        labels.append(toks[col])
        feats = toks[:col] + toks[col + 1:]
        try:
            features[r] = [float(t) for t in feats]
        except ValueError:
            bad = next(t for t in feats if not _is_number(t))
            raise DataParseError(f"non-numeric feature {bad!r}", path, line) from None
    if not np.all(np.isfinite(features)):
        raise DataParseError("non-finite feature value", path)
    return LabeledDataset(features, _parse_label_tokens(labels), name or path.stem)


# ---------------------------------------------------------------------------
# IDX (MNIST distribution format)
# ---------------------------------------------------------------------------

def _read_idx(path, magic: int, ndim: int):
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataParseError(f"cannot read file ({exc})", path) from exc
    header = 4 + 4 * ndim
    if len(raw) < header:
        raise DataParseError("truncated IDX header", path)
    found, = struct.unpack(">I", raw[:4])
    if found != magic:
        raise DataParseError(f"bad magic number 0x{found:08x}, expected 0x{magic:08x}", path)
    dims = struct.unpack(f">{ndim}I", raw[4:header])
    expected = int(np.prod(dims, dtype=np.int64))
    payload = np.frombuffer(raw, dtype=np.uint8, offset=header)
    if payload.size != expected:
        raise DataParseError(
            f"payload holds {payload.size} bytes, header promises {expected}", path)
    return payload.reshape(dims)


def load_idx(images_path, labels_path, name: str = "") -> LabeledDataset:
    """Read an IDX image/label file pair; images are flattened row-major."""
    images = _read_idx(images_path, IDX_IMAGES_MAGIC, 3)
    labels = _read_idx(labels_path, IDX_LABELS_MAGIC, 1)
    if images.shape[0] != labels.shape[0]:
        raise DataParseError(
            f"{images.shape[0]} images but {labels.shape[0]} labels", labels_path)
    X = images.reshape(images.shape[0], -1).astype(np.float64)
    return LabeledDataset(X, labels.astype(np.int64), name or Path(images_path).stem)


def write_idx(images: np.ndarray, labels, images_path, labels_path) -> None:
    """Write uint8 images ``(n, rows, cols)`` and labels as an IDX pair."""
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    Path(images_path).write_bytes(
        struct.pack(">4I", IDX_IMAGES_MAGIC, *images.shape) + images.tobytes())
    Path(labels_path).write_bytes(
        struct.pack(">2I", IDX_LABELS_MAGIC, labels.shape[0]) + labels.tobytes())


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizationParams:
    """Per-feature ``(min, max)`` fitted on a training split."""

    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.minimum, dtype=np.float64)
        hi = np.asarray(self.maximum, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ContractViolation("minimum and maximum must be 1-D arrays of equal length")
        if np.any(hi < lo):
            raise ContractViolation("maximum below minimum")
        object.__setattr__(self, "minimum", lo)
        object.__setattr__(self, "maximum", hi)

    @property
    def dimension(self) -> int:
        return self.minimum.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = check_matrix(X, self.dimension)
        span = self.maximum - self.minimum
        varying = span > 0
        out = np.zeros_like(X)
        out[:, varying] = (2.0 * (X[:, varying] - self.minimum[varying])
                           / span[varying] - 1.0)
        return out


def fit_normalizer(train: LabeledDataset) -> NormalizationParams:
    """Fit per-feature min-max bounds mapping the training range onto [-1, 1]."""
    if len(train) == 0:
        raise ContractViolation("cannot fit a normalizer on an empty dataset")
    return NormalizationParams(train.X.min(axis=0), train.X.max(axis=0))


def apply_normalizer(params: NormalizationParams, data: LabeledDataset) -> LabeledDataset:
    """Map ``data`` with training bounds; values outside are not clamped,
    constant training features map to 0."""
    if len(data) == 0:
        return data
    return data.with_X(params.transform(data.X))


# ---------------------------------------------------------------------------
# Class grouping
# ---------------------------------------------------------------------------

def split_by_classes(data: LabeledDataset, class_groups) -> list[LabeledDataset]:
    """One dataset per label group, each keeping the original sample order."""
    groups = [[as_label(v) for v in g] for g in class_groups]
    seen: set = set()
    for g in groups:
        overlap = seen.intersection(g)
        if overlap or len(set(g)) != len(g):
            raise ContractViolation(f"class groups overlap on {sorted(map(str, overlap or g))}")
        seen.update(g)
    return [data.only(g) for g in groups]


def cil_group_sizes(n_classes: int, task: int) -> list[int]:
    """Class-group sizes for an incremental task adding ``task`` classes a time.

    ``task == 1`` starts with two classes; otherwise full groups of ``task``
    classes are followed by a final group of ``n_classes % task`` (omitted
    when zero).
    """
    if task < 1:
        raise ConfigError(f"task size must be >= 1, got {task}")
    if task == 1:
        if n_classes < 2:
            return [n_classes]
        return [2] + [1] * (n_classes - 2)
    sizes = [task] * (n_classes // task)
    if n_classes % task:
        sizes.append(n_classes % task)
    return sizes


# ---------------------------------------------------------------------------
# Seeded permutations
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step; returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* generator whose state is seeded through SplitMix64.

    The exact algorithm is fixed so protocol runs are reproducible across
    platforms and library versions::

        state = splitmix64(seed)            (zero state replaced by 1)
        x ^= x >> 12; x ^= x << 25; x ^= x >> 27
        out = x * 0x2545F4914F6CDD1D  (mod 2**64)

    Bounded integers use rejection sampling (no modulo bias); shuffles are
    Fisher-Yates from the last position down.
    """

    def __init__(self, seed: int):
        _, state = splitmix64(int(seed) & _MASK64)
        self.state = state or 1

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n < 1:
            raise ContractViolation(f"bound must be positive, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: list) -> list:
        items = list(items)
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def sample(self, items, k: int) -> list:
        """``k`` distinct elements drawn uniformly without replacement."""
        items = list(items)
        if not 0 <= k <= len(items):
            raise ContractViolation(f"cannot draw {k} of {len(items)} items")
        for i in range(k):
            j = i + self.below(len(items) - i)
            items[i], items[j] = items[j], items[i]
        return items[:k]


def seeded_class_permutation(labels, seed: int) -> list:
    """Deterministic permutation of ``labels`` for a given seed."""
    return XorShift64Star(seed).shuffle(list(labels))


# ---------------------------------------------------------------------------
# Dataset manifest
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DatasetSpec:
    """One manifest entry: where a dataset lives and what shape it has."""

    name: str
    train: Path
    test: Path
    n_classes: int
    n_features: int
    format: str = "csv"
    label: str = "last"
    train_labels: Path | None = None
    test_labels: Path | None = None

    def load(self, split: str) -> LabeledDataset:
        if split not in ("train", "test"):
            raise ConfigError(f"unknown split {split!r}")
        if self.format == "idx":
            labels = self.train_labels if split == "train" else self.test_labels
            data = load_idx(getattr(self, split), labels, f"{self.name}-{split}")
        elif self.format == "csv":
            data = load_csv(getattr(self, split), self.label, f"{self.name}-{split}")
        else:
            raise ConfigError(f"{self.name}: unknown format {self.format!r}")
        if data.dimension != self.n_features:
            raise DataParseError(
                f"{self.name}: found {data.dimension} features, manifest declares "
                f"{self.n_features}", getattr(self, split))
        if len(data.classes()) > self.n_classes:
            raise DataParseError(
                f"{self.name}: found {len(data.classes())} classes, manifest declares "
                f"{self.n_classes}", getattr(self, split))
        return data


def default_data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, "data"))


def read_manifest(path=None, data_dir=None) -> dict[str, DatasetSpec]:
    """Parse a manifest (INI key-value text; one section per dataset).

    Relative paths resolve against ``data_dir`` (default: ``$CSPNN_DATA_DIR``
    or ``./data``). Without ``path`` the manifest bundled with the package is
    used.
    """
    parser = configparser.ConfigParser(interpolation=None)
    if path is None:
        parser.read_string(resources.files("cspnn").joinpath("datasets.ini").read_text())
    else:
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise DataParseError(f"cannot read manifest ({exc})", path) from exc
    root = Path(data_dir) if data_dir is not None else default_data_dir()

    def resolve(value):
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else root / p

    specs = {}
    for name in parser.sections():
        sec = parser[name]
        try:
            specs[name] = DatasetSpec(
                name=name,
                train=resolve(sec["train"]),
                test=resolve(sec["test"]),
                n_classes=sec.getint("classes"),
                n_features=sec.getint("features"),
                format=sec.get("format", "csv"),
                label=sec.get("label", "last"),
                train_labels=resolve(sec.get("train_labels")),
                test_labels=resolve(sec.get("test_labels")),
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"manifest section [{name}]: {exc}") from exc
    return specs


def load_normalized(spec: DatasetSpec):
    """Load both splits and min-max normalize them with training bounds.

    Returns ``(train, test, params)``.
    """
    train = spec.load("train")
    test = spec.load("test")
    params = fit_normalizer(train)
    return apply_normalizer(params, train), apply_normalizer(params, test), params
