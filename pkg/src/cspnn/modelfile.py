"""Versioned model persistence.

Binary layout (all integers little-endian)::

    magic        8 bytes   b"CSPNNMF\\0"
    version      u16       1
    flags        u16       bit 0: normalization params present
    dimension    u32       d
    n_outputs    u32       k
    n_hidden     u64       j
    next_id      u64       next unit id to assign
    k labels     u32 length + UTF-8 JSON text of the label
    unit ids     u64[j]
    subnets      u32[j]
    centroids    f64[j * d]   row-major
    [minimum     f64[d]]      only when flag bit 0 is set
    [maximum     f64[d]]
    metadata     u32 length + UTF-8 JSON object (sorted keys)

Saving the same model twice yields identical bytes, and loading restores
every centroid bit for bit.
"""
from __future__ import annotations

import json
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import CsPnnModel
from .data_io import NormalizationParams
from .exceptions import DataParseError

MAGIC = b"CSPNNMF\x00"
VERSION = 1
_FLAG_NORMALIZER = 1


@dataclass
class ModelFile:
    model: CsPnnModel
    normalizer: NormalizationParams | None = None
    metadata: dict = field(default_factory=dict)


def dumps(mf: ModelFile) -> bytes:
    m = mf.model
    flags = _FLAG_NORMALIZER if mf.normalizer is not None else 0
    parts = [MAGIC, struct.pack("<HHIIQQ", VERSION, flags, m.dimension, m.n_outputs,
                                m.n_hidden, m.next_unit_id)]
    for label in m.labels:
        raw = json.dumps(label).encode()
        parts.append(struct.pack("<I", len(raw)) + raw)
    parts.append(np.ascontiguousarray(m.unit_ids, dtype="<u8").tobytes())
    parts.append(np.ascontiguousarray(m.subnets, dtype="<u4").tobytes())
    parts.append(np.ascontiguousarray(m.centroids, dtype="<f8").tobytes())
    if mf.normalizer is not None:
        parts.append(np.ascontiguousarray(mf.normalizer.minimum, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(mf.normalizer.maximum, dtype="<f8").tobytes())
    meta = json.dumps(mf.metadata, sort_keys=True).encode()
    parts.append(struct.pack("<I", len(meta)) + meta)
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes, source):
        self.data = data
        self.pos = 0
        self.source = source

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise DataParseError("truncated model file", self.source)
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def array(self, dtype: str, count: int) -> np.ndarray:
        dt = np.dtype(dtype)
        return np.frombuffer(self.take(dt.itemsize * count), dtype=dt)


def loads(data: bytes, source=None) -> ModelFile:
    r = _Reader(data, source)
    if r.take(len(MAGIC)) != MAGIC:
        raise DataParseError("not a CS-PNN model file (bad magic)", source)
    version, flags, dim, k, j, next_id = r.unpack("<HHIIQQ")
    if version != VERSION:
        raise DataParseError(f"unsupported model file version {version}", source)
    labels = []
    for _ in range(k):
        n, = r.unpack("<I")
        try:
            labels.append(json.loads(r.take(n).decode()))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise DataParseError(f"bad label record ({exc})", source) from exc
    ids = r.array("<u8", j)
    subnets = r.array("<u4", j)
    centroids = r.array("<f8", j * dim).reshape(j, dim)
    normalizer = None
    if flags & _FLAG_NORMALIZER:
        lo = r.array("<f8", dim)
        hi = r.array("<f8", dim)
        normalizer = NormalizationParams(lo.copy(), hi.copy())
    n, = r.unpack("<I")
    try:
        metadata = json.loads(r.take(n).decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataParseError(f"bad metadata record ({exc})", source) from exc
    if r.pos != len(data):
        raise DataParseError("trailing bytes after model record", source)
    if j and int(subnets.max()) >= k:
        raise DataParseError("hidden unit refers to a missing output unit", source)
    return ModelFile(_assemble(dim, labels, ids, subnets, centroids, next_id),
                     normalizer, metadata)


def _assemble(dim, labels, ids, subnets, centroids, next_id) -> CsPnnModel:
    model = CsPnnModel(dim)
    for label in labels:
        model.add_output(label)
    for c, s in zip(centroids, subnets):
        model.add_unit(c, int(s))
    model._ids[:model.n_hidden] = ids
    model.next_unit_id = int(next_id)
    return model


def save(mf: ModelFile, path) -> None:
    """Write atomically (temporary file in the same directory, then rename)."""
    write_atomic(path, dumps(mf))


def load(path) -> ModelFile:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise DataParseError(f"cannot read model ({exc})", path) from exc
    if data[:1] in (b"{", b"\n", b" "):
        return from_json(data.decode(), path)
    return loads(data, path)


def write_atomic(path, data: bytes | str) -> None:
    path = Path(path)
    if isinstance(data, str):
        data = data.encode()
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def to_json(mf: ModelFile) -> str:
    """Inspection export; floats use the shortest round-tripping repr."""
    m = mf.model
    doc = {
        "format": "cspnn-model",
        "version": VERSION,
        "dimension": m.dimension,
        "next_unit_id": m.next_unit_id,
        "outputs": [{"index": o.index, "label": o.label} for o in m.output_units],
        "hidden": [{"id": int(i), "subnet": int(s), "centroid": c.tolist()}
                   for i, s, c in zip(m.unit_ids, m.subnets, m.centroids)],
        "normalizer": None if mf.normalizer is None else {
            "minimum": mf.normalizer.minimum.tolist(),
            "maximum": mf.normalizer.maximum.tolist()},
        "metadata": mf.metadata,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def from_json(text: str, source=None) -> ModelFile:
    try:
        doc = json.loads(text)
        dim = int(doc["dimension"])
        labels = [o["label"] for o in sorted(doc["outputs"], key=lambda o: o["index"])]
        hidden = doc["hidden"]
        ids = np.array([h["id"] for h in hidden], dtype=np.int64)
        subnets = np.array([h["subnet"] for h in hidden], dtype=np.intp)
        centroids = np.array([h["centroid"] for h in hidden], dtype=np.float64).reshape(-1, dim)
        norm = doc.get("normalizer")
        normalizer = None if norm is None else NormalizationParams(
            np.array(norm["minimum"]), np.array(norm["maximum"]))
        model = _assemble(dim, labels, ids, subnets, centroids, doc["next_unit_id"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataParseError(f"bad JSON model ({exc})", source) from exc
    return ModelFile(model, normalizer, doc.get("metadata", {}))
