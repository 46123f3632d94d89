#!/usr/bin/env python3
"""Rebuild the benchmark datasets from copies published on PyPI.

The UCI repository is not always reachable, but several PyPI distributions
ship verbatim copies of the datasets used by the benchmarks:

* ``keel-ds``               optdigits, penbased (pendigits), segment, letter
* ``orange3``               ionosphere (full precision, UCI row order)
* ``imbalanced-databases``  satimage (original sat.trn / sat.tst split)

Each dataset is written as ``<name>.train.csv`` / ``<name>.test.csv`` with the
class label in the last column and no header, which is what the bundled
manifest (``cspnn/datasets.ini``) expects.

Reconstruction notes
--------------------
optdigits
    KEEL stores optdigits.tra followed by optdigits.tes. The split point is
    3823; the test half is checked row-by-row against scikit-learn's bundled
    digits (which is optdigits.tes).
pendigits
    KEEL stores the rows as tra[:6728] + tes[:3164] + tra[6728:] + tes[3164:].
    The 766-row training block is located by searching for the unique window
    whose class histogram equals the published training class counts.
segmentation
    Only the shuffled Statlog version (2310 rows) is available. The 210/2100
    split is approximated by taking the first 30 rows of every class (the
    original training file holds 30 per class) as training data.
ionosphere
    First 200 rows train, last 151 test.
sat
    Original split, labels kept verbatim.
letter
    KEEL order, first 16000 rows train (approximation of the UCI split).

abalone, isolet and MNIST are not available from these sources; place them
under the data directory by hand (see README).

Usage::

    python scripts/fetch_datasets.py [--out data]
"""
from __future__ import annotations

import argparse
import collections
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

PENDIGITS_TRAIN_COUNTS = {0: 780, 1: 779, 2: 780, 3: 719, 4: 780,
                          5: 720, 6: 720, 7: 778, 8: 719, 9: 719}
SEGMENT_NAMES = {1: "BRICKFACE", 2: "SKY", 3: "FOLIAGE", 4: "CEMENT",
                 5: "WINDOW", 6: "PATH", 7: "GRASS"}


def _download(pkg: str, dest: Path) -> Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
         "-q", "-d", str(dest), pkg],
        check=True,
    )
    wheels = sorted(dest.glob(pkg.replace("-", "_") + "*.whl"))
    if not wheels:
        raise SystemExit(f"no wheel for {pkg}")
    return wheels[-1]


def _keel_rows(whl: zipfile.ZipFile, name: str) -> list[list[str]]:
    text = whl.read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("@"):
            continue
        rows.append([tok.strip() for tok in line.split(",")])
    return rows


def _write(path: Path, rows) -> None:
    path.write_text("".join(",".join(r) + "\n" for r in rows))
    print(f"  {path} ({len(rows)} rows)")


def _num(tok: str) -> str:
    # canonical short form: "3.0" -> "3"
    v = float(tok)
    return str(int(v)) if v.is_integer() else repr(v)


def build_optdigits(whl, out: Path) -> None:
    rows = _keel_rows(whl, "optdigits")
    train, test = rows[:3823], rows[3823:]
    try:
        from sklearn.datasets import load_digits
    except ImportError:
        pass
    else:
        digits = load_digits()
        for r, x, t in zip(test, digits.data, digits.target):
            if [float(v) for v in r[:-1]] != list(x) or int(r[-1]) != int(t):
                raise SystemExit("optdigits test split does not match sklearn digits")
    _write(out / "optdigits.train.csv", train)
    _write(out / "optdigits.test.csv", test)


def build_pendigits(whl, out: Path) -> None:
    rows = _keel_rows(whl, "penbased")
    labels = [int(r[-1]) for r in rows]
    head = collections.Counter(labels[:6728])
    need = {k: PENDIGITS_TRAIN_COUNTS[k] - head[k] for k in PENDIGITS_TRAIN_COUNTS}
    width = sum(need.values())
    hits = [s for s in range(6728, len(rows) - width + 1)
            if collections.Counter(labels[s:s + width]) == collections.Counter(need)]
    if len(hits) != 1:
        raise SystemExit(f"pendigits: expected one training block, found {hits}")
    s = hits[0]
    train = rows[:6728] + rows[s:s + width]
    test = rows[6728:s] + rows[s + width:]
    assert len(train) == 7494 and len(test) == 3498
    _write(out / "pendigits.train.csv", train)
    _write(out / "pendigits.test.csv", test)


def build_segmentation(whl, out: Path) -> None:
    rows = _keel_rows(whl, "segment")
    seen = collections.Counter()
    train, test = [], []
    for r in rows:
        label = SEGMENT_NAMES[int(float(r[-1]))]
        row = [_num(v) for v in r[:-1]] + [label]
        if seen[label] < 30:
            train.append(row)
        else:
            test.append(row)
        seen[label] += 1
    _write(out / "segmentation.train.csv", train)
    _write(out / "segmentation.test.csv", test)


def build_letter(whl, out: Path) -> None:
    rows = _keel_rows(whl, "letter")
    _write(out / "letter-recognition.train.csv", rows[:16000])
    _write(out / "letter-recognition.test.csv", rows[16000:])


def build_ionosphere(whl, out: Path) -> None:
    text = whl.read("Orange/tests/datasets/ionosphere.tab").decode().splitlines()
    rows = [line.split("\t") for line in text[3:] if line.strip()]
    assert len(rows) == 351
    _write(out / "ionosphere.train.csv", rows[:200])
    _write(out / "ionosphere.test.csv", rows[200:])


def build_sat(whl, out: Path) -> None:
    base = "imbalanced_databases/data/satimage/"
    for member, split in (("sat.trn.txt", "train"), ("sat.tst.txt", "test")):
        lines = whl.read(base + member).decode().splitlines()
        _write(out / f"sat.{split}.csv", [line.split() for line in lines if line.strip()])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data", type=Path)
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        keel = zipfile.ZipFile(_download("keel-ds", tmp))
        orange = zipfile.ZipFile(_download("orange3", tmp))
        imb = zipfile.ZipFile(_download("imbalanced-databases", tmp))
        build_optdigits(keel, args.out)
        build_pendigits(keel, args.out)
        build_segmentation(keel, args.out)
        build_letter(keel, args.out)
        build_ionosphere(orange, args.out)
        build_sat(imb, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
