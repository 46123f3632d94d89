"""Benchmark scenarios: standard, class-incremental (CIL) and continuous
unlearning + incremental learning (CUIL).

Every scenario returns a flat list of :class:`StageRecord`; CIL and CUIL
produce one record per (seed, stage) followed by one ``seed="avg"`` record
per stage. Run ``r`` of a config uses seed ``config.seed + r``.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .baseline import build_static, evaluate_static
from .data_io import XorShift64Star, cil_group_sizes, seeded_class_permutation
from .dataset import LabeledDataset
from .exceptions import ConfigError
from .learning import construct, evaluate, unlearn_classes

SCENARIOS = ("standard", "cil", "cuil")
CSV_COLUMNS = ("scenario", "dataset", "param", "stage", "seed", "accuracy", "hidden_count")


@dataclass(frozen=True)
class ProtocolConfig:
    """What to run.

    ``task`` is the CIL group size ``i`` (1..4) or the CUIL divisor ``j``
    (2..4); it is ignored by the standard scenario.
    """

    dataset: str
    scenario: str
    task: int | None = None
    runs: int = 10
    seed: int = 0
    iterations: int = 4
    baseline: bool = True
    n_jobs: int = 1

    def validate(self) -> "ProtocolConfig":
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.scenario == "cil" and self.task not in (1, 2, 3, 4):
            raise ConfigError(f"CIL task size must be 1..4, got {self.task}")
        if self.scenario == "cuil":
            if self.task not in (2, 3, 4):
                raise ConfigError(f"CUIL divisor j must be 2, 3 or 4, got {self.task}")
            if self.iterations < 1:
                raise ConfigError("iterations must be >= 1")
        return self


@dataclass(frozen=True)
class StageRecord:
    scenario: str
    dataset: str
    param: int | None
    stage: str
    seed: int | str | None
    accuracy: float
    hidden_count: float
    n_classes: float
    classes: tuple = field(default=())

    def csv_row(self) -> list:
        return [self.scenario, self.dataset, "" if self.param is None else self.param,
                self.stage, "" if self.seed is None else self.seed,
                repr(float(self.accuracy)), _num(self.hidden_count)]


def _num(v):
    return int(v) if float(v).is_integer() else repr(float(v))


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def run_standard(config: ProtocolConfig, train: LabeledDataset,
                 test: LabeledDataset) -> list[StageRecord]:
    """Construct on the full training split (file order) and test once."""
    config.validate()
    model = construct(None, train)
    report = evaluate(model, test)
    classes = tuple(model.labels)
    records = [StageRecord("standard", config.dataset, None, "cs-pnn", None,
                           report.accuracy, model.n_hidden, len(classes), classes)]
    if config.baseline:
        static = build_static(train)
        report = evaluate_static(static, test)
        records.append(StageRecord("standard", config.dataset, None, "pnn", None,
                                   report.accuracy, static.n_hidden, len(classes), classes))
    return records


def cil_run(train: LabeledDataset, test: LabeledDataset, task: int, seed: int,
            dataset: str = "") -> list[StageRecord]:
    """One class-incremental run under a seeded class order."""
    order = seeded_class_permutation(train.classes(), seed)
    model = None
    seen: list = []
    records = []
    pos = 0
    for step, size in enumerate(cil_group_sizes(len(order), task), start=1):
        group = order[pos:pos + size]
        pos += size
        model = construct(model, train.only(group))
        seen.extend(group)
        report = evaluate(model, test.only(seen))
        records.append(StageRecord("cil", dataset, task, str(step), seed, report.accuracy,
                                   model.n_hidden, len(seen), tuple(seen)))
    return records


def cuil_run(train: LabeledDataset, test: LabeledDataset, divisor: int, seed: int,
             iterations: int = 4, dataset: str = "") -> list[StageRecord]:
    """One unlearn/relearn run; classes to drop are drawn per iteration."""
    rng = XorShift64Star(seed)
    classes = train.classes()
    n_unlearn = len(classes) // divisor
    model = construct(None, train)
    report = evaluate(model, test)
    records = [StageRecord("cuil", dataset, divisor, "Ini.", seed, report.accuracy,
                           model.n_hidden, model.n_outputs, tuple(model.labels))]
    for it in range(1, iterations + 1):
        dropped = rng.sample(classes, n_unlearn)
        unlearn_classes(model, dropped)
        remaining = [c for c in classes if c not in set(dropped)]
        report = evaluate(model, test.only(remaining))
        records.append(StageRecord("cuil", dataset, divisor, f"{it}U", seed, report.accuracy,
                                   model.n_hidden, model.n_outputs, tuple(model.labels)))
        construct(model, train.only(dropped))
        report = evaluate(model, test)
        records.append(StageRecord("cuil", dataset, divisor, f"{it}C", seed, report.accuracy,
                                   model.n_hidden, model.n_outputs, tuple(model.labels)))
    return records


def _cil_job(args):
    return cil_run(*args)


def _cuil_job(args):
    return cuil_run(*args)


def _map(fn, jobs, n_jobs):
    if n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


def run_cil(config: ProtocolConfig, train: LabeledDataset,
            test: LabeledDataset) -> list[StageRecord]:
    """Class-incremental learning over ``config.runs`` seeded class orders."""
    config.validate()
    if len(train.classes()) <= 5:
        raise ConfigError("CIL needs a dataset with more than five classes")
    seeds = [config.seed + r for r in range(config.runs)]
    jobs = [(train, test, config.task, s, config.dataset) for s in seeds]
    per_seed = _map(_cil_job, jobs, config.n_jobs)
    flat = [rec for run in per_seed for rec in run]
    return flat + average_records(flat)


def run_cuil(config: ProtocolConfig, train: LabeledDataset,
             test: LabeledDataset) -> list[StageRecord]:
    """Initial construction, then ``iterations`` unlearn/relearn rounds."""
    config.validate()
    seeds = [config.seed + r for r in range(config.runs)]
    jobs = [(train, test, config.task, s, config.iterations, config.dataset) for s in seeds]
    per_seed = _map(_cuil_job, jobs, config.n_jobs)
    flat = [rec for run in per_seed for rec in run]
    return flat + average_records(flat)


def run(config: ProtocolConfig, train: LabeledDataset,
        test: LabeledDataset) -> list[StageRecord]:
    config.validate()
    return {"standard": run_standard, "cil": run_cil, "cuil": run_cuil}[config.scenario](
        config, train, test)


# ---------------------------------------------------------------------------
# aggregation and output
# ---------------------------------------------------------------------------

def average_records(records) -> list[StageRecord]:
    """Arithmetic mean over seeds for every stage, in first-seen stage order."""
    stages: dict = {}
    for rec in records:
        if rec.seed == "avg":
            continue
        stages.setdefault(rec.stage, []).append(rec)
    out = []
    for stage, recs in stages.items():
        first = recs[0]
        out.append(StageRecord(
            first.scenario, first.dataset, first.param, stage, "avg",
            float(np.mean([r.accuracy for r in recs])),
            float(np.mean([r.hidden_count for r in recs])),
            float(np.mean([r.n_classes for r in recs]))))
    return out


def averaged(records) -> list[StageRecord]:
    return [r for r in records if r.seed == "avg"]


def to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def to_json(records) -> str:
    rows = []
    for rec in records:
        row = asdict(rec)
        row["classes"] = list(rec.classes)
        rows.append(row)
    return json.dumps(rows, indent=1, sort_keys=True) + "\n"


def summary_table(records) -> str:
    """Human-readable table of the records (averages only for CIL and CUIL)."""
    if not records:
        return ""
    scenario = records[0].scenario
    lines = []
    if scenario == "standard":
        lines.append(f"{'Dataset':<20}{'Model':<8}{'Acc. (%)':>10}{'N_h':>8}")
        for r in records:
            lines.append(f"{r.dataset:<20}{r.stage:<8}{r.accuracy:>10.2f}{_num(r.hidden_count):>8}")
    elif scenario == "cil":
        final = averaged(records)[-1]
        lines.append(f"{'Dataset':<20}{'Task':<8}{'Av. N_h':>10}{'Av. Acc. (%)':>14}")
        lines.append(f"{final.dataset:<20}{'task' + str(final.param):<8}"
                     f"{final.hidden_count:>10.1f}{final.accuracy:>14.2f}")
        lines.append("")
        lines.append(f"{'Stage':<8}{'Classes':>8}{'Av. N_h':>10}{'Av. Acc. (%)':>14}")
        for r in averaged(records):
            lines.append(f"{r.stage:<8}{r.n_classes:>8.0f}{r.hidden_count:>10.1f}{r.accuracy:>14.2f}")
    else:
        lines.append(f"{records[0].dataset} CUIL j={records[0].param}")
        lines.append(f"{'Stage':<8}{'Classes':>8}{'Av. N_h':>10}{'Av. Acc. (%)':>14}")
        for r in averaged(records):
            lines.append(f"{r.stage:<8}{r.n_classes:>8.0f}{r.hidden_count:>10.1f}{r.accuracy:>14.2f}")
    return "\n".join(lines) + "\n"
