"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 I/O or parse error, 3 contract violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import modelfile, protocols
from .data_io import (DataParseError, apply_normalizer, fit_normalizer, load_csv,
                      load_normalized, read_manifest)
from .dataset import LabeledDataset
from .exceptions import ConfigError, ContractViolation, CsPnnError, NotFoundError
from .learning import construct, evaluate, unlearn_classes, unlearn_units
from .modelfile import ModelFile

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CONTRACT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_data_args(p, required_split=None):
    src = p.add_argument_group("data source (manifest entry or a single CSV file)")
    src.add_argument("--dataset", help="dataset name from the manifest")
    src.add_argument("--csv", type=Path, help="CSV file instead of a manifest entry")
    src.add_argument("--label-position", default="last",
                     help="label column for --csv: first, last or an index (default: last)")
    if required_split is None:
        src.add_argument("--split", choices=("train", "test"), default="test")
    src.add_argument("--classes", help="comma-separated subset of classes to use")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cspnn", description="Compact-sized probabilistic neural network")
    parser.add_argument("--manifest", type=Path, help="dataset manifest (default: bundled)")
    parser.add_argument("--data-dir", type=Path,
                        help="dataset root (default: $CSPNN_DATA_DIR or ./data)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("datasets", help="list manifest entries and whether their files exist")
    p.set_defaults(func=cmd_datasets)

    p = sub.add_parser("prepare", help="write min-max normalized copies of a dataset")
    p.add_argument("dataset")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="construct (or extend) a model")
    _add_data_args(p, required_split="train")
    p.add_argument("--model-in", type=Path, help="continue from this model")
    p.add_argument("--model-out", type=Path, required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("test", help="evaluate a model")
    p.add_argument("--model-in", type=Path, required=True)
    _add_data_args(p)
    p.add_argument("--predictions", type=Path, help="write per-sample predictions as CSV")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("unlearn", help="remove classes or hidden units")
    p.add_argument("--model-in", type=Path, required=True)
    p.add_argument("--model-out", type=Path, required=True)
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--classes", help="comma-separated class labels")
    what.add_argument("--units", help="comma-separated hidden unit ids")
    p.set_defaults(func=cmd_unlearn)

    p = sub.add_parser("export", help="dump a model as JSON")
    p.add_argument("--model-in", type=Path, required=True)
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("bench", help="run a benchmark scenario")
    p.add_argument("scenario", choices=protocols.SCENARIOS)
    p.add_argument("dataset")
    p.add_argument("--task", type=int, help="CIL: classes added per step (1-4)")
    p.add_argument("--j", type=int, help="CUIL: unlearn floor(N_c / j) classes (2-4)")
    p.add_argument("--iterations", type=int, default=4, help="CUIL iterations (default 4)")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--no-baseline", action="store_true",
                   help="standard: skip the original PNN")
    p.add_argument("--out", type=Path, help="directory for CSV/JSON/summary files")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.set_defaults(func=cmd_bench)
    return parser


# ---------------------------------------------------------------------------

def _manifest(args):
    return read_manifest(args.manifest, args.data_dir)


def _spec(args, name):
    specs = _manifest(args)
    if name not in specs:
        raise UsageError(f"unknown dataset {name!r}; known: {', '.join(sorted(specs))}")
    return specs[name]


def _match_labels(tokens: str, candidates) -> list:
    by_text = {str(c): c for c in candidates}
    out = []
    for tok in (t.strip() for t in tokens.split(",")):
        if not tok:
            continue
        if tok not in by_text:
            raise NotFoundError(f"unknown class label {tok!r}")
        out.append(by_text[tok])
    return out


def _load_raw(args, split) -> LabeledDataset:
    if (args.dataset is None) == (args.csv is None):
        raise UsageError("give exactly one of --dataset or --csv")
    if args.csv is not None:
        data = load_csv(args.csv, args.label_position)
    else:
        data = _spec(args, args.dataset).load(split)
    if args.classes:
        data = data.only(_match_labels(args.classes, data.classes()))
    return data


def cmd_datasets(args) -> int:
    for name, spec in sorted(_manifest(args).items()):
        present = spec.train.exists() and spec.test.exists()
        print(f"{name:<20} classes={spec.n_classes:<3} features={spec.n_features:<4} "
              f"{'ok' if present else 'missing'}  {spec.train.parent}")
    return EXIT_OK


def cmd_prepare(args) -> int:
    train, test, _ = load_normalized(_spec(args, args.dataset))
    args.out.mkdir(parents=True, exist_ok=True)
    for split, data in (("train", train), ("test", test)):
        lines = [",".join([repr(float(v)) for v in x] + [str(t)]) for x, t in data]
        path = args.out / f"{args.dataset}.{split}.csv"
        modelfile.write_atomic(path, "\n".join(lines) + "\n")
        print(f"{path}: {len(data)} samples")
    return EXIT_OK


def cmd_train(args) -> int:
    data = _load_raw(args, "train")
    if args.model_in is not None:
        mf = modelfile.load(args.model_in)
        if mf.normalizer is not None:
            data = apply_normalizer(mf.normalizer, data)
    else:
        params = fit_normalizer(data)
        mf = ModelFile(None, params, {"dataset": args.dataset or str(args.csv)})
        data = apply_normalizer(params, data)
    mf.model = construct(mf.model, data)
    modelfile.save(mf, args.model_out)
    print(f"N_h: {mf.model.n_hidden}")
    print(f"classes: {mf.model.n_outputs}")
    return EXIT_OK


def cmd_test(args) -> int:
    mf = modelfile.load(args.model_in)
    data = _load_raw(args, args.split)
    if mf.normalizer is not None:
        data = apply_normalizer(mf.normalizer, data)
    report = evaluate(mf.model, data)
    if args.predictions is not None:
        rows = ["true,predicted"] + [f"{t},{p}" for t, p in report.predictions]
        modelfile.write_atomic(args.predictions, "\n".join(rows) + "\n")
    if args.format == "json":
        print(json.dumps({
            "total": report.total, "correct": report.correct,
            "accuracy": report.accuracy, "hidden_count": report.hidden_count,
            "per_class": {str(k): {"count": c, "correct": g}
                          for k, (c, g) in report.per_class.items()},
        }, indent=1, sort_keys=True))
        return EXIT_OK
    print(f"accuracy: {report.accuracy:.2f}% ({report.correct}/{report.total})")
    print(f"N_h: {report.hidden_count}")
    print(f"{'class':<16}{'count':>8}{'correct':>9}{'acc. (%)':>10}")
    for label, (count, good) in report.per_class.items():
        print(f"{str(label):<16}{count:>8}{good:>9}{100.0 * good / count:>10.2f}")
    return EXIT_OK


def cmd_unlearn(args) -> int:
    mf = modelfile.load(args.model_in)
    model = mf.model
    j0, k0 = model.n_hidden, model.n_outputs
    if args.classes is not None:
        unlearn_classes(model, _match_labels(args.classes, model.labels))
    else:
        try:
            ids = [int(t) for t in args.units.split(",") if t.strip()]
        except ValueError:
            raise UsageError(f"unit ids must be integers: {args.units!r}") from None
        unlearn_units(model, ids)
    modelfile.save(mf, args.model_out)
    print(f"removed units: {j0 - model.n_hidden}")
    print(f"j: {j0} -> {model.n_hidden}")
    print(f"k: {k0} -> {model.n_outputs}")
    return EXIT_OK


def cmd_export(args) -> int:
    text = modelfile.to_json(modelfile.load(args.model_in))
    if args.out is None:
        sys.stdout.write(text)
    else:
        modelfile.write_atomic(args.out, text)
    return EXIT_OK


def cmd_bench(args) -> int:
    task = args.task if args.scenario == "cil" else args.j if args.scenario == "cuil" else None
    config = protocols.ProtocolConfig(
        dataset=args.dataset, scenario=args.scenario, task=task, runs=args.runs,
        seed=args.seed, iterations=args.iterations, baseline=not args.no_baseline,
        n_jobs=args.jobs).validate()
    train, test, _ = load_normalized(_spec(args, args.dataset))
    records = protocols.run(config, train, test)
    summary = protocols.summary_table(records)
    sys.stdout.write(summary)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        stem = f"{args.scenario}-{args.dataset}" + (f"-{task}" if task is not None else "")
        if args.format in ("csv", "both"):
            modelfile.write_atomic(args.out / f"{stem}.csv", protocols.to_csv(records))
        if args.format in ("json", "both"):
            modelfile.write_atomic(args.out / f"{stem}.json", protocols.to_json(records))
        modelfile.write_atomic(args.out / f"{stem}.summary.txt", summary)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"cspnn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataParseError, OSError) as exc:
        print(f"cspnn: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ContractViolation, NotFoundError) as exc:
        print(f"cspnn: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except CsPnnError as exc:
        print(f"cspnn: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
