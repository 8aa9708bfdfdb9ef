"""Command-line front-end.

Stages communicate through the TSV/JSON artifacts defined by the other
modules, so any stage can be re-run or replaced with third-party files.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields

from . import corpus as corpus_mod
from . import dataset as dataset_mod
from . import evaluate as evaluate_mod
from . import experiments as experiments_mod
from . import features as features_mod
from . import model as model_mod
from ._util import atomic_write_json, atomic_write_text
from .errors import LexevoError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

SUBCOMMANDS = (
    "ingest", "build-dataset", "extract-features", "train", "predict",
    "evaluate", "ablate", "sweep", "interpret", "plot-data",
)


@dataclass
class RunConfig:
    corpus: list = None  # list of unigram file paths
    lexicon: str = None
    catvar: str = None
    syllables: str = None
    out: str = "out"
    cycle_years: int = 50
    half_width: int = 5
    anchor_year: int = 2000
    floor_year: int = 1800
    seed: int = 0
    workers: int = 1

    def validate(self):
        if self.floor_year >= self.anchor_year:
            raise LexevoError("floor_year must be before anchor_year")
        if self.cycle_years < 1:
            raise LexevoError("cycle_years must be positive")
        if self.half_width < 0:
            raise LexevoError("half_width must be non-negative")
        if self.workers < 1:
            raise LexevoError("workers must be >= 1")


_INT_KEYS = {"cycle_years", "half_width", "anchor_year", "floor_year",
             "seed", "workers"}


def read_config_file(path):
    """Parse a UTF-8 key=value config file; '#' starts a comment."""
    values = {}
    known = {f.name for f in fields(RunConfig)}
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise LexevoError(f"{path} line {line_number}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise LexevoError(f"{path} line {line_number}: unknown key {key!r}")
            if key == "corpus":
                values[key] = [p.strip() for p in value.split(",") if p.strip()]
            elif key in _INT_KEYS:
                values[key] = int(value)
            else:
                values[key] = value
    return values


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(parser):
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--corpus", action="append",
                        help="unigram TSV (.tsv or .tsv.gz); repeatable")
    parser.add_argument("--lexicon", help="synset lexicon TSV")
    parser.add_argument("--catvar", help="categorial-variation cluster TSV")
    parser.add_argument("--syllables", help="syllable exceptions TSV")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--cycle", type=int, dest="cycle_years")
    parser.add_argument("--half-width", type=int, dest="half_width")
    parser.add_argument("--anchor-year", type=int, dest="anchor_year")
    parser.add_argument("--floor-year", type=int, dest="floor_year")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)


def build_parser():
    parser = _Parser(prog="evocli", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        _add_common(p)
        if name == "extract-features":
            p.add_argument("--dataset", help="dataset TSV from build-dataset")
            p.add_argument("--no-class", action="store_true",
                           help="omit target classes (prediction-time vectors)")
        elif name == "train":
            p.add_argument("--features", help="feature TSV from extract-features")
            p.add_argument("--model", help="output model JSON path")
            p.add_argument("--only", help="comma-separated feature subset")
            p.add_argument("--drop", help="comma-separated features to exclude")
        elif name == "predict":
            p.add_argument("--features", help="feature TSV to score")
            p.add_argument("--model", help="fitted model JSON")
        elif name == "evaluate":
            p.add_argument("--dataset", help="dataset TSV with future counts")
            p.add_argument("--probabilities", help="probability TSV from predict")
        elif name == "ablate":
            p.add_argument("--mode", choices=experiments_mod.ABLATION_MODES,
                           default="drop_one")
            p.add_argument("--feature",
                           help="one feature name; default: all features in turn")
        elif name == "sweep":
            p.add_argument("--cycles", default="30,40,50,60",
                           help="comma-separated cycle lengths")
        elif name == "plot-data":
            p.add_argument("--synset", required=True, help="synset id to plot")
            p.add_argument("--years", default="1800:2000",
                           help="inclusive year range, START:END")
    return parser


def resolve_config(args):
    config = RunConfig()
    if getattr(args, "config", None):
        for key, value in read_config_file(args.config).items():
            setattr(config, key, value)
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(config, f.name, value)
    config.validate()
    return config


def _require(config, *names):
    for name in names:
        if not getattr(config, name):
            raise LexevoError(f"missing required input: --{name}")


def _load_inputs(config):
    """Load corpus + lexicon (+ clusters) into PipelineInputs."""
    _require(config, "corpus", "lexicon")
    return experiments_mod.load_pipeline_inputs(
        config.corpus, config.lexicon, config.catvar, config.syllables,
        half_width=config.half_width, workers=config.workers,
    )


def _window_pairs(config):
    return dataset_mod.schedule_windows(
        config.cycle_years, config.anchor_year, config.floor_year
    )


def cmd_ingest(args, config):
    inputs, _, report = _load_inputs(config)
    os.makedirs(config.out, exist_ok=True)
    lines = []
    for key in sorted(inputs.corpus.keys()):
        for year, count in inputs.corpus.series(key).items():
            lines.append(f"{key.token()}\t{year}\t{count}\t0")
    atomic_write_text(os.path.join(config.out, "corpus.tsv"),
                      "\n".join(lines) + "\n")
    atomic_write_json(os.path.join(config.out, "ingest_report.json"), {
        "rows_kept": report.rows_kept,
        "rows_filtered": report.rows_filtered,
        "rows_skipped": report.rows_skipped,
        "keys": len(inputs.corpus),
        "eligible_synsets": len(inputs.synsets),
    })
    if report.rows_skipped:
        print(f"warning: skipped {report.rows_skipped} malformed rows",
              file=sys.stderr)
    return EXIT_OK


def cmd_build_dataset(args, config):
    inputs, _, _ = _load_inputs(config)
    os.makedirs(config.out, exist_ok=True)
    windows = sorted({w for pair in _window_pairs(config) for w in pair})
    for window in windows:
        ds = dataset_mod.build_dataset(inputs.synsets, inputs.corpus, window,
                                       config.half_width, workers=config.workers)
        stem = os.path.join(config.out, f"dataset_{window.label()}")
        dataset_mod.write_dataset(ds, stem + ".tsv", stem + ".json")
    return EXIT_OK


def cmd_extract_features(args, config):
    if not args.dataset:
        raise LexevoError("missing required input: --dataset")
    inputs, _, _ = _load_inputs(config)
    ds = dataset_mod.read_dataset(args.dataset,
                                  os.path.splitext(args.dataset)[0] + ".json")
    vectors = features_mod.extract_features(
        ds, inputs.clusters, inputs.births, inputs.syllable_exceptions,
        include_class=not args.no_class, workers=config.workers,
    )
    os.makedirs(config.out, exist_ok=True)
    out = os.path.join(config.out, f"features_{ds.window.label()}.tsv")
    features_mod.write_feature_vectors(vectors, out)
    return EXIT_OK


def _feature_subset(args):
    names = features_mod.FEATURE_NAMES
    if args.only:
        return tuple(n for n in names if n in args.only.split(","))
    if args.drop:
        dropped = set(args.drop.split(","))
        return tuple(n for n in names if n not in dropped)
    return names


def cmd_train(args, config):
    if not args.features:
        raise LexevoError("missing required input: --features")
    vectors = features_mod.read_feature_vectors(args.features)
    fitted = model_mod.fit(vectors, features=_feature_subset(args))
    out = args.model or os.path.join(config.out, "model.json")
    model_mod.save_model(fitted, out)
    return EXIT_OK


def cmd_predict(args, config):
    if not args.features or not args.model:
        raise LexevoError("predict needs --features and --model")
    vectors = features_mod.read_feature_vectors(args.features)
    fitted = model_mod.load_model(args.model)
    lines = ["synset_id\tsense_id\twin_probability\tlog_odds"]
    for v in vectors:
        bare = v.without_class()
        p = model_mod.win_probability(fitted, bare)
        odds = model_mod.win_log_odds(fitted, bare)
        lines.append(f"{v.synset_id}\t{v.sense}\t{p!r}\t{odds!r}")
    os.makedirs(config.out, exist_ok=True)
    atomic_write_text(os.path.join(config.out, "probabilities.tsv"),
                      "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_evaluate(args, config):
    if not args.dataset or not args.probabilities:
        raise LexevoError("evaluate needs --dataset and --probabilities")
    from .lexicon import SenseId

    ds = dataset_mod.read_dataset(args.dataset,
                                  os.path.splitext(args.dataset)[0] + ".json")
    # rank by the log-odds column when present; probabilities saturate
    scores_by_sense = {}
    with open(args.probabilities, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n").split("\t")
        column = len(header) - 1 if header[-1] == "log_odds" else 2
        for line in handle:
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            scores_by_sense[SenseId.parse(fields[1])] = float(fields[column])
    counts, scores, outcomes = evaluate_mod.evaluate_predictions(
        ds.snapshots, scores_by_sense
    )
    report = evaluate_mod.evaluation_report(counts, scores)
    report["dataset"] = ds.summary()
    os.makedirs(config.out, exist_ok=True)
    atomic_write_json(os.path.join(config.out, "report.json"), report)
    atomic_write_text(os.path.join(config.out, "outcomes.tsv"),
                      evaluate_mod.outcomes_to_tsv(outcomes))
    return EXIT_OK


def _report_dir(config, experiment, window):
    path = os.path.join(config.out, "reports", experiment,
                        str(config.cycle_years), window.label())
    os.makedirs(path, exist_ok=True)
    return path


def cmd_ablate(args, config):
    inputs, _, _ = _load_inputs(config)
    train_window, test_window = _window_pairs(config)[-1]
    feature_list = ([args.feature] if args.feature
                    else list(features_mod.FEATURE_NAMES))
    rows = []
    for feature in feature_list:
        spec = experiments_mod.AblationSpec(args.mode, feature)
        rows.append(experiments_mod.run_ablation(
            spec, train_window, test_window, inputs,
            seed=config.seed, workers=config.workers,
        ))
    directory = _report_dir(config, f"ablation_{args.mode}", test_window)
    atomic_write_json(os.path.join(directory, "report.json"), {"rows": rows})
    atomic_write_text(os.path.join(directory, "ablation.csv"),
                      _rows_to_csv(rows))
    return EXIT_OK


def cmd_sweep(args, config):
    inputs, _, _ = _load_inputs(config)
    cycles = [int(c) for c in args.cycles.split(",") if c]
    result = experiments_mod.run_cycle_sweep(
        cycles, inputs, config.anchor_year, config.floor_year,
        seed=config.seed, workers=config.workers,
    )
    directory = os.path.join(config.out, "reports", "sweep")
    os.makedirs(directory, exist_ok=True)
    atomic_write_json(os.path.join(directory, "report.json"), result)
    atomic_write_text(os.path.join(directory, "sweep.csv"),
                      _rows_to_csv(result["rows"]))
    return EXIT_OK


def cmd_interpret(args, config):
    inputs, _, _ = _load_inputs(config)
    train_window, test_window = _window_pairs(config)[-1]
    run = experiments_mod.run_nbcp(train_window, test_window, inputs,
                                   seed=config.seed, workers=config.workers)
    tables = experiments_mod.interpretation_tables(run["model"])
    directory = _report_dir(config, "interpretation", test_window)
    atomic_write_json(os.path.join(directory, "report.json"), tables)
    atomic_write_text(os.path.join(directory, "scalar_features.csv"),
                      _rows_to_csv(tables["scalar_features"]))
    atomic_write_text(os.path.join(directory, "top_trigrams.csv"),
                      _rows_to_csv(tables["top_trigrams"]))
    return EXIT_OK


def cmd_plot_data(args, config):
    inputs, lexicon, _ = _load_inputs(config)
    synset = next((s for s in lexicon.synsets if s.id == args.synset), None)
    if synset is None:
        raise LexevoError(f"synset {args.synset!r} not found in lexicon")
    start, _, end = args.years.partition(":")
    years = range(int(start), int(end or start) + 1)
    member_series = [inputs.corpus.series(m.corpus_key()) for m in synset.members]
    rows = corpus_mod.synset_annual_shares(member_series, years)
    os.makedirs(config.out, exist_ok=True)
    atomic_write_text(
        os.path.join(config.out, f"shares_{synset.id}.csv"),
        corpus_mod.shares_to_csv(rows, synset.lemmas()),
    )
    return EXIT_OK


def _rows_to_csv(rows):
    if not rows:
        return "\n"
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()


_HANDLERS = {
    "ingest": cmd_ingest,
    "build-dataset": cmd_build_dataset,
    "extract-features": cmd_extract_features,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "sweep": cmd_sweep,
    "interpret": cmd_interpret,
    "plot-data": cmd_plot_data,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        config = resolve_config(args)
        return _HANDLERS[args.command](args, config)
    except (LexevoError, OSError, ValueError) as exc:
        print(f"evocli: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
