"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error.  Results go to
stdout, diagnostics to stderr.  Numeric GA settings may also come from a
``key = value`` config file (``--config``); explicit flags override it.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Sequence

from .corpus import DEFAULT_STRIP_CHARS, import_celex, read_corpus
from .errors import ConfigError, SylcatError
from .evaluation import (
    CrossValidationResult,
    cross_validate,
    evaluate,
    format_report,
    report_as_dict,
)
from .evolve import GaConfig, evolve
from .hmm import DEFAULT_ALPHA, load_model, save_model, syllabify, train
from .phonology import BOUNDARY_CHAR, CategoryMap, render

_GA_FLOAT_KEYS = (
    "rate_min",
    "rate_max",
    "sigma_ref",
    "alpha",
    "holdout_fraction",
    "target_fitness",
)
_GA_INT_KEYS = (
    "k",
    "population_size",
    "max_generations",
    "elite_count",
    "refine_period",
    "seed",
)


class _Parser(argparse.ArgumentParser):
    """argparse with exit code 1 on usage errors (2 is for data errors)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_config_file(path) -> dict:
    """Parse `key = value` lines; unknown keys are usage errors."""
    values: dict[str, float | int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep:
                raise ConfigError(f"{path}:{line_no}: expected key = value")
            if key in _GA_INT_KEYS:
                values[key] = int(value)
            elif key in _GA_FLOAT_KEYS:
                values[key] = float(value)
            else:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
    return values


def _ga_config(args) -> GaConfig:
    """Defaults < config file < explicit flags."""
    values: dict = {}
    if args.config:
        values.update(_read_config_file(args.config))
    flag_map = {
        "k": args.k,
        "population_size": args.pop,
        "max_generations": args.gens,
        "elite_count": args.elite,
        "rate_min": args.rate_min,
        "rate_max": args.rate_max,
        "sigma_ref": args.sigma_ref,
        "refine_period": args.refine_period,
        "alpha": args.alpha,
        "holdout_fraction": args.holdout,
        "seed": args.seed,
        "target_fitness": args.target_fitness,
    }
    values.update({k: v for k, v in flag_map.items() if v is not None})
    config = GaConfig(**values)
    config.validate()
    return config


def _add_ga_flags(parser: argparse.ArgumentParser) -> None:
    ga = parser.add_argument_group("genetic algorithm")
    ga.add_argument("--k", type=int, help="number of categories (default 12)")
    ga.add_argument("--pop", type=int, help="population size (default 100)")
    ga.add_argument("--gens", type=int, help="generation budget (default 500)")
    ga.add_argument("--elite", type=int, help="elites copied unchanged (default 2)")
    ga.add_argument("--rate-min", type=float, help="mutation rate floor (default 0.01)")
    ga.add_argument("--rate-max", type=float, help="mutation rate cap (default 0.15)")
    ga.add_argument(
        "--sigma-ref",
        type=float,
        help="fitness-spread reference for the adaptive rate (default 0.02)",
    )
    ga.add_argument(
        "--refine-period",
        type=int,
        help="generations between refinement passes (default 10)",
    )
    ga.add_argument("--alpha", type=float, help="HMM smoothing constant (default 0.1)")
    ga.add_argument(
        "--holdout",
        type=float,
        help="fitness holdout fraction of the training words (default 0.2)",
    )
    ga.add_argument("--seed", type=int, help="master RNG seed (default 0)")
    ga.add_argument(
        "--target-fitness", type=float, help="stop early at this best fitness"
    )
    ga.add_argument(
        "--config", help="key = value file with the settings above; flags win"
    )
    ga.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="parallel fitness workers; never changes results (default 1)",
    )


def _resolve_map(name: str, corpus) -> CategoryMap:
    if name == "identity":
        return CategoryMap.identity(corpus.alphabet)
    return CategoryMap.load(name)


def _cmd_import_celex(args) -> int:
    with open(args.infile, encoding=args.encoding) as fh:
        lines, skipped = import_celex(
            fh,
            field_index=args.field,
            strip_chars=args.strip,
            orth_index=args.orth_field,
        )
    with open(args.out, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    print(
        f"imported {len(lines)} entries, skipped {skipped} invalid lines",
        file=sys.stderr,
    )
    return 0


def _cmd_train(args) -> int:
    corpus = read_corpus(args.corpus)
    cmap = _resolve_map(args.map, corpus)
    model = train(corpus.words, cmap, args.alpha)
    save_model(model, args.out)
    print(
        f"trained on {len(corpus)} words, {model.num_states} states -> {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_syllabify(args) -> int:
    model = load_model(args.model)
    if args.word is not None:
        sources = [args.word]
    else:
        sources = (line.rstrip("\n") for line in sys.stdin)
    for text in sources:
        if not text.strip():
            continue
        phones = tuple(ch for ch in text if ch != BOUNDARY_CHAR)
        print(render(syllabify(model, phones)))
    return 0


def _cmd_evolve(args) -> int:
    corpus = read_corpus(args.corpus)
    config = _ga_config(args)

    def progress(record):
        print(
            f"generation {record.generation}: best={record.best:.4f} "
            f"mean={record.mean:.4f} rate={record.mutation_rate:.3f}",
            file=sys.stderr,
        )

    best, history = evolve(
        corpus.words,
        config,
        alphabet=corpus.alphabet,
        jobs=args.jobs,
        on_generation=progress if not args.quiet else None,
    )
    best.save(args.out)
    if args.history:
        history.save_csv(args.history)
    print(
        f"best fitness {history.records[-1].best:.4f} -> {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_evaluate(args) -> int:
    model = load_model(args.model)
    corpus = read_corpus(args.corpus)
    report = evaluate(model, corpus.words)
    if args.format == "structured":
        print(json.dumps(report_as_dict(report), indent=2))
    else:
        print(format_report(report))
    return 0


def _format_cv(result: CrossValidationResult, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(
            {
                "mean_accuracy": result.mean_accuracy,
                "stddev_accuracy": result.stddev_accuracy,
                "folds": [report_as_dict(r) for r in result.fold_reports],
            },
            indent=2,
        )
    lines = [
        f"fold {i}: accuracy {r.word_accuracy:.4f} "
        f"({r.word_count - r.error_count}/{r.word_count})"
        for i, r in enumerate(result.fold_reports)
    ]
    lines.append(
        f"mean accuracy {result.mean_accuracy:.4f} "
        f"(stddev {result.stddev_accuracy:.4f})"
    )
    return "\n".join(lines)


def _cmd_cross_validate(args) -> int:
    corpus = read_corpus(args.corpus)
    if args.evolve:
        source = _ga_config(args)
    else:
        source = _resolve_map(args.map, corpus)
    alpha = args.alpha if args.alpha is not None else DEFAULT_ALPHA
    result = cross_validate(
        corpus,
        source,
        k=args.k_folds,
        seed=args.seed if args.seed is not None else 0,
        alpha=alpha,
        jobs=args.jobs,
    )
    print(_format_cv(result, args.format))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="sylcat",
        description="Syllabify phonetic transcriptions with an HMM over "
        "phone categories; learn the categories with a genetic algorithm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "import-celex", help="convert a backslash-delimited lexicon to corpus format"
    )
    p.add_argument("--in", dest="infile", required=True, help="lexicon file")
    p.add_argument(
        "--field", type=int, required=True, help="syllabified-transcription column"
    )
    p.add_argument(
        "--strip",
        default=DEFAULT_STRIP_CHARS,
        help="characters removed from transcriptions (default %(default)r)",
    )
    p.add_argument(
        "--orth-field", type=int, default=0, help="orthography column (default 0)"
    )
    p.add_argument("--encoding", default="utf-8", help="input encoding")
    p.add_argument("--out", required=True, help="corpus file to write")
    p.set_defaults(fn=_cmd_import_celex)

    p = sub.add_parser("train", help="train an HMM from a corpus and a map")
    p.add_argument("--corpus", required=True, help="syllabified corpus file")
    p.add_argument(
        "--map",
        required=True,
        help="category-map file, or 'identity' for one category per phone",
    )
    p.add_argument(
        "--alpha",
        type=float,
        default=DEFAULT_ALPHA,
        help="smoothing constant (default %(default)s)",
    )
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("syllabify", help="insert syllable boundaries into words")
    p.add_argument("--model", required=True, help="model file from 'train'")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--word", help="one transcription (hyphens ignored)")
    group.add_argument(
        "--stdin", action="store_true", help="read transcriptions, one per line"
    )
    p.set_defaults(fn=_cmd_syllabify)

    p = sub.add_parser("evolve", help="learn a category map with the GA")
    p.add_argument("--corpus", required=True, help="syllabified corpus file")
    p.add_argument("--out", required=True, help="category-map file to write")
    p.add_argument("--history", help="per-generation fitness CSV to write")
    p.add_argument("--quiet", action="store_true", help="no per-generation progress")
    _add_ga_flags(p)
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("evaluate", help="score a model against a gold corpus")
    p.add_argument("--model", required=True, help="model file from 'train'")
    p.add_argument("--corpus", required=True, help="gold syllabified corpus file")
    p.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="report style (default %(default)s)",
    )
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser(
        "cross-validate", help="k-fold evaluation with a fixed or evolved map"
    )
    p.add_argument("--corpus", required=True, help="syllabified corpus file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--map", help="category-map file or 'identity'")
    group.add_argument(
        "--evolve", action="store_true", help="evolve a map per fold (slow)"
    )
    p.add_argument(
        "--k-folds", type=int, default=10, help="number of folds (default %(default)s)"
    )
    p.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="report style (default %(default)s)",
    )
    _add_ga_flags(p)
    p.set_defaults(fn=_cmd_cross_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        # out-of-range settings are usage errors, like unparsable flags
        print(f"sylcat: error: {exc}", file=sys.stderr)
        return 1
    except SylcatError as exc:
        print(f"sylcat: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"sylcat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
