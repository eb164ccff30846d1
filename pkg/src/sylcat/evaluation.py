"""Metrics, k-fold cross-validation, and error attribution."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, replace
from typing import Sequence, Union

from . import rng
from .corpus import Corpus, kfold_split
from .errors import TooFewWordsError
from .evolve import GaConfig, evolve
from .hmm import HmmModel, syllabify, train
from .phonology import AnnotatedWord, CategoryMap, Syllabification, render


@dataclass(frozen=True)
class EvalReport:
    """Word accuracy, pooled boundary metrics, and per-phone blame."""

    word_accuracy: float
    boundary_precision: float
    boundary_recall: float
    boundary_f1: float
    word_count: int
    error_count: int
    boundary_tp: int
    boundary_fp: int
    boundary_fn: int
    boundary_tn: int
    per_phone_blame: dict[str, int]
    mis_syllabified: tuple[tuple[str, str, str], ...]


def evaluate(model: HmmModel, words: Sequence[AnnotatedWord]) -> EvalReport:
    """Decode every word; a word counts as correct only on an exact
    boundary-vector match.  Boundary precision/recall pool all gaps."""
    if not words:
        raise TooFewWordsError("nothing to evaluate")
    tp = fp = fn = tn = 0
    blame: dict[str, int] = {}
    misses: list[tuple[str, str, str]] = []
    for word in words:
        predicted = syllabify(model, word.phones).boundaries
        if predicted != word.boundaries:
            misses.append(
                (
                    word.orthography,
                    render(word),
                    render(Syllabification(word.phones, predicted)),
                )
            )
        for t, (pred, gold) in enumerate(zip(predicted, word.boundaries)):
            if pred and gold:
                tp += 1
            elif pred:
                fp += 1
            elif gold:
                fn += 1
            else:
                tn += 1
            if pred != gold:
                for phone in (word.phones[t], word.phones[t + 1]):
                    blame[phone] = blame.get(phone, 0) + 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return EvalReport(
        word_accuracy=(len(words) - len(misses)) / len(words),
        boundary_precision=precision,
        boundary_recall=recall,
        boundary_f1=f1,
        word_count=len(words),
        error_count=len(misses),
        boundary_tp=tp,
        boundary_fp=fp,
        boundary_fn=fn,
        boundary_tn=tn,
        per_phone_blame=blame,
        mis_syllabified=tuple(misses),
    )


@dataclass(frozen=True)
class CrossValidationResult:
    fold_reports: tuple[EvalReport, ...]
    mean_accuracy: float
    stddev_accuracy: float


MapSource = Union[CategoryMap, GaConfig]


def cross_validate(
    corpus: Corpus,
    map_source: MapSource,
    k: int = 10,
    seed: int = 0,
    alpha: float = 0.1,
    jobs: int = 1,
) -> CrossValidationResult:
    """Train on k-1 folds, test on the held-out fold, for every fold.

    With a GaConfig as map_source the GA runs per fold on that fold's
    training words only (no test leakage); each fold derives its own seed
    from the config seed.  The final per-fold model uses the GA's alpha
    in that case, otherwise the alpha given here.
    """
    split = kfold_split(corpus, k, seed)
    reports: list[EvalReport] = []
    for fold in range(k):
        train_words = [corpus.words[i] for i in split.train_indices(fold)]
        test_words = [corpus.words[i] for i in split.fold_indices(fold)]
        if isinstance(map_source, CategoryMap):
            cmap = map_source
            fold_alpha = alpha
        else:
            config = replace(
                map_source, seed=rng.derive_seed(map_source.seed, "fold", fold)
            )
            cmap, _ = evolve(
                train_words, config, alphabet=corpus.alphabet, jobs=jobs
            )
            fold_alpha = config.alpha
        model = train(train_words, cmap, fold_alpha)
        reports.append(evaluate(model, test_words))
    accuracies = [r.word_accuracy for r in reports]
    return CrossValidationResult(
        tuple(reports),
        statistics.fmean(accuracies),
        statistics.pstdev(accuracies),
    )


def report_as_dict(report: EvalReport) -> dict:
    """Structured form of a report (nested lists, JSON-friendly)."""
    return {
        "word_accuracy": report.word_accuracy,
        "boundary_precision": report.boundary_precision,
        "boundary_recall": report.boundary_recall,
        "boundary_f1": report.boundary_f1,
        "word_count": report.word_count,
        "error_count": report.error_count,
        "boundary_confusion": {
            "tp": report.boundary_tp,
            "fp": report.boundary_fp,
            "fn": report.boundary_fn,
            "tn": report.boundary_tn,
        },
        "per_phone_blame": dict(
            sorted(report.per_phone_blame.items(), key=lambda kv: (-kv[1], kv[0]))
        ),
        "mis_syllabified": [list(entry) for entry in report.mis_syllabified],
    }


def format_report(report: EvalReport, max_misses: int = 20) -> str:
    """Human-readable report text."""
    lines = [
        f"words evaluated:    {report.word_count}",
        f"word accuracy:      {report.word_accuracy:.4f}"
        f"  ({report.word_count - report.error_count}/{report.word_count})",
        f"boundary precision: {report.boundary_precision:.4f}",
        f"boundary recall:    {report.boundary_recall:.4f}",
        f"boundary f1:        {report.boundary_f1:.4f}",
    ]
    if report.per_phone_blame:
        worst = sorted(
            report.per_phone_blame.items(), key=lambda kv: (-kv[1], kv[0])
        )[:10]
        lines.append(
            "most blamed phones: "
            + ", ".join(f"{p} ({c})" for p, c in worst)
        )
    if report.mis_syllabified:
        lines.append(f"mis-syllabified ({report.error_count} total):")
        for orth, gold, predicted in report.mis_syllabified[:max_misses]:
            lines.append(f"  {orth}\tgold={gold}\tpredicted={predicted}")
        if report.error_count > max_misses:
            lines.append(f"  ... and {report.error_count - max_misses} more")
    return "\n".join(lines)
