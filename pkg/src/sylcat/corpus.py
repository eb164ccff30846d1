"""Loading, importing, and splitting syllabified lexicons.

The portable corpus format is UTF-8 text, one entry per line:
``orthography<TAB>syllabified-transcription``.  Blank lines and lines
starting with ``#`` are ignored.  CELEX-style lexicons are an import
source only; they are converted to this format before use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import rng
from .errors import (
    AllLinesSkippedError,
    CorpusParseError,
    EmptyCorpusError,
    MissingFieldError,
    SylcatError,
    TooFewWordsError,
)
from .phonology import COMMENT_CHAR, AnnotatedWord, PhoneAlphabet, parse_annotated, render

DEFAULT_STRIP_CHARS = "'\"[]"


@dataclass(frozen=True)
class Corpus:
    """Deduplicated annotated words plus their phone alphabet."""

    words: tuple[AnnotatedWord, ...]
    alphabet: PhoneAlphabet

    def __len__(self) -> int:
        return len(self.words)


def _build_corpus(words: list[AnnotatedWord]) -> Corpus:
    unique: list[AnnotatedWord] = []
    seen: set[tuple[tuple[str, ...], tuple[int, ...]]] = set()
    for w in words:
        key = (w.phones, w.boundaries)
        if key not in seen:
            seen.add(key)
            unique.append(w)
    alphabet = PhoneAlphabet(p for w in unique for p in w.phones)
    return Corpus(tuple(unique), alphabet)


def load_corpus(source: Iterable[str]) -> Corpus:
    """Parse corpus lines; exact (phones, boundaries) duplicates are dropped.

    Raises CorpusParseError with the 1-based line number on any bad entry
    and EmptyCorpusError when nothing usable remains.
    """
    words: list[AnnotatedWord] = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith(COMMENT_CHAR):
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise CorpusParseError(
                line_no, SylcatError("expected orthography<TAB>transcription")
            )
        orthography, transcription = fields[0], fields[1]
        try:
            words.append(parse_annotated(transcription, orthography))
        except SylcatError as exc:
            raise CorpusParseError(line_no, exc) from exc
    if not words:
        raise EmptyCorpusError("no corpus entries found")
    return _build_corpus(words)


def read_corpus(path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return load_corpus(fh)


def corpus_to_lines(corpus: Corpus) -> list[str]:
    """Render a corpus back to the portable format (inverse of load_corpus)."""
    return [f"{w.orthography}\t{render(w)}" for w in corpus.words]


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in corpus_to_lines(corpus):
            fh.write(line + "\n")


def import_celex(
    source: Iterable[str],
    field_index: int,
    strip_chars: str = DEFAULT_STRIP_CHARS,
    orth_index: int = 0,
) -> tuple[list[str], int]:
    """Convert a backslash-delimited lexicon to portable corpus lines.

    ``field_index`` selects the syllabified-transcription column and
    ``orth_index`` the orthography column.  Characters in ``strip_chars``
    (stress marks and the like) are removed from the transcription before
    validation.  Lines whose stripped transcription still fails validation
    are skipped, not fatal; the skip count is returned alongside the
    emitted lines.  A line with too few fields is a hard error.
    """
    needed = max(field_index, orth_index) + 1
    out: list[str] = []
    skipped = 0
    total = 0
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        total += 1
        fields = line.split("\\")
        if len(fields) < needed:
            raise MissingFieldError(line_no, needed, len(fields))
        orthography = fields[orth_index]
        transcription = fields[field_index]
        for ch in strip_chars:
            transcription = transcription.replace(ch, "")
        try:
            parse_annotated(transcription, orthography)
        except SylcatError:
            skipped += 1
            continue
        if "\t" in orthography:
            orthography = orthography.replace("\t", " ")
        out.append(f"{orthography}\t{transcription}")
    if total and not out:
        raise AllLinesSkippedError(f"all {total} lines failed validation")
    return out, skipped


@dataclass(frozen=True)
class FoldSplit:
    """A k-way partition of corpus indices; sizes differ by at most one."""

    k: int
    assignments: tuple[int, ...]

    def fold_indices(self, fold: int) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.assignments) if f == fold)

    def train_indices(self, fold: int) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.assignments) if f != fold)


def kfold_split(corpus: Corpus, k: int, seed: int) -> FoldSplit:
    """Seeded uniform shuffle, dealt round-robin into k folds."""
    n = len(corpus)
    if k < 2:
        raise TooFewWordsError(f"k must be >= 2, got {k}")
    if n < k:
        raise TooFewWordsError(f"{n} words cannot fill {k} folds")
    order = list(range(n))
    rng.stream(seed, "kfold", k).shuffle(order)
    assignments = [0] * n
    for pos, idx in enumerate(order):
        assignments[idx] = pos % k
    return FoldSplit(k, tuple(assignments))
