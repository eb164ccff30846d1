"""Core domain types: phones, alphabets, category maps, syllabified words.

A phone is a single printable character (the DISC convention of one
character per phone).  ``-`` marks syllable boundaries in transcriptions
and ``#`` starts comments in corpus files, so neither may be a phone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    EmptyWordError,
    MalformedBoundaryError,
    ReservedCharacterError,
    ShapeMismatchError,
    UnknownPhoneError,
)

BOUNDARY_CHAR = "-"
COMMENT_CHAR = "#"


def validate_phone(symbol: str) -> str:
    """Check that a symbol is a legal phone; returns it unchanged."""
    if (
        len(symbol) != 1
        or symbol in (BOUNDARY_CHAR, COMMENT_CHAR)
        or symbol.isspace()
        or not symbol.isprintable()
    ):
        raise ReservedCharacterError(symbol)
    return symbol


class PhoneAlphabet:
    """An ordered, duplicate-free set of phones (first-seen order)."""

    def __init__(self, phones: Iterable[str]):
        seen: dict[str, int] = {}
        for p in phones:
            validate_phone(p)
            if p not in seen:
                seen[p] = len(seen)
        self._phones: tuple[str, ...] = tuple(seen)
        self._index = seen

    @property
    def phones(self) -> tuple[str, ...]:
        return self._phones

    def index(self, phone: str) -> int:
        try:
            return self._index[phone]
        except KeyError:
            raise UnknownPhoneError(phone) from None

    def __contains__(self, phone: str) -> bool:
        return phone in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self._phones)

    def __len__(self) -> int:
        return len(self._phones)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PhoneAlphabet) and self._phones == other._phones

    def __hash__(self) -> int:
        return hash(self._phones)

    def __repr__(self) -> str:
        return f"PhoneAlphabet({''.join(self._phones)!r})"


@dataclass(frozen=True)
class CategoryMap:
    """A total many-to-one phone -> category table over an alphabet.

    ``genes[i]`` is the category of ``alphabet.phones[i]``; the same tuple
    doubles as the GA chromosome.  Category ids are dense integers in
    ``[0, k)``; some ids may be unused.
    """

    alphabet: PhoneAlphabet
    k: int
    genes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if len(self.genes) != len(self.alphabet):
            raise ShapeMismatchError(
                f"{len(self.genes)} genes for {len(self.alphabet)} phones"
            )
        if any(not (0 <= g < self.k) for g in self.genes):
            raise ValueError(f"gene out of range [0, {self.k})")

    @classmethod
    def identity(cls, alphabet: PhoneAlphabet) -> CategoryMap:
        """Each phone its own category: the no-category baseline."""
        n = len(alphabet)
        return cls(alphabet, n, tuple(range(n)))

    @classmethod
    def from_assignment(
        cls, assignment: dict[str, int], k: int | None = None
    ) -> CategoryMap:
        """Build from an explicit phone -> category dict (insertion order)."""
        alphabet = PhoneAlphabet(assignment)
        genes = tuple(assignment[p] for p in alphabet)
        if k is None:
            k = max(genes) + 1 if genes else 1
        return cls(alphabet, k, genes)

    def category_of(self, phone: str) -> int:
        return self.genes[self.alphabet.index(phone)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.alphabet.phones, self.genes))

    def with_gene(self, phone: str, category: int) -> CategoryMap:
        """A copy with one phone reassigned."""
        i = self.alphabet.index(phone)
        genes = self.genes[:i] + (category,) + self.genes[i + 1 :]
        return CategoryMap(self.alphabet, self.k, genes)

    def relabeled(self, perm: Sequence[int]) -> CategoryMap:
        """Apply a bijection on [0, k) to every gene."""
        if sorted(perm) != list(range(self.k)):
            raise ValueError("perm must be a bijection on [0, k)")
        return CategoryMap(self.alphabet, self.k, tuple(perm[g] for g in self.genes))

    def canonical_genes(self) -> tuple[int, ...]:
        """Genes relabeled by first occurrence; equal for relabel-equivalent maps."""
        relabel: dict[int, int] = {}
        out = []
        for g in self.genes:
            if g not in relabel:
                relabel[g] = len(relabel)
            out.append(relabel[g])
        return tuple(out)

    def to_lines(self) -> list[str]:
        lines = [f"k={self.k}"]
        lines.extend(f"{p}\t{g}" for p, g in zip(self.alphabet.phones, self.genes))
        return lines

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> CategoryMap:
        k: int | None = None
        phones: list[str] = []
        genes: list[int] = []
        for raw in lines:
            line = raw.strip()
            if not line or line.startswith(COMMENT_CHAR):
                continue
            if line.startswith("k="):
                k = int(line[2:])
                continue
            phone, _, cat = line.partition("\t")
            if not _:
                raise ValueError(f"malformed category-map line: {raw!r}")
            phones.append(validate_phone(phone))
            genes.append(int(cat))
        if k is None:
            raise ValueError("category-map file lacks a k=<K> header")
        return cls(PhoneAlphabet(phones), k, tuple(genes))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.to_lines()) + "\n")

    @classmethod
    def load(cls, path) -> CategoryMap:
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)


def _check_shape(phones: tuple[str, ...], boundaries: tuple[int, ...]) -> None:
    if not phones:
        raise EmptyWordError("a word needs at least one phone")
    if len(boundaries) != len(phones) - 1:
        raise ShapeMismatchError(
            f"{len(boundaries)} boundary bits for {len(phones)} phones"
        )
    if any(b not in (0, 1) for b in boundaries):
        raise ShapeMismatchError("boundary bits must be 0 or 1")


@dataclass(frozen=True)
class AnnotatedWord:
    """A phone sequence with gold boundary bits (one per inter-phone gap)."""

    orthography: str
    phones: tuple[str, ...]
    boundaries: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_shape(self.phones, self.boundaries)


@dataclass(frozen=True)
class Syllabification:
    """A phone sequence with predicted boundary bits."""

    phones: tuple[str, ...]
    boundaries: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_shape(self.phones, self.boundaries)


def parse_annotated(text: str, orthography: str = "") -> AnnotatedWord:
    """Parse a hyphen-delimited transcription like ``{b-sEnt``.

    Non-hyphen characters become phones; a hyphen between two phones sets
    that gap's boundary bit.  Leading, trailing, or doubled hyphens are
    malformed.
    """
    if not text:
        raise EmptyWordError("empty transcription")
    if (
        text.startswith(BOUNDARY_CHAR)
        or text.endswith(BOUNDARY_CHAR)
        or BOUNDARY_CHAR * 2 in text
    ):
        raise MalformedBoundaryError(f"misplaced hyphen in {text!r}")
    phones: list[str] = []
    boundaries: list[int] = []
    pending = False
    for ch in text:
        if ch == BOUNDARY_CHAR:
            pending = True
        else:
            validate_phone(ch)
            if phones:
                boundaries.append(1 if pending else 0)
            pending = False
            phones.append(ch)
    if not phones:
        raise EmptyWordError("no phones in transcription")
    return AnnotatedWord(orthography, tuple(phones), tuple(boundaries))


def render(syllabification: AnnotatedWord | Syllabification) -> str:
    """Inverse of parse_annotated: hyphenate at every 1-bit."""
    phones = syllabification.phones
    bits = syllabification.boundaries
    parts = [phones[0]]
    for phone, bit in zip(phones[1:], bits):
        if bit:
            parts.append(BOUNDARY_CHAR)
        parts.append(phone)
    return "".join(parts)


def categorize(phones: Sequence[str], cmap: CategoryMap) -> tuple[int, ...]:
    """Element-wise phone -> category lookup."""
    return tuple(cmap.category_of(p) for p in phones)
