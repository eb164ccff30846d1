"""Exception hierarchy shared by all sylcat modules."""

from __future__ import annotations


class SylcatError(Exception):
    """Base class for every error raised by this package."""


class EmptyWordError(SylcatError):
    """A transcription contained no phones."""


class MalformedBoundaryError(SylcatError):
    """A hyphen appeared where no syllable boundary can exist."""


class ReservedCharacterError(SylcatError):
    """A phone symbol used a reserved or whitespace character."""

    def __init__(self, symbol: str):
        super().__init__(f"reserved or invalid phone symbol: {symbol!r}")
        self.symbol = symbol


class UnknownPhoneError(SylcatError):
    """A phone is absent from the category map in use."""

    def __init__(self, symbol: str):
        super().__init__(f"phone not covered by the category map: {symbol!r}")
        self.symbol = symbol


class CorpusParseError(SylcatError):
    """A corpus line failed validation; wraps the underlying cause."""

    def __init__(self, line_no: int, cause: Exception):
        super().__init__(f"line {line_no}: {cause}")
        self.line_no = line_no
        self.cause = cause


class EmptyCorpusError(SylcatError):
    """No usable entries were found in a corpus source."""


class MissingFieldError(SylcatError):
    """An import source line has fewer fields than requested."""

    def __init__(self, line_no: int, needed: int, found: int):
        super().__init__(
            f"line {line_no}: needs at least {needed} fields, found {found}"
        )
        self.line_no = line_no


class AllLinesSkippedError(SylcatError):
    """Every line of an import source failed validation."""


class TooFewWordsError(SylcatError):
    """The corpus is too small for the requested split."""


class WordTooShortError(SylcatError):
    """A single-phone word has no bigrams to encode."""


class ShapeMismatchError(SylcatError):
    """Boundary bits do not line up with the phone sequence."""


class NoTrainableWordsError(SylcatError):
    """Every training word has fewer than two phones."""


class AlphabetMismatchError(SylcatError):
    """Two chromosomes do not share an alphabet and category count."""


class NoErrors(SylcatError):
    """Decoding was perfect, so there is no phone to blame."""


class ConfigError(SylcatError):
    """A configuration value is out of its legal range."""


class ModelFormatError(SylcatError):
    """A model file is corrupt or has an unsupported layout."""
