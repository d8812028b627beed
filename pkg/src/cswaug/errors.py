"""Exception types shared across the package."""


class CswAugError(Exception):
    """Base class for all cswaug errors."""


class EmptySentenceError(CswAugError):
    """A sentence had no tokens left after normalization."""


class LineCountMismatchError(CswAugError):
    """Line-aligned files disagree on the number of lines."""


class MalformedLinkError(CswAugError):
    """An alignment item is not of the form ``i-j`` with integer indices."""


class IndexOutOfRangeError(CswAugError):
    """An alignment link points outside the declared sentence lengths."""


class NoEligiblePositionError(CswAugError):
    """No source position qualifies for replacement."""


class TagLengthMismatchError(CswAugError):
    """A switch-tag vector does not match the target token count."""


class NoCandidateError(CswAugError):
    """No legal code-switched candidate exists for a sentence."""


class EmptyCandidatesError(CswAugError):
    """A sampler was handed an empty candidate list."""


class EmptyCorpusError(CswAugError):
    """A language model cannot be trained on an empty corpus."""


class DegenerateInputError(CswAugError):
    """Correlation input is constant or too short."""


class LengthMismatchError(CswAugError):
    """Sentence-aligned corpora disagree on the number of sentences."""


class MissingResourceError(CswAugError):
    """A strategy-specific resource (lexicon, alignments, tags) is absent."""


class ParseError(CswAugError):
    """A data file could not be parsed; carries file and line context."""

    def __init__(self, message, path=None, line_no=None):
        ctx = ""
        if path is not None:
            ctx = f"{path}:" if line_no is None else f"{path}:{line_no}:"
        super().__init__(f"{ctx} {message}" if ctx else message)
        self.path = path
        self.line_no = line_no
