"""Exception types raised across the library."""


class ConceptBagError(Exception):
    """Base class for all library errors."""


class MissingDirectory(ConceptBagError):
    """A required dataset directory does not exist."""


class UnreadableFile(ConceptBagError):
    """A dataset file could not be read; the message names the file."""


class EmptyVocabulary(ConceptBagError):
    """No n-gram survived dictionary filtering."""


class DimensionMismatch(ConceptBagError):
    """Vector or matrix dimensions are inconsistent."""


class MalformedLine(ConceptBagError):
    """An embedding file line could not be parsed; message carries the line number."""


class UnknownWord(ConceptBagError):
    """An n-gram word is absent from the word-vector dictionary."""

    def __init__(self, word, position=None):
        self.word = word
        self.position = position
        loc = f" at position {position}" if position is not None else ""
        super().__init__(f"word {word!r}{loc} has no vector")


class EmptyCorpus(ConceptBagError):
    """No token survived min-count filtering."""


class TooFewPoints(ConceptBagError):
    """Fewer points than requested clusters."""


class SingleClass(ConceptBagError):
    """Training labels contain only one class."""


class LengthMismatch(ConceptBagError):
    """Two aligned sequences have different lengths."""


class NonFiniteFeature(ConceptBagError):
    """A feature matrix contains NaN or infinity."""


class RankRequestTooLarge(ConceptBagError):
    """Requested SVD rank exceeds min(rows, cols)."""


class TooFewDocuments(ConceptBagError):
    """Not enough documents to build the requested folds."""
