"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class EmbeddingFormatError(WorkbenchError):
    """An embedding text stream violates the declared format."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OutOfVocabularyError(WorkbenchError):
    """A requested word is not present in the embedding space."""

    def __init__(self, word: str):
        super().__init__(f"word not in vocabulary: {word!r}")
        self.word = word


class ZeroNormError(WorkbenchError):
    """Cosine similarity is undefined for a zero-length vector."""


class DimensionMismatchError(WorkbenchError):
    """Vector lengths disagree with each other or with the space."""


class VersionConflictError(WorkbenchError):
    """A mutation was based on a version that is no longer current."""

    def __init__(self, expected: int, actual: int):
        super().__init__(
            f"stale base version {actual}; current version is {expected}"
        )
        self.expected = expected
        self.actual = actual


class NothingToUndoError(WorkbenchError):
    """Undo was requested but no committed change remains to revert."""


class ChainMismatchError(WorkbenchError):
    """A journal's version chain does not line up with the given base."""


class SingularSystemError(WorkbenchError):
    """The closed-form refit system has no unique solution (zero anchors)."""
