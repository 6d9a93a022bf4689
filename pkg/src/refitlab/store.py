"""Versioned storage of dense word-vector spaces.

A space is an immutable (vocabulary, matrix) pair identified by an integer
version id. Edits never mutate a space; they produce a new version through
:func:`apply_updates`, and :class:`EmbeddingStore` assigns version numbers
monotonically so undo ordering is well defined.

Two text formats are supported:

* ``word2vec-text`` — first line ``<vocab_count> <dim>``, then one row per
  word: ``<token> <c1> ... <cd>``, single-space separated.
* ``headerless`` — the same rows without the count/dim line; the dimension
  is inferred from the first row.

Saved files carry six decimal places per component, so a save/load round
trip reproduces each component to within 5e-7 absolutely.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmbeddingFormatError,
    NothingToUndoError,
    OutOfVocabularyError,
    VersionConflictError,
)

FORMATS = ("word2vec-text", "headerless")

# Fixed output precision: six decimal places (documented round-trip
# guarantee: max absolute component error 5e-7).
_COMPONENT_FORMAT = "%.6f"


class EmbeddingSpace:
    """Immutable versioned map from word tokens to dense float64 vectors."""

    __slots__ = ("_version_id", "_words", "_matrix", "_index")

    def __init__(self, version_id: int, words: Iterable[str], matrix: np.ndarray):
        words = tuple(words)
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise ValueError("matrix must be 2-dimensional (words x components)")
        if len(words) == 0:
            raise ValueError("an embedding space cannot be empty")
        if matrix.shape[0] != len(words):
            raise ValueError("matrix row count does not match word count")
        if matrix.shape[1] < 1:
            raise ValueError("vector dimension must be at least 1")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("vectors must be finite (no NaN or infinity)")
        seen = set()
        for word in words:
            if not word or any(ch.isspace() for ch in word):
                raise ValueError(f"invalid word token: {word!r}")
            if word in seen:
                raise ValueError(f"duplicate word token: {word!r}")
            seen.add(word)
        matrix.setflags(write=False)
        self._version_id = int(version_id)
        self._words = words
        self._matrix = matrix
        self._index = {w: i for i, w in enumerate(words)}

    @classmethod
    def from_entries(
        cls,
        entries: Mapping[str, Iterable[float]] | Iterable[tuple[str, Iterable[float]]],
        version_id: int = 1,
    ) -> "EmbeddingSpace":
        items = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        if not items:
            raise ValueError("an embedding space cannot be empty")
        words = [w for w, _ in items]
        matrix = np.array([list(v) for _, v in items], dtype=np.float64)
        return cls(version_id, words, matrix)

    @property
    def version_id(self) -> int:
        return self._version_id

    @property
    def dim(self) -> int:
        return self._matrix.shape[1]

    @property
    def words(self) -> tuple[str, ...]:
        return self._words

    @property
    def matrix(self) -> np.ndarray:
        """Read-only (n, dim) float64 matrix, rows in vocabulary order."""
        return self._matrix

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def index(self, word: str) -> int:
        try:
            return self._index[word]
        except KeyError:
            raise OutOfVocabularyError(word) from None

    def vector(self, word: str) -> np.ndarray:
        """Return the stored (read-only) vector for ``word``."""
        return self._matrix[self.index(word)]

    def entries(self) -> Iterator[tuple[str, np.ndarray]]:
        for i, word in enumerate(self._words):
            yield word, self._matrix[i]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"EmbeddingSpace(version={self._version_id}, "
            f"words={len(self._words)}, dim={self.dim})"
        )


@dataclass(frozen=True)
class VectorUpdateSet:
    """A batch of per-word vector replacements against a specific version."""

    base_version: int
    changes: Mapping[str, np.ndarray]

    def __post_init__(self):
        frozen = {}
        for word, vec in dict(self.changes).items():
            arr = np.array(vec, dtype=np.float64)
            arr.setflags(write=False)
            frozen[word] = arr
        object.__setattr__(self, "changes", frozen)


def get_vector(space: EmbeddingSpace, word: str) -> np.ndarray:
    """Look up one word's vector; raises OutOfVocabularyError when absent."""
    return space.vector(word)


def _parse_rows(
    lines: list[str], dim: int | None, first_line: int
) -> tuple[list[str], np.ndarray]:
    words: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    for offset, line in enumerate(lines):
        lineno = first_line + offset
        fields = line.split(" ")
        token = fields[0]
        if not token:
            raise EmbeddingFormatError("missing word token", line=lineno)
        if any(ch.isspace() for ch in token):
            raise EmbeddingFormatError(f"token contains whitespace: {token!r}", line=lineno)
        if token in seen:
            raise EmbeddingFormatError(f"duplicate word: {token!r}", line=lineno)
        if len(fields) < 2:
            raise EmbeddingFormatError("row has no vector components", line=lineno)
        if dim is None:
            dim = len(fields) - 1
        elif len(fields) - 1 != dim:
            raise EmbeddingFormatError(
                f"expected {dim} components, found {len(fields) - 1}", line=lineno
            )
        components = []
        for raw in fields[1:]:
            try:
                value = float(raw)
            except ValueError:
                raise EmbeddingFormatError(
                    f"non-numeric component: {raw!r}", line=lineno
                ) from None
            if not math.isfinite(value):
                raise EmbeddingFormatError(
                    f"non-finite component: {raw!r}", line=lineno
                )
            components.append(value)
        seen.add(token)
        words.append(token)
        rows.append(components)
    if not words:
        raise EmbeddingFormatError("input contains no embedding rows")
    return words, np.array(rows, dtype=np.float64)


def load_text(
    source: str | bytes | IO[str] | IO[bytes],
    format: str = "word2vec-text",
    version_id: int = 1,
) -> EmbeddingSpace:
    """Parse an embedding text stream into a validated space.

    ``source`` may be a string, UTF-8 bytes, or an open file. Any violation
    of the format (bad header, ragged rows, non-numeric or non-finite
    components, duplicate or empty tokens, empty input) raises
    :class:`EmbeddingFormatError`; a returned space always satisfies the
    space invariants.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EmbeddingFormatError(f"input is not valid UTF-8: {exc}") from None
    lines = source.splitlines()
    if not lines:
        raise EmbeddingFormatError("empty input")

    if format == "word2vec-text":
        header = lines[0].split(" ")
        if len(header) != 2:
            raise EmbeddingFormatError(
                f"header must be '<count> <dim>', got {lines[0]!r}", line=1
            )
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise EmbeddingFormatError(
                f"header must be '<count> <dim>', got {lines[0]!r}", line=1
            ) from None
        if count < 1 or dim < 1:
            raise EmbeddingFormatError(
                f"header count and dim must be positive, got {lines[0]!r}", line=1
            )
        body = lines[1:]
        if len(body) != count:
            raise EmbeddingFormatError(
                f"header declares {count} rows, found {len(body)}"
            )
        words, matrix = _parse_rows(body, dim, first_line=2)
    else:
        words, matrix = _parse_rows(lines, None, first_line=1)

    try:
        return EmbeddingSpace(version_id, words, matrix)
    except ValueError as exc:  # belt and braces: parser should have caught it
        raise EmbeddingFormatError(str(exc)) from None


def load_path(path, format: str = "word2vec-text") -> EmbeddingSpace:
    with open(path, "rb") as fh:
        return load_text(fh, format=format)


def save_text(space: EmbeddingSpace, format: str = "word2vec-text") -> str:
    """Serialize a space to embedding text (six decimal places per component)."""
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    out: list[str] = []
    if format == "word2vec-text":
        out.append(f"{len(space)} {space.dim}")
    for word, vec in space.entries():
        out.append(word + " " + " ".join(_COMPONENT_FORMAT % x for x in vec))
    return "\n".join(out) + "\n"


def save_path(space: EmbeddingSpace, path, format: str = "word2vec-text") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_text(space, format=format))


def apply_updates(
    space: EmbeddingSpace,
    updates: VectorUpdateSet,
    version_id: int | None = None,
) -> EmbeddingSpace:
    """Produce a new version with the given rows replaced.

    Unchanged rows are carried over bit-identically. The update set must
    target ``space``'s version; every changed word must already exist and
    its vector must be finite and of matching length.
    """
    if updates.base_version != space.version_id:
        raise VersionConflictError(expected=space.version_id, actual=updates.base_version)
    matrix = np.array(space.matrix, dtype=np.float64, copy=True)
    for word, vec in updates.changes.items():
        row = space.index(word)
        if vec.shape != (space.dim,):
            raise DimensionMismatchError(
                f"vector for {word!r} has shape {vec.shape}, expected ({space.dim},)"
            )
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"vector for {word!r} is not finite")
        matrix[row] = vec
    if version_id is None:
        version_id = space.version_id + 1
    return EmbeddingSpace(version_id, space.words, matrix)


class EmbeddingStore:
    """Owner of all versions of one space; single writer, many readers.

    Versions are numbered in creation order starting from the base space's
    id; undo moves the *current* pointer back without discarding any
    version, so older versions stay readable and a later commit never
    reuses an undone version number.
    """

    def __init__(self, base: EmbeddingSpace):
        self._lock = threading.RLock()
        self._spaces: dict[int, EmbeddingSpace] = {base.version_id: base}
        self._history: list[int] = [base.version_id]
        self._next_version = base.version_id + 1

    @property
    def lock(self) -> threading.RLock:
        return self._lock

    @property
    def current(self) -> EmbeddingSpace:
        with self._lock:
            return self._spaces[self._history[-1]]

    @property
    def base_version(self) -> int:
        return self._history[0]

    @property
    def versions(self) -> tuple[int, ...]:
        with self._lock:
            return tuple(sorted(self._spaces))

    @property
    def can_undo(self) -> bool:
        with self._lock:
            return len(self._history) > 1

    def get(self, version_id: int) -> EmbeddingSpace:
        with self._lock:
            try:
                return self._spaces[version_id]
            except KeyError:
                raise VersionConflictError(
                    expected=self._history[-1], actual=version_id
                ) from None

    def commit(self, updates: VectorUpdateSet) -> EmbeddingSpace:
        """Apply an update set to the current version, creating a new one."""
        with self._lock:
            current = self.current
            space = apply_updates(current, updates, version_id=self._next_version)
            self._next_version += 1
            self._spaces[space.version_id] = space
            self._history.append(space.version_id)
            return space

    def undo(self) -> EmbeddingSpace:
        """Revert the current pointer to the previous version in history."""
        with self._lock:
            if len(self._history) < 2:
                raise NothingToUndoError("no committed change to undo")
            self._history.pop()
            return self.current
