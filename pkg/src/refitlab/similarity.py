"""Cosine search and pairwise distance reporting over an embedding space.

Search is an exhaustive linear scan: vocabularies at interactive scale are
small, and a scan is exact and trivially deterministic. Ties are broken by
ascending token order so repeated queries always rank identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, OutOfVocabularyError, ZeroNormError
from .store import EmbeddingSpace


@dataclass(frozen=True)
class SearchResult:
    """Ranked cosine hits: scores non-increasing, words unique."""

    query: str | None
    hits: tuple[tuple[str, float], ...]

    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.hits)


@dataclass(frozen=True)
class DistanceReport:
    """Symmetric pairwise Euclidean / cosine matrices over a word list.

    The cosine matrix has a unit diagonal for nonzero vectors; pairs
    involving a zero vector, which has no direction, are reported as 0.0
    (the strict :func:`cosine` operation raises instead).
    """

    words: tuple[str, ...]
    euclidean: np.ndarray
    cosine: np.ndarray

    def to_payload(self) -> dict:
        return {
            "words": list(self.words),
            "euclidean": self.euclidean.tolist(),
            "cosine": self.cosine.tolist(),
        }


def _as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr


def cosine(u, v) -> float:
    """Cosine similarity of two equal-length vectors, clipped to [-1, 1]."""
    u = _as_vector(u)
    v = _as_vector(v)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroNormError("cosine is undefined for a zero vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def euclidean(u, v) -> float:
    """Euclidean (l2) distance between two equal-length vectors."""
    u = _as_vector(u)
    v = _as_vector(v)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return float(np.linalg.norm(u - v))


def _ranked_scan(
    space: EmbeddingSpace, query_vec: np.ndarray, k: int, exclude: str | None
) -> tuple[tuple[str, float], ...]:
    if k < 0:
        raise ValueError("k must be non-negative")
    qnorm = np.linalg.norm(query_vec)
    if qnorm == 0.0:
        raise ZeroNormError("query vector has zero norm")
    matrix = space.matrix
    norms = np.linalg.norm(matrix, axis=1)
    scores = matrix @ query_vec
    candidates = []
    for i, word in enumerate(space.words):
        if word == exclude:
            continue
        if norms[i] == 0.0:
            # A zero vector has no direction; it cannot be ranked by cosine.
            continue
        score = float(np.clip(scores[i] / (norms[i] * qnorm), -1.0, 1.0))
        candidates.append((word, score))
    candidates.sort(key=lambda hit: (-hit[1], hit[0]))
    return tuple(candidates[:k])


def top_k(space: EmbeddingSpace, query: str, k: int) -> SearchResult:
    """The k in-vocabulary words most cosine-similar to ``query``.

    The query word itself is excluded (it is trivially its own best match).
    Raises OutOfVocabularyError for unknown queries and ZeroNormError when
    the query vector cannot be normalized.
    """
    vec = space.vector(query)
    return SearchResult(query=query, hits=_ranked_scan(space, vec, k, exclude=query))


def top_k_vector(space: EmbeddingSpace, v, k: int) -> SearchResult:
    """As :func:`top_k` but keyed by a raw vector; nothing is excluded."""
    vec = _as_vector(v)
    if vec.shape != (space.dim,):
        raise DimensionMismatchError(
            f"query vector has length {vec.shape[0]}, space dimension is {space.dim}"
        )
    return SearchResult(query=None, hits=_ranked_scan(space, vec, k, exclude=None))


def pairwise_report(words, matrix: np.ndarray) -> DistanceReport:
    """Build a DistanceReport from explicit vectors (rows align with words)."""
    words = tuple(words)
    if len(set(words)) != len(words):
        raise ValueError("duplicate words in distance report request")
    matrix = np.asarray(matrix, dtype=np.float64)
    m = len(words)
    norms = np.linalg.norm(matrix, axis=1)
    euc = np.zeros((m, m), dtype=np.float64)
    cos = np.zeros((m, m), dtype=np.float64)
    for i in range(m):
        cos[i, i] = 1.0 if norms[i] > 0.0 else 0.0
        for j in range(i + 1, m):
            euc[i, j] = euc[j, i] = euclidean(matrix[i], matrix[j])
            if norms[i] > 0.0 and norms[j] > 0.0:
                cos[i, j] = cos[j, i] = cosine(matrix[i], matrix[j])
    euc.setflags(write=False)
    cos.setflags(write=False)
    return DistanceReport(words=words, euclidean=euc, cosine=cos)


def distance_report(space: EmbeddingSpace, words) -> DistanceReport:
    """Full pairwise Euclidean and cosine matrices over in-vocabulary words."""
    words = tuple(words)
    if not words:
        raise ValueError("distance report needs at least one word")
    return pairwise_report(words, np.stack([space.vector(w) for w in words]))


__all__ = [
    "SearchResult",
    "DistanceReport",
    "cosine",
    "euclidean",
    "top_k",
    "top_k_vector",
    "distance_report",
    "pairwise_report",
    "OutOfVocabularyError",
]
