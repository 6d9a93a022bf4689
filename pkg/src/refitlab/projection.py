"""Deterministic 2-D projection of selected vectors for display.

Plain PCA: parameter-free, deterministic, and a contraction (projected
pairwise distances never exceed the originals), which is all a before/after
scatter needs. Axes whose singular value is numerically zero are zero
filled, and each principal axis is oriented so its largest-magnitude
loading is positive, making repeated runs bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError


@dataclass(frozen=True)
class Projection2D:
    words: tuple[str, ...]
    coords: np.ndarray  # (n, 2), read-only

    def __post_init__(self):
        coords = np.ascontiguousarray(self.coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ValueError(f"coords must have shape (n, 2), got {coords.shape}")
        if self.words and len(self.words) != coords.shape[0]:
            raise ValueError("coords rows do not match word count")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coordinates must be finite")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "words", tuple(self.words))

    def to_payload(self) -> dict:
        return {"words": list(self.words), "coords": self.coords.tolist()}


def _as_matrix(vectors: Sequence) -> np.ndarray:
    if len(vectors) == 0:
        raise ValueError("need at least one vector to project")
    rows = [np.asarray(v, dtype=np.float64) for v in vectors]
    dim = rows[0].shape
    for r in rows:
        if r.shape != dim or r.ndim != 1:
            raise DimensionMismatchError("vectors must share one dimension")
    return np.stack(rows)


def _principal_axes(centered: np.ndarray) -> np.ndarray:
    """Top-2 right singular vectors, zero-filled past the numerical rank."""
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    axes = np.zeros((2, centered.shape[1]), dtype=np.float64)
    if svals.size:
        cutoff = max(centered.shape) * np.finfo(np.float64).eps * svals[0]
        rank = int(np.sum(svals > cutoff))
        take = min(2, rank, vt.shape[0])
        axes[:take] = vt[:take]
    for row in axes:
        lead = np.argmax(np.abs(row))
        if row[lead] < 0:
            row *= -1.0
    return axes


def pca_2d(vectors: Sequence, words: Sequence[str] = ()) -> Projection2D:
    """Project vectors onto their top-2 principal components, mean-centered."""
    matrix = _as_matrix(vectors)
    centered = matrix - matrix.mean(axis=0)
    axes = _principal_axes(centered)
    coords = centered @ axes.T
    return Projection2D(words=tuple(words), coords=coords)


def joint_projection(
    before: Sequence,
    after: Sequence,
    words: Sequence[str] = (),
) -> tuple[Projection2D, Projection2D]:
    """Project two frames through one basis fitted on their union.

    Centering uses the union mean, so displacement between the frames stays
    visible; coordinates are centered over the pair, not per frame.
    """
    b = _as_matrix(before)
    a = _as_matrix(after)
    if b.shape != a.shape:
        raise DimensionMismatchError("before/after frames must have equal shape")
    union = np.vstack([b, a])
    centered = union - union.mean(axis=0)
    axes = _principal_axes(centered)
    coords = centered @ axes.T
    n = b.shape[0]
    return (
        Projection2D(words=tuple(words), coords=coords[:n]),
        Projection2D(words=tuple(words), coords=coords[n:]),
    )


__all__ = ["Projection2D", "pca_2d", "joint_projection"]
