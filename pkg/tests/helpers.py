"""Independent oracles used across the test suite.

Everything here recomputes results with plain Python arithmetic (fsum
loops, hand-built rankings) so the package's numpy paths are checked
against a second, unrelated route.
"""

from __future__ import annotations

import math

import numpy as np

from refitlab import EmbeddingSpace


def brute_dot(u, v) -> float:
    return math.fsum(float(a) * float(b) for a, b in zip(u, v))


def brute_norm(u) -> float:
    return math.sqrt(math.fsum(float(a) * float(a) for a in u))


def brute_cosine(u, v) -> float:
    return brute_dot(u, v) / (brute_norm(u) * brute_norm(v))


def brute_euclidean(u, v) -> float:
    return math.sqrt(math.fsum((float(a) - float(b)) ** 2 for a, b in zip(u, v)))


def brute_top_k(space: EmbeddingSpace, query: str, k: int):
    """Full-scan ranking: cosine descending, then token ascending."""
    qvec = space.vector(query)
    scored = []
    for word, vec in space.entries():
        if word == query:
            continue
        if brute_norm(vec) == 0.0:
            continue
        scored.append((word, brute_cosine(qvec, vec)))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:k]


def random_space(rng: np.random.Generator, n: int, d: int, version_id: int = 1,
                 prefix: str = "w") -> EmbeddingSpace:
    words = [f"{prefix}{i}" for i in range(n)]
    matrix = rng.normal(size=(n, d))
    return EmbeddingSpace(version_id, words, matrix)


def brute_objective(anchors: dict, current: dict, alpha: dict, beta: dict) -> float:
    """Direct fsum evaluation of the anchored quadratic."""
    terms = []
    for word, a in alpha.items():
        terms.append(a * brute_euclidean(current[word], anchors[word]) ** 2)
    for (u, v), b in beta.items():
        terms.append(b * brute_euclidean(current[u], current[v]) ** 2)
    return math.fsum(terms)
