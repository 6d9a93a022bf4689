"""Attract-set re-fitting of word vectors.

Each problem is a quadratic over a small word graph:

    psi(Q) = sum_i alpha_i ||q_i - q0_i||^2  +  sum_{(i,j) in E} beta_ij ||q_i - q_j||^2

where q0 are the anchor (original) vectors. The coordinate minimizer for a
movable word i, holding its neighbors fixed, is the convex combination

    q_i  =  ( sum_j beta_ij q_j + alpha_i q0_i ) / ( sum_j beta_ij + alpha_i )

Two modes are supported. ``target`` pins every word except a designated
target and pulls the target toward the rest along a star of edges. ``set``
connects the words as a complete graph and moves all of them toward one
another, each still anchored to its original position.

Sweeps apply the coordinate update Gauss-Seidel style (in member order,
each update seeing earlier ones), which makes the objective non-increasing
sweep over sweep. ``exact_solve`` provides the closed-form minimizer as an
independent check on the iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import SingularSystemError
from .similarity import DistanceReport, pairwise_report
from .store import EmbeddingSpace, VectorUpdateSet


class RefitMode(str, Enum):
    """``target``: star graph, only the target moves. ``set``: full clique."""

    TARGET_TO_SET = "target"
    CLIQUE = "set"

    @classmethod
    def parse(cls, value: "RefitMode | str") -> "RefitMode":
        if isinstance(value, RefitMode):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValueError(
                f"unknown mode {value!r}; expected 'target' or 'set'"
            ) from None


@dataclass(frozen=True)
class RefitParams:
    """Solver controls and weight schemes.

    ``beta_scheme`` is ``"inverse-degree"`` (each edge weighted by one over
    the movable endpoint's degree) or ``"uniform"`` (every edge gets
    ``beta_value``). ``tolerance`` bounds the largest per-word l2 move in a
    sweep; at or below it the iteration stops.
    """

    max_sweeps: int = 10
    tolerance: float = 1e-6
    beta_scheme: str = "inverse-degree"
    beta_value: float = 1.0
    alpha_default: float = 1.0

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")
        if not self.tolerance >= 0:
            raise ValueError("tolerance must be non-negative")
        if self.beta_scheme not in ("inverse-degree", "uniform"):
            raise ValueError(f"unknown beta scheme {self.beta_scheme!r}")
        if self.beta_scheme == "uniform" and not self.beta_value > 0:
            raise ValueError("uniform beta must be positive")
        if not self.alpha_default >= 0:
            raise ValueError("alpha_default must be non-negative")


def _edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class AttractSpec:
    """One re-fit problem: word set, edges, and weights.

    ``members`` is the ordered word set; sweeps update movable words in this
    order. In target mode the edges must form a star on ``target``; in set
    mode they must form the complete graph.
    """

    mode: RefitMode
    members: tuple[str, ...]
    target: str | None
    edges: tuple[tuple[str, str], ...]
    beta: Mapping[tuple[str, str], float]
    alpha: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "mode", RefitMode.parse(self.mode))
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if len(members) < 2:
            raise ValueError("an attract set needs at least 2 words")
        if len(set(members)) != len(members):
            raise ValueError("duplicate words in attract set")
        if self.mode is RefitMode.TARGET_TO_SET:
            if self.target is None:
                raise ValueError("target mode requires a target word")
            if self.target not in members:
                raise ValueError(f"target {self.target!r} is not in the word set")
        elif self.target is not None:
            raise ValueError("set mode does not take a target word")

        edges = tuple(sorted(_edge(a, b) for a, b in self.edges))
        object.__setattr__(self, "edges", edges)
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        member_set = set(members)
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-edge on {a!r}")
            if a not in member_set or b not in member_set:
                raise ValueError(f"edge ({a!r}, {b!r}) leaves the word set")
        expected = self._expected_edges()
        if set(edges) != expected:
            shape = "a star on the target" if self.mode is RefitMode.TARGET_TO_SET else "the complete graph"
            raise ValueError(f"edges must form {shape} over the word set")

        beta = dict(self.beta)
        object.__setattr__(self, "beta", beta)
        if set(beta) != set(edges):
            raise ValueError("beta must assign a weight to exactly the edge set")
        for e, w in beta.items():
            if not w > 0:
                raise ValueError(f"beta for edge {e} must be positive")
        alpha = dict(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if set(alpha) != set(members):
            raise ValueError("alpha must assign a weight to exactly the word set")
        for w, a in alpha.items():
            if not a >= 0:
                raise ValueError(f"alpha for {w!r} must be non-negative")

    def _expected_edges(self) -> set[tuple[str, str]]:
        if self.mode is RefitMode.TARGET_TO_SET:
            return {_edge(self.target, w) for w in self.members if w != self.target}
        return {
            _edge(a, b)
            for i, a in enumerate(self.members)
            for b in self.members[i + 1 :]
        }

    @property
    def movable(self) -> tuple[str, ...]:
        if self.mode is RefitMode.TARGET_TO_SET:
            return (self.target,)
        return self.members

    @property
    def movable_set(self) -> frozenset[str]:
        return frozenset(self.movable)

    def neighbors(self, word: str) -> tuple[tuple[str, float], ...]:
        """Edge-connected words of ``word`` with weights, in member order."""
        out = []
        for other in self.members:
            if other == word:
                continue
            e = _edge(word, other)
            if e in self.beta:
                out.append((other, self.beta[e]))
        return tuple(out)

    def to_payload(self) -> dict:
        payload = {
            "mode": self.mode.value,
            "members": list(self.members),
            "edges": [list(e) for e in self.edges],
            "beta": [self.beta[e] for e in self.edges],
            "alpha": {w: self.alpha[w] for w in self.members},
        }
        if self.target is not None:
            payload["target"] = self.target
        return payload

    @classmethod
    def from_payload(cls, payload: Mapping) -> "AttractSpec":
        edges = tuple((a, b) for a, b in payload["edges"])
        beta_list = payload["beta"]
        if len(beta_list) != len(edges):
            raise ValueError("beta list does not align with edges")
        return cls(
            mode=RefitMode.parse(payload["mode"]),
            members=tuple(payload["members"]),
            target=payload.get("target"),
            edges=edges,
            beta={_edge(a, b): float(w) for (a, b), w in zip(edges, beta_list)},
            alpha={w: float(a) for w, a in payload["alpha"].items()},
        )


def build_spec(
    mode: RefitMode | str,
    words: Sequence[str],
    target: str | None = None,
    params: RefitParams | None = None,
) -> AttractSpec:
    """Construct the edge set and weights for a word list.

    Inverse-degree weighting gives each edge 1/(len(words) - 1): the star's
    movable endpoint has degree n-1, and in a clique every word has degree
    n-1, so the same value applies symmetrically.
    """
    mode = RefitMode.parse(mode)
    params = params or RefitParams()
    words = tuple(words)
    if len(words) < 2:
        raise ValueError("an attract set needs at least 2 words")
    if len(set(words)) != len(words):
        raise ValueError("duplicate words in attract set")
    if mode is RefitMode.TARGET_TO_SET:
        if target is None:
            raise ValueError("target mode requires a target word")
        edges = [_edge(target, w) for w in words if w != target]
    else:
        if target is not None:
            raise ValueError("set mode does not take a target word")
        edges = [
            _edge(a, b) for i, a in enumerate(words) for b in words[i + 1 :]
        ]
    if params.beta_scheme == "uniform":
        beta = {e: params.beta_value for e in edges}
    else:
        beta = {e: 1.0 / (len(words) - 1) for e in edges}
    alpha = {w: params.alpha_default for w in words}
    return AttractSpec(
        mode=mode, members=words, target=target, edges=tuple(edges), beta=beta, alpha=alpha
    )


# --- objective -------------------------------------------------------------
#
# The objective trace is contractually non-increasing, but near convergence
# the true per-sweep decrease falls below float64 resolution and a plainly
# summed psi can wobble upward by rounding alone. The evaluator below splits
# every difference and product into exact (hi, lo) pairs (Dekker/Knuth) and
# feeds them to math.fsum, so the returned value is the true quadratic of
# the given floats to ~1e-30 relative error.

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_diff(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = a - b
    bb = a - s
    err = (a - (s + bb)) + (bb - b)
    return s, err


def _two_product(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = a * b
    ca = _SPLITTER * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLITTER * b
    bh = cb - (cb - b)
    bl = b - bh
    err = al * bl - (((p - ah * bh) - al * bh) - ah * bl)
    return p, err


def _weighted_sqdist_terms(w: np.ndarray, left: np.ndarray, right: np.ndarray) -> list[np.ndarray]:
    """Exact decomposition of w * ||left - right||^2 into summable floats."""
    s, e = _two_diff(left, right)
    p, pe = _two_product(s, s)
    wp, wpe = _two_product(w, p)
    return [wp, wpe, w * pe, w * (2.0 * s * e), w * (e * e)]


def _objective_terms(
    anchors: np.ndarray,
    current: np.ndarray,
    alpha: np.ndarray,
    edge_idx: np.ndarray,
    beta: np.ndarray,
) -> float:
    terms: list[np.ndarray] = []
    terms += _weighted_sqdist_terms(alpha[:, None], current, anchors)
    if len(edge_idx):
        terms += _weighted_sqdist_terms(
            beta[:, None], current[edge_idx[:, 0]], current[edge_idx[:, 1]]
        )
    return math.fsum(np.concatenate([t.ravel() for t in terms]).tolist())


def _spec_arrays(spec: AttractSpec):
    pos = {w: i for i, w in enumerate(spec.members)}
    alpha = np.array([spec.alpha[w] for w in spec.members], dtype=np.float64)
    edge_idx = np.array([[pos[a], pos[b]] for a, b in spec.edges], dtype=np.intp)
    beta = np.array([spec.beta[e] for e in spec.edges], dtype=np.float64)
    return pos, alpha, edge_idx, beta


def objective(
    anchors: EmbeddingSpace,
    current: Mapping[str, np.ndarray],
    spec: AttractSpec,
) -> float:
    """Evaluate psi for the given current positions (anchors from the space)."""
    _, alpha, edge_idx, beta = _spec_arrays(spec)
    anchor_m = np.stack([anchors.vector(w) for w in spec.members])
    current_m = np.stack([np.asarray(current[w], dtype=np.float64) for w in spec.members])
    return _objective_terms(anchor_m, current_m, alpha, edge_idx, beta)


def eq1_update(
    word: str,
    anchors: EmbeddingSpace,
    current: Mapping[str, np.ndarray],
    spec: AttractSpec,
) -> np.ndarray:
    """One exact coordinate update of a movable word.

    Returns (sum_j beta_ij q_j + alpha_i q0_i) / (sum_j beta_ij + alpha_i),
    reading neighbor values from ``current`` and the anchor from the space.
    """
    if word not in spec.movable:
        raise ValueError(f"{word!r} is not movable under this spec")
    alpha = spec.alpha[word]
    num = alpha * anchors.vector(word)
    den = alpha
    for other, weight in spec.neighbors(word):
        num = num + weight * np.asarray(current[other], dtype=np.float64)
        den = den + weight
    if not den > 0:
        raise ValueError(f"zero update denominator for {word!r}")
    return num / den


def sweep(
    anchors: EmbeddingSpace,
    current: Mapping[str, np.ndarray],
    spec: AttractSpec,
) -> dict[str, np.ndarray]:
    """One Gauss-Seidel pass over the movable words, in member order."""
    state = {w: np.asarray(v, dtype=np.float64) for w, v in current.items()}
    movable = spec.movable_set
    for word in spec.members:
        if word in movable:
            state[word] = eq1_update(word, anchors, state, spec)
    return state


@dataclass(frozen=True)
class RefitOutcome:
    """Everything a committed or inspected re-fit reports."""

    updates: VectorUpdateSet
    sweeps_executed: int
    converged: bool
    objective_trace: tuple[float, ...]
    displacement: Mapping[str, float]
    distance_before: DistanceReport
    distance_after: DistanceReport


def refit(
    space: EmbeddingSpace,
    spec: AttractSpec,
    params: RefitParams | None = None,
) -> RefitOutcome:
    """Iterate sweeps until the largest per-word move is within tolerance.

    Anchors are the input space's vectors. Every update is a convex
    combination of anchors and neighbors, so iterates stay inside the
    initial bounding box and the trace of psi values never increases. With
    a single movable word the first sweep is already the exact minimizer,
    so the iteration stops after one sweep.
    """
    params = params or RefitParams()
    for w in spec.members:
        space.index(w)  # raises OutOfVocabularyError
    current: dict[str, np.ndarray] = {w: space.vector(w) for w in spec.members}
    before = pairwise_report(spec.members, np.stack([current[w] for w in spec.members]))
    trace = [objective(space, current, spec)]

    single_exact = len(spec.movable) == 1
    sweeps = 0
    converged = False
    while sweeps < params.max_sweeps:
        updated = sweep(space, current, spec)
        sweeps += 1
        moved = max(
            float(np.linalg.norm(updated[w] - current[w])) for w in spec.movable
        )
        current = updated
        trace.append(objective(space, current, spec))
        if moved <= params.tolerance or single_exact:
            converged = True
            break

    changes = {w: current[w] for w in spec.movable}
    displacement = {
        w: float(np.linalg.norm(current[w] - space.vector(w))) if w in spec.movable_set else 0.0
        for w in spec.members
    }
    after = pairwise_report(spec.members, np.stack([current[w] for w in spec.members]))
    return RefitOutcome(
        updates=VectorUpdateSet(base_version=space.version_id, changes=changes),
        sweeps_executed=sweeps,
        converged=converged,
        objective_trace=tuple(trace),
        displacement=displacement,
        distance_before=before,
        distance_after=after,
    )


_EXACT_SOLVE_LIMIT = 64


def exact_solve(space: EmbeddingSpace, spec: AttractSpec) -> dict[str, np.ndarray]:
    """Closed-form minimizer of psi, solved per dimension.

    Builds (diag(alpha) + L_beta) over the movable words, folding pinned
    neighbors into the right-hand side, and solves one linear system shared
    by all dimensions. Intended as a verification oracle for small sets
    (at most 64 movable words).
    """
    movable = spec.movable
    if len(movable) > _EXACT_SOLVE_LIMIT:
        raise ValueError(
            f"exact_solve supports at most {_EXACT_SOLVE_LIMIT} movable words"
        )
    for w in spec.members:
        space.index(w)
    pos = {w: i for i, w in enumerate(movable)}
    movable_set = set(movable)
    m = len(movable)
    system = np.zeros((m, m), dtype=np.float64)
    rhs = np.zeros((m, space.dim), dtype=np.float64)
    for w in movable:
        i = pos[w]
        system[i, i] = spec.alpha[w]
        rhs[i] = spec.alpha[w] * space.vector(w)
    for (a, b), weight in spec.beta.items():
        for u, v in ((a, b), (b, a)):
            if u not in movable_set:
                continue
            i = pos[u]
            system[i, i] += weight
            if v in movable_set:
                system[i, pos[v]] -= weight
            else:
                rhs[i] += weight * space.vector(v)

    _check_solvable(spec)
    try:
        solution = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded above
        raise SingularSystemError(str(exc)) from None
    return {w: solution[pos[w]] for w in movable}


def _check_solvable(spec: AttractSpec) -> None:
    """Reject systems where some movable component has no anchor or pin."""
    movable = set(spec.movable)
    parent = {w: w for w in movable}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    pinned_contact = {w: False for w in movable}
    for a, b in spec.edges:
        if a in movable and b in movable:
            parent[find(a)] = find(b)
        elif a in movable:
            pinned_contact[a] = True
        elif b in movable:
            pinned_contact[b] = True
    grounded: dict[str, bool] = {}
    for w in movable:
        root = find(w)
        grounded[root] = grounded.get(root, False) or spec.alpha[w] > 0 or pinned_contact[w]
    for root, ok in grounded.items():
        if not ok:
            raise SingularSystemError(
                "a connected set of movable words has zero anchors and no pinned neighbor"
            )


__all__ = [
    "RefitMode",
    "RefitParams",
    "AttractSpec",
    "RefitOutcome",
    "build_spec",
    "objective",
    "eq1_update",
    "sweep",
    "refit",
    "exact_solve",
]
