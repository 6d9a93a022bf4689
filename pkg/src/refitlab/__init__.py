"""Interactive word-embedding re-fitting workbench.

Load a word-vector space, search it by cosine similarity, pull user-chosen
word sets together with anchored quadratic re-fits, and keep every
interaction in an append-only journal that supports undo and deterministic
replay. A small HTTP service and CLI expose the same operations.
"""

from .errors import (
    ChainMismatchError,
    DimensionMismatchError,
    EmbeddingFormatError,
    NothingToUndoError,
    OutOfVocabularyError,
    SingularSystemError,
    VersionConflictError,
    WorkbenchError,
    ZeroNormError,
)
from .journal import InteractionRecord, Journal, replay, snapshot, undo, validate_chain
from .projection import Projection2D, joint_projection, pca_2d
from .refit import (
    AttractSpec,
    RefitMode,
    RefitOutcome,
    RefitParams,
    build_spec,
    eq1_update,
    exact_solve,
    objective,
    refit,
    sweep,
)
from .similarity import (
    DistanceReport,
    SearchResult,
    cosine,
    distance_report,
    euclidean,
    top_k,
    top_k_vector,
)
from .store import (
    EmbeddingSpace,
    EmbeddingStore,
    VectorUpdateSet,
    apply_updates,
    get_vector,
    load_path,
    load_text,
    save_path,
    save_text,
)
from .workbench import Workbench

__version__ = "0.1.0"

__all__ = [
    "AttractSpec",
    "ChainMismatchError",
    "DimensionMismatchError",
    "DistanceReport",
    "EmbeddingFormatError",
    "EmbeddingSpace",
    "EmbeddingStore",
    "InteractionRecord",
    "Journal",
    "NothingToUndoError",
    "OutOfVocabularyError",
    "Projection2D",
    "RefitMode",
    "RefitOutcome",
    "RefitParams",
    "SearchResult",
    "SingularSystemError",
    "VectorUpdateSet",
    "VersionConflictError",
    "Workbench",
    "WorkbenchError",
    "ZeroNormError",
    "apply_updates",
    "build_spec",
    "cosine",
    "distance_report",
    "eq1_update",
    "euclidean",
    "exact_solve",
    "get_vector",
    "joint_projection",
    "load_path",
    "load_text",
    "objective",
    "pca_2d",
    "refit",
    "replay",
    "save_path",
    "save_text",
    "snapshot",
    "sweep",
    "top_k",
    "top_k_vector",
    "undo",
    "validate_chain",
]
