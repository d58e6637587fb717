from typing import Optional

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, model_validator


# ========================
# Graph
# ========================
class Graph(BaseModel):
    """
    Undirected weighted network.
    - `node_ids[i]` is the external identifier of dense index i (first-seen order).
    - `adjacency` is a symmetric CSR matrix of strictly positive weights.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    node_ids: tuple[str, ...]
    adjacency: sp.csr_matrix

    @model_validator(mode="after")
    def check_shape(self) -> "Graph":
        n = len(self.node_ids)
        if self.adjacency.shape != (n, n):
            raise ValueError(f"Adjacency shape {self.adjacency.shape} does not match {n} node ids.")
        return self

    @property
    def num_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def num_edges(self) -> int:
        # Each undirected edge once; a self-loop is a single diagonal entry.
        return int(sp.triu(self.adjacency).nnz)

    @property
    def index_of(self) -> dict[str, int]:
        return {node_id: i for i, node_id in enumerate(self.node_ids)}

    def degrees(self) -> np.ndarray:
        """Weighted degree per node (self-loops counted once)."""
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    def __repr__(self) -> str:
        return f"<Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})>"


# ========================
# Transition Matrix
# ========================
class TransitionMatrix(BaseModel):
    """
    Row-stochastic one-step random-walk matrix P.
    - Rows of isolated nodes are all-zero and listed in `isolated_nodes`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rows: sp.csr_matrix
    isolated_nodes: frozenset[int] = frozenset()

    @property
    def num_nodes(self) -> int:
        return int(self.rows.shape[0])

    def active_nodes(self) -> np.ndarray:
        """Sorted indices of nodes with at least one outgoing transition."""
        mask = np.ones(self.num_nodes, dtype=bool)
        mask[np.fromiter(self.isolated_nodes, dtype=np.int64, count=len(self.isolated_nodes))] = False
        return np.flatnonzero(mask)

    def is_symmetric(self, atol: float = 1e-12) -> bool:
        diff = abs(self.rows - self.rows.T)
        return bool(diff.nnz == 0 or diff.max() <= atol)

    def __repr__(self) -> str:
        return f"<TransitionMatrix(num_nodes={self.num_nodes}, isolated={len(self.isolated_nodes)})>"


# ========================
# Content Matrix
# ========================
class ContentMatrix(BaseModel):
    """
    Feature-by-node matrix F (N_f x |V|); column j holds the content vector of node j.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: sp.csr_matrix
    feature_names: Optional[tuple[str, ...]] = None

    @model_validator(mode="after")
    def check_names(self) -> "ContentMatrix":
        if self.feature_names is not None and len(self.feature_names) != self.matrix.shape[0]:
            raise ValueError("feature_names must have one entry per feature row.")
        return self

    @property
    def num_features(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def num_nodes(self) -> int:
        return int(self.matrix.shape[1])

    @classmethod
    def identity(cls, num_nodes: int) -> "ContentMatrix":
        """Structure-only content: every node is its own feature (F = I)."""
        return cls(matrix=sp.identity(num_nodes, dtype=np.float64, format="csr"))

    def __repr__(self) -> str:
        return f"<ContentMatrix(num_features={self.num_features}, num_nodes={self.num_nodes}, nnz={self.matrix.nnz})>"


# ========================
# Labels
# ========================
class LabelSet(BaseModel):
    """
    Partial map from node index to class identifier.
    - `classes` is sorted so that class indices are stable across runs.
    """

    model_config = ConfigDict(frozen=True)

    assignments: dict[int, str] = {}

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.assignments.values())))

    def members(self, label: str) -> np.ndarray:
        """Sorted node indices carrying `label`."""
        return np.array(sorted(i for i, c in self.assignments.items() if c == label), dtype=np.int64)

    def labeled_nodes(self) -> np.ndarray:
        return np.array(sorted(self.assignments), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.assignments)

    def __repr__(self) -> str:
        return f"<LabelSet(labeled={len(self)}, classes={len(self.classes)})>"
