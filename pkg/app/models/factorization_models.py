import threading

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, model_validator


# ========================
# Q Matrix
# ========================
class QMatrix(BaseModel):
    """
    Per-pair trial bound Q[i, c] = k * #(i) * #(c) / |D| + #(i, c).
    - Kept lazy: only column blocks are materialized, so peak memory is O(|V| * block).
    - counts are stored column-compressed for cheap column slicing.
    - Q is symmetric because D is, so block(start, stop) equals Q[:, start:stop] in either layout.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    counts: sp.csc_matrix
    row_sums: np.ndarray
    col_sums: np.ndarray
    total: int
    negative_ratio: int

    @property
    def num_nodes(self) -> int:
        return int(self.counts.shape[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.num_nodes, self.num_nodes)

    def block(self, start: int, stop: int) -> np.ndarray:
        """Dense Q[:, start:stop] as float64."""
        shift = (self.negative_ratio / self.total) * np.outer(
            self.row_sums.astype(np.float64), self.col_sums[start:stop].astype(np.float64)
        )
        return shift + self.counts[:, start:stop].toarray().astype(np.float64)

    @property
    def values(self) -> np.ndarray:
        return self.block(0, self.num_nodes)


# ========================
# Embeddings
# ========================
class EmbeddingModel(BaseModel):
    """
    Learned parameters.
    - W: d x |V| node embeddings, column i is w_i.
    - S: N_f x d feature embedding dictionary.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    W: np.ndarray
    S: np.ndarray

    @model_validator(mode="after")
    def check_parameters(self) -> "EmbeddingModel":
        if self.W.ndim != 2 or self.S.ndim != 2:
            raise ValueError("W and S must be 2-D arrays.")
        if self.W.shape[0] != self.S.shape[1]:
            raise ValueError(f"W has dim {self.W.shape[0]} but S has dim {self.S.shape[1]}.")
        if not (np.all(np.isfinite(self.W)) and np.all(np.isfinite(self.S))):
            raise ValueError("Embedding parameters must be finite.")
        return self

    @property
    def dim(self) -> int:
        return int(self.W.shape[0])

    @property
    def num_nodes(self) -> int:
        return int(self.W.shape[1])

    def node_vectors(self) -> np.ndarray:
        """Embeddings as rows (|V| x d)."""
        return np.ascontiguousarray(self.W.T)

    def __repr__(self) -> str:
        return f"<EmbeddingModel(dim={self.dim}, num_nodes={self.num_nodes}, num_features={self.S.shape[0]})>"


class TrainingResult(BaseModel):
    """Outcome of an alternating-minimization run; losses[0] is the loss at initialization."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    model: EmbeddingModel
    losses: tuple[float, ...]
    accepted_steps: int = 0
    rejected_steps: int = 0
    converged: bool = False

    @property
    def final_loss(self) -> float:
        return self.losses[-1]


# ========================
# Instrumentation
# ========================
class MultiplyAddCounter:
    """Thread-safe tally of scalar multiply-adds performed by factorization kernels."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.count = 0

    def add(self, amount: int) -> None:
        with self._lock:
            self.count += int(amount)
