from typing import Iterator

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, model_validator

# Marks positions after a walk terminated early.
PAD = -1


# ========================
# Walks
# ========================
class WalkSet(BaseModel):
    """
    Random walks stored as an integer array of shape (num_walks, walk_length).
    - Walk order is epoch-major: epoch e holds one walk per active start node, in index order.
    - Positions after an early termination hold PAD.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    walks: np.ndarray
    num_nodes: int

    @model_validator(mode="after")
    def check_walks(self) -> "WalkSet":
        if self.walks.ndim != 2:
            raise ValueError("walks must be a 2-D array (num_walks, walk_length).")
        if self.walks.size and int(self.walks.max()) >= self.num_nodes:
            raise ValueError("walks reference a node index outside the graph.")
        return self

    @property
    def num_walks(self) -> int:
        return int(self.walks.shape[0])

    @property
    def walk_length(self) -> int:
        return int(self.walks.shape[1])

    def sequences(self) -> Iterator[list[int]]:
        for row in self.walks:
            yield [int(v) for v in row if v != PAD]

    def __len__(self) -> int:
        return self.num_walks


# ========================
# Co-occurrence Counts
# ========================
class CooccurrenceMatrix(BaseModel):
    """
    Symmetric integer co-occurrence counts D with exact aggregates.
    - row_sums[i] = #(i), col_sums[c] = #(c), total = |D|.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    counts: sp.csr_matrix
    row_sums: np.ndarray
    col_sums: np.ndarray
    total: int

    @classmethod
    def from_counts(cls, counts: sp.spmatrix) -> "CooccurrenceMatrix":
        """Builds the matrix and derives every aggregate from the counts themselves."""
        csr = sp.csr_matrix(counts, dtype=np.int64)
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        row_sums = np.asarray(csr.sum(axis=1), dtype=np.int64).ravel()
        col_sums = np.asarray(csr.sum(axis=0), dtype=np.int64).ravel()
        return cls(counts=csr, row_sums=row_sums, col_sums=col_sums, total=int(row_sums.sum()))

    @property
    def num_nodes(self) -> int:
        return int(self.counts.shape[0])

    @property
    def nnz(self) -> int:
        return int(self.counts.nnz)

    def zero_rows(self) -> np.ndarray:
        return np.flatnonzero(self.row_sums == 0)

    def __repr__(self) -> str:
        return f"<CooccurrenceMatrix(num_nodes={self.num_nodes}, nnz={self.nnz}, total={self.total})>"
