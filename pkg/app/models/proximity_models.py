from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict


class ProximityMatrix(BaseModel):
    """
    Dense node-by-node proximity.
    - `order` is the walk order l for high-order proximity, "rpr" for rooted PageRank
      and "normalized" for a row-normalized co-occurrence matrix.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    order: int | Literal["rpr", "normalized"]
    beta: Optional[float] = None


class RowNormalization(BaseModel):
    """Row-normalized counts plus the rows that had nothing to normalize."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    proximity: ProximityMatrix
    zero_rows: tuple[int, ...] = ()
