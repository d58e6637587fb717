import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from app.models.graph_models import Graph


# ========================
# Classification
# ========================
class ClassifySplit(BaseModel):
    """
    Train/test node split for semi-supervised classification.
    - train and test are disjoint; every class contributes exactly per_class training nodes.
    """

    model_config = ConfigDict(frozen=True)

    train_nodes: tuple[int, ...]
    test_nodes: tuple[int, ...]
    per_class: int
    test_size: int
    rng_seed: int

    @model_validator(mode="after")
    def check_disjoint(self) -> "ClassifySplit":
        if set(self.train_nodes) & set(self.test_nodes):
            raise ValueError("Train and test nodes must be disjoint.")
        return self


class Classifier(BaseModel):
    """
    One-vs-rest logistic regression over standardized embeddings.
    - weights: d x C, bias: C, one column per class in `classes` order.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    classes: tuple[str, ...]
    weights: np.ndarray
    bias: np.ndarray
    mean: np.ndarray
    scale: np.ndarray

    def scores(self, features: np.ndarray) -> np.ndarray:
        """Per-class decision values for row vectors `features` (n x d)."""
        standardized = (features - self.mean) / self.scale
        return standardized @ self.weights + self.bias

    def predict(self, features: np.ndarray) -> list[str]:
        """Argmax class per row; np.argmax returns the lowest index on ties."""
        winners = np.argmax(self.scores(features), axis=1)
        return [self.classes[int(c)] for c in winners]


# ========================
# Link Prediction
# ========================
class LinkSplit(BaseModel):
    """
    Edge split for link prediction.
    - positives: removed edges (m x 2), negatives: non-edges of the original graph (m x 2).
    - Fewer negatives than positives only when the original graph has fewer than m non-edges.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    residual: Graph
    positives: np.ndarray
    negatives: np.ndarray
    fraction: float
    achieved_fraction: float
    rng_seed: int

    @model_validator(mode="after")
    def check_balance(self) -> "LinkSplit":
        if self.positives.shape[1:] != (2,) or self.negatives.shape[1:] != (2,):
            raise ValueError("positives and negatives must be (m x 2) node pairs.")
        if len(self.negatives) > len(self.positives):
            raise ValueError("negatives cannot outnumber positives.")
        return self

    def pairs(self) -> np.ndarray:
        """Positives followed by negatives."""
        return np.vstack([self.positives, self.negatives]).astype(np.int64)

    def targets(self) -> np.ndarray:
        return np.concatenate(
            [np.ones(len(self.positives), dtype=np.int64), np.zeros(len(self.negatives), dtype=np.int64)]
        )
