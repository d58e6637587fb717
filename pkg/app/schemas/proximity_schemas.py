# schemas/proximity_schemas.py

from pydantic import BaseModel, ConfigDict, Field


# Outcome of comparing rooted PageRank with the exact normalized co-occurrence expectation
class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    beta: float
    order: int = Field(..., serialization_alias="l")
    k: int = Field(..., serialization_alias="K")
    bound: float
    measured_norm: float = Field(..., ge=0.0)
    passed: bool = Field(..., serialization_alias="pass")

    # Extra diagnostics
    raw_k: int
    proof_bound: float
    order_sufficient: bool
    transition_symmetric: bool
    num_nodes: int

    @property
    def premises_hold(self) -> bool:
        """True when the guarantee applies: symmetric P and a large enough order."""
        return self.transition_symmetric and self.order_sufficient


# Sampled versus exact high-order proximity
class DeviationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: int
    walks_per_node: int
    walk_length: int
    max_deviation: float = Field(..., ge=0.0)
