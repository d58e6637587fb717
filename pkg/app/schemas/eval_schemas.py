# schemas/eval_schemas.py

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator


# Node-classification protocol
class ClassifyConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_class: int = Field(20, ge=1)
    test_size: int = Field(1000, ge=1)
    rng_seed: int = Field(0, ge=0, lt=2**64)
    l2: float = Field(0.01, ge=0.0)
    learning_rate: float = Field(0.1, gt=0.0)
    steps: int = Field(500, ge=0)


# Link-prediction protocol
class LinkSplitConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    fraction: float = Field(0.5, gt=0.0, lt=1.0)
    rng_seed: int = Field(0, ge=0, lt=2**64)


# Evaluation output
class EvalReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    task: Literal["classify", "linkpred"]
    metrics: dict[str, float]
    split_seed: int
    method: str

    @field_validator("metrics")
    @classmethod
    def validate_metrics(cls, value: dict[str, float]) -> dict[str, float]:
        """Every metric is a rate or a probability."""
        for name, metric in value.items():
            if not 0.0 <= metric <= 1.0:
                raise ValueError(f"Metric '{name}' = {metric} lies outside [0, 1].")
        return value
