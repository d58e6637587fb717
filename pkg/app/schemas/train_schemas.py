# schemas/train_schemas.py

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


# Alternating-minimization parameters
class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int = Field(200, ge=1)
    step_size: float = Field(1e-7, gt=0.0)
    outer_iters: int = Field(200, ge=0)  # 0 returns the random initialization
    inner_max: int = Field(50, ge=1)
    inner_tol: float = Field(1e-4, ge=0.0)
    negative_ratio: int = Field(5, ge=0)
    rng_seed: int = Field(0, ge=0, lt=2**64)
    init_scale: float = Field(0.01, gt=0.0)
    divergence_ratio: float = Field(2.0, gt=1.0)
    block_size: Optional[int] = Field(None, ge=1)
