# schemas/walk_schemas.py

from pydantic import BaseModel, ConfigDict, Field, model_validator


# Random-walk sampling parameters
class WalkConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    walk_length: int = Field(40, ge=2)
    walks_per_node: int = Field(80, ge=1)
    window: int = Field(5, ge=1)
    rng_seed: int = Field(0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def check_window(self) -> "WalkConfig":
        """A window has to fit inside a walk."""
        if self.window >= self.walk_length:
            raise ValueError(f"window ({self.window}) must be smaller than walk_length ({self.walk_length}).")
        return self


# Label-context injection parameters
class LabelContextConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    samples: int = Field(0, ge=0)
    rng_seed: int = Field(0, ge=0, lt=2**64)


# Sidecar written next to a co-occurrence dump
class CooccurrenceStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_nodes: int
    total: int
    nonzeros: int
    isolated_nodes: list[str] = Field(default_factory=list)
    window: int
    walk_length: int
    walks_per_node: int
    label_context: int = 0
