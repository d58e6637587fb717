# schemas/run_schemas.py

from pathlib import Path
from typing import Any, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field

from app.schemas.eval_schemas import ClassifyConfig, LinkSplitConfig
from app.schemas.train_schemas import TrainConfig
from app.schemas.walk_schemas import LabelContextConfig, WalkConfig

SECTIONS = ("walk", "label_context", "train", "classify", "link_split")


# Fully-resolved invocation, written next to every run's outputs
class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    inputs: dict[str, str] = Field(default_factory=dict)
    outputs: dict[str, str] = Field(default_factory=dict)
    options: dict[str, str] = Field(default_factory=dict)
    walk: Optional[WalkConfig] = None
    label_context: Optional[LabelContextConfig] = None
    train: Optional[TrainConfig] = None
    classify: Optional[ClassifyConfig] = None
    link_split: Optional[LinkSplitConfig] = None

    def to_flat(self) -> dict[str, str]:
        """Flattens to dotted keys ("walk.window", "inputs.edges"); None values are omitted."""
        flat: dict[str, str] = {"command": self.command}
        for group in ("inputs", "outputs", "options"):
            for key, value in getattr(self, group).items():
                flat[f"{group}.{key}"] = value
        for section in SECTIONS:
            config = getattr(self, section)
            if config is None:
                continue
            for key, value in config.model_dump().items():
                if value is not None:
                    flat[f"{section}.{key}"] = str(value)
        return flat

    @classmethod
    def from_flat(cls, flat: dict[str, Optional[str]]) -> "RunConfig":
        nested: dict[str, Any] = {}
        for key, value in flat.items():
            if value is None:
                continue
            if "." not in key:
                nested[key] = value
                continue
            group, name = key.split(".", 1)
            nested.setdefault(group, {})[name] = value
        return cls.model_validate(nested)

    def write(self, path: Path) -> None:
        """Writes one sorted `key = value` line per setting."""
        lines = [f"{key} = {value}" for key, value in sorted(self.to_flat().items())]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def read(cls, path: Path) -> "RunConfig":
        return cls.from_flat(dict(dotenv_values(path, encoding="utf-8")))
