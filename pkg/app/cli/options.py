"""Shared option types and input helpers for CLI commands."""

from enum import Enum
from pathlib import Path
from typing import IO, Annotated, Optional

import typer

from app.core.exceptions import ResourceNotFoundException
from app.services.graph_service import GraphService


class ScoringMethod(str, Enum):
    cosine = "cosine"
    cn = "cn"
    jaccard = "jaccard"
    aa = "aa"
    pa = "pa"
    ra = "ra"


SeedOption = Annotated[int, typer.Option("--seed", min=0, help="Random seed.")]
SplitSeedOption = Annotated[int, typer.Option("--split-seed", min=0, help="Seed of the evaluation split.")]
OutDirOption = Annotated[Path, typer.Option("--out-dir", "-o", help="Directory for outputs and run.conf.")]
WeightedOption = Annotated[bool, typer.Option("--weighted", help="Read a third edge-list column as weight.")]
NodesOption = Annotated[
    Optional[Path], typer.Option("--nodes", help="Node id list fixing index order (keeps isolated nodes).")
]


def open_input(path: Path) -> IO[bytes]:
    if not path.is_file():
        raise ResourceNotFoundException("File", str(path))
    return path.open("rb")


def read_node_ids(nodes: Optional[Path]) -> Optional[list[str]]:
    if nodes is None:
        return None
    with open_input(nodes) as handle:
        return GraphService.load_node_list(handle, name=nodes.name)
