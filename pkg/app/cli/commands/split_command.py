import logging
from pathlib import Path
from typing import Annotated

import numpy as np
import typer

from app.cli.exception_handler import handle_errors
from app.cli.options import OutDirOption, SplitSeedOption, WeightedOption, open_input
from app.schemas.eval_schemas import LinkSplitConfig
from app.schemas.run_schemas import RunConfig
from app.services.artifact_service import ArtifactService
from app.services.graph_service import GraphService
from app.services.link_prediction_service import LinkPredictionService

logger = logging.getLogger(__name__)

RESIDUAL_FILE = "residual.txt"
POSITIVES_FILE = "positives.txt"
NEGATIVES_FILE = "negatives.txt"
NODES_FILE = "nodes.txt"


@handle_errors
def split(
    edges: Annotated[Path, typer.Argument(help="Edge list of the original graph.")],
    fraction: Annotated[float, typer.Option("--fraction", help="Fraction of edges to remove.")] = 0.5,
    split_seed: SplitSeedOption = 0,
    weighted: WeightedOption = False,
    out_dir: OutDirOption = Path("."),
) -> None:
    """
    Write the residual graph and the held-out pairs of a link-prediction split.
    Pass nodes.txt to 'sample --nodes' so the residual keeps every node of the original graph.
    """
    cfg = LinkSplitConfig(fraction=fraction, rng_seed=split_seed)
    with open_input(edges) as handle:
        graph = GraphService.load_edge_list(handle, weighted=weighted, name=edges.name)
    link_split = LinkPredictionService.make_link_split(graph, cfg)

    residual = link_split.residual
    residual_edges = GraphService.edge_array(residual, include_self_loops=True)
    weights = None
    if weighted:
        weights = np.asarray(residual.adjacency[residual_edges[:, 0], residual_edges[:, 1]]).ravel()

    out = ArtifactService.ensure_dir(out_dir)
    ArtifactService.write_edges(residual_edges, weights, graph.node_ids, out / RESIDUAL_FILE)
    ArtifactService.write_pairs(link_split.positives, graph.node_ids, out / POSITIVES_FILE)
    ArtifactService.write_pairs(link_split.negatives, graph.node_ids, out / NEGATIVES_FILE)
    ArtifactService.write_node_ids(graph.node_ids, out / NODES_FILE)

    RunConfig(
        command="split",
        inputs={"edges": str(edges)},
        outputs={
            "residual": str(out / RESIDUAL_FILE),
            "positives": str(out / POSITIVES_FILE),
            "negatives": str(out / NEGATIVES_FILE),
            "nodes": str(out / NODES_FILE),
        },
        options={"weighted": str(weighted)},
        link_split=cfg,
    ).write(out / "run.conf")

    typer.echo(
        f"Removed {len(link_split.positives)} of {graph.num_edges} edges "
        f"(achieved fraction {link_split.achieved_fraction:.6g})"
    )
