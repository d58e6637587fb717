import logging
from pathlib import Path
from typing import Annotated, Optional

import typer

from app.cli.exception_handler import handle_errors
from app.cli.options import NodesOption, OutDirOption, SeedOption, WeightedOption, open_input, read_node_ids
from app.schemas.proximity_schemas import DeviationReport
from app.schemas.run_schemas import RunConfig
from app.schemas.walk_schemas import WalkConfig
from app.services.artifact_service import ArtifactService
from app.services.cooccurrence_service import CooccurrenceService
from app.services.graph_service import GraphService
from app.services.proximity_service import ProximityService

logger = logging.getLogger(__name__)

BOUND_FILE = "bound.json"
DEVIATION_FILE = "deviation.json"


@handle_errors
def verify(
    edges: Annotated[Path, typer.Argument(help="Edge list of a graph small enough for dense matrices.")],
    order: Annotated[int, typer.Option("--order", min=1, help="Proximity order l.")] = 100,
    beta: Annotated[float, typer.Option("--beta", help="Rooted PageRank continuation probability.")] = 0.85,
    empirical: Annotated[
        Optional[int], typer.Option("--empirical", min=1, help="Walks per node for a sampled check.")
    ] = None,
    walk_length: Annotated[int, typer.Option("--walk-length")] = 40,
    seed: SeedOption = 0,
    weighted: WeightedOption = False,
    nodes: NodesOption = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """
    Compare rooted PageRank with the exact l-step proximity and optionally with sampled co-occurrences.
    """
    node_ids = read_node_ids(nodes)
    with open_input(edges) as handle:
        graph = GraphService.load_edge_list(handle, weighted=weighted, node_ids=node_ids, name=edges.name)
    transition = GraphService.transition_matrix(graph)

    bound = ProximityService.verify_rpr_bound(transition, order, beta)
    out = ArtifactService.ensure_dir(out_dir)
    ArtifactService.write_report(bound, out / BOUND_FILE)
    outputs = {"bound": str(out / BOUND_FILE)}

    walk_cfg: Optional[WalkConfig] = None
    deviation: Optional[DeviationReport] = None
    if empirical is not None:
        walk_cfg = WalkConfig(walk_length=walk_length, walks_per_node=empirical, window=order, rng_seed=seed)
        walks = CooccurrenceService.sample_walks(transition, walk_cfg)
        dmat = CooccurrenceService.build_cooccurrence(walks, walk_cfg.window)
        deviation = DeviationReport(
            order=order,
            walks_per_node=empirical,
            walk_length=walk_length,
            max_deviation=ProximityService.empirical_deviation(transition, dmat, order),
        )
        ArtifactService.write_report(deviation, out / DEVIATION_FILE)
        outputs["deviation"] = str(out / DEVIATION_FILE)

    RunConfig(
        command="verify",
        inputs={"edges": str(edges), **({"nodes": str(nodes)} if nodes is not None else {})},
        outputs=outputs,
        options={"order": str(order), "beta": str(beta), "weighted": str(weighted)},
        walk=walk_cfg,
    ).write(out / "run.conf")

    typer.echo(ArtifactService.format_table(bound))
    if not bound.premises_hold:
        typer.echo("note: the guarantee needs a symmetric P and a large enough order; result is reported only")
    if deviation is not None:
        typer.echo(ArtifactService.format_table(deviation))
