import logging
from pathlib import Path
from typing import Annotated, Optional

import typer

from app.cli.exception_handler import handle_errors
from app.cli.options import NodesOption, OutDirOption, SeedOption, WeightedOption, open_input, read_node_ids
from app.core.exceptions import UsageException
from app.schemas.run_schemas import RunConfig
from app.schemas.walk_schemas import CooccurrenceStats, LabelContextConfig, WalkConfig
from app.services.artifact_service import ArtifactService
from app.services.cooccurrence_service import CooccurrenceService
from app.services.graph_service import GraphService

logger = logging.getLogger(__name__)

COOCCURRENCE_FILE = "cooccurrence.txt"
WALKS_FILE = "walks.txt"


@handle_errors
def sample(
    edges: Annotated[Path, typer.Argument(help="Edge list: 'u v' or 'u v w' per line.")],
    labels: Annotated[Optional[Path], typer.Option("--labels", help="'node class' lines for label context.")] = None,
    walk_length: Annotated[int, typer.Option("--walk-length")] = 40,
    window: Annotated[int, typer.Option("--window")] = 5,
    walks_per_node: Annotated[int, typer.Option("--walks-per-node")] = 80,
    label_context: Annotated[int, typer.Option("--label-context", help="Same-label pairs to inject.")] = 0,
    seed: SeedOption = 0,
    nodes: NodesOption = None,
    weighted: WeightedOption = False,
    dump_walks: Annotated[bool, typer.Option("--dump-walks", help="Also write walks.txt.")] = False,
    out_dir: OutDirOption = Path("."),
) -> None:
    """
    Sample random walks and write the co-occurrence matrix D as "i j count" triplets.
    """
    if label_context > 0 and labels is None:
        raise UsageException("--label-context needs a --labels file.")

    walk_cfg = WalkConfig(walk_length=walk_length, walks_per_node=walks_per_node, window=window, rng_seed=seed)
    label_cfg = LabelContextConfig(samples=label_context, rng_seed=seed)

    node_ids = read_node_ids(nodes)
    with open_input(edges) as handle:
        graph = GraphService.load_edge_list(handle, weighted=weighted, node_ids=node_ids, name=edges.name)

    transition = GraphService.transition_matrix(graph)
    walks = CooccurrenceService.sample_walks(transition, walk_cfg)
    dmat = CooccurrenceService.build_cooccurrence(walks, walk_cfg.window)
    if label_cfg.samples:
        assert labels is not None
        with open_input(labels) as handle:
            label_set = GraphService.load_labels(handle, graph, name=labels.name)
        dmat = CooccurrenceService.inject_label_context(dmat, label_set, label_cfg.samples, label_cfg.rng_seed)

    out = ArtifactService.ensure_dir(out_dir)
    target = out / COOCCURRENCE_FILE
    ArtifactService.write_cooccurrence(dmat, graph.node_ids, target)
    if dump_walks:
        ArtifactService.write_walks(walks, graph.node_ids, out / WALKS_FILE)

    stats = CooccurrenceStats(
        num_nodes=graph.num_nodes,
        total=dmat.total,
        nonzeros=dmat.nnz,
        isolated_nodes=[graph.node_ids[i] for i in sorted(transition.isolated_nodes)],
        window=walk_cfg.window,
        walk_length=walk_cfg.walk_length,
        walks_per_node=walk_cfg.walks_per_node,
        label_context=label_cfg.samples,
    )
    ArtifactService.write_stats(stats, target)

    inputs = {"edges": str(edges)}
    if labels is not None:
        inputs["labels"] = str(labels)
    if nodes is not None:
        inputs["nodes"] = str(nodes)
    RunConfig(
        command="sample",
        inputs=inputs,
        outputs={"cooccurrence": str(target)},
        options={"weighted": str(weighted), "dump_walks": str(dump_walks)},
        walk=walk_cfg,
        label_context=label_cfg,
    ).write(out / "run.conf")

    typer.echo(ArtifactService.format_table(stats))
