import logging
from pathlib import Path
from typing import Annotated, Optional

import typer

from app.cli.exception_handler import handle_errors
from app.cli.options import OutDirOption, ScoringMethod, SeedOption, SplitSeedOption, WeightedOption, open_input
from app.core.exceptions import UsageException
from app.schemas.eval_schemas import ClassifyConfig, EvalReport, LinkSplitConfig
from app.schemas.run_schemas import RunConfig
from app.services.artifact_service import ArtifactService
from app.services.classification_service import ClassificationService
from app.services.graph_service import GraphService
from app.services.link_prediction_service import LinkPredictionService

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"

eval_app = typer.Typer(help="Evaluate embeddings or heuristics on classification and link prediction.")


def emit(report: EvalReport, out_dir: Path, run_config: RunConfig) -> None:
    out = ArtifactService.ensure_dir(out_dir)
    ArtifactService.write_report(report, out / REPORT_FILE)
    run_config.write(out / "run.conf")
    typer.echo(report.model_dump_json(indent=2))
    typer.echo(ArtifactService.format_table(report))


@eval_app.command("classify")
@handle_errors
def classify(
    embeddings: Annotated[Path, typer.Argument(help="word2vec-format node embeddings.")],
    labels: Annotated[Path, typer.Argument(help="'node class' lines.")],
    seed: SeedOption = 0,
    per_class: Annotated[int, typer.Option("--per-class")] = 20,
    test_size: Annotated[int, typer.Option("--test-size")] = 1000,
    l2: Annotated[float, typer.Option("--l2")] = 0.01,
    learning_rate: Annotated[float, typer.Option("--lr")] = 0.1,
    steps: Annotated[int, typer.Option("--steps")] = 500,
    out_dir: OutDirOption = Path("."),
) -> None:
    """
    Node classification with a one-vs-rest logistic regression on the embeddings.
    """
    cfg = ClassifyConfig(
        per_class=per_class, test_size=test_size, rng_seed=seed, l2=l2, learning_rate=learning_rate, steps=steps
    )
    node_ids, vectors = ArtifactService.read_embeddings(embeddings)
    nodes_only = GraphService.from_edges(node_ids, [], [])
    with open_input(labels) as handle:
        label_set = GraphService.load_labels(handle, nodes_only, name=labels.name)

    report = ClassificationService.evaluate(vectors.T, label_set, cfg, method=embeddings.name)
    emit(
        report,
        out_dir,
        RunConfig(
            command="eval classify",
            inputs={"embeddings": str(embeddings), "labels": str(labels)},
            outputs={"report": str(out_dir / REPORT_FILE)},
            classify=cfg,
        ),
    )


@eval_app.command("linkpred")
@handle_errors
def linkpred(
    paths: Annotated[list[Path], typer.Argument(help="EDGES for heuristics, or EMBEDDINGS EDGES for cosine scoring.")],
    method: Annotated[ScoringMethod, typer.Option("--method", help="Scoring method.")] = ScoringMethod.cosine,
    split_seed: SplitSeedOption = 0,
    fraction: Annotated[float, typer.Option("--fraction", help="Fraction of edges to remove.")] = 0.5,
    weighted: WeightedOption = False,
    scores_out: Annotated[Optional[Path], typer.Option("--scores-out", help="CSV of per-pair scores.")] = None,
    out_dir: OutDirOption = Path("."),
) -> None:
    """
    Link prediction on a connectivity-preserving edge split of the original graph.
    """
    embeddings, edges = LinkPredictionCommand.unpack(paths, method)
    split_cfg = LinkSplitConfig(fraction=fraction, rng_seed=split_seed)

    with open_input(edges) as handle:
        graph = GraphService.load_edge_list(handle, weighted=weighted, name=edges.name)
    split = LinkPredictionService.make_link_split(graph, split_cfg)
    pairs = split.pairs()

    if embeddings is None:
        scores = LinkPredictionService.heuristic_scores(split.residual, pairs, method.value)
    else:
        node_ids, vectors = ArtifactService.read_embeddings(embeddings)
        W = ArtifactService.align_embeddings(node_ids, vectors, graph.node_ids)
        scores = LinkPredictionService.score_pairs(W, pairs)

    report = LinkPredictionService.evaluate(split, scores, method.value)
    if scores_out is not None:
        ArtifactService.write_scores(pairs, split.targets(), scores, graph.node_ids, scores_out)

    inputs = {"edges": str(edges)}
    if embeddings is not None:
        inputs["embeddings"] = str(embeddings)
    outputs = {"report": str(out_dir / REPORT_FILE)}
    if scores_out is not None:
        outputs["scores"] = str(scores_out)
    emit(
        report,
        out_dir,
        RunConfig(
            command="eval linkpred",
            inputs=inputs,
            outputs=outputs,
            options={"method": method.value, "weighted": str(weighted)},
            link_split=split_cfg,
        ),
    )


class LinkPredictionCommand:
    @staticmethod
    def unpack(paths: list[Path], method: ScoringMethod) -> tuple[Optional[Path], Path]:
        """
        One path means heuristic scoring of an edge list; two mean embeddings plus edges.
        - Raises UsageException for any other combination.
        """
        if len(paths) == 1:
            if method is ScoringMethod.cosine:
                raise UsageException("Cosine scoring needs an embeddings file before the edge list.")
            return None, paths[0]
        if len(paths) == 2:
            if method is not ScoringMethod.cosine:
                raise UsageException(f"--method {method.value} scores the graph itself; pass only the edge list.")
            return paths[0], paths[1]
        raise UsageException(f"Expected EDGES or EMBEDDINGS EDGES, got {len(paths)} paths.")
