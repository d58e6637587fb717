import logging
from pathlib import Path
from typing import Annotated, Optional

import typer

from app.cli.exception_handler import handle_errors
from app.cli.options import OutDirOption, SeedOption, open_input
from app.core.exceptions import UsageException
from app.models.graph_models import ContentMatrix
from app.schemas.run_schemas import RunConfig
from app.schemas.train_schemas import TrainConfig
from app.services.artifact_service import ArtifactService
from app.services.factorization_service import FactorizationService
from app.services.graph_service import GraphService

logger = logging.getLogger(__name__)

EMBEDDINGS_FILE = "embeddings.txt"
FEATURE_EMBEDDINGS_FILE = "feature_embeddings.txt"
LOSS_FILE = "loss.csv"


@handle_errors
def embed(
    cooccurrence: Annotated[Path, typer.Argument(help="Co-occurrence triplets written by 'sample'.")],
    features: Annotated[Optional[Path], typer.Argument(help="Node content (triplets, or CSV with --dense).")] = None,
    dim: Annotated[int, typer.Option("--dim")] = 200,
    iters: Annotated[int, typer.Option("--iters", help="Outer alternating-minimization iterations.")] = 200,
    step: Annotated[float, typer.Option("--step", help="Fixed gradient step size.")] = 1e-7,
    neg: Annotated[int, typer.Option("--neg", help="Negative ratio k in Q.")] = 5,
    inner_max: Annotated[int, typer.Option("--inner-max")] = 50,
    inner_tol: Annotated[float, typer.Option("--inner-tol")] = 1e-4,
    init_scale: Annotated[float, typer.Option("--init-scale")] = 0.01,
    seed: SeedOption = 0,
    dense: Annotated[bool, typer.Option("--dense", help="Features are a dense CSV with a header row.")] = False,
    num_features: Annotated[Optional[int], typer.Option("--num-features", help="Feature schema size.")] = None,
    identity_features: Annotated[
        bool, typer.Option("--identity-features", help="Structure only: use F = I instead of node content.")
    ] = False,
    out_dir: OutDirOption = Path("."),
) -> None:
    """
    Factorize D jointly with node content and write word2vec-format node embeddings.
    """
    if features is None and not identity_features:
        raise UsageException("Give a features file or pass --identity-features.")
    if features is not None and identity_features:
        raise UsageException("--identity-features replaces the features file; pass only one.")

    cfg = TrainConfig(
        dim=dim,
        step_size=step,
        outer_iters=iters,
        inner_max=inner_max,
        inner_tol=inner_tol,
        negative_ratio=neg,
        rng_seed=seed,
        init_scale=init_scale,
    )

    dmat, node_ids = ArtifactService.read_cooccurrence(cooccurrence)
    if identity_features:
        content = ContentMatrix.identity(len(node_ids))
    else:
        assert features is not None
        nodes_only = GraphService.from_edges(node_ids, [], [])
        with open_input(features) as handle:
            content = GraphService.load_features(
                handle, nodes_only, dense=dense, num_features=num_features, name=features.name
            )

    result = FactorizationService.train_alm(dmat, content, cfg)

    out = ArtifactService.ensure_dir(out_dir)
    ArtifactService.write_embeddings(node_ids, result.model.node_vectors(), out / EMBEDDINGS_FILE)
    feature_labels = content.feature_names or tuple(str(i) for i in range(content.num_features))
    ArtifactService.write_embeddings(feature_labels, result.model.S, out / FEATURE_EMBEDDINGS_FILE)
    ArtifactService.write_losses(result.losses, out / LOSS_FILE)

    inputs = {"cooccurrence": str(cooccurrence)}
    if features is not None:
        inputs["features"] = str(features)
    RunConfig(
        command="embed",
        inputs=inputs,
        outputs={
            "embeddings": str(out / EMBEDDINGS_FILE),
            "feature_embeddings": str(out / FEATURE_EMBEDDINGS_FILE),
            "losses": str(out / LOSS_FILE),
        },
        options={
            "dense": str(dense),
            "identity_features": str(identity_features),
            **({"num_features": str(num_features)} if num_features is not None else {}),
        },
        train=cfg,
    ).write(out / "run.conf")

    typer.echo(
        f"Embedded {len(node_ids)} nodes in {cfg.dim} dimensions: loss {result.losses[0]:.6g} -> "
        f"{result.final_loss:.6g} ({result.accepted_steps} accepted, {result.rejected_steps} rejected steps)"
    )
