# mypy: ignore-errors
import itertools

import numpy as np
import pytest
import scipy.sparse as sp

from app.core.exceptions import DivergenceException, ShapeMismatchException
from app.models.graph_models import ContentMatrix
from app.schemas.train_schemas import TrainConfig
from app.schemas.walk_schemas import WalkConfig
from app.services.cooccurrence_service import CooccurrenceService
from app.services.factorization_service import ACCEPT_SLACK, FactorizationService
from app.services.graph_service import GraphService
from app.utils.config import settings


@pytest.fixture
def clique_problem(two_triangles):
    transition = GraphService.transition_matrix(two_triangles)
    cfg = WalkConfig(walk_length=10, walks_per_node=20, window=2, rng_seed=3)
    dmat = CooccurrenceService.build_cooccurrence(CooccurrenceService.sample_walks(transition, cfg), cfg.window)
    # one-hot clique indicator features
    content = ContentMatrix(
        matrix=sp.csr_matrix(np.array([[1.0, 1.0, 1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]]))
    )
    return dmat, content


def cosine(a, b):
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


def test_zero_iterations_return_initialization(clique_problem):
    dmat, content = clique_problem
    cfg = TrainConfig(dim=4, outer_iters=0, rng_seed=5)
    result = FactorizationService.train_alm(dmat, content, cfg)

    rng = np.random.default_rng(5)
    W = rng.uniform(-cfg.init_scale, cfg.init_scale, size=(4, 6))
    S = rng.uniform(-cfg.init_scale, cfg.init_scale, size=(2, 4))
    assert np.array_equal(result.model.W, W)
    assert np.array_equal(result.model.S, S)
    assert len(result.losses) == 1
    assert result.accepted_steps == 0


def test_loss_trajectory_is_non_increasing(clique_problem):
    dmat, content = clique_problem
    result = FactorizationService.train_alm(
        dmat, content, TrainConfig(dim=3, step_size=1e-4, outer_iters=20, inner_max=10, rng_seed=1)
    )

    assert len(result.losses) == 21
    for before, after in itertools.pairwise(result.losses):
        assert after <= before + ACCEPT_SLACK * max(1.0, abs(before))
    assert result.final_loss < result.losses[0]


def test_clique_embeddings_separate(clique_problem, two_triangles):
    dmat, content = clique_problem
    cfg = TrainConfig(dim=2, step_size=1e-4, outer_iters=200, inner_max=50, inner_tol=0.0, rng_seed=0)
    vectors = FactorizationService.train_alm(dmat, content, cfg).model.node_vectors()

    index = two_triangles.index_of
    cliques = [[index[f"{side}{k}"] for k in (1, 2, 3)] for side in ("a", "b")]
    intra = [cosine(vectors[u], vectors[v]) for clique in cliques for u, v in itertools.combinations(clique, 2)]
    inter = [cosine(vectors[u], vectors[v]) for u in cliques[0] for v in cliques[1]]

    assert min(intra) > max(inter)


def test_same_seed_same_model(clique_problem):
    dmat, content = clique_problem
    cfg = TrainConfig(dim=3, step_size=1e-4, outer_iters=5, inner_max=5, rng_seed=2)

    first = FactorizationService.train_alm(dmat, content, cfg)
    second = FactorizationService.train_alm(dmat, content, cfg)

    assert np.array_equal(first.model.W, second.model.W)
    assert first.losses == second.losses


def test_thread_count_does_not_change_training(clique_problem, mocker):
    dmat, content = clique_problem
    cfg = TrainConfig(dim=3, step_size=1e-4, outer_iters=5, inner_max=5, rng_seed=2, block_size=2)

    mocker.patch.object(settings, "THREADS", 1)
    single = FactorizationService.train_alm(dmat, content, cfg)
    mocker.patch.object(settings, "THREADS", 3)
    pooled = FactorizationService.train_alm(dmat, content, cfg)

    assert np.array_equal(single.model.W, pooled.model.W)
    assert np.array_equal(single.model.S, pooled.model.S)


def test_oversized_step_diverges(clique_problem):
    dmat, content = clique_problem

    with pytest.raises(DivergenceException) as excinfo:
        FactorizationService.train_alm(dmat, content, TrainConfig(dim=4, step_size=10.0, outer_iters=5, rng_seed=0))
    assert "lower --step" in str(excinfo.value)


def test_content_must_cover_all_nodes(clique_problem):
    dmat, _ = clique_problem

    with pytest.raises(ShapeMismatchException):
        FactorizationService.train_alm(dmat, ContentMatrix.identity(5), TrainConfig(dim=2, outer_iters=1))
