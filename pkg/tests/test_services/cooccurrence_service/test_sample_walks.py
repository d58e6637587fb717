# mypy: ignore-errors
import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import InsufficientDataException
from app.models.walk_models import PAD
from app.schemas.walk_schemas import WalkConfig
from app.services.cooccurrence_service import CooccurrenceService
from app.services.graph_service import GraphService
from app.utils.config import settings
from tests.conftest import as_source


def test_two_node_walks_alternate(two_nodes):
    transition = GraphService.transition_matrix(two_nodes)
    walks = CooccurrenceService.sample_walks(transition, WalkConfig(walk_length=4, walks_per_node=5, window=1))

    assert walks.num_walks == 10
    for row in walks.walks:
        assert row.tolist() in ([0, 1, 0, 1], [1, 0, 1, 0])


def test_epoch_major_start_order(triangle):
    transition = GraphService.transition_matrix(triangle)
    walks = CooccurrenceService.sample_walks(transition, WalkConfig(walk_length=3, walks_per_node=4, window=1))

    assert walks.walks[:, 0].tolist() == [0, 1, 2] * 4


def test_same_seed_same_walks(triangle):
    transition = GraphService.transition_matrix(triangle)
    cfg = WalkConfig(walk_length=10, walks_per_node=20, window=2, rng_seed=11)

    first = CooccurrenceService.sample_walks(transition, cfg)
    second = CooccurrenceService.sample_walks(transition, cfg)
    other = CooccurrenceService.sample_walks(transition, cfg.model_copy(update={"rng_seed": 12}))

    assert np.array_equal(first.walks, second.walks)
    assert not np.array_equal(first.walks, other.walks)


def test_thread_count_does_not_change_walks(petersen, mocker):
    transition = GraphService.transition_matrix(petersen)
    cfg = WalkConfig(walk_length=8, walks_per_node=30, window=2, rng_seed=5)
    mocker.patch.object(settings, "WALK_BATCH_SIZE", 64)

    mocker.patch.object(settings, "THREADS", 1)
    single = CooccurrenceService.sample_walks(transition, cfg)
    mocker.patch.object(settings, "THREADS", 4)
    pooled = CooccurrenceService.sample_walks(transition, cfg)

    assert np.array_equal(single.walks, pooled.walks)


def test_every_step_follows_an_edge(petersen):
    transition = GraphService.transition_matrix(petersen)
    walks = CooccurrenceService.sample_walks(transition, WalkConfig(walk_length=15, walks_per_node=10, window=3))
    dense = transition.rows.toarray()

    steps = np.stack([walks.walks[:, :-1].ravel(), walks.walks[:, 1:].ravel()], axis=1)
    assert np.all(dense[steps[:, 0], steps[:, 1]] > 0)


def test_path_step_frequency_from_middle(path_graph):
    transition = GraphService.transition_matrix(path_graph)
    walks = CooccurrenceService.sample_walks(
        transition, WalkConfig(walk_length=40, walks_per_node=10000, window=1, rng_seed=2)
    )

    current = walks.walks[:, :-1].ravel()
    following = walks.walks[:, 1:].ravel()
    from_middle = following[current == 1]
    assert np.mean(from_middle == 0) == pytest.approx(0.5, abs=0.02)


def test_isolated_nodes_are_not_start_nodes():
    graph = GraphService.load_edge_list(as_source("b c\n"), node_ids=["a", "b", "c"])
    walks = CooccurrenceService.sample_walks(
        GraphService.transition_matrix(graph), WalkConfig(walk_length=5, walks_per_node=3, window=1)
    )

    assert 0 not in walks.walks
    assert np.all(walks.walks != PAD)


def test_all_isolated_is_rejected():
    graph = GraphService.from_edges(["a", "b"], [], [])

    with pytest.raises(InsufficientDataException):
        CooccurrenceService.sample_walks(GraphService.transition_matrix(graph), WalkConfig())


def test_walk_config_validation():
    test_cases = [
        {"walk_length": 1},
        {"walk_length": 5, "window": 5},
        {"walks_per_node": 0},
        {"window": 0},
        {"rng_seed": -1},
    ]

    for overrides in test_cases:
        with pytest.raises(ValidationError):
            WalkConfig(**overrides)
