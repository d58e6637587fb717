# mypy: ignore-errors
import numpy as np
import pytest

from app.core.exceptions import EmptyInputException
from app.models.walk_models import PAD, WalkSet
from app.schemas.walk_schemas import WalkConfig
from app.services.cooccurrence_service import CooccurrenceService
from app.services.graph_service import GraphService
from app.utils.config import settings


def walk_set(rows, num_nodes):
    return WalkSet(walks=np.array(rows, dtype=np.int32), num_nodes=num_nodes)


def test_hand_enumerated_counts():
    test_cases = [
        # (walks, num_nodes, window, expected dense counts, total)
        ([[0, 1]], 2, 1, [[0, 1], [1, 0]], 2),
        ([[0, 1, 2]], 3, 2, [[0, 1, 1], [1, 0, 1], [1, 1, 0]], 6),
        ([[0, 0, 0]], 1, 1, [[4]], 4),
        ([[0, 1, PAD]], 2, 2, [[0, 1], [1, 0]], 2),
    ]

    for walks, n, window, expected, total in test_cases:
        dmat = CooccurrenceService.build_cooccurrence(walk_set(walks, n), window)
        assert dmat.counts.toarray().tolist() == expected
        assert dmat.total == total


def test_window_larger_than_walk_is_capped():
    dmat = CooccurrenceService.build_cooccurrence(walk_set([[0, 1, 2]], 3), 10)

    assert dmat.total == 6


def test_aggregates_are_exact_and_symmetric(petersen):
    walks = CooccurrenceService.sample_walks(
        GraphService.transition_matrix(petersen), WalkConfig(walk_length=20, walks_per_node=15, window=4)
    )
    dmat = CooccurrenceService.build_cooccurrence(walks, 4)
    dense = dmat.counts.toarray()

    assert np.array_equal(dense, dense.T)
    assert np.array_equal(dmat.row_sums, dense.sum(axis=1))
    assert np.array_equal(dmat.col_sums, dense.sum(axis=0))
    assert dmat.total == int(dense.sum())
    # every walk of length 20 holds sum_{k=1..4} (20 - k) in-window pairs, counted twice
    assert dmat.total == walks.num_walks * 2 * sum(20 - k for k in range(1, 5))


def test_sparse_path_matches_dense_path(petersen, mocker):
    walks = CooccurrenceService.sample_walks(
        GraphService.transition_matrix(petersen), WalkConfig(walk_length=12, walks_per_node=10, window=3, rng_seed=9)
    )
    dense_counts = CooccurrenceService.build_cooccurrence(walks, 3)

    mocker.patch.object(settings, "BINCOUNT_CELL_LIMIT", 0)
    mocker.patch.object(settings, "WALK_BATCH_SIZE", 16)
    sparse_counts = CooccurrenceService.build_cooccurrence(walks, 3)

    assert (dense_counts.counts != sparse_counts.counts).nnz == 0
    assert dense_counts.total == sparse_counts.total


def test_same_seed_gives_identical_matrix(triangle):
    cfg = WalkConfig(walk_length=10, walks_per_node=50, window=3, rng_seed=4)
    transition = GraphService.transition_matrix(triangle)

    first = CooccurrenceService.build_cooccurrence(CooccurrenceService.sample_walks(transition, cfg), cfg.window)
    second = CooccurrenceService.build_cooccurrence(CooccurrenceService.sample_walks(transition, cfg), cfg.window)

    assert (first.counts != second.counts).nnz == 0


def test_empty_walk_set_is_rejected():
    with pytest.raises(EmptyInputException):
        CooccurrenceService.build_cooccurrence(WalkSet(walks=np.zeros((0, 5), dtype=np.int32), num_nodes=3), 2)
