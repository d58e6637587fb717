# mypy: ignore-errors
import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp

from app.core.exceptions import InvalidInputException, SizeGuardException
from app.models.walk_models import CooccurrenceMatrix
from app.services.graph_service import GraphService
from app.services.proximity_service import ProximityService
from app.utils.config import settings
from tests.conftest import graph_from_networkx


def connected_graphs(count, seed):
    rng = np.random.default_rng(seed)
    found = 0
    trial = 0
    while found < count:
        trial += 1
        nx_graph = nx.gnp_random_graph(int(rng.integers(5, 30)), 0.3, seed=seed * 1000 + trial)
        if nx.is_connected(nx_graph):
            found += 1
            yield graph_from_networkx(nx_graph)


def test_triangle_second_order(triangle):
    proximity = ProximityService.high_order_proximity(GraphService.transition_matrix(triangle), 2).matrix

    assert np.allclose(np.diag(proximity), 0.5)
    assert np.allclose(proximity[~np.eye(3, dtype=bool)], 0.75)


def test_first_order_equals_transition(petersen):
    transition = GraphService.transition_matrix(petersen)

    assert np.array_equal(ProximityService.high_order_proximity(transition, 1).matrix, transition.rows.toarray())


def test_path_two_step_return(path_graph):
    proximity = ProximityService.high_order_proximity(GraphService.transition_matrix(path_graph), 2).matrix

    assert proximity[0, 0] == pytest.approx(0.5)


def test_second_order_matches_p_plus_p_squared():
    for graph in connected_graphs(10, seed=1):
        p = GraphService.transition_matrix(graph).rows.toarray()
        proximity = ProximityService.high_order_proximity(GraphService.transition_matrix(graph), 2).matrix

        assert np.allclose(proximity / 2, (p + p @ p) / 2, atol=1e-12, rtol=0)


def test_matches_recurrence_and_row_sums():
    for graph in connected_graphs(8, seed=2):
        transition = GraphService.transition_matrix(graph)
        p = transition.rows.toarray()
        order = 6

        running = p.copy()
        for _ in range(order - 1):
            running = p @ running + p
        proximity = ProximityService.high_order_proximity(transition, order).matrix

        assert np.allclose(proximity, running, atol=1e-10, rtol=0)
        assert np.allclose(proximity.sum(axis=1), order, atol=1e-9)


def test_rooted_pagerank_two_nodes(two_nodes):
    rpr = ProximityService.rooted_pagerank(GraphService.transition_matrix(two_nodes), 0.5).matrix

    assert np.allclose(rpr, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]])


def test_rooted_pagerank_small_beta_is_identity(petersen):
    rpr = ProximityService.rooted_pagerank(GraphService.transition_matrix(petersen), 1e-9).matrix

    assert np.allclose(rpr, np.eye(10), atol=1e-8, rtol=0)


def test_rooted_pagerank_rows_sum_to_one():
    for graph in connected_graphs(8, seed=3):
        for beta in (0.5, 0.85, 0.99):
            rpr = ProximityService.rooted_pagerank(GraphService.transition_matrix(graph), beta).matrix
            assert np.allclose(rpr.sum(axis=1), 1.0, atol=1e-9)


def test_parameter_validation(triangle):
    transition = GraphService.transition_matrix(triangle)

    for beta in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(InvalidInputException):
            ProximityService.rooted_pagerank(transition, beta)
    with pytest.raises(InvalidInputException):
        ProximityService.high_order_proximity(transition, 0)


def test_size_guard(triangle, mocker):
    mocker.patch.object(settings, "DENSE_NODE_LIMIT", 2)

    with pytest.raises(SizeGuardException):
        ProximityService.high_order_proximity(GraphService.transition_matrix(triangle), 2)


def test_normalize_rows():
    counts = sp.csr_matrix(np.array([[2, 2, 0], [2, 0, 0], [0, 0, 0]]))
    normalized = ProximityService.normalize_rows(CooccurrenceMatrix.from_counts(counts))

    assert normalized.proximity.matrix.tolist() == [[0.5, 0.5, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    assert normalized.zero_rows == (2,)
