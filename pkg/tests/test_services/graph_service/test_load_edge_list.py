# mypy: ignore-errors
import numpy as np
import pytest

from app.core.exceptions import EmptyInputException, MalformedLineException
from app.services.graph_service import GraphService
from tests.conftest import as_source


def test_load_edge_list_basic_cases():
    test_cases = [
        # (text, weighted, expected nodes, expected edges)
        ("a b\nb c\n", False, 3, 2),
        ("a b\n\n# comment\nb c\n", False, 3, 2),
        ("a b\na b\n", False, 2, 1),
        ("a a\na b\n", False, 2, 2),
        ("a b 2.5\n", True, 2, 1),
        ("a b 7\n", False, 2, 1),
    ]

    for text, weighted, nodes, edges in test_cases:
        graph = GraphService.load_edge_list(as_source(text), weighted=weighted)
        assert graph.num_nodes == nodes
        assert graph.num_edges == edges


def test_duplicate_edges_merge_by_weight_sum():
    graph = GraphService.load_edge_list(as_source("a b 2\nb a 3\n"), weighted=True)

    assert graph.num_edges == 1
    assert graph.adjacency[0, 1] == pytest.approx(5.0)
    assert graph.adjacency[1, 0] == pytest.approx(5.0)


def test_unweighted_duplicates_count_each_occurrence():
    graph = GraphService.load_edge_list(as_source("a b 7\nb a\n"))

    assert graph.adjacency[0, 1] == pytest.approx(2.0)


def test_node_ids_follow_first_seen_order():
    graph = GraphService.load_edge_list(as_source("z y\nx z\n"))

    assert graph.node_ids == ("z", "y", "x")


def test_adjacency_is_symmetric():
    graph = GraphService.load_edge_list(as_source("a b 1\nb c 2\nc d 3\na d 4\na c 0.5\n"), weighted=True)

    dense = graph.adjacency.toarray()
    assert np.array_equal(dense, dense.T)


def test_self_loop_is_stored_once():
    graph = GraphService.load_edge_list(as_source("a a\na b\n"))

    assert graph.adjacency[0, 0] == pytest.approx(1.0)
    assert graph.degrees()[0] == pytest.approx(2.0)


def test_preseeded_node_ids_keep_isolated_nodes():
    graph = GraphService.load_edge_list(as_source("b c\n"), node_ids=["a", "b", "c", "d"])

    assert graph.node_ids == ("a", "b", "c", "d")
    assert graph.degrees()[0] == 0.0
    assert graph.degrees()[3] == 0.0


def test_shuffled_lines_give_same_graph_up_to_relabeling():
    lines = ["a b", "b c", "c d", "d a", "a c"]
    first = GraphService.load_edge_list(as_source("\n".join(lines)))
    second = GraphService.load_edge_list(as_source("\n".join(reversed(lines))))

    order = [second.index_of[node] for node in first.node_ids]
    relabeled = second.adjacency.toarray()[np.ix_(order, order)]
    assert np.array_equal(first.adjacency.toarray(), relabeled)


def test_malformed_lines_report_line_number():
    test_cases = [
        ("a b\nlonely\n", 2),
        ("a b c d\n", 1),
        ("a b\n\nc d x\n", 3),
        ("a b -1\n", 1),
        ("a b 0\n", 1),
    ]

    for text, line_number in test_cases:
        with pytest.raises(MalformedLineException) as excinfo:
            GraphService.load_edge_list(as_source(text), weighted=True, name="edges.txt")
        assert f"edges.txt:{line_number}:" in str(excinfo.value)


def test_empty_input_is_rejected():
    for text in ("", "\n\n", "# only a comment\n"):
        with pytest.raises(EmptyInputException):
            GraphService.load_edge_list(as_source(text))


def test_unused_weight_column_is_still_validated():
    test_cases = [
        ("a b -3\n", 1),
        ("a b\nb c zero\n", 2),
        ("a b nan\n", 1),
    ]

    for text, line_number in test_cases:
        with pytest.raises(MalformedLineException) as excinfo:
            GraphService.load_edge_list(as_source(text), weighted=False, name="edges.txt")
        assert f"edges.txt:{line_number}:" in str(excinfo.value)
