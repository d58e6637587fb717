# mypy: ignore-errors
import networkx as nx
import pytest
from typer.testing import CliRunner


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def clique_files(tmp_path):
    """Two triangles joined by one bridge, block features and block labels."""
    edges = tmp_path / "cliques.edges"
    edges.write_text("a1 a2\na2 a3\na3 a1\nb1 b2\nb2 b3\nb3 b1\na1 b1\n")
    features = tmp_path / "cliques.features"
    features.write_text("".join(f"{side}{k} {0 if side == 'a' else 1} 1\n" for side in "ab" for k in (1, 2, 3)))
    labels = tmp_path / "cliques.labels"
    labels.write_text("".join(f"{side}{k} {side}\n" for side in "ab" for k in (1, 2, 3)))
    return edges, features, labels


@pytest.fixture
def petersen_edges(tmp_path):
    path = tmp_path / "petersen.edges"
    path.write_text("".join(f"n{u} n{v}\n" for u, v in nx.petersen_graph().edges()))
    return path
