# mypy: ignore-errors
import io
from typing import Callable

import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp

from app.models.graph_models import ContentMatrix, Graph, LabelSet
from app.services.graph_service import GraphService

SBM_SIZES = [75, 75, 75, 75]
SBM_P_IN = 0.1
SBM_P_OUT = 0.01


def as_source(text: str) -> io.BytesIO:
    """In-memory byte stream with the given text, as the loaders expect."""
    return io.BytesIO(text.encode("utf-8"))


def graph_from_text(text: str, weighted: bool = False) -> Graph:
    return GraphService.load_edge_list(as_source(text), weighted=weighted)


def graph_from_networkx(nx_graph: nx.Graph) -> Graph:
    nodes = sorted(nx_graph.nodes())
    position = {node: i for i, node in enumerate(nodes)}
    edges = [(position[u], position[v]) for u, v in nx_graph.edges()]
    return GraphService.from_edges(
        [str(node) for node in nodes], [u for u, _ in edges], [v for _, v in edges]
    )


@pytest.fixture
def source() -> Callable[[str], io.BytesIO]:
    return as_source


@pytest.fixture
def triangle() -> Graph:
    return graph_from_text("0 1\n1 2\n2 0\n")


@pytest.fixture
def path_graph() -> Graph:
    return graph_from_text("0 1\n1 2\n")


@pytest.fixture
def star() -> Graph:
    # center c, leaves a, b, d
    return graph_from_text("c a\nc b\nc d\n")


@pytest.fixture
def two_nodes() -> Graph:
    return graph_from_text("0 1\n")


@pytest.fixture
def petersen() -> Graph:
    return graph_from_networkx(nx.petersen_graph())


@pytest.fixture
def two_triangles() -> Graph:
    return graph_from_text("a1 a2\na2 a3\na3 a1\nb1 b2\nb2 b3\nb3 b1\n")


@pytest.fixture
def sbm() -> tuple[Graph, ContentMatrix, LabelSet]:
    return make_sbm(seed=7)


def make_sbm(seed: int) -> tuple[Graph, ContentMatrix, LabelSet]:
    """
    Four-block stochastic block model with noisy one-hot block features.
    - Each node carries its own block's feature with probability 0.8, another block's otherwise.
    - Labels are the block names.
    """
    probs = [[SBM_P_IN if a == b else SBM_P_OUT for b in range(len(SBM_SIZES))] for a in range(len(SBM_SIZES))]
    nx_graph = nx.stochastic_block_model(SBM_SIZES, probs, seed=seed)
    graph = graph_from_networkx(nx_graph)
    blocks = np.repeat(np.arange(len(SBM_SIZES)), SBM_SIZES)

    rng = np.random.default_rng(seed)
    noisy = rng.random(len(blocks)) >= 0.8
    shifted = (blocks + rng.integers(1, len(SBM_SIZES), size=len(blocks))) % len(SBM_SIZES)
    feature_of = np.where(noisy, shifted, blocks)
    content = ContentMatrix(
        matrix=sp.csr_matrix(
            (np.ones(len(blocks)), (feature_of, np.arange(len(blocks)))), shape=(len(SBM_SIZES), len(blocks))
        )
    )

    index = graph.index_of
    labels = LabelSet(assignments={index[str(node)]: f"block{blocks[node]}" for node in range(len(blocks))})
    return graph, content, labels
