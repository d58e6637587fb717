"""
Graph Service Module

Loads and validates the undirected network, its node content and its labels,
and derives the random-walk transition matrix.
"""

import csv
import logging
from typing import IO, Iterable, Optional, Sequence

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from app.core.exceptions import (
    DuplicateLabelException,
    EmptyInputException,
    MalformedLineException,
    ShapeMismatchException,
    UnknownNodeException,
)
from app.models.graph_models import ContentMatrix, Graph, LabelSet, TransitionMatrix

logger = logging.getLogger(__name__)


class GraphService:
    """
    Service layer for graph-level operations.
    All returned objects are immutable and safe to share across threads.
    """

    # ===========================
    # Loading
    # ===========================

    @staticmethod
    def load_edge_list(
        source: IO[bytes],
        weighted: bool = False,
        node_ids: Optional[Sequence[str]] = None,
        name: str = "edge list",
    ) -> Graph:
        """
        Parse a whitespace-separated edge list ("u v" or "u v w").
        - Blank lines and '#' comments are skipped.
        - Node indices follow `node_ids` first (if given), then first-seen order.
        - A third column must be a positive weight; without `weighted` it is validated but every edge weighs 1.
        """
        index: dict[str, int] = {}
        ids: list[str] = []
        for node_id in node_ids or ():
            if node_id not in index:
                index[node_id] = len(ids)
                ids.append(node_id)

        rows: list[int] = []
        cols: list[int] = []
        weights: list[float] = []
        for line_number, tokens in GraphService._records(source, name):
            if len(tokens) not in (2, 3):
                raise MalformedLineException(name, line_number, f"expected 'u v' or 'u v w', got {len(tokens)} fields")
            weight = GraphService._parse_weight(tokens, weighted, name, line_number)
            for token in tokens[:2]:
                if token not in index:
                    index[token] = len(ids)
                    ids.append(token)
            rows.append(index[tokens[0]])
            cols.append(index[tokens[1]])
            weights.append(weight)

        if not rows:
            raise EmptyInputException(name)

        graph = GraphService.from_edges(ids, rows, cols, weights)
        logger.info(f"Loaded {name}: {graph.num_nodes} nodes, {graph.num_edges} edges")
        return graph

    @staticmethod
    def load_node_list(source: IO[bytes], name: str = "node list") -> list[str]:
        """First token of every non-comment line, duplicates dropped, order kept."""
        seen: dict[str, None] = {}
        for _, tokens in GraphService._records(source, name):
            seen.setdefault(tokens[0], None)
        return list(seen)

    @staticmethod
    def load_features(
        source: IO[bytes],
        g: Graph,
        dense: bool = False,
        num_features: Optional[int] = None,
        name: str = "features",
    ) -> ContentMatrix:
        """
        Parse node content aligned to g's node order.
        - Sparse (default): "node feature_index value" triplets; repeated triplets sum.
        - Dense: CSV with a header row "node,<feature names...>".
        - Nodes without any entry get an all-zero column.
        """
        if dense:
            content = GraphService._load_dense_features(source, g, name)
        else:
            content = GraphService._load_sparse_features(source, g, num_features, name)
        logger.info(f"Loaded {name}: {content.num_features} features, {content.matrix.nnz} non-zeros")
        return content

    @staticmethod
    def load_labels(source: IO[bytes], g: Graph, name: str = "labels") -> LabelSet:
        """
        Parse "node class" lines.
        - A node may be labeled once; an empty source yields an empty LabelSet.
        """
        index = g.index_of
        assignments: dict[int, str] = {}
        for line_number, tokens in GraphService._records(source, name):
            if len(tokens) != 2:
                raise MalformedLineException(name, line_number, f"expected 'node class', got {len(tokens)} fields")
            node = GraphService._lookup(index, tokens[0])
            if node in assignments:
                logger.warning(f"Duplicate label line for node {tokens[0]} at {name}:{line_number}")
                raise DuplicateLabelException(tokens[0])
            assignments[node] = tokens[1]

        labels = LabelSet(assignments=assignments)
        logger.info(f"Loaded {name}: {len(labels)} labeled nodes in {len(labels.classes)} classes")
        return labels

    # ===========================
    # Construction & Conversion
    # ===========================

    @staticmethod
    def from_edges(
        node_ids: Sequence[str],
        rows: Iterable[int],
        cols: Iterable[int],
        weights: Optional[Iterable[float]] = None,
    ) -> Graph:
        """
        Build a Graph from index pairs.
        - Both directions are stored; duplicates merge by summation.
        - A self-loop is stored once on the diagonal.
        """
        n = len(node_ids)
        r = np.fromiter(rows, dtype=np.int64)
        c = np.fromiter(cols, dtype=np.int64)
        w = np.ones(len(r)) if weights is None else np.fromiter(weights, dtype=np.float64)
        off_diagonal = r != c
        adjacency = sp.coo_matrix(
            (
                np.concatenate([w, w[off_diagonal]]),
                (np.concatenate([r, c[off_diagonal]]), np.concatenate([c, r[off_diagonal]])),
            ),
            shape=(n, n),
        ).tocsr()
        adjacency.sum_duplicates()
        adjacency.sort_indices()
        return Graph(node_ids=tuple(node_ids), adjacency=adjacency)

    @staticmethod
    def edge_array(g: Graph, include_self_loops: bool = False) -> np.ndarray:
        """Undirected edges as an (m x 2) array with u <= v, in row-major order."""
        upper = sp.triu(g.adjacency, k=0 if include_self_loops else 1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return np.column_stack([upper.row[order], upper.col[order]]).astype(np.int64)

    @staticmethod
    def to_networkx(g: Graph) -> nx.Graph:
        """Simple undirected networkx graph on indices 0..n-1, without self-loops."""
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(g.num_nodes))
        nx_graph.add_edges_from(map(tuple, GraphService.edge_array(g)))
        return nx_graph

    @staticmethod
    def largest_component(g: Graph) -> np.ndarray:
        """Sorted node indices of the largest connected component (lowest label on ties)."""
        _, component_of = connected_components(g.adjacency, directed=False)
        sizes = np.bincount(component_of)
        return np.flatnonzero(component_of == int(np.argmax(sizes)))

    # ===========================
    # Transition Matrix
    # ===========================

    @staticmethod
    def transition_matrix(g: Graph) -> TransitionMatrix:
        """
        Row-normalize the adjacency: P[i, j] = w_ij / sum_k w_ik.
        - Degree-zero rows stay zero and are reported as isolated.
        """
        degrees = g.degrees()
        isolated = np.flatnonzero(degrees == 0)
        inverse = np.zeros_like(degrees)
        np.divide(1.0, degrees, out=inverse, where=degrees > 0)
        rows = sp.csr_matrix(sp.diags(inverse) @ g.adjacency)
        rows.sort_indices()

        if len(isolated):
            logger.info(f"Transition matrix has {len(isolated)} isolated nodes")
        return TransitionMatrix(rows=rows, isolated_nodes=frozenset(int(i) for i in isolated))

    # ===========================
    # Parsing Helpers
    # ===========================

    @staticmethod
    def _records(source: IO[bytes], name: str) -> Iterable[tuple[int, list[str]]]:
        """Yields (line_number, tokens) for every non-blank, non-comment line."""
        for line_number, raw in enumerate(source, start=1):
            try:
                line = raw.decode("utf-8").strip()
            except UnicodeDecodeError as e:
                raise MalformedLineException(name, line_number, "not valid UTF-8") from e
            if not line or line.startswith("#"):
                continue
            yield line_number, line.split()

    @staticmethod
    def _parse_weight(tokens: list[str], weighted: bool, name: str, line_number: int) -> float:
        if len(tokens) < 3:
            return 1.0
        try:
            weight = float(tokens[2])
        except ValueError as e:
            raise MalformedLineException(name, line_number, f"weight '{tokens[2]}' is not a number") from e
        if not np.isfinite(weight) or weight <= 0:
            raise MalformedLineException(name, line_number, f"weight must be positive, got {tokens[2]}")
        return weight if weighted else 1.0

    @staticmethod
    def _lookup(index: dict[str, int], node_id: str) -> int:
        """
        Resolve an external node id.
        - Raises UnknownNodeException if the node is not part of the graph.
        """
        node = index.get(node_id)
        if node is None:
            raise UnknownNodeException(node_id)
        return node

    @staticmethod
    def _load_sparse_features(
        source: IO[bytes], g: Graph, num_features: Optional[int], name: str
    ) -> ContentMatrix:
        index = g.index_of
        rows: list[int] = []
        cols: list[int] = []
        values: list[float] = []
        for line_number, tokens in GraphService._records(source, name):
            if len(tokens) != 3:
                raise MalformedLineException(
                    name, line_number, f"expected 'node feature_index value', got {len(tokens)} fields"
                )
            node = GraphService._lookup(index, tokens[0])
            try:
                feature = int(tokens[1])
                value = float(tokens[2])
            except ValueError as e:
                raise MalformedLineException(name, line_number, "feature index must be an int, value a number") from e
            if feature < 0:
                raise MalformedLineException(name, line_number, f"negative feature index {feature}")
            if num_features is not None and feature >= num_features:
                raise ShapeMismatchException(
                    f"{name}:{line_number}: feature index {feature} outside a {num_features}-feature schema"
                )
            rows.append(feature)
            cols.append(node)
            values.append(value)

        if not rows:
            raise EmptyInputException(name)

        n_features = num_features if num_features is not None else max(rows) + 1
        matrix = sp.coo_matrix((values, (rows, cols)), shape=(n_features, g.num_nodes)).tocsr()
        matrix.sum_duplicates()
        return ContentMatrix(matrix=matrix)

    @staticmethod
    def _load_dense_features(source: IO[bytes], g: Graph, name: str) -> ContentMatrix:
        index = g.index_of
        reader = csv.reader(source.read().decode("utf-8").splitlines())
        header = next(reader, None)
        if not header or len(header) < 2:
            raise EmptyInputException(name)
        feature_names = tuple(column.strip() for column in header[1:])

        rows: list[int] = []
        cols: list[int] = []
        values: list[float] = []
        records = 0
        for line_number, record in enumerate(reader, start=2):
            if not record or not "".join(record).strip():
                continue
            records += 1
            if len(record) != len(header):
                raise ShapeMismatchException(
                    f"{name}:{line_number}: expected {len(header)} columns, got {len(record)}"
                )
            node = GraphService._lookup(index, record[0].strip())
            try:
                row = np.array([float(v) for v in record[1:]])
            except ValueError as e:
                raise MalformedLineException(name, line_number, "feature values must be numbers") from e
            nonzero = np.flatnonzero(row)
            rows.extend(nonzero.tolist())
            cols.extend([node] * len(nonzero))
            values.extend(row[nonzero].tolist())

        if not records:
            raise EmptyInputException(name)

        matrix = sp.coo_matrix((values, (rows, cols)), shape=(len(feature_names), g.num_nodes)).tocsr()
        matrix.sum_duplicates()
        return ContentMatrix(matrix=matrix, feature_names=feature_names)
