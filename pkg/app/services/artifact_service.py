"""
Artifact Service Module

Readers and writers for every file the pipeline stages exchange: co-occurrence
triplets with their sidecars, walk dumps, word2vec-style embeddings, loss curves,
pair scores and evaluation reports.
"""

import csv
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel

from app.core.exceptions import EmptyInputException, MalformedLineException, ResourceNotFoundException
from app.models.walk_models import CooccurrenceMatrix, WalkSet
from app.schemas.walk_schemas import CooccurrenceStats

logger = logging.getLogger(__name__)

NODES_SUFFIX = ".nodes"
STATS_SUFFIX = ".stats.json"


def sidecar(path: Path, suffix: str) -> Path:
    return path.with_name(path.name + suffix)


class ArtifactService:
    """
    Service layer for on-disk artifacts.
    All text files are UTF-8; numeric output uses 6 significant digits unless stated otherwise.
    """

    # ===========================
    # Co-occurrence Matrix
    # ===========================

    @staticmethod
    def write_cooccurrence(dmat: CooccurrenceMatrix, node_ids: Sequence[str], path: Path) -> None:
        """
        Triplet lines "i j count" in row-major order, plus a `.nodes` sidecar
        holding one node id per line in index order.
        """
        counts = dmat.counts.tocsr()
        counts.sort_indices()
        rows = np.repeat(np.arange(counts.shape[0]), np.diff(counts.indptr))
        triplets = np.column_stack([rows, counts.indices, counts.data]).astype(np.int64)
        with path.open("w", encoding="utf-8") as handle:
            np.savetxt(handle, triplets, fmt="%d")
        ArtifactService.write_node_ids(node_ids, sidecar(path, NODES_SUFFIX))
        logger.info(f"Wrote co-occurrence matrix to {path} ({dmat.nnz} triplets)")

    @staticmethod
    def read_cooccurrence(path: Path) -> tuple[CooccurrenceMatrix, list[str]]:
        """
        Read a triplet dump; node ids come from the `.nodes` sidecar when present,
        otherwise the dense indices themselves are used as ids.
        """
        ArtifactService._require(path)
        rows: list[int] = []
        cols: list[int] = []
        values: list[int] = []
        with path.open("r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                tokens = line.split()
                if not tokens or tokens[0].startswith("#"):
                    continue
                if len(tokens) != 3:
                    raise MalformedLineException(path.name, line_number, "expected 'i j count'")
                try:
                    i, j, count = int(tokens[0]), int(tokens[1]), int(tokens[2])
                except ValueError as e:
                    raise MalformedLineException(path.name, line_number, "indices and count must be integers") from e
                if i < 0 or j < 0 or count < 0:
                    raise MalformedLineException(path.name, line_number, "indices and count must be non-negative")
                rows.append(i)
                cols.append(j)
                values.append(count)

        nodes_path = sidecar(path, NODES_SUFFIX)
        if nodes_path.exists():
            node_ids = [line.strip() for line in nodes_path.read_text(encoding="utf-8").splitlines() if line.strip()]
        else:
            if not rows:
                raise EmptyInputException(path.name)
            node_ids = [str(i) for i in range(max(max(rows), max(cols)) + 1)]

        n = len(node_ids)
        if rows and max(max(rows), max(cols)) >= n:
            raise MalformedLineException(path.name, 0, f"index outside the {n} nodes listed in {nodes_path.name}")
        counts = sp.coo_matrix((values, (rows, cols)), shape=(n, n), dtype=np.int64)
        return CooccurrenceMatrix.from_counts(counts), node_ids

    @staticmethod
    def write_stats(stats: CooccurrenceStats, path: Path) -> Path:
        target = sidecar(path, STATS_SUFFIX)
        target.write_text(stats.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return target

    @staticmethod
    def read_stats(path: Path) -> CooccurrenceStats:
        target = sidecar(path, STATS_SUFFIX)
        ArtifactService._require(target)
        return CooccurrenceStats.model_validate_json(target.read_text(encoding="utf-8"))

    @staticmethod
    def write_walks(walks: WalkSet, node_ids: Sequence[str], path: Path) -> None:
        """One walk per line, space-separated node ids."""
        with path.open("w", encoding="utf-8") as handle:
            for sequence in walks.sequences():
                handle.write(" ".join(node_ids[v] for v in sequence) + "\n")

    # ===========================
    # Embeddings
    # ===========================

    @staticmethod
    def write_embeddings(labels: Sequence[str], vectors: np.ndarray, path: Path) -> None:
        """word2vec text format: "count dim" header, then "label v1 ... vd" per row."""
        rows, dim = vectors.shape
        with path.open("w", encoding="utf-8") as handle:
            handle.write(f"{rows} {dim}\n")
            for label, row in zip(labels, vectors):
                handle.write(label + " " + " ".join(f"{value:.6g}" for value in row) + "\n")
        logger.info(f"Wrote {rows} vectors of dimension {dim} to {path}")

    @staticmethod
    def read_embeddings(path: Path) -> tuple[list[str], np.ndarray]:
        """Parse word2vec text format into (labels, vectors as rows)."""
        ArtifactService._require(path)
        with path.open("r", encoding="utf-8") as handle:
            header = handle.readline().split()
            if len(header) != 2:
                raise MalformedLineException(path.name, 1, "expected header 'count dim'")
            try:
                count, dim = int(header[0]), int(header[1])
            except ValueError as e:
                raise MalformedLineException(path.name, 1, "header values must be integers") from e

            labels: list[str] = []
            vectors = np.zeros((count, dim))
            for line_number, line in enumerate(handle, start=2):
                tokens = line.split()
                if not tokens:
                    continue
                if len(tokens) != dim + 1:
                    raise MalformedLineException(path.name, line_number, f"expected a label and {dim} values")
                if len(labels) == count:
                    raise MalformedLineException(path.name, line_number, f"more than {count} vectors")
                try:
                    vectors[len(labels)] = [float(value) for value in tokens[1:]]
                except ValueError as e:
                    raise MalformedLineException(path.name, line_number, "vector values must be numbers") from e
                labels.append(tokens[0])

        if len(labels) != count:
            raise MalformedLineException(path.name, len(labels) + 1, f"header announced {count} vectors, found {len(labels)}")
        return labels, vectors

    @staticmethod
    def align_embeddings(labels: Sequence[str], vectors: np.ndarray, node_ids: Sequence[str]) -> np.ndarray:
        """
        Reorder row vectors into W (d x |V|) following `node_ids`.
        Nodes without a vector get a zero column; vectors of unknown nodes are dropped.
        """
        position = {label: row for row, label in enumerate(labels)}
        W = np.zeros((vectors.shape[1], len(node_ids)))
        missing = 0
        for column, node_id in enumerate(node_ids):
            row = position.get(node_id)
            if row is None:
                missing += 1
                continue
            W[:, column] = vectors[row]
        if missing:
            logger.warning(f"{missing} nodes have no embedding and score as zero vectors")
        return W

    # ===========================
    # Training Outputs
    # ===========================

    @staticmethod
    def write_losses(losses: Sequence[float], path: Path) -> None:
        """CSV "outer_iter,loss"; row 0 is the loss at initialization."""
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["outer_iter", "loss"])
            for outer, value in enumerate(losses):
                writer.writerow([outer, repr(float(value))])

    # ===========================
    # Evaluation Outputs
    # ===========================

    @staticmethod
    def write_scores(
        pairs: np.ndarray, targets: np.ndarray, scores: np.ndarray, node_ids: Sequence[str], path: Path
    ) -> None:
        """CSV "u,v,label,score", one row per scored pair."""
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["u", "v", "label", "score"])
            for (u, v), target, score in zip(pairs, targets, scores):
                writer.writerow([node_ids[u], node_ids[v], int(target), f"{score:.6g}"])

    @staticmethod
    def write_pairs(pairs: np.ndarray, node_ids: Sequence[str], path: Path) -> None:
        """Whitespace-separated "u v" lines with external ids (edge-list compatible)."""
        ArtifactService.write_edges(pairs, None, node_ids, path)

    @staticmethod
    def write_node_ids(node_ids: Sequence[str], path: Path) -> None:
        path.write_text("".join(f"{node_id}\n" for node_id in node_ids), encoding="utf-8")

    @staticmethod
    def write_edges(edges: np.ndarray, weights: Optional[np.ndarray], node_ids: Sequence[str], path: Path) -> None:
        """Edge-list lines "u v", or "u v w" when weights are given."""
        with path.open("w", encoding="utf-8") as handle:
            if weights is None:
                for u, v in edges:
                    handle.write(f"{node_ids[u]} {node_ids[v]}\n")
            else:
                for (u, v), weight in zip(edges, weights):
                    handle.write(f"{node_ids[u]} {node_ids[v]} {weight:.6g}\n")

    @staticmethod
    def read_pairs(path: Path, index_of: dict[str, int]) -> np.ndarray:
        ArtifactService._require(path)
        pairs: list[tuple[int, int]] = []
        with path.open("r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                tokens = line.split()
                if not tokens or tokens[0].startswith("#"):
                    continue
                if len(tokens) < 2 or tokens[0] not in index_of or tokens[1] not in index_of:
                    raise MalformedLineException(path.name, line_number, "expected two known node ids")
                pairs.append((index_of[tokens[0]], index_of[tokens[1]]))
        return np.array(pairs, dtype=np.int64).reshape(-1, 2)

    @staticmethod
    def write_report(report: BaseModel, path: Path) -> None:
        path.write_text(report.model_dump_json(indent=2, by_alias=True) + "\n", encoding="utf-8")

    @staticmethod
    def format_table(report: BaseModel) -> str:
        """Aligned two-column "key value" text; floats with 6 significant digits."""
        record = report.model_dump(by_alias=True)
        flat: dict[str, object] = {}
        for key, value in record.items():
            if isinstance(value, dict):
                flat.update(value)
            else:
                flat[key] = value
        width = max(len(key) for key in flat)
        return "\n".join(
            f"{key:<{width}}  {value:.6g}" if isinstance(value, float) else f"{key:<{width}}  {value}"
            for key, value in flat.items()
        )

    # ===========================
    # Validation Helpers
    # ===========================

    @staticmethod
    def _require(path: Path) -> None:
        if not path.exists():
            raise ResourceNotFoundException("File", str(path))

    @staticmethod
    def ensure_dir(path: Optional[Path]) -> Path:
        target = path or Path(".")
        target.mkdir(parents=True, exist_ok=True)
        return target
