"""
Co-occurrence Service Module

Samples truncated random walks from a transition matrix and counts node
co-occurrences inside a sliding window, with optional same-label context.
"""

import logging

import numpy as np
import scipy.sparse as sp

from app.core.exceptions import EmptyInputException, InsufficientDataException
from app.models.graph_models import LabelSet, TransitionMatrix
from app.models.walk_models import PAD, CooccurrenceMatrix, WalkSet
from app.schemas.walk_schemas import WalkConfig
from app.utils.config import settings
from app.utils.parallel import ordered_map

logger = logging.getLogger(__name__)


class CooccurrenceService:
    """
    Service layer for walk sampling and co-occurrence counting.
    Every random choice comes from a seeded generator, so identical inputs give identical outputs.
    """

    # ===========================
    # Random Walks
    # ===========================

    @staticmethod
    def sample_walks(p: TransitionMatrix, cfg: WalkConfig) -> WalkSet:
        """
        Sample walks_per_node walks from every non-isolated node.
        - Epoch-major order, start nodes in index order inside an epoch.
        - Epochs are grouped into fixed batches, each with its own RNG stream
          derived from (rng_seed, batch index); the thread count never changes the result.
        - A walk that reaches a node without outgoing transitions stops early (PAD afterwards).
        """
        starts = p.active_nodes()
        if not len(starts):
            raise InsufficientDataException("Every node is isolated; there is nowhere to walk.")

        keys = CooccurrenceService._transition_keys(p)
        epochs_per_batch = max(1, settings.WALK_BATCH_SIZE // len(starts))
        batches = [
            (b, start, min(start + epochs_per_batch, cfg.walks_per_node))
            for b, start in enumerate(range(0, cfg.walks_per_node, epochs_per_batch))
        ]

        def run_batch(batch: tuple[int, int, int]) -> np.ndarray:
            index, first, last = batch
            rng = np.random.default_rng(np.random.SeedSequence([cfg.rng_seed, index]))
            return CooccurrenceService._walk_batch(p, keys, np.tile(starts, last - first), cfg.walk_length, rng)

        walks = np.vstack(ordered_map(run_batch, batches))
        logger.info(
            f"Sampled {len(walks)} walks of length {cfg.walk_length} from {len(starts)} start nodes "
            f"({len(batches)} batches)"
        )
        return WalkSet(walks=walks, num_nodes=p.num_nodes)

    # ===========================
    # Co-occurrence Counting
    # ===========================

    @staticmethod
    def build_cooccurrence(walks: WalkSet, window: int) -> CooccurrenceMatrix:
        """
        Count every ordered position pair (i, j) with 1 <= j - i <= window.
        - Each pair increments counts[v_i, v_j] and counts[v_j, v_i].
        - Exhaustive enumeration, integer arithmetic; the result is symmetric.
        """
        if not walks.num_walks:
            raise EmptyInputException("walk set")

        n = walks.num_nodes
        chunk_rows = max(1, settings.WALK_BATCH_SIZE // max(1, window))
        chunks = [walks.walks[start : start + chunk_rows] for start in range(0, walks.num_walks, chunk_rows)]

        if n * n <= settings.BINCOUNT_CELL_LIMIT:
            flat = np.zeros(n * n, dtype=np.int64)
            for chunk in chunks:
                flat += np.bincount(CooccurrenceService._pair_codes(chunk, window, n), minlength=n * n)
            counts = sp.csr_matrix(flat.reshape(n, n))
        else:
            partials = ordered_map(
                lambda chunk: np.unique(CooccurrenceService._pair_codes(chunk, window, n), return_counts=True), chunks
            )
            codes = np.concatenate([codes for codes, _ in partials])
            values = np.concatenate([values for _, values in partials]).astype(np.int64)
            counts = sp.coo_matrix((values, (codes // n, codes % n)), shape=(n, n)).tocsr()

        dmat = CooccurrenceMatrix.from_counts(counts)
        logger.info(f"Built co-occurrence matrix: |D| = {dmat.total}, {dmat.nnz} non-zeros, window {window}")
        return dmat

    # ===========================
    # Label Context
    # ===========================

    @staticmethod
    def inject_label_context(dmat: CooccurrenceMatrix, labels: LabelSet, m: int, rng_seed: int) -> CooccurrenceMatrix:
        """
        Add m same-label co-occurrences.
        - v_i is uniform over nodes of classes with at least two members.
        - v_j is uniform over the other members of v_i's class (never v_i itself).
        - Both counts[v_i, v_j] and counts[v_j, v_i] are incremented.
        """
        if m == 0:
            return dmat

        groups = [labels.members(label) for label in labels.classes]
        groups = [members for members in groups if len(members) >= 2]
        if not groups:
            raise InsufficientDataException("Label context needs at least one class with two or more labeled nodes.")

        flat_members = np.concatenate(groups)
        sizes = np.array([len(members) for members in groups], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        group_of = np.repeat(np.arange(len(groups)), sizes)
        position = np.arange(len(flat_members)) - offsets[group_of]

        rng = np.random.default_rng(rng_seed)
        picks = rng.integers(0, len(flat_members), size=m)
        group = group_of[picks]
        others = rng.integers(0, sizes[group] - 1)
        others = others + (others >= position[picks])

        left = flat_members[picks]
        right = flat_members[offsets[group] + others]
        extra = sp.coo_matrix(
            (np.ones(2 * m, dtype=np.int64), (np.concatenate([left, right]), np.concatenate([right, left]))),
            shape=dmat.counts.shape,
        )

        injected = CooccurrenceMatrix.from_counts(dmat.counts + extra.tocsr())
        logger.info(f"Injected {m} label co-occurrences from {len(groups)} classes: |D| = {injected.total}")
        return injected

    # ===========================
    # Internal Helpers
    # ===========================

    @staticmethod
    def _transition_keys(p: TransitionMatrix) -> np.ndarray:
        """
        Global search keys for inverse-CDF sampling: row index + cumulative probability inside the row.
        Keys are increasing along the CSR data array, so one searchsorted serves all rows.
        """
        rows = p.rows
        counts = np.diff(rows.indptr)
        cumulative = np.cumsum(rows.data)
        row_start = np.concatenate([[0.0], cumulative])[rows.indptr[:-1]]
        within = cumulative - np.repeat(row_start, counts)
        return np.repeat(np.arange(p.num_nodes, dtype=np.float64), counts) + within

    @staticmethod
    def _walk_batch(
        p: TransitionMatrix, keys: np.ndarray, starts: np.ndarray, walk_length: int, rng: np.random.Generator
    ) -> np.ndarray:
        indptr = p.rows.indptr
        indices = p.rows.indices
        out_degree = np.diff(indptr)

        walks = np.full((len(starts), walk_length), PAD, dtype=np.int32)
        walks[:, 0] = starts
        current = starts.astype(np.int64)
        alive = np.ones(len(starts), dtype=bool)
        for step in range(1, walk_length):
            alive &= out_degree[np.maximum(current, 0)] > 0
            active = np.flatnonzero(alive)
            if not len(active):
                break
            nodes = current[active]
            targets = nodes + rng.random(len(active))
            slot = np.searchsorted(keys, targets, side="right")
            slot = np.clip(slot, indptr[nodes], indptr[nodes + 1] - 1)
            current[active] = indices[slot]
            current[~alive] = PAD
            walks[active, step] = current[active]
        return walks

    @staticmethod
    def _pair_codes(chunk: np.ndarray, window: int, n: int) -> np.ndarray:
        """Flattened cell codes (row * n + col) for both directions of every in-window pair."""
        parts = []
        for offset in range(1, min(window, chunk.shape[1] - 1) + 1):
            left = chunk[:, :-offset].astype(np.int64)
            right = chunk[:, offset:].astype(np.int64)
            valid = (left != PAD) & (right != PAD)
            left, right = left[valid], right[valid]
            parts.append(left * n + right)
            parts.append(right * n + left)
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
