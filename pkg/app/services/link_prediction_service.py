"""
Link Prediction Service Module

Edge splitting that keeps the residual network connected, cosine and heuristic
pair scoring, and the AUC / MAP ranking metrics.
"""

import logging
import math
from typing import Callable, Iterable, Sequence

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.stats import rankdata

from app.core.exceptions import InsufficientDataException, InvalidInputException
from app.models.evaluation_models import LinkSplit
from app.models.graph_models import Graph
from app.schemas.eval_schemas import EvalReport, LinkSplitConfig
from app.services.graph_service import GraphService

logger = logging.getLogger(__name__)

HEURISTICS = ("cn", "jaccard", "aa", "pa", "ra")


class LinkPredictionService:
    """
    Service layer for the link-prediction protocol.
    Heuristics run on a simple networkx view of the residual graph.
    """

    # ===========================
    # Splitting
    # ===========================

    @staticmethod
    def make_link_split(g: Graph, cfg: LinkSplitConfig) -> LinkSplit:
        """
        Remove a fraction of edges without disconnecting anything.
        - Candidate edges (u < v, no self-loops) are visited in a seeded shuffle.
        - An edge is removed only if its endpoints stay connected afterwards.
        - Stops at floor(fraction * |candidates|) removals or when candidates run out.
        - Negatives: the same number of distinct non-adjacent pairs, by rejection sampling.
          A graph with fewer non-edges gives all of them.
        """
        candidates = GraphService.edge_array(g)
        LinkPredictionService._validate_splittable(g, candidates, cfg.fraction)

        rng = np.random.default_rng(cfg.rng_seed)
        target = math.floor(cfg.fraction * len(candidates))
        working = GraphService.to_networkx(g)
        removed: list[tuple[int, int]] = []
        for idx in rng.permutation(len(candidates)):
            if len(removed) >= target:
                break
            u, v = int(candidates[idx, 0]), int(candidates[idx, 1])
            working.remove_edge(u, v)
            if nx.has_path(working, u, v):
                removed.append((u, v))
            else:
                working.add_edge(u, v)

        achieved = len(removed) / len(candidates)
        if not removed:
            logger.warning("No edge can be removed without disconnecting the graph (every edge is a bridge)")
        elif len(removed) < target:
            logger.warning(f"Reached only {achieved:.4f} of the requested {cfg.fraction} removal fraction")

        positives = np.array(removed, dtype=np.int64).reshape(-1, 2)
        negatives = LinkPredictionService._sample_negatives(g, candidates, len(removed), rng)
        residual = LinkPredictionService._residual(g, positives)
        logger.info(
            f"Link split: removed {len(removed)}/{len(candidates)} edges (fraction {achieved:.4f}), "
            f"{len(negatives)} negatives"
        )
        return LinkSplit(
            residual=residual,
            positives=positives,
            negatives=negatives,
            fraction=cfg.fraction,
            achieved_fraction=achieved,
            rng_seed=cfg.rng_seed,
        )

    # ===========================
    # Scoring
    # ===========================

    @staticmethod
    def score_pairs(W: np.ndarray, pairs: np.ndarray) -> np.ndarray:
        """Cosine similarity of embedding columns per pair; a zero vector scores 0."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        left = W[:, pairs[:, 0]]
        right = W[:, pairs[:, 1]]
        norms = np.linalg.norm(left, axis=0) * np.linalg.norm(right, axis=0)
        dots = np.sum(left * right, axis=0)
        scores = np.zeros(len(pairs))
        np.divide(dots, norms, out=scores, where=norms > 0)
        return np.clip(scores, -1.0, 1.0)

    @staticmethod
    def heuristic_score(g: Graph, pair: tuple[int, int], method: str) -> float:
        return float(LinkPredictionService.heuristic_scores(g, [pair], method)[0])

    @staticmethod
    def heuristic_scores(g: Graph, pairs: Iterable[Sequence[int]], method: str) -> np.ndarray:
        """
        Neighborhood heuristics on g without self-loops:
        cn, jaccard, aa (1/log degree), pa (degree product), ra (1/degree).
        """
        scorer = LinkPredictionService._heuristic(method)
        nx_graph = GraphService.to_networkx(g)
        ebunch = [(int(pair[0]), int(pair[1])) for pair in pairs]
        return np.array(scorer(nx_graph, ebunch), dtype=np.float64)

    # ===========================
    # Metrics
    # ===========================

    @staticmethod
    def auc(scores: np.ndarray, labels: np.ndarray) -> float:
        """Mann-Whitney AUC from average ranks; ties count one half."""
        scores = np.asarray(scores, dtype=np.float64)
        labels = np.asarray(labels).astype(bool)
        n_pos = int(labels.sum())
        n_neg = len(labels) - n_pos
        if not n_pos or not n_neg:
            raise InvalidInputException("AUC needs at least one positive and one negative.")
        ranks = rankdata(scores)
        return float((ranks[labels].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))

    @staticmethod
    def mean_average_precision(scores: np.ndarray, labels: np.ndarray) -> float:
        """
        Average precision over one global ranking (descending score, stable on ties):
        mean over positives of j / r_j.
        """
        scores = np.asarray(scores, dtype=np.float64)
        labels = np.asarray(labels).astype(bool)
        if not labels.any():
            raise InvalidInputException("MAP needs at least one positive.")
        ranked = labels[np.argsort(-scores, kind="stable")]
        positions = np.flatnonzero(ranked) + 1
        return float(np.mean(np.arange(1, len(positions) + 1) / positions))

    @staticmethod
    def evaluate(split: LinkSplit, scores: np.ndarray, method: str) -> EvalReport:
        """AUC and MAP of scores aligned with split.pairs()."""
        targets = split.targets()
        metrics = {
            "auc": LinkPredictionService.auc(scores, targets),
            "map": LinkPredictionService.mean_average_precision(scores, targets),
        }
        logger.info(f"Link prediction ({method}): AUC={metrics['auc']:.4f}, MAP={metrics['map']:.4f}")
        return EvalReport(task="linkpred", metrics=metrics, split_seed=split.rng_seed, method=method)

    # ===========================
    # Internal Helpers
    # ===========================

    @staticmethod
    def _heuristic(method: str) -> Callable[[nx.Graph, list[tuple[int, int]]], list[float]]:
        def common_neighbors(graph: nx.Graph, ebunch: list[tuple[int, int]]) -> list[float]:
            return [float(len(list(nx.common_neighbors(graph, u, v)))) for u, v in ebunch]

        def wrap(index: Callable[..., Iterable[tuple[int, int, float]]]) -> Callable[..., list[float]]:
            return lambda graph, ebunch: [float(p) for _, _, p in index(graph, ebunch)] if ebunch else []

        scorers = {
            "cn": common_neighbors,
            "jaccard": wrap(nx.jaccard_coefficient),
            "aa": wrap(nx.adamic_adar_index),
            "pa": wrap(nx.preferential_attachment),
            "ra": wrap(nx.resource_allocation_index),
        }
        if method not in scorers:
            raise InvalidInputException(f"Unknown heuristic '{method}'; choose one of {', '.join(HEURISTICS)}.")
        return scorers[method]

    @staticmethod
    def _validate_splittable(g: Graph, candidates: np.ndarray, fraction: float) -> None:
        """
        The largest component must hold at least 1 / (1 - fraction) edges.
        - Raises InsufficientDataException otherwise.
        """
        if not 0.0 < fraction < 1.0:
            raise InvalidInputException(f"fraction must lie in (0, 1), got {fraction}")
        component = np.zeros(g.num_nodes, dtype=bool)
        component[GraphService.largest_component(g)] = True
        component_edges = int(np.count_nonzero(component[candidates[:, 0]] & component[candidates[:, 1]]))
        required = 1.0 / (1.0 - fraction)
        if component_edges < required:
            raise InsufficientDataException(
                f"Largest component has {component_edges} edges; at least {math.ceil(required)} are needed "
                f"to remove a {fraction} fraction."
            )

    @staticmethod
    def _sample_negatives(g: Graph, candidates: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
        n = g.num_nodes
        available = n * (n - 1) // 2 - len(candidates)
        if count > available:
            logger.warning(
                f"Only {available} non-adjacent pairs exist; using all of them as negatives instead of {count}"
            )
            count = available

        edge_codes = candidates[:, 0] * n + candidates[:, 1]
        chosen: dict[int, None] = {}
        while len(chosen) < count:
            draws = rng.integers(0, n, size=(2 * (count - len(chosen)) + 16, 2))
            low = draws.min(axis=1)
            high = draws.max(axis=1)
            codes = (low * n + high)[low != high]
            codes = codes[~np.isin(codes, edge_codes)]
            for code in codes:
                chosen.setdefault(int(code), None)
                if len(chosen) == count:
                    break

        codes_arr = np.fromiter(chosen, dtype=np.int64, count=len(chosen))
        return np.column_stack([codes_arr // n, codes_arr % n]).reshape(-1, 2)

    @staticmethod
    def _residual(g: Graph, positives: np.ndarray) -> Graph:
        if not len(positives):
            return g
        u, v = positives[:, 0], positives[:, 1]
        weights = np.asarray(g.adjacency[u, v]).ravel()
        drop = sp.coo_matrix(
            (np.concatenate([weights, weights]), (np.concatenate([u, v]), np.concatenate([v, u]))),
            shape=g.adjacency.shape,
        ).tocsr()
        adjacency = sp.csr_matrix(g.adjacency - drop)
        adjacency.eliminate_zeros()
        adjacency.sort_indices()
        return Graph(node_ids=g.node_ids, adjacency=adjacency)
