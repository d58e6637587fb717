"""
Proximity Service Module

Exact high-order proximity and rooted PageRank on dense matrices, plus numeric
checks relating them to normalized random-walk co-occurrences.
"""

import logging
import math
from typing import Optional

import numpy as np

from app.core.exceptions import InvalidInputException, SizeGuardException
from app.models.graph_models import TransitionMatrix
from app.models.proximity_models import ProximityMatrix, RowNormalization
from app.models.walk_models import CooccurrenceMatrix
from app.schemas.proximity_schemas import BoundReport
from app.utils.config import settings

logger = logging.getLogger(__name__)


class ProximityService:
    """
    Service layer for dense proximity matrices.
    Everything here materializes |V| x |V| arrays and is guarded by DENSE_NODE_LIMIT.
    """

    # ===========================
    # Proximity Matrices
    # ===========================

    @staticmethod
    def high_order_proximity(p: TransitionMatrix, order: int) -> ProximityMatrix:
        """S^l = P + P^2 + ... + P^l by iterated multiplication."""
        ProximityService._validate_order(order)
        ProximityService._guard_size(p.num_nodes)

        transition = p.rows.toarray()
        power = transition.copy()
        total = transition.copy()
        for _ in range(2, order + 1):
            power = power @ transition
            total += power
        return ProximityMatrix(matrix=total, order=order)

    @staticmethod
    def rooted_pagerank(p: TransitionMatrix, beta: float) -> ProximityMatrix:
        """
        S^RPR = (1 - beta) (I - beta P)^-1, from a direct solve of (I - beta P) X = (1 - beta) I.
        - Rows of isolated nodes come out as (1 - beta) e_i.
        """
        ProximityService._validate_beta(beta)
        ProximityService._guard_size(p.num_nodes)

        identity = np.eye(p.num_nodes)
        matrix = np.linalg.solve(identity - beta * p.rows.toarray(), (1.0 - beta) * identity)
        return ProximityMatrix(matrix=matrix, order="rpr", beta=beta)

    @staticmethod
    def normalize_rows(dmat: CooccurrenceMatrix) -> RowNormalization:
        """Divides each non-zero row of D by its sum; all-zero rows stay zero and are reported."""
        ProximityService._guard_size(dmat.num_nodes)

        dense = dmat.counts.toarray().astype(np.float64)
        sums = dmat.row_sums.astype(np.float64)
        zero_rows = np.flatnonzero(sums == 0)
        np.divide(dense, sums[:, None], out=dense, where=sums[:, None] > 0)

        if len(zero_rows):
            logger.warning(f"Row normalization left {len(zero_rows)} all-zero rows (isolated nodes)")
        return RowNormalization(
            proximity=ProximityMatrix(matrix=dense, order="normalized"),
            zero_rows=tuple(int(i) for i in zero_rows),
        )

    # ===========================
    # Numeric Verification
    # ===========================

    @staticmethod
    def verify_rpr_bound(p: TransitionMatrix, order: int, beta: float) -> BoundReport:
        """
        Compare rooted PageRank with the exact expectation D^nor = S^l / l.
        - Isolated nodes are dropped first so P stays a Markov matrix.
        - K = floor(-log(l (1 - beta)) / log beta), clamped at 0; bound = 2 - 2 beta^(K+1).
        - passed is measured <= bound. The guarantee itself presumes a symmetric P and
          an order large enough for proof_bound <= bound; both premises are reported.
        """
        ProximityService._validate_order(order)
        ProximityService._validate_beta(beta)

        markov = ProximityService._drop_isolated(p)
        expectation = ProximityService.high_order_proximity(markov, order).matrix / order
        rpr = ProximityService.rooted_pagerank(markov, beta).matrix
        measured = ProximityService.spectral_norm(rpr - expectation)

        raw_k = math.floor(-math.log(order * (1.0 - beta)) / math.log(beta))
        k = max(raw_k, 0)
        bound = 2.0 - 2.0 * beta ** (k + 1)
        proof_bound = 1.0 - 2.0 * beta ** (k + 1) + 2.0 * beta ** (order + 1) + (order - 2 * k) / order
        symmetric = markov.is_symmetric()

        if not symmetric:
            logger.warning("Transition matrix is not symmetric (non-regular graph); the bound is reported, not guaranteed")
        if raw_k < 0:
            logger.warning(f"K = {raw_k} is negative for l={order}, beta={beta}; clamped to 0")

        report = BoundReport(
            beta=beta,
            order=order,
            k=k,
            bound=bound,
            measured_norm=measured,
            passed=measured <= bound,
            raw_k=raw_k,
            proof_bound=proof_bound,
            order_sufficient=proof_bound <= bound,
            transition_symmetric=symmetric,
            num_nodes=markov.num_nodes,
        )
        logger.info(f"RPR bound check: K={k}, bound={bound:.6f}, measured={measured:.6f}, pass={report.passed}")
        return report

    @staticmethod
    def empirical_deviation(p: TransitionMatrix, dmat: CooccurrenceMatrix, order: int) -> float:
        """max |l * D^nor - S^l| over rows of non-isolated nodes."""
        exact = ProximityService.high_order_proximity(p, order).matrix
        sampled = ProximityService.normalize_rows(dmat).proximity.matrix
        rows = p.active_nodes()
        if not len(rows):
            return 0.0
        return float(np.max(np.abs(order * sampled[rows] - exact[rows])))

    @staticmethod
    def spectral_norm(matrix: np.ndarray, seed: int = 0, max_iter: Optional[int] = None, tol: Optional[float] = None) -> float:
        """Largest singular value by power iteration on M^T M from a seeded start vector."""
        max_iter = max_iter or settings.SPECTRAL_MAX_ITER
        tol = tol if tol is not None else settings.SPECTRAL_TOL

        vector = np.random.default_rng(seed).standard_normal(matrix.shape[1])
        vector /= np.linalg.norm(vector)
        sigma = 0.0
        for _ in range(max_iter):
            image = matrix @ vector
            estimate = float(np.linalg.norm(image))
            if estimate == 0.0:
                return 0.0
            step = matrix.T @ image
            vector = step / np.linalg.norm(step)
            if abs(estimate - sigma) <= tol * estimate:
                return estimate
            sigma = estimate
        return sigma

    # ===========================
    # Validation Helpers
    # ===========================

    @staticmethod
    def _validate_order(order: int) -> None:
        if order < 1:
            raise InvalidInputException(f"Proximity order must be a positive integer, got {order}.")

    @staticmethod
    def _validate_beta(beta: float) -> None:
        if not 0.0 < beta < 1.0:
            raise InvalidInputException(f"beta must lie in (0, 1), got {beta}.")

    @staticmethod
    def _guard_size(num_nodes: int) -> None:
        if num_nodes > settings.DENSE_NODE_LIMIT:
            logger.warning(f"Refusing dense computation on {num_nodes} nodes")
            raise SizeGuardException(num_nodes, settings.DENSE_NODE_LIMIT)

    @staticmethod
    def _drop_isolated(p: TransitionMatrix) -> TransitionMatrix:
        if not p.isolated_nodes:
            return p
        active = p.active_nodes()
        logger.info(f"Excluding {len(p.isolated_nodes)} isolated nodes from verification")
        return TransitionMatrix(rows=p.rows[active][:, active].tocsr())
