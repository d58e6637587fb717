"""
Factorization Service Module

Joint explicit factorization of co-occurrence counts D and node content F:
X = (F^T S) W is fitted under a binomial likelihood with per-pair trial bound Q.

Matrix layout: rows index contexts c, columns index nodes i, so
E[c, i] = Q[c, i] * sigmoid(f_c^T S w_i), grad_W = S^T F R and grad_S = F R W^T
with R = E - D.
"""

import logging
import math
from typing import Literal, Optional

import numpy as np
from scipy.special import expit

from app.core.exceptions import (
    BinomialSupportException,
    DivergenceException,
    EmptyInputException,
    InvalidInputException,
    ShapeMismatchException,
)
from app.models.factorization_models import EmbeddingModel, MultiplyAddCounter, QMatrix, TrainingResult
from app.models.graph_models import ContentMatrix
from app.models.walk_models import CooccurrenceMatrix
from app.schemas.train_schemas import TrainConfig
from app.utils.config import settings
from app.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

Block = Literal["W", "S"]

# Relative slack allowed for an accepted step to raise the loss (arithmetic noise).
ACCEPT_SLACK = 1e-9


class FactorizationService:
    """
    Service layer for the explicit factorization objective.
    Loss and gradients are evaluated over column blocks of nodes with an ordered reduction,
    so results do not depend on the number of worker threads.
    """

    # ===========================
    # Objective Pieces
    # ===========================

    @staticmethod
    def build_q(dmat: CooccurrenceMatrix, k: int) -> QMatrix:
        """Q[i, c] = k * #(i) * #(c) / |D| + #(i, c); zero wherever #(i) or #(c) is zero."""
        if dmat.total <= 0:
            raise EmptyInputException("co-occurrence matrix")
        if k < 0:
            raise InvalidInputException(f"negative ratio must be non-negative, got {k}")
        return QMatrix(
            counts=dmat.counts.tocsc(),
            row_sums=dmat.row_sums,
            col_sums=dmat.col_sums,
            total=dmat.total,
            negative_ratio=k,
        )

    @staticmethod
    def expected_counts(
        F: ContentMatrix,
        S: np.ndarray,
        W: np.ndarray,
        Q: QMatrix,
        counter: Optional[MultiplyAddCounter] = None,
        block_size: Optional[int] = None,
    ) -> np.ndarray:
        """Dense E = Q * sigmoid((F^T S) W), rows indexed by context c and columns by node i."""
        FactorizationService._validate_shapes(F, S, W, Q)
        content = FactorizationService._content_embeddings(F, S, counter)

        def run(bounds: tuple[int, int]) -> np.ndarray:
            start, stop = bounds
            logits = FactorizationService._logits(content, W, start, stop, counter)
            return Q.block(start, stop) * expit(logits)

        blocks = ordered_map(run, FactorizationService._blocks(Q.num_nodes, block_size))
        return np.hstack(blocks)

    @staticmethod
    def loss(
        dmat: CooccurrenceMatrix,
        F: ContentMatrix,
        S: np.ndarray,
        W: np.ndarray,
        Q: QMatrix,
        counter: Optional[MultiplyAddCounter] = None,
        block_size: Optional[int] = None,
    ) -> float:
        """
        Binomial negative log-likelihood without the combinatorial constant:
        sum over Q > 0 of d * softplus(-x) + (Q - d) * softplus(x).
        """
        value, _, _ = FactorizationService.evaluate(dmat, F, S, W, Q, None, counter, block_size)
        return value

    @staticmethod
    def gradients(
        dmat: CooccurrenceMatrix,
        F: ContentMatrix,
        S: np.ndarray,
        W: np.ndarray,
        Q: QMatrix,
        counter: Optional[MultiplyAddCounter] = None,
        block_size: Optional[int] = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """(grad_W, grad_S) with grad_W = S^T F R (d x |V|) and grad_S = F R W^T (N_f x d)."""
        _, grad_w, grad_s = FactorizationService.evaluate(dmat, F, S, W, Q, "both", counter, block_size)
        assert grad_w is not None and grad_s is not None
        return grad_w, grad_s

    @staticmethod
    def evaluate(
        dmat: CooccurrenceMatrix,
        F: ContentMatrix,
        S: np.ndarray,
        W: np.ndarray,
        Q: QMatrix,
        want: Optional[Literal["W", "S", "both"]] = None,
        counter: Optional[MultiplyAddCounter] = None,
        block_size: Optional[int] = None,
    ) -> tuple[float, Optional[np.ndarray], Optional[np.ndarray]]:
        """
        One pass over the node blocks returning the loss and the requested gradients.
        - Raises BinomialSupportException if any D[c, i] exceeds Q[c, i].
        """
        FactorizationService._validate_shapes(F, S, W, Q)
        if dmat.counts.shape != Q.shape:
            raise ShapeMismatchException(f"D has shape {dmat.counts.shape} but Q has shape {Q.shape}")

        content = FactorizationService._content_embeddings(F, S, counter)
        observed = dmat.counts.tocsc()
        need_w = want in ("W", "both")
        need_s = want in ("S", "both")
        dim = W.shape[0]

        def run(bounds: tuple[int, int]) -> tuple[float, Optional[np.ndarray], Optional[np.ndarray]]:
            start, stop = bounds
            logits = FactorizationService._logits(content, W, start, stop, counter)
            trials = Q.block(start, stop)
            successes = observed[:, start:stop].toarray().astype(np.float64)

            violations = int(np.count_nonzero(successes > trials))
            if violations:
                raise BinomialSupportException(violations)

            part = float(
                np.sum(successes * np.logaddexp(0.0, -logits) + (trials - successes) * np.logaddexp(0.0, logits))
            )
            if not (need_w or need_s):
                return part, None, None

            residual = trials * expit(logits) - successes
            grad_w = content.T @ residual if need_w else None
            residual_w = residual @ W[:, start:stop].T if need_s else None
            if counter is not None:
                counter.add(residual.size * dim * (int(need_w) + int(need_s)))
            return part, grad_w, residual_w

        parts = ordered_map(run, FactorizationService._blocks(Q.num_nodes, block_size))

        total = 0.0
        for part, _, _ in parts:
            total += part

        grad_W = np.hstack([g for _, g, _ in parts if g is not None]) if need_w else None
        grad_S = None
        if need_s:
            residual_w = np.zeros((Q.num_nodes, dim))
            for _, _, rw in parts:
                if rw is not None:
                    residual_w += rw
            grad_S = np.asarray(F.matrix @ residual_w)
            if counter is not None:
                counter.add(F.matrix.nnz * dim)
        return total, grad_W, grad_S

    # ===========================
    # Training
    # ===========================

    @staticmethod
    def train_alm(
        dmat: CooccurrenceMatrix,
        F: ContentMatrix,
        cfg: TrainConfig,
        counter: Optional[MultiplyAddCounter] = None,
    ) -> TrainingResult:
        """
        Alternating minimization with a fixed step size.
        - W and S start uniform in [-init_scale, init_scale] from the seed.
        - Each outer iteration runs inner gradient steps on W, then on S.
        - A step is kept only if the loss does not rise by more than ACCEPT_SLACK (relative);
          a rejected step ends that block's inner loop.
        - A rejected step with a non-finite loss, or one above divergence_ratio times the
          current loss, aborts with DivergenceException.
        """
        Q = FactorizationService.build_q(dmat, cfg.negative_ratio)
        if F.num_nodes != dmat.num_nodes:
            raise ShapeMismatchException(
                f"Content matrix covers {F.num_nodes} nodes but the co-occurrence matrix has {dmat.num_nodes}"
            )

        rng = np.random.default_rng(cfg.rng_seed)
        W = rng.uniform(-cfg.init_scale, cfg.init_scale, size=(cfg.dim, dmat.num_nodes))
        S = rng.uniform(-cfg.init_scale, cfg.init_scale, size=(F.num_features, cfg.dim))

        current, _, _ = FactorizationService.evaluate(dmat, F, S, W, Q, None, counter, cfg.block_size)
        FactorizationService._check_finite(current, cfg.step_size)
        losses = [current]
        accepted = rejected = 0
        converged = False
        logger.info(
            f"Training: dim={cfg.dim}, nodes={dmat.num_nodes}, features={F.num_features}, "
            f"initial loss={current:.6g}"
        )

        for outer in range(cfg.outer_iters):
            stopped_early = True
            for block in ("W", "S"):
                W, S, current, stats = FactorizationService._inner_loop(block, dmat, F, S, W, Q, current, cfg, counter)
                accepted += stats[0]
                rejected += stats[1]
                stopped_early = stopped_early and stats[2]
            converged = stopped_early
            losses.append(current)
            logger.info(f"Outer iteration {outer + 1}/{cfg.outer_iters}: loss={current:.6g}")

        return TrainingResult(
            model=EmbeddingModel(W=W, S=S),
            losses=tuple(losses),
            accepted_steps=accepted,
            rejected_steps=rejected,
            converged=converged,
        )

    # ===========================
    # Internal Helpers
    # ===========================

    @staticmethod
    def _inner_loop(
        block: Block,
        dmat: CooccurrenceMatrix,
        F: ContentMatrix,
        S: np.ndarray,
        W: np.ndarray,
        Q: QMatrix,
        current: float,
        cfg: TrainConfig,
        counter: Optional[MultiplyAddCounter],
    ) -> tuple[np.ndarray, np.ndarray, float, tuple[int, int, bool]]:
        """
        Repeated steps on one block until the relative decrease drops below inner_tol,
        a step is rejected, or inner_max steps were taken.
        Returns (W, S, loss, (accepted, rejected, stopped_before_inner_max)).
        """
        _, grad_w, grad_s = FactorizationService.evaluate(dmat, F, S, W, Q, block, counter, cfg.block_size)
        gradient = grad_w if block == "W" else grad_s
        assert gradient is not None
        accepted = rejected = 0

        for _ in range(cfg.inner_max):
            if block == "W":
                cand_w, cand_s = W - cfg.step_size * gradient, S
            else:
                cand_w, cand_s = W, S - cfg.step_size * gradient

            candidate, grad_w, grad_s = FactorizationService.evaluate(
                dmat, F, cand_s, cand_w, Q, block, counter, cfg.block_size
            )
            if candidate > current + ACCEPT_SLACK * max(1.0, abs(current)) or not math.isfinite(candidate):
                limit = cfg.divergence_ratio * current if current > 0 else math.inf
                if not math.isfinite(candidate) or candidate > limit:
                    logger.error(f"Loss jumped from {current:.6g} to {candidate:.6g} on a {block} step")
                    raise DivergenceException(cfg.step_size, candidate)
                logger.warning(f"Rejected {block} step: loss {current:.6g} -> {candidate:.6g}")
                return W, S, current, (accepted, rejected + 1, True)

            W, S = cand_w, cand_s
            decrease = (current - candidate) / max(abs(current), np.finfo(float).tiny)
            current = candidate
            accepted += 1
            gradient = grad_w if block == "W" else grad_s
            assert gradient is not None
            if decrease < cfg.inner_tol:
                return W, S, current, (accepted, rejected, True)

        return W, S, current, (accepted, rejected, False)

    @staticmethod
    def _content_embeddings(F: ContentMatrix, S: np.ndarray, counter: Optional[MultiplyAddCounter]) -> np.ndarray:
        """F^T S as a dense |V| x d array, via sparse-dense multiplication."""
        if counter is not None:
            counter.add(F.matrix.nnz * S.shape[1])
        return np.asarray(F.matrix.T @ S)

    @staticmethod
    def _logits(
        content: np.ndarray, W: np.ndarray, start: int, stop: int, counter: Optional[MultiplyAddCounter]
    ) -> np.ndarray:
        if counter is not None:
            counter.add(content.shape[0] * (stop - start) * content.shape[1])
        return content @ W[:, start:stop]

    @staticmethod
    def _blocks(num_nodes: int, block_size: Optional[int]) -> list[tuple[int, int]]:
        size = block_size or settings.EMF_BLOCK_SIZE
        return [(start, min(start + size, num_nodes)) for start in range(0, num_nodes, size)]

    @staticmethod
    def _check_finite(value: float, step_size: float) -> None:
        if not math.isfinite(value):
            raise DivergenceException(step_size, value)

    @staticmethod
    def _validate_shapes(F: ContentMatrix, S: np.ndarray, W: np.ndarray, Q: QMatrix) -> None:
        """
        Check F: N_f x |V|, S: N_f x d, W: d x |V| against Q: |V| x |V|.
        - Raises ShapeMismatchException on the first disagreement.
        """
        n = Q.num_nodes
        if F.num_nodes != n:
            raise ShapeMismatchException(f"F has {F.num_nodes} node columns, Q has {n} nodes")
        if W.ndim != 2 or W.shape[1] != n:
            raise ShapeMismatchException(f"W has shape {W.shape}, expected (d, {n})")
        if S.ndim != 2 or S.shape[0] != F.num_features:
            raise ShapeMismatchException(f"S has shape {S.shape}, expected ({F.num_features}, d)")
        if S.shape[1] != W.shape[0]:
            raise ShapeMismatchException(f"S has dim {S.shape[1]} but W has dim {W.shape[0]}")
