"""
Classification Service Module

Semi-supervised node classification: a seeded per-class split and a one-vs-rest
logistic regression trained by full-batch gradient descent on node embeddings.
"""

import logging

import numpy as np
from scipy.special import expit

from app.core.exceptions import InsufficientDataException, ShapeMismatchException
from app.models.evaluation_models import Classifier, ClassifySplit
from app.models.graph_models import LabelSet
from app.schemas.eval_schemas import ClassifyConfig, EvalReport

logger = logging.getLogger(__name__)


class ClassificationService:
    """
    Service layer for the node-classification protocol.
    Embeddings are passed as W (d x |V|), one column per node.
    """

    # ===========================
    # Splitting
    # ===========================

    @staticmethod
    def make_classify_split(labels: LabelSet, cfg: ClassifyConfig) -> ClassifySplit:
        """
        Sample per_class training nodes from every class (sorted class order), then
        test_size test nodes from the remaining labeled pool, all without replacement.
        """
        if not labels.classes:
            raise InsufficientDataException("No labeled nodes to split.")

        rng = np.random.default_rng(cfg.rng_seed)
        train: list[int] = []
        for label in labels.classes:
            members = labels.members(label)
            if len(members) < cfg.per_class:
                logger.warning(f"Class '{label}' has {len(members)} members, {cfg.per_class} requested")
                raise InsufficientDataException(
                    f"Class '{label}' has only {len(members)} labeled nodes; {cfg.per_class} are needed for training."
                )
            train.extend(int(i) for i in rng.choice(members, size=cfg.per_class, replace=False))

        pool = np.setdiff1d(labels.labeled_nodes(), np.array(train, dtype=np.int64))
        if not len(pool) or len(pool) < cfg.test_size:
            raise InsufficientDataException(
                f"Only {len(pool)} labeled nodes remain after training sampling; test_size is {cfg.test_size}."
            )
        test = [int(i) for i in rng.choice(pool, size=cfg.test_size, replace=False)]

        logger.info(f"Classification split: {len(train)} train, {len(test)} test (seed {cfg.rng_seed})")
        return ClassifySplit(
            train_nodes=tuple(train),
            test_nodes=tuple(test),
            per_class=cfg.per_class,
            test_size=cfg.test_size,
            rng_seed=cfg.rng_seed,
        )

    # ===========================
    # Training & Prediction
    # ===========================

    @staticmethod
    def train_classifier(
        W: np.ndarray, split: ClassifySplit, labels: LabelSet, cfg: ClassifyConfig = ClassifyConfig()
    ) -> Classifier:
        """
        Fit one binary logistic regression per class on standardized embeddings.
        - Standardization uses training-node mean and std; zero-variance dimensions keep scale 1.
        - L2 penalty on weights only, full-batch gradient descent with a fixed learning rate.
        """
        ClassificationService._validate_coverage(W, split)
        classes = labels.classes
        train_labels = [labels.assignments[i] for i in split.train_nodes]
        missing = sorted(set(classes) - set(train_labels))
        if missing:
            raise InsufficientDataException(f"Classes absent from training: {', '.join(missing)}")

        features = W[:, list(split.train_nodes)].T
        mean = features.mean(axis=0)
        std = features.std(axis=0)
        scale = np.where(std > 0, std, 1.0)
        standardized = (features - mean) / scale

        class_index = {label: c for c, label in enumerate(classes)}
        targets = np.zeros((len(train_labels), len(classes)))
        targets[np.arange(len(train_labels)), [class_index[label] for label in train_labels]] = 1.0

        weights = np.zeros((standardized.shape[1], len(classes)))
        bias = np.zeros(len(classes))
        target_rate = targets.mean(axis=0)
        for _ in range(cfg.steps):
            probs = expit(standardized @ weights + bias)
            grad_weights = standardized.T @ (probs - targets) / len(targets) + cfg.l2 * weights
            weights -= cfg.learning_rate * grad_weights
            bias -= cfg.learning_rate * (probs.mean(axis=0) - target_rate)

        return Classifier(classes=classes, weights=weights, bias=bias, mean=mean, scale=scale)

    @staticmethod
    def accuracy(classifier: Classifier, W: np.ndarray, nodes: tuple[int, ...], labels: LabelSet) -> float:
        """Fraction of `nodes` whose predicted class matches their label."""
        if not nodes:
            raise InsufficientDataException("Accuracy needs at least one node.")
        predicted = classifier.predict(W[:, list(nodes)].T)
        hits = sum(1 for node, label in zip(nodes, predicted) if labels.assignments[node] == label)
        return hits / len(nodes)

    @staticmethod
    def evaluate(W: np.ndarray, labels: LabelSet, cfg: ClassifyConfig, method: str = "embedding") -> EvalReport:
        """Split, train and score in one call; the report carries test accuracy."""
        split = ClassificationService.make_classify_split(labels, cfg)
        classifier = ClassificationService.train_classifier(W, split, labels, cfg)
        value = ClassificationService.accuracy(classifier, W, split.test_nodes, labels)
        logger.info(f"Classification accuracy: {value:.4f}")
        return EvalReport(task="classify", metrics={"accuracy": value}, split_seed=cfg.rng_seed, method=method)

    # ===========================
    # Validation Helpers
    # ===========================

    @staticmethod
    def _validate_coverage(W: np.ndarray, split: ClassifySplit) -> None:
        needed = max(split.train_nodes + split.test_nodes, default=-1)
        if W.ndim != 2 or needed >= W.shape[1]:
            raise ShapeMismatchException(f"Embeddings cover {W.shape[-1]} nodes; split references node {needed}")
