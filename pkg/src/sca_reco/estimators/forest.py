"""Random forest: bagged Gini trees with per-split feature subsampling."""

from __future__ import annotations

import math

import numpy as np

from ..rng import derive_seed
from .base import BaseEstimator, check_array, check_is_fitted, check_X_y
from .tree import DecisionTreeClassifier


class RandomForestClassifier(BaseEstimator):
    """Majority vote over bootstrap-trained trees.

    Each tree draws n rows with replacement (unless ``bootstrap`` is off)
    and examines sqrt(d) features per split.  Tree seeds derive from
    ``random_state`` and the tree index, so fits are reproducible and
    independent of execution order.  Vote ties go to the smallest class
    index.
    """

    def __init__(
        self,
        n_estimators: int = 100,
        max_features: str | int | None = "sqrt",
        bootstrap: bool = True,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        random_state: int | None = None,
    ):
        self.n_estimators = n_estimators
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.random_state = random_state
        self.trees_ = None
        self.n_classes_ = None
        self.n_features_ = None
        self.feature_importances_ = None

    def _resolve_max_features(self, d: int) -> int | None:
        if self.max_features is None:
            return None
        if self.max_features == "sqrt":
            return max(1, int(math.sqrt(d)))
        value = int(self.max_features)
        if value < 1:
            raise ValueError("max_features must be at least 1")
        return min(value, d)

    def fit(self, X, y, n_classes: int | None = None) -> "RandomForestClassifier":
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be at least 1")
        X, y, k = check_X_y(X, y, n_classes)
        n, d = X.shape
        self.n_classes_ = k
        self.n_features_ = d
        per_split = self._resolve_max_features(d)
        seed = self.random_state or 0
        trees = []
        importances = np.zeros(d)
        for t in range(self.n_estimators):
            boot_rng = np.random.Generator(np.random.PCG64(derive_seed(seed, t, 0)))
            rows = boot_rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            tree = DecisionTreeClassifier(
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                max_features=per_split,
                random_state=derive_seed(seed, t, 1),
            )
            tree.fit(X[rows], y[rows], n_classes=k)
            trees.append(tree)
            importances += tree.feature_importances_
        self.trees_ = trees
        self.feature_importances_ = importances / self.n_estimators
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "trees_")
        X = check_array(X)
        votes = np.zeros((X.shape[0], self.n_classes_), dtype=np.int64)
        for tree in self.trees_:
            predictions = tree.predict(X)
            votes[np.arange(X.shape[0]), predictions] += 1
        return np.argmax(votes, axis=1).astype(np.int64)

    def get_fitted_state(self) -> dict:
        check_is_fitted(self, "trees_")
        return {
            "n_classes": int(self.n_classes_),
            "n_features": int(self.n_features_),
            "trees": [tree.get_fitted_state() for tree in self.trees_],
        }

    def load_fitted_state(self, state: dict) -> "RandomForestClassifier":
        self.n_classes_ = int(state["n_classes"])
        self.n_features_ = int(state["n_features"])
        self.trees_ = [
            DecisionTreeClassifier().load_fitted_state(tree_state)
            for tree_state in state["trees"]
        ]
        return self
