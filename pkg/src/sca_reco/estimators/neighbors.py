"""k-nearest-neighbors classification with deterministic tie handling."""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, check_array, check_is_fitted, check_X_y


class KNeighborsClassifier(BaseEstimator):
    """Majority vote over the k nearest training rows (Euclidean distance).

    Determinism: equal distances are ordered by training-row index, and vote
    ties go to the smallest class index.  When fewer than k rows exist, all
    of them vote.
    """

    def __init__(self, n_neighbors: int = 5):
        self.n_neighbors = n_neighbors
        self.X_ = None
        self.y_ = None
        self.n_classes_ = None

    def fit(self, X, y, n_classes: int | None = None) -> "KNeighborsClassifier":
        if self.n_neighbors < 1:
            raise ValueError("n_neighbors must be at least 1")
        self.X_, self.y_, self.n_classes_ = check_X_y(X, y, n_classes)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "X_")
        X = check_array(X)
        k = min(self.n_neighbors, self.X_.shape[0])
        predictions = np.empty(X.shape[0], dtype=np.int64)
        for i, row in enumerate(X):
            distances = ((self.X_ - row) ** 2).sum(axis=1)
            nearest = np.argsort(distances, kind="stable")[:k]
            votes = np.bincount(self.y_[nearest], minlength=self.n_classes_)
            predictions[i] = int(np.argmax(votes))
        return predictions

    def get_fitted_state(self) -> dict:
        check_is_fitted(self, "X_")
        return {
            "n_classes": int(self.n_classes_),
            "X": self.X_.tolist(),
            "y": self.y_.tolist(),
        }

    def load_fitted_state(self, state: dict) -> "KNeighborsClassifier":
        self.n_classes_ = int(state["n_classes"])
        self.X_ = np.asarray(state["X"], dtype=np.float64)
        self.y_ = np.asarray(state["y"], dtype=np.int64)
        return self
