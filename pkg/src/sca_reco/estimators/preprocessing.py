"""Feature standardization with population statistics."""

from __future__ import annotations

import numpy as np

from ..exceptions import TooFewSamples
from .base import BaseEstimator, check_array, check_is_fitted


class StandardScaler(BaseEstimator):
    """Center to zero mean and scale to unit population variance per column.

    Zero-variance columns keep a scale of 1 so the training matrix maps to
    exact zeros there and unseen values stay finite.
    """

    def __init__(self):
        self.mean_ = None
        self.std_ = None
        self.scale_ = None

    def fit(self, X) -> "StandardScaler":
        X = check_array(X)
        if X.shape[0] < 2:
            raise TooFewSamples("standardization needs at least 2 rows")
        self.mean_ = X.mean(axis=0)
        self.std_ = X.std(axis=0)  # population (ddof=0)
        self.scale_ = np.where(self.std_ == 0.0, 1.0, self.std_)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "mean_")
        X = check_array(X)
        if X.shape[1] != self.mean_.shape[0]:
            raise ValueError(
                f"expected {self.mean_.shape[0]} columns, got {X.shape[1]}"
            )
        return (X - self.mean_) / self.scale_

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)
