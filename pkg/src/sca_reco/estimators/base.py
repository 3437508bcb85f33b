"""Estimator base class and input validation helpers."""

from __future__ import annotations

import inspect

import numpy as np

from ..exceptions import LengthMismatch, NotFittedError


class BaseEstimator:
    """Minimal estimator protocol: parameters are constructor arguments."""

    @classmethod
    def _param_names(cls) -> list[str]:
        signature = inspect.signature(cls.__init__)
        return [
            name
            for name, parameter in signature.parameters.items()
            if name != "self"
            and parameter.kind
            not in (inspect.Parameter.VAR_POSITIONAL, inspect.Parameter.VAR_KEYWORD)
        ]

    def get_params(self) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "BaseEstimator":
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(f"{type(self).__name__} has no parameter {name!r}")
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        arguments = ", ".join(f"{k}={v!r}" for k, v in sorted(self.get_params().items()))
        return f"{type(self).__name__}({arguments})"


def check_array(X, *, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 array of finite values."""
    array = np.asarray(X, dtype=np.float64)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    if array.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {array.shape}")
    if array.size and not np.isfinite(array).all():
        raise ValueError(f"{name} contains non-finite values")
    return array


def check_X_y(X, y, n_classes: int | None = None) -> tuple[np.ndarray, np.ndarray, int]:
    """Validate a labeled matrix; labels are integer class indices."""
    X = check_array(X)
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("y must be 1-dimensional")
    if len(y) != X.shape[0]:
        raise LengthMismatch(f"X has {X.shape[0]} rows but y has {len(y)}")
    if len(y) == 0:
        raise ValueError("cannot fit on an empty dataset")
    y = y.astype(np.int64, casting="safe") if y.dtype != np.int64 else y
    if (y < 0).any():
        raise ValueError("class indices must be non-negative")
    k = int(y.max()) + 1 if n_classes is None else int(n_classes)
    if (y >= k).any():
        raise ValueError(f"class index out of range for {k} classes")
    return X, y, k


def check_is_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"{type(estimator).__name__} must be fitted before this call"
        )
