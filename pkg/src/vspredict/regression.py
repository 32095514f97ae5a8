"""Ordinary least squares for single- and multi-log linear predictors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr, solve_triangular
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

RANK_TOL = 1e-10


class RankDeficientError(np.linalg.LinAlgError):
    pass


@dataclass
class LinearModel:
    intercept: float
    slopes: np.ndarray
    feature_names: list[str] | None = None

    def __post_init__(self):
        self.slopes = np.asarray(self.slopes, dtype=float).ravel()
        if self.feature_names is None:
            self.feature_names = [f"x{j}" for j in range(self.slopes.size)]
        if len(self.slopes) != len(self.feature_names) or len(self.slopes) < 1:
            raise ValueError("need one slope per feature and at least one feature")

    def to_dict(self) -> dict:
        return {"intercept": self.intercept, "slopes": self.slopes.tolist(),
                "feature_names": list(self.feature_names)}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["intercept"]), d["slopes"], list(d["feature_names"]))


def _lstsq_qr(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    # equilibrate columns so the rank test is scale-free
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    Q, R, perm = qr(A / norms, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size and diag.min() < RANK_TOL * diag.max():
        raise RankDeficientError("design matrix is rank deficient (collinear features)")
    z = solve_triangular(R, Q.T @ y)
    coef = np.empty_like(z)
    coef[perm] = z
    return coef / norms


def fit_ols(X, y, feature_names=None) -> LinearModel:
    """Least-squares intercept and slopes via pivoted QR of the design matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float).ravel()
    n, p = X.shape
    if n != y.size:
        raise ValueError("X and y row counts differ")
    if n < p + 1:
        raise ValueError(f"need at least {p + 1} rows to fit {p} slopes and an intercept")
    if feature_names is None:
        feature_names = [f"x{j}" for j in range(p)]
    A = np.column_stack([np.ones(n), X])
    coef = _lstsq_qr(A, y)
    return LinearModel(float(coef[0]), coef[1:], list(feature_names))


def predict_linear(model: LinearModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != model.slopes.size:
        raise ValueError(f"expected {model.slopes.size} columns, got {X.shape[1]}")
    # row-wise reduction keeps each prediction independent of batch size
    return model.intercept + (X * model.slopes).sum(axis=1)


class OLSRegressor(RegressorMixin, BaseEstimator):
    """Linear regression in raw physical units.

    Coefficients are reported without any feature scaling, so for the
    four-log case they read directly as ``Vs = a + b*Depth + c*NPHI + ...``.
    """

    def __init__(self, feature_names=None):
        self.feature_names = feature_names

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        names = self.feature_names or [f"x{j}" for j in range(X.shape[1])]
        self.model_ = fit_ols(X, y, names)
        self.coef_ = self.model_.slopes
        self.intercept_ = self.model_.intercept
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self)
        return predict_linear(self.model_, check_array(X))
