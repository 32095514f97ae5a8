"""Single-hidden-layer feed-forward network: tanh hidden layer, linear output.

Two trainers are provided. :func:`train_delta_rule` does online gradient
descent with backpropagated error signals; :func:`train_lm` does full-batch
Levenberg-Marquardt on the residual Jacobian. Both stop early on the
validation SSE and return the best-validation snapshot.

Parameters are flattened in the order ``W1`` (row-major), ``b1``, ``W2``,
``b2``; :meth:`NeuralModel.params` and :meth:`NeuralModel.with_params`
convert between the two forms.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .conditioning import RangeScaler
from .seeding import derive_seed

log = logging.getLogger(__name__)

OPTIMIZERS = ("delta_rule", "levenberg_marquardt")


class TrainingDivergedError(RuntimeError):
    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"training diverged (non-finite SSE) at epoch {epoch}")


@dataclass
class TrainConfig:
    optimizer: str = "levenberg_marquardt"
    learning_rate: float = 0.01
    max_epochs: int = 300
    lm_lambda0: float = 1e-3
    lm_lambda_up: float = 10.0
    lm_lambda_down: float = 0.1
    lm_lambda_max: float = 1e12
    min_grad: float = 1e-10
    patience: int = 50
    seed: int = 0
    init_range: float = 0.5

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if self.lm_lambda0 <= 0:
            raise ValueError("lm_lambda0 must be positive")
        if not (self.lm_lambda_up > 1 > self.lm_lambda_down > 0):
            raise ValueError("need lm_lambda_up > 1 > lm_lambda_down > 0")
        if self.max_epochs < 0 or self.patience < 1:
            raise ValueError("max_epochs must be >= 0 and patience >= 1")


@dataclass
class NeuralModel:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: float
    input_scaler: RangeScaler | None = None
    target_scaler: RangeScaler | None = None

    def __post_init__(self):
        self.W1 = np.atleast_2d(np.asarray(self.W1, dtype=float))
        self.b1 = np.asarray(self.b1, dtype=float).ravel()
        self.W2 = np.asarray(self.W2, dtype=float).ravel()
        self.b2 = float(self.b2)
        h = self.W1.shape[0]
        if self.b1.size != h or self.W2.size != h:
            raise ValueError("inconsistent layer shapes")

    @property
    def n_inputs(self) -> int:
        return self.W1.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.W1.shape[0]

    @property
    def n_params(self) -> int:
        return self.n_hidden * (self.n_inputs + 2) + 1

    def params(self) -> np.ndarray:
        return np.concatenate([self.W1.ravel(), self.b1, self.W2, [self.b2]])

    def with_params(self, theta) -> "NeuralModel":
        theta = np.asarray(theta, dtype=float)
        h, n = self.n_hidden, self.n_inputs
        if theta.size != self.n_params:
            raise ValueError(f"expected {self.n_params} parameters, got {theta.size}")
        i = h * n
        return NeuralModel(theta[:i].reshape(h, n).copy(), theta[i:i + h].copy(),
                           theta[i + h:i + 2 * h].copy(), theta[-1],
                           self.input_scaler, self.target_scaler)

    def to_dict(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "n_hidden": self.n_hidden,
            "hidden_activation": "tanh",
            "output_activation": "identity",
            "W1": self.W1.ravel().tolist(),
            "b1": self.b1.tolist(),
            "W2": self.W2.tolist(),
            "b2": self.b2,
            "input_scaler": self.input_scaler.to_dict() if self.input_scaler else None,
            "target_scaler": self.target_scaler.to_dict() if self.target_scaler else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NeuralModel":
        h, n = int(d["n_hidden"]), int(d["n_inputs"])
        sc_in, sc_out = d.get("input_scaler"), d.get("target_scaler")
        return cls(np.asarray(d["W1"], dtype=float).reshape(h, n), d["b1"], d["W2"], d["b2"],
                   RangeScaler.from_dict(sc_in) if sc_in else None,
                   RangeScaler.from_dict(sc_out) if sc_out else None)


@dataclass
class TrainHistory:
    train_sse: list[float] = field(default_factory=list)
    val_sse: list[float] = field(default_factory=list)
    lam: list[float] = field(default_factory=list)
    best_epoch: int = 0
    best_val_sse: float = float("inf")
    epochs_run: int = 0
    stop_reason: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def init_network(n_inputs: int, n_hidden: int, seed: int = 0, init_range: float = 0.5) -> NeuralModel:
    """Uniform ``[-init_range, init_range]`` weights from a seeded generator."""
    if n_inputs < 1 or n_hidden < 1:
        raise ValueError("n_inputs and n_hidden must be >= 1")
    rng = np.random.default_rng(seed)
    n_params = n_hidden * (n_inputs + 2) + 1
    theta = rng.uniform(-init_range, init_range, size=n_params)
    template = NeuralModel(np.zeros((n_hidden, n_inputs)), np.zeros(n_hidden),
                           np.zeros(n_hidden), 0.0)
    return template.with_params(theta)


def _as_batch(model: NeuralModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :] if model.n_inputs > 1 or X.size == 1 else X[:, None]
    if X.shape[1] != model.n_inputs:
        raise ValueError(f"expected {model.n_inputs} inputs, got {X.shape[1]}")
    return X


def _hidden(model: NeuralModel, X: np.ndarray) -> np.ndarray:
    # elementwise products rather than BLAS so each row's output is
    # bitwise independent of how many rows are evaluated together
    return np.tanh((X[:, None, :] * model.W1).sum(axis=2) + model.b1)


def _output(model: NeuralModel, A: np.ndarray) -> np.ndarray:
    return (A * model.W2).sum(axis=1) + model.b2


def forward(model: NeuralModel, x):
    """Network output for scaled input(s); scalar for a single sample."""
    single = np.ndim(x) <= 1 and (model.n_inputs > 1 or np.size(x) == 1)
    X = _as_batch(model, x)
    out = _output(model, _hidden(model, X))
    return float(out[0]) if single else out


def sse(model: NeuralModel, X, y) -> float:
    r = np.asarray(y, dtype=float) - forward(model, _as_batch(model, X))
    return float(r @ r)


def gradient(model: NeuralModel, X, y) -> np.ndarray:
    """Gradient of sum((y - yhat)^2) over all parameters, by backpropagation."""
    X = _as_batch(model, X)
    y = np.asarray(y, dtype=float).ravel()
    if y.size != X.shape[0]:
        raise ValueError("X and y row counts differ")
    A = _hidden(model, X)                       # (N, h)
    yhat = _output(model, A)
    d_out = -2.0 * (y - yhat)                   # dE/dyhat
    g_W2 = A.T @ d_out
    g_b2 = d_out.sum()
    d_hid = np.outer(d_out, model.W2) * (1.0 - A * A)   # dE/d(pre-activation)
    g_W1 = d_hid.T @ X
    g_b1 = d_hid.sum(axis=0)
    return np.concatenate([g_W1.ravel(), g_b1, g_W2, [g_b2]])


def jacobian(model: NeuralModel, X) -> np.ndarray:
    """d(yhat_i)/d(theta_k), shape (n_samples, n_params)."""
    X = _as_batch(model, X)
    A = _hidden(model, X)
    dA = (1.0 - A * A) * model.W2               # (N, h)
    n = X.shape[0]
    J_W1 = (dA[:, :, None] * X[:, None, :]).reshape(n, -1)
    return np.hstack([J_W1, dA, A, np.ones((n, 1))])


def _scale(model: NeuralModel, X, y=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if model.input_scaler is not None:
        X = model.input_scaler.transform(X)
    if y is None:
        return X, None
    y = np.asarray(y, dtype=float).ravel()
    if model.target_scaler is not None:
        y = model.target_scaler.transform(y[:, None]).ravel()
    return X, y


class _EarlyStopper:
    def __init__(self, model, patience, X_val, y_val):
        self.patience = patience
        self.X_val, self.y_val = X_val, y_val
        self.best_model = model
        self.best_score = self.score(model)
        self.best_epoch = 0
        self.stale = 0

    def score(self, model):
        return sse(model, self.X_val, self.y_val)

    def update(self, model, epoch) -> bool:
        s = self.score(model)
        if s < self.best_score:
            self.best_score, self.best_model, self.best_epoch = s, model, epoch
            self.stale = 0
        else:
            self.stale += 1
        return self.stale >= self.patience


def _prepare(model, X, y, X_val, y_val):
    Xs, ys = _scale(model, X, y)
    if X_val is None:
        Xv, yv = Xs, ys
    else:
        Xv, yv = _scale(model, X_val, y_val)
    return Xs, ys, Xv, yv


def train_delta_rule(model: NeuralModel, X, y, X_val=None, y_val=None,
                     cfg: TrainConfig | None = None):
    """Online backpropagation with the generalized delta rule.

    For each sample the output error ``e`` gives the output signal
    ``phi = e`` (linear output); hidden signals are
    ``phi_k = (1 - a_k^2) * w2_k * e``; every weight moves by
    ``learning_rate * phi * input``. Without validation data the training
    SSE drives early stopping.
    """
    cfg = cfg or TrainConfig(optimizer="delta_rule")
    Xs, ys, Xv, yv = _prepare(model, X, y, X_val, y_val)
    W1, b1, W2 = model.W1.copy(), model.b1.copy(), model.W2.copy()
    b2 = model.b2
    alpha = cfg.learning_rate
    rng = np.random.default_rng(cfg.seed)
    hist = TrainHistory()
    stopper = _EarlyStopper(model, cfg.patience, Xv, yv)
    current = model
    hist.stop_reason = "max_epochs"

    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(len(ys))
        for i in order:
            x = Xs[i]
            a = np.tanh(W1 @ x + b1)
            e = ys[i] - (a @ W2 + b2)
            phi_hidden = (1.0 - a * a) * W2 * e
            W2 += alpha * e * a
            b2 += alpha * e
            W1 += alpha * np.outer(phi_hidden, x)
            b1 += alpha * phi_hidden
        current = NeuralModel(W1.copy(), b1.copy(), W2.copy(), b2,
                              model.input_scaler, model.target_scaler)
        train_sse = sse(current, Xs, ys)
        if not np.isfinite(train_sse):
            raise TrainingDivergedError(epoch)
        hist.train_sse.append(train_sse)
        stop = stopper.update(current, epoch)
        hist.val_sse.append(sse(current, Xv, yv))
        hist.epochs_run = epoch
        if train_sse == 0.0:
            hist.stop_reason = "zero_residual"
            break
        if stop:
            hist.stop_reason = "early_stopping"
            break

    hist.best_epoch = stopper.best_epoch
    hist.best_val_sse = stopper.best_score
    return stopper.best_model, hist


def lm_step(model: NeuralModel, X, y, lam: float) -> np.ndarray:
    """Solve ``(J^T J + lam I) delta = J^T r`` for the parameter update."""
    J = jacobian(model, X)
    r = np.asarray(y, dtype=float) - forward(model, _as_batch(model, X))
    A = J.T @ J
    A[np.diag_indices_from(A)] += lam
    return np.linalg.solve(A, J.T @ r)


def train_lm(model: NeuralModel, X, y, X_val=None, y_val=None,
             cfg: TrainConfig | None = None):
    """Full-batch Levenberg-Marquardt.

    Each epoch retries with ``lam *= lm_lambda_up`` until the SSE drops,
    then accepts and sets ``lam *= lm_lambda_down``. Training ends at
    ``max_epochs``, on a stalled validation SSE, when the gradient vanishes
    or when ``lam`` exceeds ``lm_lambda_max``.
    """
    cfg = cfg or TrainConfig()
    Xs, ys, Xv, yv = _prepare(model, X, y, X_val, y_val)
    hist = TrainHistory()
    stopper = _EarlyStopper(model, cfg.patience, Xv, yv)
    lam = cfg.lm_lambda0
    theta = model.params()
    current = model
    r = ys - forward(current, Xs)
    cur_sse = float(r @ r)
    hist.stop_reason = "max_epochs"

    for epoch in range(1, cfg.max_epochs + 1):
        if cur_sse == 0.0:
            hist.stop_reason = "zero_residual"
            break
        J = jacobian(current, Xs)
        g = J.T @ r
        if np.max(np.abs(g)) < cfg.min_grad:
            hist.stop_reason = "min_grad"
            break
        JTJ = J.T @ J
        eye = np.eye(JTJ.shape[0])
        accepted = False
        while lam <= cfg.lm_lambda_max:
            try:
                delta = np.linalg.solve(JTJ + lam * eye, g)
            except np.linalg.LinAlgError:
                lam *= cfg.lm_lambda_up
                continue
            trial = current.with_params(theta + delta)
            r_new = ys - forward(trial, Xs)
            new_sse = float(r_new @ r_new)
            if not np.isfinite(new_sse):
                raise TrainingDivergedError(epoch)
            if new_sse < cur_sse:
                accepted = True
                theta, current, r, cur_sse = theta + delta, trial, r_new, new_sse
                lam *= cfg.lm_lambda_down
                break
            lam *= cfg.lm_lambda_up
        if not accepted:
            hist.stop_reason = "lambda_overflow"
            log.debug("LM stopped at epoch %d: damping exceeded %g", epoch, cfg.lm_lambda_max)
            break
        hist.train_sse.append(cur_sse)
        hist.lam.append(lam)
        stop = stopper.update(current, epoch)
        hist.val_sse.append(sse(current, Xv, yv))
        hist.epochs_run = epoch
        if stop:
            hist.stop_reason = "early_stopping"
            break

    hist.best_epoch = stopper.best_epoch
    hist.best_val_sse = stopper.best_score
    return stopper.best_model, hist


def predict_nn(model: NeuralModel, X) -> np.ndarray:
    """Predictions in physical units: scale inputs, run the net, unscale."""
    Xs, _ = _scale(model, X)
    out = forward(model, _as_batch(model, Xs))
    if model.target_scaler is not None:
        out = model.target_scaler.inverse_transform(out[:, None]).ravel()
    return out


def train(model, X, y, X_val=None, y_val=None, cfg: TrainConfig | None = None):
    cfg = cfg or TrainConfig()
    if cfg.optimizer == "delta_rule":
        return train_delta_rule(model, X, y, X_val, y_val, cfg)
    return train_lm(model, X, y, X_val, y_val, cfg)


class ANNRegressor(RegressorMixin, BaseEstimator):
    """Scikit-learn wrapper around the one-hidden-layer network.

    ``fit`` accepts optional ``X_val``/``y_val`` for early stopping. Input
    and target scalers are fitted on the training data only. With
    ``n_restarts > 1`` the network is retrained from that many seeded
    initializations and the one with the lowest validation SSE is kept.
    """

    def __init__(self, n_hidden=3, optimizer="levenberg_marquardt", learning_rate=0.01,
                 max_epochs=300, lm_lambda0=1e-3, lm_lambda_up=10.0, lm_lambda_down=0.1,
                 patience=50, init_range=0.5, n_restarts=1, random_state=0):
        self.n_hidden = n_hidden
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.lm_lambda0 = lm_lambda0
        self.lm_lambda_up = lm_lambda_up
        self.lm_lambda_down = lm_lambda_down
        self.patience = patience
        self.init_range = init_range
        self.n_restarts = n_restarts
        self.random_state = random_state

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            optimizer=self.optimizer, learning_rate=self.learning_rate,
            max_epochs=self.max_epochs, lm_lambda0=self.lm_lambda0,
            lm_lambda_up=self.lm_lambda_up, lm_lambda_down=self.lm_lambda_down,
            patience=self.patience, seed=self.random_state, init_range=self.init_range,
        )

    def fit(self, X, y, X_val=None, y_val=None):
        X, y = check_X_y(X, y, y_numeric=True)
        if self.n_restarts < 1:
            raise ValueError("n_restarts must be >= 1")
        if X_val is not None:
            X_val, y_val = check_X_y(X_val, y_val, y_numeric=True)
        x_scaler = RangeScaler().fit(X)
        y_scaler = RangeScaler().fit(y[:, None])
        best = None
        for k in range(self.n_restarts):
            cfg = self.train_config()
            if k:
                cfg.seed = derive_seed(self.random_state, "restart", k)
            net = init_network(X.shape[1], self.n_hidden, cfg.seed, cfg.init_range)
            net.input_scaler, net.target_scaler = x_scaler, y_scaler
            model, hist = train(net, X, y, X_val, y_val, cfg)
            if best is None or hist.best_val_sse < best[1].best_val_sse:
                best = (model, hist, cfg.seed)
        self.model_, self.history_, self.seed_ = best
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self)
        return predict_nn(self.model_, check_array(X))
