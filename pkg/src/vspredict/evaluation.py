"""Goodness-of-fit metrics and the four-method, three-scenario comparison."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .conditioning import DEPTH, FeatureTable, ScenarioSplit
from .neuralnet import ANNRegressor
from .regression import OLSRegressor, fit_ols
from .seeding import derive_seed

log = logging.getLogger(__name__)

METHODS = ("lr_single", "mlr", "ann_single", "ann_multi")
AAPRE_FLOOR = 1e-6


def _pair(actual, predicted):
    x = np.asarray(actual, dtype=float).ravel()
    xh = np.asarray(predicted, dtype=float).ravel()
    if x.size == 0 or x.size != xh.size:
        raise ValueError("actual and predicted must have equal nonzero length")
    return x, xh


def r_squared(actual, predicted) -> float:
    """Coefficient of determination, 1 - SSE/SST."""
    x, xh = _pair(actual, predicted)
    sst = np.sum((x - x.mean()) ** 2)
    if sst == 0:
        raise ZeroDivisionError("actual values are constant")
    return float(1.0 - np.sum((x - xh) ** 2) / sst)


def aapre(actual, predicted) -> float:
    """Average absolute percent relative error."""
    x, xh = _pair(actual, predicted)
    if np.any(x == 0):
        raise ZeroDivisionError("actual contains zero")
    return float(100.0 * np.mean(np.abs((x - xh) / x)))


@dataclass
class EvalConfig:
    """Method settings shared by every scenario.

    ``single_feature="auto"`` picks, per scenario, the feature with the
    highest single-variable train R²; ties fall back to ``default_single``.
    """

    features: list[str] = field(default_factory=lambda: [DEPTH, "GR", "NPHI", "RHOB"])
    single_feature: str = "auto"
    default_single: str = "NPHI"
    ann_single: dict = field(default_factory=lambda: {"n_hidden": 1, "n_restarts": 5})
    ann_multi: dict = field(default_factory=lambda: {"n_hidden": 3, "n_restarts": 5})
    seed: int = 0


@dataclass
class EvalReport:
    scenario: str
    method: str
    features: list[str]
    r_squared: float
    aapre_percent: float
    n_samples: int
    n_aapre_excluded: int = 0
    depth: np.ndarray | None = None
    actual: np.ndarray | None = None
    predicted: np.ndarray | None = None
    well: str = ""
    error: str | None = None
    estimator: object = None

    def summary(self) -> dict:
        return {
            "scenario": self.scenario,
            "method": self.method,
            "features": list(self.features),
            "r_squared": self.r_squared,
            "aapre_percent": self.aapre_percent,
            "n_samples": self.n_samples,
            "n_aapre_excluded": self.n_aapre_excluded,
            "error": self.error,
        }


def screen_single_logs(table: FeatureTable, candidates=None) -> dict[str, float]:
    """Train R² of a one-variable linear fit for each candidate column."""
    candidates = table.feature_names if candidates is None else candidates
    scores = {}
    for name in candidates:
        x = table.columns([name])
        model = fit_ols(x, table.y, [name])
        scores[name] = r_squared(table.y, model.intercept + x[:, 0] * model.slopes[0])
    return scores


def choose_single_feature(table: FeatureTable, cfg: EvalConfig) -> str:
    if cfg.single_feature != "auto":
        return cfg.single_feature
    scores = screen_single_logs(table, cfg.features)
    best = max(scores.values())
    winners = sorted(n for n, s in scores.items() if s == best)
    return cfg.default_single if cfg.default_single in winners else winners[0]


def make_estimator(method: str, cfg: EvalConfig, seed: int, feature_names):
    if method in ("lr_single", "mlr"):
        return OLSRegressor(feature_names=list(feature_names))
    if method == "ann_single":
        return ANNRegressor(random_state=seed, **cfg.ann_single)
    if method == "ann_multi":
        return ANNRegressor(random_state=seed, **cfg.ann_multi)
    raise ValueError(f"unknown method {method!r}")


def _metrics(actual, predicted):
    ok = actual > AAPRE_FLOOR
    excluded = int(np.sum(~ok))
    a = aapre(actual[ok], predicted[ok]) if ok.any() else float("nan")
    return r_squared(actual, predicted), a, excluded


def run_scenario(split: ScenarioSplit, methods=METHODS, cfg: EvalConfig | None = None) -> list[EvalReport]:
    """Fit each method on ``split.train`` and score it on ``split.test``.

    Networks use ``split.validation`` for early stopping. A failure in one
    method is recorded in its report and does not stop the others.
    """
    cfg = cfg or EvalConfig()
    split.check_disjoint()
    methods = list(methods)
    if not methods:
        return []
    single = None
    if any(m in ("lr_single", "ann_single") for m in methods):
        single = choose_single_feature(split.train, cfg)
    feats = {
        "lr_single": [single], "ann_single": [single],
        "mlr": list(cfg.features), "ann_multi": list(cfg.features),
    }

    reports = []
    for method in sorted(methods):
        names = feats[method]
        try:
            seed = derive_seed(cfg.seed, "init", split.kind, method)
            est = make_estimator(method, cfg, seed, names)
            X_tr = split.train.columns(names)
            if method.startswith("ann"):
                est.fit(X_tr, split.train.y,
                        X_val=split.validation.columns(names), y_val=split.validation.y)
            else:
                est.fit(X_tr, split.train.y)
            pred = est.predict(split.test.columns(names))
            r2, ap, excl = _metrics(split.test.y, pred)
            reports.append(EvalReport(
                split.kind, method, names, r2, ap, len(split.test), excl,
                split.test.depth, split.test.y, pred, split.test.well, estimator=est,
            ))
        except Exception as exc:  # noqa: BLE001 - reported per method
            log.warning("%s/%s failed: %s", split.kind, method, exc)
            reports.append(EvalReport(split.kind, method, names, float("nan"),
                                      float("nan"), len(split.test), error=str(exc)))
    return reports


@dataclass
class ComparisonRow:
    scenario: str
    rank: int
    method: str
    r_squared: float
    aapre_percent: float
    best_r_squared: bool
    lowest_aapre: bool


def compare_methods(reports) -> list[ComparisonRow]:
    """Rank methods within each scenario: R² desc, AAPRE asc, then name."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to compare")
    rows = []
    scenarios = sorted({r.scenario for r in reports})
    for sc in scenarios:
        group = [r for r in reports if r.scenario == sc and r.error is None]

        def key(r):
            return (-r.r_squared, r.aapre_percent, r.method)

        group.sort(key=key)
        if not group:
            continue
        low_method = min(group, key=lambda r: (r.aapre_percent, r.method)).method
        for rank, r in enumerate(group, start=1):
            rows.append(ComparisonRow(sc, rank, r.method, r.r_squared, r.aapre_percent,
                                      rank == 1, r.method == low_method))
    return rows
