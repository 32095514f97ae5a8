"""Log conditioning, feature-table assembly and train/validation/test splits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .las_io import WellLog, canonical_mnemonic

DEPTH = "DEPTH"

DEFAULT_RANGES = {
    "RHOB": (1.0, 3.5),
    "NPHI": (-0.05, 1.0),
    "GR": (0.0, 400.0),
    "DT": (40.0, 300.0),
}

SCENARIOS = ("known_interval", "unknown_interval_same_well", "different_well")


class ConditioningError(ValueError):
    pass


def screen_range(samples, lo: float, hi: float) -> np.ndarray:
    """Replace values outside ``[lo, hi]`` with NaN."""
    out = np.asarray(samples, dtype=float).copy()
    with np.errstate(invalid="ignore"):
        out[(out < lo) | (out > hi)] = np.nan
    return out


def condition_curve(samples, depth, max_gap: int = 10) -> np.ndarray:
    """Fill interior runs of at most ``max_gap`` missing samples linearly in depth.

    Runs touching either end of the log, and longer interior runs, are
    left missing.
    """
    y = np.asarray(samples, dtype=float).copy()
    depth = np.asarray(depth, dtype=float)
    if max_gap < 0:
        raise ValueError("max_gap must be >= 0")
    missing = np.isnan(y)
    if missing.all():
        raise ConditioningError("all samples are missing")
    if not missing.any() or max_gap == 0:
        return y

    n = y.size
    i = 0
    while i < n:
        if not missing[i]:
            i += 1
            continue
        j = i
        while j < n and missing[j]:
            j += 1
        # run is y[i:j]
        if i > 0 and j < n and (j - i) <= max_gap:
            d0, d1 = depth[i - 1], depth[j]
            y0, y1 = y[i - 1], y[j]
            t = (depth[i:j] - d0) / (d1 - d0)
            y[i:j] = y0 + t * (y1 - y0)
        i = j
    return y


def condition_log(log: WellLog, max_gap: int = 10, ranges=None) -> WellLog:
    """Range-screen then gap-fill every curve, returning a new log."""
    ranges = DEFAULT_RANGES if ranges is None else ranges
    ranges = {canonical_mnemonic(k): v for k, v in ranges.items()}
    curves = []
    for c in log.curves:
        s = c.samples
        lim = ranges.get(canonical_mnemonic(c.mnemonic))
        if lim is not None:
            s = screen_range(s, *lim)
        if not np.isnan(s).all():
            s = condition_curve(s, log.depth, max_gap)
        curves.append(type(c)(c.mnemonic, c.unit, c.description, s))
    return WellLog(log.well_name, log.depth.copy(), curves, log.null_value, log.depth_unit)


@dataclass
class FeatureTable:
    depth: np.ndarray
    feature_names: list[str]
    X: np.ndarray
    y: np.ndarray
    well: str = ""

    def __post_init__(self):
        self.depth = np.asarray(self.depth, dtype=float)
        self.X = np.asarray(self.X, dtype=float).reshape(self.depth.size, len(self.feature_names))
        self.y = np.asarray(self.y, dtype=float)
        if not (self.X.shape[0] == self.depth.size == self.y.size):
            raise ValueError("row counts of depth, X and y differ")
        if np.isnan(self.X).any() or np.isnan(self.y).any():
            raise ValueError("feature table contains missing values")

    def __len__(self):
        return self.depth.size

    @property
    def depth_range(self):
        return (float(self.depth.min()), float(self.depth.max())) if len(self) else None

    def keys(self) -> set[tuple[str, float]]:
        return {(self.well, float(d)) for d in self.depth}

    def take(self, idx) -> "FeatureTable":
        idx = np.sort(np.asarray(idx, dtype=int))
        return FeatureTable(self.depth[idx], list(self.feature_names), self.X[idx],
                            self.y[idx], self.well)

    def columns(self, names) -> np.ndarray:
        pos = [self.feature_names.index(n) for n in names]
        return self.X[:, pos]


def curve_values(log: WellLog, name: str) -> np.ndarray:
    if canonical_mnemonic(name) == DEPTH or canonical_mnemonic(name) == "DEPT":
        return log.depth
    curve = log.find(name)
    if curve is None:
        raise ConditioningError(f"curve {name!r} not found in well {log.well_name!r}")
    return curve.samples


def build_feature_table(log: WellLog, feature_names, target_name: str) -> FeatureTable:
    """Assemble complete rows of the named features and target.

    Rows with any missing value among the selected curves are dropped.
    ``DEPTH`` may be used as a feature name and maps to the depth index.
    """
    feature_names = [canonical_mnemonic(f) for f in feature_names]
    X = np.column_stack([curve_values(log, f) for f in feature_names]) \
        if feature_names else np.empty((log.depth.size, 0))
    y = curve_values(log, target_name)
    keep = ~(np.isnan(X).any(axis=1) | np.isnan(y))
    if not keep.any():
        raise ConditioningError(f"no complete rows in well {log.well_name!r}")
    return FeatureTable(log.depth[keep], feature_names, X[keep], y[keep], log.well_name)


@dataclass
class ScenarioSplit:
    train: FeatureTable
    validation: FeatureTable
    test: FeatureTable
    kind: str
    meta: dict = field(default_factory=dict)

    def check_disjoint(self):
        a, b, c = self.train.keys(), self.validation.keys(), self.test.keys()
        if a & b or a & c or b & c:
            raise AssertionError(f"{self.kind}: train/validation/test rows overlap")


def split_sizes(n: int, fractions=(0.70, 0.15, 0.15)) -> tuple[int, int, int]:
    # epsilon guards products like 0.7 * 70 = 48.99999999999999
    n_train = int(np.floor(fractions[0] * n + 1e-9))
    n_val = int(np.floor(fractions[1] * n + 1e-9))
    return n_train, n_val, n - n_train - n_val


def split_scenario(tables, kind: str, fractions=(0.70, 0.15, 0.15), seed: int = 0) -> ScenarioSplit:
    """Divide one or two feature tables for one of the three evaluation scenarios.

    ``known_interval`` shuffles rows (seeded) before cutting 70/15/15;
    ``unknown_interval_same_well`` cuts contiguous blocks, deepest last;
    ``different_well`` trains/validates on the first table (seeded 85/15)
    and tests on the whole second table.
    """
    if isinstance(tables, FeatureTable):
        tables = [tables]
    tables = list(tables)
    if kind not in SCENARIOS:
        raise ValueError(f"unknown scenario {kind!r}")

    if kind == "different_well":
        if len(tables) != 2:
            raise ValueError("different_well needs two tables (train well, test well)")
        src, test = tables
        n_val = int(np.floor(fractions[1] * len(src) + 1e-9))
        n_train = len(src) - n_val
        idx = np.random.default_rng(seed).permutation(len(src))
        train, val = src.take(idx[:n_train]), src.take(idx[n_train:])
    else:
        if len(tables) != 1:
            raise ValueError(f"{kind} takes exactly one table")
        src = tables[0]
        n_train, n_val, _ = split_sizes(len(src), fractions)
        if kind == "known_interval":
            idx = np.random.default_rng(seed).permutation(len(src))
        else:
            idx = np.argsort(src.depth, kind="stable")
        train = src.take(idx[:n_train])
        val = src.take(idx[n_train:n_train + n_val])
        test = src.take(idx[n_train + n_val:])

    for name, part in (("train", train), ("validation", val), ("test", test)):
        if len(part) == 0:
            raise ValueError(f"{kind}: {name} part is empty")
    split = ScenarioSplit(train, val, test, kind)
    split.check_disjoint()
    return split


class RangeScaler(TransformerMixin, BaseEstimator):
    """Per-column affine map of ``[min, max]`` onto ``feature_range``.

    Unlike scikit-learn's MinMaxScaler, constant columns are rejected
    rather than silently passed through.
    """

    def __init__(self, feature_range=(-1.0, 1.0)):
        self.feature_range = feature_range

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_samples=2)
        lo, hi = self.feature_range
        if not hi > lo:
            raise ValueError("feature_range must be increasing")
        self.data_min_ = X.min(axis=0)
        self.data_max_ = X.max(axis=0)
        span = self.data_max_ - self.data_min_
        if np.any(span <= 0):
            cols = np.flatnonzero(span <= 0).tolist()
            raise ValueError(f"constant column(s) {cols} cannot be scaled")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = check_array(X)
        lo, hi = self.feature_range
        t = (X - self.data_min_) / (self.data_max_ - self.data_min_)
        return lo + t * (hi - lo)

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = check_array(X)
        lo, hi = self.feature_range
        t = (X - lo) / (hi - lo)
        return self.data_min_ + t * (self.data_max_ - self.data_min_)

    def to_dict(self) -> dict:
        return {"min": self.data_min_.tolist(), "max": self.data_max_.tolist(),
                "range": list(self.feature_range)}

    @classmethod
    def from_dict(cls, d: dict) -> "RangeScaler":
        s = cls(tuple(d.get("range", (-1.0, 1.0))))
        s.data_min_ = np.asarray(d["min"], dtype=float)
        s.data_max_ = np.asarray(d["max"], dtype=float)
        s.n_features_in_ = s.data_min_.size
        return s


def fit_scaler(table: FeatureTable) -> RangeScaler:
    return RangeScaler().fit(table.X)


def apply_scaler(scaler: RangeScaler, X) -> np.ndarray:
    return scaler.transform(X)


def invert_scaler(scaler: RangeScaler, X) -> np.ndarray:
    return scaler.inverse_transform(X)
