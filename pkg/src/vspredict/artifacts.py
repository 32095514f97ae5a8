"""Model, report and prediction files written by the command-line tool."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile

import numpy as np

from .neuralnet import ANNRegressor, NeuralModel, predict_nn
from .regression import LinearModel, OLSRegressor, predict_linear

SCHEMA_VERSION = 1


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    with open(path, "rb") as fh:
        return sha256_bytes(fh.read())


def write_atomic(path, data: bytes | str):
    """Write via a temporary file in the same directory, then rename."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def model_document(method: str, estimator, feature_names, meta: dict) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "method": method,
        "feature_names": list(feature_names),
        "training_meta": meta,
    }
    if isinstance(estimator, OLSRegressor):
        m = estimator.model_
        doc["coefficients"] = {"intercept": m.intercept, "slopes": m.slopes.tolist()}
        doc["scalers"] = None
    elif isinstance(estimator, ANNRegressor):
        d = estimator.model_.to_dict()
        doc["scalers"] = {"input": d.pop("input_scaler"), "target": d.pop("target_scaler")}
        doc["weights"] = d
        h = estimator.history_
        doc["training_meta"] = {
            **meta,
            "init_seed": int(estimator.seed_),
            "optimizer": estimator.optimizer,
            "epochs_run": h.epochs_run,
            "best_epoch": h.best_epoch,
            "stop_reason": h.stop_reason,
            "final_train_sse": h.train_sse[h.best_epoch - 1] if h.best_epoch else None,
            "best_val_sse": h.best_val_sse,
        }
    else:
        raise TypeError(f"cannot serialize {type(estimator).__name__}")
    return doc


class LoadedModel:
    """A predictor rebuilt from a model JSON document."""

    def __init__(self, doc: dict):
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported model schema_version {doc.get('schema_version')!r}")
        self.doc = doc
        self.method = doc["method"]
        self.feature_names = list(doc["feature_names"])
        if "coefficients" in doc:
            c = doc["coefficients"]
            self._linear = LinearModel(c["intercept"], c["slopes"], self.feature_names)
            self._net = None
        else:
            w = dict(doc["weights"])
            w["input_scaler"] = doc["scalers"]["input"]
            w["target_scaler"] = doc["scalers"]["target"]
            self._net = NeuralModel.from_dict(w)
            self._linear = None

    @classmethod
    def load(cls, path) -> "LoadedModel":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def predict(self, X) -> np.ndarray:
        if self._linear is not None:
            return predict_linear(self._linear, X)
        return predict_nn(self._net, X)


def _comment_header(seed, input_hashes) -> str:
    lines = [f"# seed={seed}"]
    lines += [f"# input_sha256 {name}={digest}" for name, digest in sorted(input_hashes.items())]
    return "\n".join(lines) + "\n"


def _num(v) -> str:
    return "" if v is None or np.isnan(v) else repr(float(v))


def predictions_csv(reports, seed, input_hashes) -> str:
    """Per-sample actual/predicted/residual rows for every scenario and method."""
    out = io.StringIO()
    out.write(_comment_header(seed, input_hashes))
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["scenario", "method", "well", "depth_m", "actual_vs_kms",
                "predicted_vs_kms", "residual_kms"])
    for r in reports:
        if r.error is not None:
            continue
        for d, a, p in zip(r.depth, r.actual, r.predicted):
            w.writerow([r.scenario, r.method, r.well, _num(d), _num(a), _num(p), _num(a - p)])
    return out.getvalue()


def comparison_csv(rows, seed, input_hashes) -> str:
    out = io.StringIO()
    out.write(_comment_header(seed, input_hashes))
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["scenario", "rank", "method", "r_squared", "aapre_percent",
                "best_r_squared", "lowest_aapre"])
    for row in rows:
        w.writerow([row.scenario, row.rank, row.method, _num(row.r_squared),
                    _num(row.aapre_percent), int(row.best_r_squared), int(row.lowest_aapre)])
    return out.getvalue()


def prediction_output_csv(depth, pred, seed, input_hashes) -> str:
    out = io.StringIO()
    out.write(_comment_header(seed, input_hashes))
    out.write("depth_m,vs_pred_kms\n")
    for d, p in zip(depth, pred):
        out.write(f"{_num(d)},{_num(p)}\n")
    return out.getvalue()
