"""Command-line front end: ``inspect``, ``synth``, ``run`` and ``predict``.

Exit codes: 0 success, 1 pipeline error, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import artifacts
from .conditioning import DEFAULT_RANGES, SCENARIOS
from .evaluation import METHODS, EvalConfig, compare_methods
from .las_io import (Curve, LASError, WellLog, canonical_mnemonic, parse_las, read_log,
                     write_las)
from .pipeline import StudyConfig, UnitError, normalize_units, run_study
from .synthgen import SynthConfig, generate_field

log = logging.getLogger("vspredict")

EXIT_OK, EXIT_PIPELINE, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 2021


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    well_a: str | None = None
    well_b: str | None = None
    depth_column: str = "DEPTH"
    synthetic: dict | None = None
    curve_map: dict = field(default_factory=dict)
    max_gap: int = 10
    ranges: dict = field(default_factory=lambda: dict(DEFAULT_RANGES))
    features: list = field(default_factory=lambda: ["DEPTH", "GR", "NPHI", "RHOB"])
    scenarios: list = field(default_factory=lambda: list(SCENARIOS))
    methods: list = field(default_factory=lambda: list(METHODS))
    single_feature: str = "auto"
    ann_single: dict = field(default_factory=lambda: dict(EvalConfig().ann_single))
    ann_multi: dict = field(default_factory=lambda: dict(EvalConfig().ann_multi))
    castagna: dict = field(default_factory=dict)
    output_dir: str = "vspredict-out"

    @classmethod
    def from_dict(cls, d: dict, base_dir: str = ".") -> "RunConfig":
        d = dict(d)
        version = d.pop("schema_version", 1)
        if version != 1:
            raise ConfigError(f"unsupported schema_version {version!r}")
        if "seed" not in d:
            raise ConfigError("config must set 'seed'")
        inputs = d.pop("inputs", None) or {}
        cond = d.pop("conditioning", None) or {}
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**d)
        cfg.well_a = inputs.get("well_a", cfg.well_a)
        cfg.well_b = inputs.get("well_b", cfg.well_b)
        cfg.depth_column = inputs.get("depth_column", cfg.depth_column)
        cfg.max_gap = cond.get("max_gap", cfg.max_gap)
        if "ranges" in cond:
            cfg.ranges = {**DEFAULT_RANGES, **{k: tuple(v) for k, v in cond["ranges"].items()}}
        for attr in ("well_a", "well_b"):
            p = getattr(cfg, attr)
            if p is not None and not os.path.isabs(p):
                setattr(cfg, attr, os.path.normpath(os.path.join(base_dir, p)))
        if cfg.output_dir and not os.path.isabs(cfg.output_dir):
            cfg.output_dir = os.path.normpath(os.path.join(base_dir, cfg.output_dir))
        cfg.validate()
        return cfg

    def validate(self):
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        if not self.features:
            raise ConfigError("feature list must be nonempty")
        bad = [s for s in self.scenarios if s not in SCENARIOS]
        bad += [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"unknown scenario/method names: {bad}")
        if self.well_a is None and self.synthetic is None:
            raise ConfigError("config needs inputs.well_a or a 'synthetic' block")
        for p in (self.well_a, self.well_b):
            if p is not None and not os.path.exists(p):
                raise ConfigError(f"input file not found: {p}")
        if "different_well" in self.scenarios and self.synthetic is None and self.well_b is None:
            raise ConfigError("different_well scenario needs inputs.well_b")

    def study_config(self) -> StudyConfig:
        ev = EvalConfig(single_feature=self.single_feature,
                        ann_single=dict(self.ann_single), ann_multi=dict(self.ann_multi))
        kwargs = {}
        if "slope" in self.castagna:
            kwargs["castagna_slope"] = float(self.castagna["slope"])
        if "intercept" in self.castagna:
            kwargs["castagna_intercept"] = float(self.castagna["intercept"])
        return StudyConfig(features=list(self.features), scenarios=list(self.scenarios),
                           methods=list(self.methods), max_gap=self.max_gap,
                           ranges=dict(self.ranges), evaluation=ev, seed=self.seed, **kwargs)


def load_run_config(path) -> RunConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    try:
        return RunConfig.from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)))
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def apply_curve_map(well: WellLog, mapping: dict) -> WellLog:
    if not mapping:
        return well
    lookup = {canonical_mnemonic(k): v for k, v in mapping.items()}
    curves = [Curve(lookup.get(canonical_mnemonic(c.mnemonic), c.mnemonic), c.unit,
                    c.description, c.samples) for c in well.curves]
    return WellLog(well.well_name, well.depth, curves, well.null_value, well.depth_unit)


def _load_wells(cfg: RunConfig, out_dir: str):
    """Return (wells, input_hashes). Synthetic wells are written to ``out_dir``."""
    if cfg.synthetic is not None and cfg.well_a is None:
        synth = SynthConfig.from_dict({**cfg.synthetic, "seed": cfg.synthetic.get("seed", cfg.seed)})
        wells, hashes = [], {}
        for w in generate_field(synth):
            data = write_las(w)
            artifacts.write_atomic(os.path.join(out_dir, "wells", f"{w.well_name}.las"), data)
            hashes[f"{w.well_name}.las"] = artifacts.sha256_bytes(data)
            # study the written file, so saved models reproduce exactly on it
            wells.append(parse_las(data))
        return wells, hashes
    paths = [p for p in (cfg.well_a, cfg.well_b) if p is not None]
    wells, hashes = [], {}
    for p in paths:
        well = read_log(p, cfg.depth_column)
        if not well.well_name:
            well.well_name = os.path.splitext(os.path.basename(p))[0]
        wells.append(apply_curve_map(well, cfg.curve_map))
        hashes[os.path.basename(p)] = artifacts.sha256_file(p)
    if len(wells) == 2 and wells[0].well_name == wells[1].well_name:
        wells[1].well_name += "-2"
    return wells, hashes


def cmd_run(args) -> int:
    cfg = load_run_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    out_dir = args.output_dir or cfg.output_dir
    wells, hashes = _load_wells(cfg, out_dir)
    study = cfg.study_config()
    reports = run_study(wells, study)

    failed = [r for r in reports if r.error is not None]
    good = [r for r in reports if r.error is None]
    for r in good:
        meta = {"seed": cfg.seed, "scenario": r.scenario, "input_hashes": hashes}
        doc = artifacts.model_document(r.method, r.estimator, r.features, meta)
        artifacts.write_atomic(os.path.join(out_dir, "models", f"{r.scenario}__{r.method}.json"),
                               artifacts.dumps(doc))
    rows = compare_methods(reports) if good else []
    report_doc = {
        "schema_version": artifacts.SCHEMA_VERSION,
        "seed": cfg.seed,
        "input_hashes": hashes,
        "status": "complete" if not failed else "incomplete",
        "reports": [r.summary() for r in reports],
        "comparison": [vars(row) for row in rows],
    }
    artifacts.write_atomic(os.path.join(out_dir, "report.json"), artifacts.dumps(report_doc))
    artifacts.write_atomic(os.path.join(out_dir, "predictions.csv"),
                           artifacts.predictions_csv(reports, cfg.seed, hashes))
    artifacts.write_atomic(os.path.join(out_dir, "comparison.csv"),
                           artifacts.comparison_csv(rows, cfg.seed, hashes))

    if not args.quiet:
        print(f"{'scenario':<28} {'method':<11} {'R2':>8} {'AAPRE%':>8}  n")
        for r in reports:
            if r.error:
                print(f"{r.scenario:<28} {r.method:<11} FAILED: {r.error}")
            else:
                print(f"{r.scenario:<28} {r.method:<11} {r.r_squared:8.4f} "
                      f"{r.aapre_percent:8.3f}  {r.n_samples}")
        print(f"outputs written to {out_dir}")
    return EXIT_PIPELINE if failed else EXIT_OK


def cmd_synth(args) -> int:
    doc = {}
    if args.config:
        if not os.path.exists(args.config):
            raise ConfigError(f"config file not found: {args.config}")
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
        doc.pop("schema_version", None)
        doc = doc.get("synthetic", doc)
    if args.seed is not None:
        doc["seed"] = args.seed
    try:
        cfg = SynthConfig.from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    out_dir = args.output_dir or "."
    for well in generate_field(cfg):
        path = os.path.join(out_dir, f"{well.well_name}.las")
        artifacts.write_atomic(path, write_las(well))
        if not args.quiet:
            n_missing = sum(int(c.missing.sum()) for c in well.curves)
            print(f"{path}: {well.depth.size} samples, {len(well.curves)} curves, "
                  f"{n_missing} missing values")
    return EXIT_OK


def cmd_inspect(args) -> int:
    if not os.path.exists(args.path):
        raise ConfigError(f"file not found: {args.path}")
    well = read_log(args.path)
    d = well.depth
    print(f"well: {well.well_name or '(unnamed)'}")
    if d.size:
        print(f"depth: {d[0]:g} - {d[-1]:g} {well.depth_unit} ({d.size} samples)")
    else:
        print("depth: (no samples)")
    print(f"curves: {len(well.curves)}")
    for c in well.curves:
        s = c.samples[~c.missing]
        lo, hi = (f"{s.min():.6g}", f"{s.max():.6g}") if s.size else ("-", "-")
        print(f"  {c.mnemonic:<8} {c.unit:<8} min={lo:<12} max={hi:<12} "
              f"missing={int(c.missing.sum())}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = artifacts.LoadedModel.load(args.model)
    well = normalize_units(read_log(args.input))
    missing = [f for f in model.feature_names
               if canonical_mnemonic(f) not in ("DEPTH", "DEPT") and f not in well]
    if missing:
        log.error("input %s lacks curves required by the model: %s",
                  args.input, ", ".join(missing))
        return EXIT_PIPELINE
    cols = []
    for f in model.feature_names:
        cols.append(well.depth if canonical_mnemonic(f) in ("DEPTH", "DEPT") else well[f].samples)
    X = np.column_stack(cols)
    ok = ~np.isnan(X).any(axis=1)
    pred = np.full(well.depth.size, np.nan)
    if ok.any():
        pred[ok] = model.predict(X[ok])
    meta = model.doc.get("training_meta", {})
    hashes = {**meta.get("input_hashes", {}),
              f"predict:{os.path.basename(args.input)}": artifacts.sha256_file(args.input)}
    artifacts.write_atomic(args.output, artifacts.prediction_output_csv(
        well.depth, pred, meta.get("seed"), hashes))
    if not args.quiet:
        print(f"{args.output}: {int(ok.sum())} predictions, {int((~ok).sum())} rows skipped")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress summaries")

    p = argparse.ArgumentParser(prog="vspredict",
                                description="Shear-wave velocity prediction from well logs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("inspect", parents=[common], help="summarize a LAS/CSV file")
    s.add_argument("path")
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("synth", parents=[common], help="write a synthetic two-well field")
    s.add_argument("--config", help="JSON synthetic-field settings")
    s.add_argument("--output-dir", default=None)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("run", parents=[common], help="run the method comparison study")
    s.add_argument("--config", required=True)
    s.add_argument("--output-dir", default=None)
    s.add_argument("--seed", type=int, default=None, help="override the config seed")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("predict", parents=[common], help="apply a saved model to a log file")
    s.add_argument("model")
    s.add_argument("input")
    s.add_argument("output")
    s.set_defaults(func=cmd_predict)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (LASError, UnitError) as exc:
        log.error("%s", exc)
        return EXIT_PIPELINE
    except Exception as exc:  # noqa: BLE001 - top-level guard maps to exit code 1
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
