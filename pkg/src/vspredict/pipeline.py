"""End-to-end study: normalize units, condition, derive Vs, split, evaluate."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import petrophysics as pp
from .conditioning import (DEFAULT_RANGES, SCENARIOS, FeatureTable, ScenarioSplit,
                           build_feature_table, condition_log, split_scenario)
from .evaluation import METHODS, EvalConfig, EvalReport, run_scenario
from .las_io import Curve, WellLog, canonical_mnemonic
from .seeding import derive_seed

log = logging.getLogger(__name__)

VS = "VS"

# accepted unit spellings -> multiplier into the canonical unit
UNIT_FACTORS = {
    "DT": {"US/F": 1.0, "US/FT": 1.0, "USEC/FT": 1.0, "US/M": 0.3048, "USEC/M": 0.3048},
    "RHOB": {"G/C3": 1.0, "G/CC": 1.0, "G/CM3": 1.0, "KG/M3": 1e-3},
    "DEPTH": {"M": 1.0, "METER": 1.0, "METERS": 1.0, "METRES": 1.0,
              "F": 0.3048, "FT": 0.3048, "FEET": 0.3048},
}


class UnitError(ValueError):
    pass


def _factor(kind: str, unit: str) -> float:
    unit = unit.strip().upper()
    if not unit:
        return 1.0
    try:
        return UNIT_FACTORS[kind][unit]
    except KeyError:
        raise UnitError(f"unexpected unit {unit!r} for {kind}; "
                        f"accepted: {sorted(UNIT_FACTORS[kind])}") from None


def normalize_units(well: WellLog) -> WellLog:
    """Convert DT to us/ft, RHOB to g/cm3 and depth to m. Unknown units raise."""
    depth = well.depth * _factor("DEPTH", well.depth_unit)
    curves = []
    for c in well.curves:
        key = canonical_mnemonic(c.mnemonic)
        if key in ("DT", "RHOB"):
            f = _factor(key, c.unit)
            canon = "US/F" if key == "DT" else "G/C3"
            curves.append(Curve(c.mnemonic, canon if c.unit else c.unit, c.description,
                                c.samples * f))
        else:
            curves.append(c)
    return WellLog(well.well_name, depth, curves, well.null_value, "M")


def add_shear_velocity(well: WellLog, slope=pp.CASTAGNA_SLOPE,
                       intercept=pp.CASTAGNA_INTERCEPT, dt_name="DT") -> WellLog:
    """Append VP and mudrock-line VS curves (km/s). Non-positive VS become missing."""
    dt = well[dt_name].samples
    vp = np.full_like(dt, np.nan)
    ok = ~np.isnan(dt) & (dt > 0)
    vp[ok] = pp.vp_from_dt(dt[ok])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", pp.NonPhysicalWarning)
        vs = pp.castagna_vs(vp, slope, intercept)
    for w in caught:
        log.warning("%s: %s (excluded)", well.well_name, w.message)
    vs = np.where(vs > 0, vs, np.nan)
    curves = [c for c in well.curves if canonical_mnemonic(c.mnemonic) not in ("VP", VS)]
    curves += [Curve("VP", "KM/S", "Compressional velocity from sonic", vp),
               Curve(VS, "KM/S", "Shear velocity, mudrock line", vs)]
    return WellLog(well.well_name, well.depth, curves, well.null_value, well.depth_unit)


@dataclass
class StudyConfig:
    features: list[str] = field(default_factory=lambda: ["DEPTH", "GR", "NPHI", "RHOB"])
    scenarios: list[str] = field(default_factory=lambda: list(SCENARIOS))
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    max_gap: int = 10
    ranges: dict = field(default_factory=lambda: dict(DEFAULT_RANGES))
    castagna_slope: float = pp.CASTAGNA_SLOPE
    castagna_intercept: float = pp.CASTAGNA_INTERCEPT
    fractions: tuple = (0.70, 0.15, 0.15)
    evaluation: EvalConfig = field(default_factory=EvalConfig)
    seed: int = 0

    def __post_init__(self):
        for s in self.scenarios:
            if s not in SCENARIOS:
                raise ValueError(f"unknown scenario {s!r}")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        if not self.features:
            raise ValueError("feature list must be nonempty")
        self.evaluation.features = [canonical_mnemonic(f) for f in self.features]
        self.evaluation.seed = self.seed


def prepare_well(well: WellLog, cfg: StudyConfig) -> WellLog:
    well = normalize_units(well)
    well = condition_log(well, cfg.max_gap, cfg.ranges)
    return add_shear_velocity(well, cfg.castagna_slope, cfg.castagna_intercept)


def feature_table(well: WellLog, cfg: StudyConfig) -> FeatureTable:
    return build_feature_table(prepare_well(well, cfg), cfg.features, VS)


def make_splits(tables: list[FeatureTable], cfg: StudyConfig) -> dict[str, ScenarioSplit]:
    splits = {}
    for kind in cfg.scenarios:
        seed = derive_seed(cfg.seed, "split", kind)
        parts = tables[:2] if kind == "different_well" else tables[:1]
        if kind == "different_well" and len(tables) < 2:
            raise ValueError("different_well scenario needs a second well")
        splits[kind] = split_scenario(parts, kind, cfg.fractions, seed)
    return splits


def run_study(wells: list[WellLog], cfg: StudyConfig | None = None) -> list[EvalReport]:
    """Evaluate every configured method under every configured scenario."""
    cfg = cfg or StudyConfig()
    tables = [feature_table(w, cfg) for w in wells]
    splits = make_splits(tables, cfg)
    reports = []
    for kind in cfg.scenarios:
        reports.extend(run_scenario(splits[kind], cfg.methods, cfg.evaluation))
    return reports
