"""Shear-wave velocity prediction from conventional well logs."""

from .conditioning import FeatureTable, RangeScaler, ScenarioSplit, split_scenario
from .evaluation import aapre, compare_methods, r_squared, run_scenario
from .las_io import Curve, WellLog, parse_csv, parse_las, write_las
from .neuralnet import ANNRegressor, TrainConfig
from .regression import OLSRegressor, fit_ols
from .synthgen import SynthConfig, generate_field

__version__ = "0.1.0"

__all__ = [
    "ANNRegressor", "Curve", "FeatureTable", "OLSRegressor", "RangeScaler",
    "ScenarioSplit", "SynthConfig", "TrainConfig", "WellLog", "aapre",
    "compare_methods", "fit_ols", "generate_field", "parse_csv", "parse_las",
    "r_squared", "run_scenario", "split_scenario", "write_las",
]
