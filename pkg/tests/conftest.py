import numpy as np
import pytest

from vspredict.evaluation import EvalConfig
from vspredict.pipeline import StudyConfig, feature_table, make_splits, run_study
from vspredict.synthgen import SynthConfig, generate_field

DEFAULT_SEED = 2021


@pytest.fixture(scope="session")
def default_field():
    return generate_field(SynthConfig(seed=DEFAULT_SEED))


@pytest.fixture(scope="session")
def default_study_config():
    return StudyConfig(seed=DEFAULT_SEED, evaluation=EvalConfig())


@pytest.fixture(scope="session")
def default_tables(default_field, default_study_config):
    return [feature_table(w, default_study_config) for w in default_field]


@pytest.fixture(scope="session")
def default_splits(default_tables, default_study_config):
    return make_splits(default_tables, default_study_config)


@pytest.fixture(scope="session")
def default_reports(default_field, default_study_config):
    return run_study(list(default_field), default_study_config)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance results collected by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, label, detail = ACCEPTANCE[num]
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'}  criterion {num}: {label}  [{detail}]")
