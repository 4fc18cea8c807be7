"""Shared fixtures: drift caches and example-scale ensembles.

Field construction dominates the suite's wall time, so every cache is a
session fixture built at most once.  Ensembles reuse the example presets
(N=30000, T=15, master seed 20240901) that the acceptance tests check.
"""

import math

import numpy as np
import pytest

from llmc.drift import DriftField
from llmc.jumps import Exponential, Lognormal, Lomax, Weibull
from llmc.sampler import SimulationConfig, simulate_ensemble
from llmc.targets import Segment, TargetDensity, builtin_target, make_expr

EXAMPLE_N = 30000
EXAMPLE_T = 15.0
MASTER_SEED = 20240901


def example_config(**overrides):
    base = dict(x0=1.0, horizon=EXAMPLE_T, n_paths=EXAMPLE_N,
                master_seed=MASTER_SEED)
    base.update(overrides)
    return SimulationConfig(**base)


@pytest.fixture(scope="session")
def exp_target():
    seg = Segment(0.0, math.inf, make_expr("exp_decay", rate=1.0))
    return TargetDensity([seg], name="exp1")


@pytest.fixture(scope="session")
def field_exp_exp(exp_target):
    return DriftField(exp_target, Exponential(rate=2.0))


@pytest.fixture(scope="session")
def field_f1_weibull():
    return DriftField(builtin_target("f1"), Weibull(alpha=0.5, beta=1.0))


@pytest.fixture(scope="session")
def field_f2_lognormal():
    return DriftField(builtin_target("f2"), Lognormal(m=0.0, sigma=2.0))


@pytest.fixture(scope="session")
def field_f3_lomax():
    return DriftField(builtin_target("f3"), Lomax(alpha=1.0))


@pytest.fixture(scope="session")
def field_f4_lomax():
    return DriftField(builtin_target("f4"), Lomax(alpha=1.0))


@pytest.fixture(scope="session")
def field_f3_exp2():
    return DriftField(builtin_target("f3"), Exponential(rate=2.0))


@pytest.fixture(scope="session")
def ens_ex1(field_f1_weibull):
    return simulate_ensemble(field_f1_weibull, example_config())


@pytest.fixture(scope="session")
def ens_ex2(field_f2_lognormal):
    return simulate_ensemble(field_f2_lognormal, example_config())


@pytest.fixture(scope="session")
def ens_ex3(field_f3_lomax):
    return simulate_ensemble(field_f3_lomax, example_config())


@pytest.fixture(scope="session")
def ens_ex4(field_f4_lomax):
    return simulate_ensemble(field_f4_lomax, example_config())


@pytest.fixture(scope="session")
def ens_ex3_exp(field_f3_exp2):
    return simulate_ensemble(field_f3_exp2, example_config())


@pytest.fixture(scope="session")
def skeleton_ensembles(field_f1_weibull, field_f2_lognormal, field_f3_lomax,
                       field_f4_lomax):
    """200 fully recorded paths per example for path-structure checks."""
    cfg = example_config(n_paths=200, record_mode="full")
    return {
        "f1": simulate_ensemble(field_f1_weibull, cfg),
        "f2": simulate_ensemble(field_f2_lognormal, cfg),
        "f3": simulate_ensemble(field_f3_lomax, cfg),
        "f4": simulate_ensemble(field_f4_lomax, cfg),
    }
