"""Jump-law catalogue: closed forms, inverse transforms, condition checkers."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from llmc.jumps import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    Exponential,
    GridSpec,
    JumpValidationError,
    Lognormal,
    Lomax,
    Weibull,
    check_conditions,
    make_jump,
)
from llmc.targets import builtin_target

ALL_JUMPS = [
    Exponential(rate=2.0),
    Weibull(alpha=0.5, beta=1.0),
    Lognormal(m=0.0, sigma=2.0),
    Lomax(alpha=1.0),
]


@pytest.mark.parametrize("j", ALL_JUMPS, ids=lambda j: repr(j))
def test_pdf_integrates_to_one(j):
    val, _ = quad(j.pdf, 0.0, np.inf, limit=400)
    assert val == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("j", ALL_JUMPS, ids=lambda j: repr(j))
def test_cdf_is_pdf_antiderivative(j):
    for x in (0.3, 1.0, 4.0):
        val, _ = quad(j.pdf, 0.0, x, limit=200)
        assert j.cdf(x) == pytest.approx(val, abs=1e-10)
        assert j.tail(x) == pytest.approx(1.0 - val, abs=1e-10)


@pytest.mark.parametrize("j", ALL_JUMPS, ids=lambda j: repr(j))
def test_quantile_roundtrip(j):
    ps = np.concatenate([np.linspace(1e-6, 1 - 1e-6, 41), [1e-12, 1 - 1e-9]])
    xs = j.quantile(ps)
    assert np.all(np.diff(j.quantile(np.sort(ps))) >= 0)
    for p, x in zip(ps, xs):
        assert j.cdf(float(x)) == pytest.approx(p, abs=1e-9)


@pytest.mark.parametrize("j", ALL_JUMPS, ids=lambda j: repr(j))
def test_hazard_is_pdf_over_tail(j):
    xs = np.array([0.2, 1.0, 3.0, 10.0])
    assert np.allclose(j.hazard(xs), j.pdf(xs) / j.tail(xs), rtol=1e-10)


def test_exponential_quantile_oracle():
    assert Exponential(rate=2.0).quantile(1.0 - math.exp(-1.0)) == pytest.approx(0.5)


def test_exponential_hazard_constant():
    j = Exponential(rate=1.7)
    assert np.allclose(j.hazard(np.array([0.1, 1.0, 50.0])), 1.7)


def test_weibull_hazard_decreasing_below_one():
    j = Weibull(alpha=0.5, beta=1.0)
    xs = np.geomspace(0.01, 100.0, 64)
    q = j.hazard(xs)
    assert np.all(np.diff(q) < 0)
    # alpha*beta^alpha*x^(alpha-1) in closed form
    assert np.allclose(q, 0.5 * xs ** -0.5, rtol=1e-12)
    # x*q(x) = 0.5*sqrt(x) still grows without bound
    assert np.all(np.diff(xs * q) > 0)


def test_lomax_hazard_closed_form():
    j = Lomax(alpha=1.0)
    xs = np.geomspace(0.1, 1e4, 32)
    assert np.allclose(j.hazard(xs), 1.0 / (1.0 + xs), rtol=1e-12)
    # x*q(x) -> alpha: bounded, unlike every subexponential law accepted
    # by the hazard-route checker
    assert abs(xs[-1] * j.hazard(xs[-1]) - 1.0) < 1e-3


def test_lognormal_matches_scipy_form():
    j = Lognormal(m=0.3, sigma=1.5)
    xs = np.array([0.2, 1.0, 5.0])
    want = np.exp(-0.5 * ((np.log(xs) - 0.3) / 1.5) ** 2) / (
        xs * 1.5 * math.sqrt(2.0 * math.pi))
    assert np.allclose(j.pdf(xs), want, rtol=1e-12)
    assert np.allclose(np.exp(j.log_pdf(xs)), want, rtol=1e-12)


def test_sampling_moments():
    rng = np.random.default_rng(21)
    j = Weibull(alpha=0.5, beta=1.0)
    xs = j.sample(200_000, rng)
    # E X = Gamma(1 + 1/alpha) / beta = 2
    assert np.mean(xs) == pytest.approx(2.0, abs=4 * np.std(xs) / math.sqrt(xs.size))
    e = Exponential(rate=2.0).sample(200_000, rng)
    assert np.mean(e) == pytest.approx(0.5, abs=0.01)


def test_parameter_validation():
    with pytest.raises(JumpValidationError):
        Exponential(rate=0.0)
    with pytest.raises(JumpValidationError):
        Weibull(alpha=1.2, beta=1.0)  # needs alpha in (0, 1)
    with pytest.raises(JumpValidationError):
        Weibull(alpha=0.5, beta=-1.0)
    with pytest.raises(JumpValidationError):
        Lognormal(m=0.0, sigma=0.0)
    with pytest.raises(JumpValidationError):
        Lomax(alpha=-2.0)
    with pytest.raises(JumpValidationError):
        make_jump("cauchy")
    with pytest.raises(ValueError):
        Exponential(rate=1.0).quantile(1.5)


def test_make_jump_families():
    assert isinstance(make_jump("weibull", alpha=0.5, beta=1.0), Weibull)
    assert isinstance(make_jump("exponential", rate=2.0), Exponential)
    assert isinstance(make_jump("lognormal", m=0.0, sigma=2.0), Lognormal)
    assert isinstance(make_jump("lomax", alpha=1.0), Lomax)


# -- condition checkers ------------------------------------------------------

def test_weibull_against_weibull_tail_target():
    rep = check_conditions(Weibull(alpha=0.5, beta=1.0), builtin_target("f1"))
    for name in ("hazard_decreasing", "hazard_to_zero", "x_hazard_to_inf",
                 "integrability", "pitman", "tail_comparison_4a"):
        assert rep.verdicts[name] == PASS, name
    assert rep.subexponential_route == PASS
    assert rep.overall == PASS


def test_lomax_against_f3():
    rep = check_conditions(Lomax(alpha=1.0), builtin_target("f3"))
    assert rep.verdicts["hazard_decreasing"] == PASS
    assert rep.verdicts["x_hazard_to_inf"] == FAIL
    assert rep.subexponential_route == FAIL
    assert rep.verdicts["rv_index_gate"] == PASS
    assert rep.overall == PASS


def test_exponential_fails_heavy_tail_conditions():
    rep = check_conditions(Exponential(rate=1.0), builtin_target("f3"))
    assert rep.verdicts["hazard_to_zero"] == FAIL
    assert rep.subexponential_route == FAIL
    assert rep.rv_route == FAIL
    assert rep.overall == FAIL


def test_lognormal_against_f2():
    rep = check_conditions(Lognormal(m=0.0, sigma=2.0), builtin_target("f2"))
    assert rep.subexponential_route == PASS
    assert rep.overall == PASS


def test_rv_gate_boundary_is_inconclusive():
    rep = check_conditions(Lomax(alpha=1.95), builtin_target("f3"))
    assert rep.verdicts["rv_index_gate"] == INCONCLUSIVE
    assert rep.overall == INCONCLUSIVE


def test_report_serialization():
    rep = check_conditions(Lomax(alpha=1.0), builtin_target("f3"))
    d = rep.to_dict()
    assert d["overall"] == PASS
    assert set(d["verdicts"]) == set(rep.verdicts)
    text = rep.to_text()
    assert "regular-variation route" in text
    assert rep.to_json().startswith("{")


def test_grid_spec_validation():
    g = GridSpec()
    assert g.x_min < g.x_max
    with pytest.raises(ValueError):
        GridSpec(x_min=10.0, x_max=1.0)
