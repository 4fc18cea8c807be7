"""Drift construction: convolution quadrature, cache fidelity, truncation."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from llmc.drift import DriftBuildError, DriftField, convolve_tail
from llmc.jumps import Exponential, Lomax
from llmc.targets import builtin_target


def test_convolution_closed_form(exp_target):
    # int_0^x e^{-2(x-u)} e^{-u} du = e^{-x} - e^{-2x}
    j = Exponential(rate=2.0)
    for x in np.linspace(0.05, 25.0, 40):
        want = math.exp(-x) - math.exp(-2.0 * x)
        assert convolve_tail(exp_target, j, x) == pytest.approx(want, abs=1e-8)
    assert convolve_tail(exp_target, j, 0.0) == 0.0
    assert convolve_tail(exp_target, j, -3.0) == 0.0


def test_drift_closed_form(field_exp_exp):
    xs = np.linspace(0.01, 20.0, 2000)
    got = field_exp_exp.phi(xs)
    want = np.exp(-xs) - 1.0
    assert np.max(np.abs(got - want)) < 1e-6


def test_drift_closed_form_quadrature_route(exp_target):
    # same identity without the cache: phi = -conv/pdf
    j = Exponential(rate=2.0)
    for x in (0.01, 0.5, 3.0, 12.0, 20.0):
        got = -convolve_tail(exp_target, j, x) / exp_target.pdf(x)
        assert got == pytest.approx(math.exp(-x) - 1.0, abs=1e-8)


def test_truncated_convolution_against_direct_quadrature(exp_target):
    # level 1/10: the truncated tail is 1 below 0.1 and e^{-2y} above
    j = Exponential(rate=2.0)

    def tail_n(y):
        return 1.0 if y < 0.1 else math.exp(-2.0 * y)

    for x in (0.05, 0.5, 2.0, 8.0):
        want = 0.0
        for lo, hi in ((0.0, max(0.0, x - 0.1)), (max(0.0, x - 0.1), x)):
            if hi > lo:
                val, _ = quad(lambda u: tail_n(x - u) * exp_target.pdf(u),
                              lo, hi, epsabs=1e-12, limit=200)
                want += val
        got = convolve_tail(exp_target, j, x, truncation_level=0.1)
        assert got == pytest.approx(want, abs=1e-8)


def test_cache_matches_exact_quadrature(field_f3_lomax):
    fld = field_f3_lomax
    rng = np.random.default_rng(17)
    xs = np.exp(rng.uniform(math.log(1e-6), math.log(1e5), size=60))
    t, j = fld.target, fld.jump
    for x in xs:
        exact = -convolve_tail(t, j, float(x)) / t.pdf(float(x))
        tol = 10.0 * fld.exact_tol * max(1.0, abs(exact))
        assert abs(fld.phi(float(x)) - exact) <= tol


def test_drift_nonpositive_and_zero_at_origin(field_f3_lomax):
    xs = np.geomspace(1e-6, 1e4, 200)
    assert np.all(field_f3_lomax.phi(xs) <= 0.0)
    assert field_f3_lomax.phi(0.0) == 0.0
    assert field_f3_lomax.phi(-1.0) == 0.0


def test_truncation_ordering(field_exp_exp):
    # lifting jump sizes fattens the convolution, so phi_n <= phi_m <= phi <= 0
    # for n < m, approaching phi as the floor 1/n shrinks
    f2, f8 = field_exp_exp.truncated(2), field_exp_exp.truncated(8)
    xs = np.geomspace(0.01, 30.0, 50)
    p, p8, p2 = field_exp_exp.phi(xs), f8.phi(xs), f2.phi(xs)
    # slack at the cache-fidelity scale: below the floor the levels coincide
    # and only quadrature noise separates them
    assert np.all(p2 <= p8 + 1e-7)
    assert np.all(p8 <= p + 1e-7)
    assert np.all(p <= 0.0)
    assert np.max(np.abs(p8 - p)) < np.max(np.abs(p2 - p))


def test_truncated_field_is_cached(field_exp_exp):
    assert field_exp_exp.truncated(2) is field_exp_exp.truncated(2)
    with pytest.raises(ValueError):
        field_exp_exp.truncated(0)


def test_kinks_include_target_breakpoints(field_f3_lomax):
    kinks = field_f3_lomax.kinks
    for b in (5.0, 7.0):
        assert np.min(np.abs(kinks - b)) < 1e-12


def test_packed_arrays_shape(field_f3_lomax):
    edges, c0, c1, c2, c3, bps = field_f3_lomax.packed()
    assert edges.ndim == 1 and np.all(np.diff(edges) > 0)
    for c in (c0, c1, c2, c3):
        assert c.size == edges.size - 1
        assert np.all(np.isfinite(c))
    assert np.all(np.diff(bps) > 0)
    assert field_f3_lomax.x_top >= 1e6


def test_phi_frozen_does_not_extend(field_f3_lomax, field_exp_exp):
    top = field_f3_lomax.x_top
    got = field_f3_lomax.phi_frozen(top * 10.0)
    assert np.isfinite(got) and got < 0.0  # exact quadrature fallback
    assert field_f3_lomax.x_top == top
    # the exponential-body target really has no density out there
    from llmc.drift import DriftRangeError
    with pytest.raises(DriftRangeError):
        field_exp_exp.phi_frozen(field_exp_exp.x_top * 10.0)


def test_dump_nodes(tmp_path, field_exp_exp):
    out = tmp_path / "nodes.csv"
    field_exp_exp.dump_nodes(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "x,phi"
    assert len(lines) > 100


def test_constructor_validation():
    t = builtin_target("f3")
    with pytest.raises(ValueError):
        DriftField(t, Lomax(alpha=1.0), exact_tol=0.0)
    with pytest.raises(ValueError):
        DriftField(t, Lomax(alpha=1.0), nodes_per_decade=2)
