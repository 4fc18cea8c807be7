"""Sample-quality measures and structural identity checks.

Everything is a pure function of its inputs.  The generator residual is the
one theory-facing check: for the constructed drift the process generator
must annihilate the target law, so the integral of the generator applied to
any smooth compactly supported test function against the target vanishes.
A nonzero residual therefore measures drift error directly.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import stats
from scipy.integrate import quad

__all__ = [
    "ks_distance",
    "tail_coverage",
    "hill_estimator",
    "Bump",
    "default_bumps",
    "generator_residual",
    "Histogram",
    "histogram",
    "poisson_count_test",
    "DiagnosticsReport",
    "run_diagnostics",
    "KS_GATE",
    "TAIL_FACTOR_GATE",
    "RESIDUAL_GATE",
]

KS_GATE = 0.05
TAIL_FACTOR_GATE = 2.0
RESIDUAL_GATE = 1e-4
# tail thresholds only gate when the target mass there is resolvable at N
_MIN_TAIL_COUNT = 10.0


def ks_distance(samples, target):
    """Sup distance between the empirical cdf and the target cdf.

    Evaluated exactly at the sample points against the quadrature-backed
    cdf, never against a binned approximation.
    """
    srt = np.sort(np.asarray(samples, dtype=float))
    if srt.size == 0:
        raise ValueError("need at least one sample")
    f = np.asarray(target.cdf_sorted(srt))
    n = srt.size
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - f), np.max(f - steps + 1.0 / n)))


def tail_coverage(samples, target, thresholds):
    """Rows (threshold, empirical tail prob, target tail prob, ratio)."""
    xs = np.asarray(samples, dtype=float)
    us = [float(u) for u in thresholds]
    if any(u <= 0 for u in us) or any(a >= b for a, b in zip(us, us[1:])):
        raise ValueError("thresholds must be positive and increasing")
    rows = []
    for u in us:
        emp = float(np.mean(xs > u))
        tgt = float(target.tail(u))
        rows.append((u, emp, tgt, emp / tgt if tgt > 0.0 else math.inf))
    return rows


def hill_estimator(samples, k=None):
    """Tail-index estimate from the top k order statistics.

    Returns (estimate, k, stderr) with stderr = estimate / sqrt(k).  The
    estimate targets the power-law index of the sample tail; for light
    tails it drifts large without stabilizing.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    if k is None:
        k = int(math.isqrt(n))
    k = int(k)
    if k < 10:
        raise ValueError("hill estimator needs k >= 10")
    if k >= n:
        raise ValueError("hill estimator needs k < n")
    pivot = xs[n - k - 1]
    if not pivot > 0.0:
        raise ValueError("order statistics must be positive")
    mean_log = float(np.mean(np.log(xs[n - k:]) - math.log(pivot)))
    if mean_log <= 0.0:
        raise ValueError("degenerate ties in the top order statistics")
    est = 1.0 / mean_log
    return est, k, est / math.sqrt(k)


# -- generator residual -------------------------------------------------------

@dataclass(frozen=True)
class Bump:
    """Polynomial bump (1 - ((x-c)/r)^2)^3 on [c-r, c+r], zero outside.

    Twice continuously differentiable with compact support; support must
    stay inside (0, inf).
    """

    center: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("bump radius must be positive")
        if not self.center - self.radius > 0.0:
            raise ValueError("bump support must stay inside (0, inf)")

    def f(self, x):
        w = (x - self.center) / self.radius
        if abs(w) >= 1.0:
            return 0.0
        return (1.0 - w * w) ** 3

    def df(self, x):
        w = (x - self.center) / self.radius
        if abs(w) >= 1.0:
            return 0.0
        return -6.0 * w * (1.0 - w * w) ** 2 / self.radius

    def label(self):
        return f"bump({self.center:g},{self.radius:g})"


def default_bumps():
    """Three bumps with pairwise disjoint supports."""
    return (Bump(1.0, 0.6), Bump(4.0, 1.5), Bump(12.0, 4.0))


def generator_residual(target, jump, bump, fld, drift_scale=1.0):
    """Integral of the generator applied to the bump against the target.

    Computes int [ drift_scale*phi(x) f'(x)
                   + int (f(x+z) - f(x)) pdf_jump(z) dz ] pdf_target(x) dx
    by nested adaptive quadrature.  Vanishes (to quadrature accuracy) for
    the unscaled constructed drift; drift_scale != 1 breaks the identity
    and the residual grows accordingly.
    """
    hi = bump.center + bump.radius
    lo_support = bump.center - bump.radius
    phi = fld.phi_frozen

    def inner(x):
        zlo = max(0.0, lo_support - x)
        zhi = hi - x
        if zhi <= zlo:
            return -bump.f(x)
        val = quad(lambda z: bump.f(x + z) * float(jump.pdf(z)), zlo, zhi,
                   epsabs=1e-13, epsrel=1e-10, limit=200, full_output=1)[0]
        return val - bump.f(x)

    cuts = sorted({0.0, lo_support, hi}
                  | {b for b in target.breakpoints if 0.0 < b < hi}
                  | {p for p in target.quad_points(0.0, hi) if 0.0 < p < hi})
    total = 0.0
    eps_piece = 1e-8 / (len(cuts) - 1)
    for a, b in zip(cuts, cuts[1:]):
        def outer(x):
            acc = inner(x)
            if lo_support < x < hi:
                acc += drift_scale * float(phi(x)) * bump.df(x)
            return acc * float(target.pdf(x))
        total += quad(outer, a, b, epsabs=eps_piece, epsrel=1e-7,
                      limit=200, full_output=1)[0]
    return total


# -- histogram ----------------------------------------------------------------

@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    log_scale: bool

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("bin_left,bin_right,count,density\n")
            for le, ri, c, d in zip(self.edges[:-1], self.edges[1:],
                                    self.counts, self.density):
                fh.write(f"{le:.17g},{ri:.17g},{int(c)},{d:.17g}\n")


def histogram(samples, bins, log_scale=False):
    """Density-normalized histogram; log_scale uses log-spaced edges."""
    xs = np.asarray(samples, dtype=float)
    if int(bins) < 2:
        raise ValueError("need at least 2 bins")
    bins = int(bins)
    lo, hi = float(xs.min()), float(xs.max())
    if log_scale:
        if not lo > 0.0:
            raise ValueError("log-scale bins need positive samples")
        if lo == hi:
            lo, hi = lo * 0.5, hi * 2.0
        edges = np.geomspace(lo, hi, bins + 1)
        edges[0], edges[-1] = lo, hi
    else:
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(xs, bins=edges)
    widths = np.diff(edges)
    total = counts.sum()
    density = counts / (total * widths) if total else np.zeros_like(widths)
    return Histogram(edges=edges, counts=counts, density=density,
                     log_scale=bool(log_scale))


def poisson_count_test(counts, rate):
    """Chi-square goodness of fit of integer counts against Poisson(rate).

    Adjacent cells are merged until every expected count is at least 5;
    returns (statistic, dof, p_value).
    """
    counts = np.asarray(counts, dtype=int)
    if counts.size == 0:
        raise ValueError("need at least one count")
    kmax = int(counts.max())
    obs = np.bincount(counts, minlength=kmax + 1).astype(float)
    exp = counts.size * np.append(
        stats.poisson.pmf(np.arange(kmax + 1), rate),
        stats.poisson.sf(kmax, rate))
    obs = np.append(obs, 0.0)
    m_obs, m_exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            m_obs.append(acc_o)
            m_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0.0 and m_obs:
        m_obs[-1] += acc_o
        m_exp[-1] += acc_e
    m_obs, m_exp = np.array(m_obs), np.array(m_exp)
    if m_obs.size < 2:
        raise ValueError("too few cells for a chi-square test")
    stat = float(np.sum((m_obs - m_exp) ** 2 / m_exp))
    dof = m_obs.size - 1
    return stat, dof, float(stats.chi2.sf(stat, dof))


# -- aggregate report ---------------------------------------------------------

@dataclass
class DiagnosticsReport:
    n_samples: int
    ks: float
    tail: list
    hill: tuple  # (estimate, k, stderr)
    residuals: list  # (label, value)
    hist: Histogram
    flags: dict = dc_field(default_factory=dict)

    def to_text(self):
        lines = ["sample diagnostics", "==================",
                 f"samples: {self.n_samples}",
                 f"ks_distance: {self.ks:.6g}", "", "tail coverage:"]
        for u, emp, tgt, ratio in self.tail:
            lines.append(f"  u={u:g}: empirical {emp:.6g} "
                         f"target {tgt:.6g} ratio {ratio:.4g}")
        est, k, se = self.hill
        lines += ["", f"hill tail index: {est:.4g} (k={k}, stderr {se:.3g})"]
        if self.residuals:
            lines += ["", "generator residuals:"]
            lines += [f"  {lab}: {val:.6g}" for lab, val in self.residuals]
        lines += ["", "flags:"]
        lines += [f"  {name}: {'pass' if ok else 'FAIL'}"
                  for name, ok in self.flags.items()]
        return "\n".join(lines) + "\n"

    def to_kv(self):
        lines = [f"n_samples={self.n_samples}",
                 f"ks_distance={self.ks:.17g}"]
        for u, emp, tgt, ratio in self.tail:
            tag = f"{u:g}".replace(".", "_")
            lines += [f"tail_{tag}_empirical={emp:.17g}",
                      f"tail_{tag}_target={tgt:.17g}",
                      f"tail_{tag}_ratio={ratio:.17g}"]
        est, k, se = self.hill
        lines += [f"hill_estimate={est:.17g}", f"hill_k={k}",
                  f"hill_stderr={se:.17g}"]
        for lab, val in self.residuals:
            safe = "".join(ch if ch.isalnum() else "_" for ch in lab)
            lines.append(f"residual_{safe}={val:.17g}")
        for name, ok in self.flags.items():
            lines.append(f"flag_{name}={'pass' if ok else 'fail'}")
        return "\n".join(lines) + "\n"


def run_diagnostics(samples, target, jump=None, fld=None,
                    thresholds=(1.0, 5.0, 10.0, 20.0, 50.0), bins=60,
                    log_scale=True, hill_k=None, bumps=None):
    """Full report; generator residuals only when a drift field is given."""
    xs = np.asarray(samples, dtype=float)
    ks = ks_distance(xs, target)
    tail = tail_coverage(xs, target, thresholds)
    if hill_k is None and math.isqrt(xs.size) < 10:
        # too few samples for a tail-index estimate; report it as absent
        hill = (math.nan, 0, math.nan)
    else:
        hill = hill_estimator(xs, hill_k)
    residuals = []
    if fld is not None and jump is not None:
        for b in (bumps if bumps is not None else default_bumps()):
            residuals.append((b.label(), generator_residual(
                target, jump, b, fld)))
    hist = histogram(xs, bins, log_scale=log_scale)
    gated = [(emp, tgt, ratio) for _, emp, tgt, ratio in tail
             if tgt * xs.size >= _MIN_TAIL_COUNT]
    flags = {
        "ks": ks <= KS_GATE,
        "tail_coverage": all(
            1.0 / TAIL_FACTOR_GATE <= ratio <= TAIL_FACTOR_GATE
            for _, _, ratio in gated),
    }
    if residuals:
        flags["generator_residual"] = all(
            abs(v) < RESIDUAL_GATE for _, v in residuals)
    return DiagnosticsReport(n_samples=int(xs.size), ks=ks, tail=tail,
                             hill=hill, residuals=residuals, hist=hist,
                             flags=flags)
