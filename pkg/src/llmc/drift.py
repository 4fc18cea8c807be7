"""Drift field that makes the jump process stationary for a given target.

The field is

    phi(x) = - (int_0^x jump_tail(x - u) pdf(u) du) / pdf(x),   x > 0,

and 0 on the closed negative half line.  It is strictly negative on the
support, so paths decay between upward jumps.

Evaluation strategy: exact adaptive quadrature everywhere, fronted by a
piecewise-cubic cache on log-spaced nodes.  Cache pieces never cross a
density breakpoint (the field is discontinuous there); every build is
validated against exact quadrature at random probe points and rebuilt once
at doubled node density before giving up.  Below the smallest cache node the
field is always evaluated exactly: that is the region where "paths do not
drift into 0" has to hold and where interpolation through the near-origin
structure would be least trustworthy.  Queries above the cached range
trigger an extension rebuild.

A truncation level eps > 0 models jumps pushed up to eps: the jump tail is
replaced by 1 below eps, which adds kinks to the field at eps and at every
breakpoint + eps.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

__all__ = [
    "DriftField",
    "convolve_tail",
    "phi",
    "build_cache",
    "phi_truncated",
    "DriftBuildError",
    "DriftRangeError",
    "CACHE_X_LO",
]

# smallest cache node; below this phi is computed by exact quadrature
CACHE_X_LO = 1e-8

DEFAULT_EXACT_TOL = 1e-9
DEFAULT_NODES_PER_DECADE = 64
DEFAULT_X_MAX = 1e6
VALIDATION_PROBES = 10_000
# cache fidelity: |cached - exact| < factor * exact_tol * max(1, |phi|);
# the relative branch matters where the field grows without bound
VALIDATION_FACTOR = 10.0

# node refinement: split cache intervals whose estimated interpolation error
# exceeds this fraction of the validation tolerance; curvature concentrates
# just above density breakpoints, where uniform log spacing is far too coarse
_REFINE_SAFETY = 0.25
_REFINE_ROUNDS = 8
_REFINE_MAX_SPLIT = 16
_PIECE_NODE_CAP = 6000


class DriftBuildError(RuntimeError):
    """Cache could not reach the required fidelity."""


class DriftRangeError(RuntimeError):
    """Field queried where neither cache nor quadrature can represent it."""


def convolve_tail(t, j, x, truncation_level=None, epsabs=DEFAULT_EXACT_TOL,
                  epsrel=0.5 * DEFAULT_EXACT_TOL):
    """int_0^x tail_j(x - u) pdf_t(u) du by piecewise adaptive quadrature.

    Subdivision is forced at density breakpoints (and oscillation nodes) and,
    when a truncation level is set, at u = x - level where the truncated tail
    drops from 1.  Raises DriftBuildError if the subdivision budget is spent
    before the tolerance is met.
    """
    x = float(x)
    if x <= 0.0:
        return 0.0
    lvl = truncation_level
    cuts = {0.0, x}
    cuts.update(t.quad_points(0.0, x))
    if lvl is not None and 0.0 < x - lvl < x:
        cuts.add(x - lvl)
    # wide pieces hide short-scale structure at their ends (density mass just
    # above a breakpoint, jump-tail variation just below u = x); geometric
    # cuts from both ends keep the adaptive rule from missing it
    base = sorted(cuts)
    for lo, hi in zip(base, base[1:]):
        w = hi - lo
        if w > 10.0:
            v = w
            while v > max(1e-6, 1e-12 * w):
                v *= 0.1
                cuts.add(lo + v)
                cuts.add(hi - v)
    cs = sorted(cuts)
    eps_piece = epsabs / (len(cs) - 1)

    tail = j.tail
    total = 0.0
    err_total = 0.0
    for lo, hi in zip(cs, cs[1:]):
        seg = t.segment_at(0.5 * (lo + hi))
        scaled, offset = seg.expr.scaled, seg.expr.offset
        c = t.norm_const
        if lvl is None:
            def integrand(u):
                return float(tail(x - u)) * (c * float(scaled(u)) + float(offset(u)))
        else:
            def integrand(u):
                v = x - u
                f = 1.0 if v < lvl else float(tail(v))
                return f * (c * float(scaled(u)) + float(offset(u)))
        val, err, info, *rest = quad(integrand, lo, hi, epsabs=eps_piece,
                                     epsrel=epsrel, limit=300, full_output=1)
        if rest and info["last"] >= 300:
            raise DriftBuildError(
                f"convolution quadrature stalled on ({lo:g}, {hi:g}) at x={x:g}; "
                f"achieved error {err:.3g}")
        total += val
        err_total += err
    if err_total > max(epsabs, epsrel * abs(total)) * 10.0:
        raise DriftBuildError(
            f"convolution quadrature at x={x:g} achieved error {err_total:.3g} "
            f"above tolerance {epsabs:.3g}")
    return total


class DriftField:
    """Cached drift for one (target, jump) pair.

    Parameters mirror the run configuration: ``exact_tol`` is the absolute
    tolerance of the backing quadrature, ``nodes_per_decade`` the cache
    density, ``x_max`` the initially cached extent.  ``truncation_level``
    switches to the truncated jump law (see module docstring).
    """

    def __init__(self, target, jump, exact_tol=DEFAULT_EXACT_TOL,
                 nodes_per_decade=DEFAULT_NODES_PER_DECADE, x_max=DEFAULT_X_MAX,
                 truncation_level=None, validation_probes=VALIDATION_PROBES):
        if not exact_tol > 0:
            raise ValueError("exact_tol must be positive")
        if nodes_per_decade < 4:
            raise ValueError("nodes_per_decade must be at least 4")
        self.target = target
        self.jump = jump
        self.exact_tol = float(exact_tol)
        self.nodes_per_decade = int(nodes_per_decade)
        self.x_max = float(x_max)
        self.truncation_level = truncation_level
        self.validation_probes = int(validation_probes)
        self._support_cap = target.support_top()
        self._trunc_cache = {}
        self.rebuild()

    # -- construction ------------------------------------------------------

    def _kinks(self):
        pts = set(self.target.breakpoints)
        if self.truncation_level is not None:
            lvl = self.truncation_level
            pts.add(lvl)
            pts.update(b + lvl for b in self.target.breakpoints)
        return pts

    def _build(self, npd):
        t = self.target
        x_top = min(self.x_max, self._support_cap)
        top_kink = max(self._kinks(), default=0.0)
        if x_top <= top_kink * 1.05:
            raise DriftBuildError(
                f"cache extent {x_top:g} does not clear the last breakpoint")
        bounds = [CACHE_X_LO] + sorted(
            p for p in self._kinks() if CACHE_X_LO < p < x_top) + [x_top]

        # the spline runs in log-log space: s = ln x against ln(-phi).  That
        # keeps the interpolation error relative, which is what the mixed
        # validation tolerance needs, across the many orders of magnitude the
        # field spans, and -exp(spline) is negative by construction.
        edges = []
        coefs = []
        for lo, hi in zip(bounds, bounds[1:]):
            sp, ss = self._fit_piece(lo, hi, npd)
            edges.append(ss[:-1])
            coefs.append(sp.c)
        self._edges = np.concatenate(edges + [[math.log(x_top)]])
        c = np.concatenate(coefs, axis=1)
        self._c3, self._c2, self._c1, self._c0 = (np.ascontiguousarray(c[i])
                                                  for i in range(4))
        self._x_top = x_top
        # every interior piece bound is a kink of phi (density breakpoints
        # plus truncation-level points); the path integrator must not step
        # across any of them
        self._bps = np.array(sorted(
            p for p in self._kinks() if CACHE_X_LO < p < x_top))

    def _fit_piece(self, lo, hi, npd):
        """Fit ln(-phi) against ln x on one breakpoint-free piece.

        Starts from uniform log spacing and locally subdivides intervals whose
        predicted interpolation error is too large.  Interior intervals are
        judged by the spline's own third-derivative jumps (a fourth-derivative
        estimate); the first and last interval of each piece get an exact
        midpoint probe instead, because the not-a-knot end condition makes the
        jump estimate blind exactly where curvature peaks (just above a
        density breakpoint).
        """
        s_lo, s_hi = math.log(lo), math.log(hi)
        cache = {}

        def gval(s):
            if s not in cache:
                if s >= s_hi:
                    pdf_val = self.target.pdf_left(hi)
                    xv = hi
                else:
                    xv = lo if s <= s_lo else math.exp(s)
                    pdf_val = self.target.pdf(xv)
                cache[s] = math.log(self._conv(xv) / pdf_val)
            return cache[s]

        n = max(6, int(math.ceil(math.log10(hi / lo) * npd)) + 1)
        nodes = {float(s) for s in np.linspace(s_lo, s_hi, n)}
        tol_g = _REFINE_SAFETY * VALIDATION_FACTOR * self.exact_tol
        for round_idx in range(_REFINE_ROUNDS + 1):
            ss = np.array(sorted(nodes))
            keep = np.concatenate([[True], np.diff(ss) > 1e-10])
            ss = ss[keep]
            ys = np.array([gval(s) for s in ss])
            sp = CubicSpline(ss, ys)
            if round_idx == _REFINE_ROUNDS:
                break
            h = np.diff(ss)
            est = np.zeros(h.size)
            if h.size >= 2:
                g4 = 6.0 * np.abs(np.diff(sp.c[0])) / (0.5 * (h[:-1] + h[1:]))
                est[:-1] = (5.0 / 384.0) * h[:-1] ** 4 * g4
                est[1:] = np.maximum(est[1:], (5.0 / 384.0) * h[1:] ** 4 * g4)
            for i in {0, h.size - 1}:
                sm = 0.5 * (ss[i] + ss[i + 1])
                est[i] = max(est[i], 2.0 * abs(float(sp(sm)) - gval(sm)))
            bad = np.nonzero(est > tol_g)[0]
            if bad.size == 0:
                break
            for i in bad:
                m = min(_REFINE_MAX_SPLIT,
                        int(math.ceil((est[i] / tol_g) ** 0.25)) + 1)
                nodes.update(float(ss[i] + h[i] * j / m) for j in range(1, m))
            if len(nodes) > _PIECE_NODE_CAP:
                raise DriftBuildError(
                    f"cache refinement on ({lo:g}, {hi:g}) exceeded "
                    f"{_PIECE_NODE_CAP} nodes; field may have an unregistered "
                    f"kink in this range")
        return sp, ss

    def _conv(self, x):
        # scale the absolute tolerance with the local density so the drift
        # (= convolution / density) keeps relative accuracy deep in the tail
        eps = self.exact_tol * min(1.0, max(self.target.pdf(x), 1e-280))
        return convolve_tail(self.target, self.jump, x, self.truncation_level,
                             epsabs=eps, epsrel=0.5 * self.exact_tol)

    def phi_exact(self, x):
        """Quadrature-only evaluation, no cache involved."""
        x = float(x)
        if x <= 0.0:
            return 0.0
        p = self.target.pdf(x)
        if p <= 0.0 or not math.isfinite(p):
            raise DriftRangeError(f"target density underflowed at x={x:g}")
        return -self._conv(x) / p

    def _validate(self):
        rng = np.random.default_rng(20240901)
        xs = np.exp(rng.uniform(math.log(CACHE_X_LO), math.log(self._x_top),
                                self.validation_probes))
        cached = self._eval_packed(xs)
        worst = 0.0
        for xv, cv in zip(xs, cached):
            ev = self.phi_exact(xv)
            err = abs(cv - ev) / max(1.0, abs(ev))
            worst = max(worst, err)
            if err >= VALIDATION_FACTOR * self.exact_tol:
                return False, worst
        self.cache_error = worst
        return True, worst

    def rebuild(self, x_max=None, nodes_per_decade=None):
        """(Re)build and validate the cache, doubling node density once if needed."""
        if x_max is not None:
            self.x_max = float(x_max)
        if nodes_per_decade is not None:
            self.nodes_per_decade = int(nodes_per_decade)
        npd = self.nodes_per_decade
        self._build(npd)
        ok, worst = self._validate()
        if not ok:
            self._build(2 * npd)
            ok, worst = self._validate()
            if not ok:
                raise DriftBuildError(
                    f"cache validation failed even at {2 * npd} nodes/decade; "
                    f"worst scaled error {worst:.3g} vs allowed "
                    f"{VALIDATION_FACTOR * self.exact_tol:.3g}")
            self.nodes_per_decade = 2 * npd
        return self

    # -- evaluation --------------------------------------------------------

    def _eval_packed(self, x):
        """Cache interpolation (no range checks beyond clipping), vectorized."""
        s = np.log(np.asarray(x, dtype=float))
        idx = np.clip(np.searchsorted(self._edges, s, side="right") - 1,
                      0, self._edges.size - 2)
        ds = s - self._edges[idx]
        val = ((self._c3[idx] * ds + self._c2[idx]) * ds + self._c1[idx]) * ds \
            + self._c0[idx]
        return -np.exp(val)

    def _phi_scalar(self, x, allow_extend):
        if x <= 0.0:
            return 0.0
        if x < CACHE_X_LO:
            return self.phi_exact(x)
        if x <= self._x_top:
            return float(self._eval_packed(x))
        if allow_extend and self._x_top < 0.999 * self._support_cap:
            new_top = self._x_top
            while new_top < x and new_top < self._support_cap:
                new_top *= 4.0
            self.rebuild(x_max=min(new_top, self._support_cap))
            if x <= self._x_top:
                return float(self._eval_packed(x))
        return self.phi_exact(x)

    def phi(self, x, allow_extend=True):
        """Drift at x (scalar or array); 0 for x <= 0.

        Uses the cache on its validated range, exact quadrature below the
        smallest node, and extends the cache (or falls back to quadrature)
        above the top.
        """
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 0:
            return self._phi_scalar(float(arr), allow_extend)
        return np.array([self._phi_scalar(float(v), allow_extend) for v in arr])

    def phi_frozen(self, x):
        """Like phi but never mutates the cache (for reproducible ensembles)."""
        return self.phi(x, allow_extend=False)

    # -- derived fields / kernel interface ----------------------------------

    def truncated(self, n):
        """Field for the jump law with sizes pushed up to 1/n (cached per n)."""
        n = int(n)
        if n < 1:
            raise ValueError("truncation index n must be >= 1")
        if n not in self._trunc_cache:
            self._trunc_cache[n] = DriftField(
                self.target, self.jump, exact_tol=self.exact_tol,
                nodes_per_decade=self.nodes_per_decade, x_max=self.x_max,
                truncation_level=1.0 / n,
                validation_probes=self.validation_probes)
        return self._trunc_cache[n]

    def packed(self):
        """Arrays consumed by the compiled path kernel."""
        return self._edges, self._c0, self._c1, self._c2, self._c3, self._bps

    @property
    def kinks(self):
        """All discontinuity points of the field, sorted ascending."""
        return np.array(sorted(self._kinks()))

    @property
    def x_top(self):
        """Upper end of the validated cache range."""
        return self._x_top

    def dump_nodes(self, path):
        """Write the cache knots and field values there as x,phi CSV."""
        xs = np.exp(self._edges)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x,phi\n")
            for xv, pv in zip(xs, self._eval_packed(xs)):
                fh.write(f"{xv:.17g},{pv:.17g}\n")

    def __repr__(self):
        lvl = (f", truncation_level={self.truncation_level:g}"
               if self.truncation_level is not None else "")
        return (f"DriftField({self.target.name!r}, {self.jump!r}, "
                f"range=[{CACHE_X_LO:g}, {self._x_top:g}]{lvl})")


# free-function forms

def phi(d, x):
    """Drift of field d at x."""
    return d.phi(x)


def build_cache(d, x_max=None, nodes_per_decade=None):
    """Rebuild d's cache, optionally at a new extent or node density."""
    return d.rebuild(x_max=x_max, nodes_per_decade=nodes_per_decade)


def phi_truncated(d, n, x):
    """Drift of the level-1/n truncated variant of field d."""
    return d.truncated(n).phi(x)
