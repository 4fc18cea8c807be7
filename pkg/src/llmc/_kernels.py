"""Compiled path integration kernels.

Everything here is deterministic given its inputs: randomness stays outside
(event times and jump sizes are drawn by the caller), so results cannot
depend on thread count or scheduling.  The drift comes in as the packed
log-log cache arrays of DriftField; whenever a state leaves the cached
range the kernel reports a bail status instead of extrapolating, and the
caller re-simulates that path in Python against exact quadrature.

The stepper is the Dormand-Prince embedded 5(4) pair.  Steps never cross a
field kink: a crossing trial step is bisected in step size until the state
lands on the kink to 1e-12, then integration restarts just below it on the
adjacent smooth piece.
"""

import math

import numba as nb
import numpy as np

# bail statuses
OK = 0
BELOW_CACHE = 1
ABOVE_CACHE = 2
STEP_UNDERFLOW = 3

# Dormand-Prince 5(4) tableau
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
# fifth-order minus fourth-order weights (error estimator)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)


@nb.njit(cache=True, inline="always")
def _phi_cache(x, edges, c0, c1, c2, c3):
    """Packed cache lookup; caller guarantees x inside the cached range."""
    s = math.log(x)
    i = np.searchsorted(edges, s, side="right") - 1
    if i < 0:
        i = 0
    top = edges.shape[0] - 2
    if i > top:
        i = top
    ds = s - edges[i]
    return -math.exp(((c3[i] * ds + c2[i]) * ds + c1[i]) * ds + c0[i])


@nb.njit(cache=True, inline="always")
def _in_range(x, x_lo, x_hi):
    return x_lo <= x <= x_hi


@nb.njit(cache=True)
def _dp_step(x, k1, h, edges, c0, c1, c2, c3, x_lo, x_hi):
    """One trial Dormand-Prince step.

    Returns (x5, err, k7, ok); ok is False when a stage state leaves the
    cached range, which the caller treats as a step rejection.
    """
    y = x + h * (_A21 * k1)
    if not _in_range(y, x_lo, x_hi):
        return 0.0, 0.0, 0.0, False
    k2 = _phi_cache(y, edges, c0, c1, c2, c3)
    y = x + h * (_A31 * k1 + _A32 * k2)
    if not _in_range(y, x_lo, x_hi):
        return 0.0, 0.0, 0.0, False
    k3 = _phi_cache(y, edges, c0, c1, c2, c3)
    y = x + h * (_A41 * k1 + _A42 * k2 + _A43 * k3)
    if not _in_range(y, x_lo, x_hi):
        return 0.0, 0.0, 0.0, False
    k4 = _phi_cache(y, edges, c0, c1, c2, c3)
    y = x + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4)
    if not _in_range(y, x_lo, x_hi):
        return 0.0, 0.0, 0.0, False
    k5 = _phi_cache(y, edges, c0, c1, c2, c3)
    y = x + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5)
    if not _in_range(y, x_lo, x_hi):
        return 0.0, 0.0, 0.0, False
    k6 = _phi_cache(y, edges, c0, c1, c2, c3)
    x5 = x + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
    if not _in_range(x5, x_lo, x_hi):
        return 0.0, 0.0, 0.0, False
    k7 = _phi_cache(x5, edges, c0, c1, c2, c3)
    err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
    return x5, err, k7, True


@nb.njit(cache=True)
def _flow(x, dt, edges, c0, c1, c2, c3, bps, x_lo, x_hi, rtol, atol, x_floor):
    """Integrate dx/dt = phi(x) over dt; returns (x_end, status, n_clamped)."""
    nclamp = 0
    if dt <= 0.0:
        return x, OK, nclamp
    if not _in_range(x, x_lo, x_hi):
        return x, (BELOW_CACHE if x < x_lo else ABOVE_CACHE), nclamp
    t = 0.0
    k1 = _phi_cache(x, edges, c0, c1, c2, c3)
    # initial step from the local decay timescale; the controller adapts fast
    h = dt
    if k1 < 0.0:
        guess = 0.05 * x / (-k1)
        if guess < h:
            h = guess
    while t < dt:
        if h > dt - t:
            h = dt - t
        x5, err, k7, ok = _dp_step(x, k1, h, edges, c0, c1, c2, c3, x_lo, x_hi)
        if not ok:
            # stage escaped the cache: almost always an oversized trial step
            h *= 0.25
            if h < 1e-14 * (t + 1.0):
                if x < 4.0 * x_lo:
                    return x, BELOW_CACHE, nclamp
                if x > 0.25 * x_hi:
                    return x, ABOVE_CACHE, nclamp
                return x, STEP_UNDERFLOW, nclamp
            continue
        sc = atol + rtol * max(abs(x), abs(x5))
        e = abs(err) / sc
        if e > 1.0:
            fac = 0.9 * e ** -0.2
            if fac < 0.2:
                fac = 0.2
            h *= fac
            if h < 1e-14 * (t + 1.0):
                return x, STEP_UNDERFLOW, nclamp
            continue
        # locate the largest kink strictly below the step's start state
        bp = -1.0
        for i in range(bps.shape[0] - 1, -1, -1):
            if bps[i] < x:
                bp = bps[i]
                break
        if bp > 0.0 and x5 < bp:
            # crossing step: bisect h until the state lands on the kink,
            # then restart just below it on the adjacent piece
            lo_h = 0.0
            hi_h = h
            hm_good = h
            xm_good = x5
            for _ in range(200):
                hm = 0.5 * (lo_h + hi_h)
                xm, _, _, ok = _dp_step(x, k1, hm, edges, c0, c1, c2, c3,
                                        x_lo, x_hi)
                if not ok:
                    hi_h = hm
                    continue
                if xm > bp:
                    lo_h = hm
                else:
                    hi_h = hm
                hm_good = hm
                xm_good = xm
                if abs(xm - bp) <= 1e-12 * max(1.0, bp):
                    break
                if hi_h - lo_h <= 1e-16 * h:
                    break
            t += hm_good
            below = np.nextafter(bp, 0.0)
            x = xm_good if xm_good < below else below
            if x < x_floor:
                x = x_floor
                nclamp += 1
            if not _in_range(x, x_lo, x_hi):
                return x, (BELOW_CACHE if x < x_lo else ABOVE_CACHE), nclamp
            k1 = _phi_cache(x, edges, c0, c1, c2, c3)
            continue
        t += h
        x = x5
        if x < x_floor:
            x = x_floor
            nclamp += 1
            k1 = _phi_cache(x, edges, c0, c1, c2, c3)
        else:
            k1 = k7
        if e > 1e-300:
            fac = 0.9 * e ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
            h *= fac
        else:
            h *= 5.0
    return x, OK, nclamp


@nb.njit(cache=True, parallel=True)
def _ensemble(x0, horizon, offsets, ev_times, ev_sizes,
              edges, c0, c1, c2, c3, bps, x_lo, x_hi, rtol, atol, x_floor,
              out_x, out_status, out_clamp):
    """Terminal states for all paths; bailed paths keep a nonzero status."""
    n = offsets.shape[0] - 1
    for p in nb.prange(n):
        x = x0
        tprev = 0.0
        st = OK
        ncl = 0
        for i in range(offsets[p], offsets[p + 1]):
            x, s1, c = _flow(x, ev_times[i] - tprev, edges, c0, c1, c2, c3,
                             bps, x_lo, x_hi, rtol, atol, x_floor)
            ncl += c
            if s1 != OK:
                st = s1
                break
            x += ev_sizes[i]
            tprev = ev_times[i]
            if x > x_hi:
                st = ABOVE_CACHE
                break
        if st == OK:
            x, st, c = _flow(x, horizon - tprev, edges, c0, c1, c2, c3,
                             bps, x_lo, x_hi, rtol, atol, x_floor)
            ncl += c
        out_x[p] = x
        out_status[p] = st
        out_clamp[p] = ncl
