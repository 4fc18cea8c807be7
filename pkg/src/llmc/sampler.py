"""Simulation of the jump-driven decay process.

A path starts at x0 and alternates deterministic decay along dx/dt = phi(x)
with additive upward jumps at the event times of a rate-1 Poisson clock.
Terminal states at the horizon are the samples.

Randomness protocol: path p owns the counter-based stream keyed by
(master_seed, p) and consumes exactly two uniforms per clock event, in
(gap, size) order, up to and including the first event past the horizon.
The protocol fixes results independently of block sizes, worker counts and
execution order.

Fast paths run in the compiled kernel against the drift cache; any path the
kernel cannot finish inside the cached range (deep decay below the smallest
node, a jump beyond the cached top) is re-simulated here in Python against
exact quadrature.  Which paths bail is itself deterministic, so the split
never affects results.
"""

import math
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels as _k

__all__ = [
    "SimulationConfig",
    "Path",
    "SampleSet",
    "flow",
    "simulate_path",
    "simulate_ensemble",
    "simulate_coupled_truncation",
]

_RECORD_MODES = ("terminal", "full")
# accepted spelling variants for config files
_RECORD_ALIASES = {"terminal-only": "terminal", "full-path": "full"}

_UNIFORM_BLOCK = 64  # uniforms drawn per request while generating events


@dataclass
class SimulationConfig:
    """Run parameters for path simulation.

    ``horizon`` is the SDE clock time T; sampling is by independent terminal
    values at T, not by thinning one long trajectory.
    """

    x0: float = 1.0
    horizon: float = 15.0
    n_paths: int = 1
    master_seed: int = 0
    ode_rel_tol: float = 1e-8
    ode_abs_tol: float = 1e-10
    x_floor: float = 1e-12
    record_mode: str = "terminal"

    def __post_init__(self):
        self.record_mode = _RECORD_ALIASES.get(self.record_mode,
                                               self.record_mode)
        if not self.x0 > 0.0:
            raise ValueError("x0 must be positive")
        if not self.horizon > 0.0:
            raise ValueError("horizon must be positive")
        if int(self.n_paths) < 1:
            raise ValueError("n_paths must be at least 1")
        self.n_paths = int(self.n_paths)
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ValueError("master_seed must fit in 64 bits")
        self.master_seed = int(self.master_seed)
        if not (self.ode_rel_tol > 0.0 and self.ode_abs_tol > 0.0):
            raise ValueError("ODE tolerances must be positive")
        if not 0.0 < self.x_floor < self.x0:
            raise ValueError("x_floor must sit strictly between 0 and x0")
        if self.record_mode not in _RECORD_MODES:
            raise ValueError(
                f"record_mode must be one of {_RECORD_MODES}, "
                f"got {self.record_mode!r}")

    def to_dict(self):
        return {
            "x0": self.x0,
            "T": self.horizon,
            "n_paths": self.n_paths,
            "master_seed": self.master_seed,
            "ode_rel_tol": self.ode_rel_tol,
            "ode_abs_tol": self.ode_abs_tol,
            "x_floor": self.x_floor,
            "record_mode": self.record_mode,
        }


@dataclass
class Path:
    """One realized path: its events, terminal state and optional skeleton."""

    index: int
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    terminal: float
    n_clamped: int = 0
    status: int = 0
    skeleton: tuple = None  # (times, states) when recorded


@dataclass
class SampleSet:
    """Terminal values of an ensemble plus everything needed to rerun it."""

    terminals: np.ndarray
    jump_counts: np.ndarray
    statuses: np.ndarray
    n_clamped: int
    config: dict
    elapsed: float = 0.0
    skeletons: list = dc_field(default_factory=list)

    def __len__(self):
        return self.terminals.size

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("path_index,terminal\n")
            for i, v in enumerate(self.terminals):
                fh.write(f"{i},{v:.17g}\n")


# -- event streams -----------------------------------------------------------

def _draw_events(master_seed, path_index, horizon, jump):
    """Event times in (0, horizon] and their jump sizes for one path."""
    rng = np.random.Generator(np.random.Philox(key=[master_seed, path_index]))
    us = rng.random(_UNIFORM_BLOCK)
    cum = np.cumsum(-np.log1p(-us[0::2]))
    while cum[-1] <= horizon:
        us = np.concatenate([us, rng.random(_UNIFORM_BLOCK)])
        cum = np.cumsum(-np.log1p(-us[0::2]))
    k = int(np.searchsorted(cum, horizon, side="right"))
    times = cum[:k]
    sizes = np.asarray(jump.quantile(us[1::2][:k]), dtype=float)
    return times, sizes


# -- pure-Python stepper (fallback, recording, exact-drift region) -----------

def _flow_py(fld, x, dt, rtol, atol, x_floor, kinks, recorder=None, t0=0.0):
    """Mirror of the compiled stepper against the full field.

    Valid anywhere x > 0: the field falls back to exact quadrature outside
    its cache, so there is no bail status, only step-underflow errors.
    """
    nclamp = 0
    if dt <= 0.0:
        return x, nclamp
    phi = fld.phi_frozen
    t = 0.0
    k1 = phi(x)
    h = dt
    if k1 < 0.0:
        h = min(h, 0.05 * x / (-k1))

    def step(h):
        y = x + h * (_k._A21 * k1)
        if y <= 0.0:
            return None
        k2 = phi(y)
        y = x + h * (_k._A31 * k1 + _k._A32 * k2)
        if y <= 0.0:
            return None
        k3 = phi(y)
        y = x + h * (_k._A41 * k1 + _k._A42 * k2 + _k._A43 * k3)
        if y <= 0.0:
            return None
        k4 = phi(y)
        y = x + h * (_k._A51 * k1 + _k._A52 * k2 + _k._A53 * k3
                     + _k._A54 * k4)
        if y <= 0.0:
            return None
        k5 = phi(y)
        y = x + h * (_k._A61 * k1 + _k._A62 * k2 + _k._A63 * k3
                     + _k._A64 * k4 + _k._A65 * k5)
        if y <= 0.0:
            return None
        k6 = phi(y)
        x5 = x + h * (_k._B1 * k1 + _k._B3 * k3 + _k._B4 * k4
                      + _k._B5 * k5 + _k._B6 * k6)
        if x5 <= 0.0:
            return None
        k7 = phi(x5)
        err = h * (_k._E1 * k1 + _k._E3 * k3 + _k._E4 * k4 + _k._E5 * k5
                   + _k._E6 * k6 + _k._E7 * k7)
        return x5, err, k7

    while t < dt:
        h = min(h, dt - t)
        trial = step(h)
        if trial is None:
            h *= 0.25
            if h < 1e-14 * (t + 1.0):
                raise RuntimeError(
                    f"step size underflow at x={x:g}, t={t0 + t:g}")
            continue
        x5, err, k7 = trial
        sc = atol + rtol * max(abs(x), abs(x5))
        e = abs(err) / sc
        if e > 1.0:
            h *= max(0.2, 0.9 * e ** -0.2)
            if h < 1e-14 * (t + 1.0):
                raise RuntimeError(
                    f"step size underflow at x={x:g}, t={t0 + t:g}")
            continue
        idx = np.searchsorted(kinks, x) - 1  # side='left': kinks[idx] < x
        bp = float(kinks[idx]) if idx >= 0 else -1.0
        if bp > 0.0 and x5 < bp:
            lo_h, hi_h = 0.0, h
            hm_good, xm_good = h, x5
            for _ in range(200):
                hm = 0.5 * (lo_h + hi_h)
                trial = step(hm)
                if trial is None:
                    hi_h = hm
                    continue
                xm = trial[0]
                if xm > bp:
                    lo_h = hm
                else:
                    hi_h = hm
                hm_good, xm_good = hm, xm
                if abs(xm - bp) <= 1e-12 * max(1.0, bp):
                    break
                if hi_h - lo_h <= 1e-16 * h:
                    break
            t += hm_good
            x = min(xm_good, np.nextafter(bp, 0.0))
            if x < x_floor:
                x = x_floor
                nclamp += 1
            if recorder is not None:
                recorder.append((t0 + t, x))
            k1 = phi(x)
            continue
        t += h
        x = x5
        if x < x_floor:
            x = x_floor
            nclamp += 1
            k1 = phi(x)
        else:
            k1 = k7
        if recorder is not None:
            recorder.append((t0 + t, x))
        h *= min(5.0, max(0.2, 0.9 * e ** -0.2)) if e > 1e-300 else 5.0
    return x, nclamp


def flow(fld, x, dt, rtol=1e-8, atol=1e-10, x_floor=1e-12):
    """State after decaying from x for dt time units (dt = 0 returns x)."""
    if not x > 0.0:
        raise ValueError("flow requires a positive state")
    if dt < 0.0:
        raise ValueError("flow requires a nonnegative duration")
    out, _ = _flow_py(fld, float(x), float(dt), rtol, atol, x_floor,
                      fld.kinks)
    return out


def _path_python(fld, cfg, index, times, sizes, record):
    """Whole-path simulation in Python; used for recording and bailouts."""
    kinks = fld.kinks
    recorder = [(0.0, cfg.x0)] if record else None
    x = cfg.x0
    tprev = 0.0
    nclamp = 0
    try:
        for tau, xi in zip(times, sizes):
            x, nc = _flow_py(fld, x, tau - tprev, cfg.ode_rel_tol,
                             cfg.ode_abs_tol, cfg.x_floor, kinks,
                             recorder, tprev)
            nclamp += nc
            x += xi
            tprev = tau
            if recorder is not None:
                recorder.append((tau, x))
        x, nc = _flow_py(fld, x, cfg.horizon - tprev, cfg.ode_rel_tol,
                         cfg.ode_abs_tol, cfg.x_floor, kinks,
                         recorder, tprev)
        nclamp += nc
    except RuntimeError as exc:
        raise RuntimeError(f"path {index}: {exc}") from exc
    skeleton = None
    if record:
        arr = np.array(recorder)
        skeleton = (arr[:, 0], arr[:, 1])
    return x, nclamp, skeleton


# -- ensemble orchestration ---------------------------------------------------

def _set_workers(workers):
    if workers is None:
        return
    import numba
    # capped at the runtime's thread budget; results never depend on this
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(min(max(1, int(workers)), limit))


def _run_kernel(fld, cfg, offsets, times, sizes):
    edges, c0, c1, c2, c3, bps = fld.packed()
    n = offsets.size - 1
    out_x = np.empty(n)
    out_status = np.empty(n, dtype=np.int64)
    out_clamp = np.empty(n, dtype=np.int64)
    _k._ensemble(cfg.x0, cfg.horizon, offsets, times, sizes,
                 edges, c0, c1, c2, c3, bps,
                 math.exp(edges[0]), fld.x_top,
                 cfg.ode_rel_tol, cfg.ode_abs_tol, cfg.x_floor,
                 out_x, out_status, out_clamp)
    return out_x, out_status, out_clamp


def simulate_path(fld, cfg, path_index):
    """One path under the (master_seed, path_index) stream contract."""
    if not 0 <= path_index < cfg.n_paths:
        raise ValueError("path_index out of range for this config")
    times, sizes = _draw_events(cfg.master_seed, path_index, cfg.horizon,
                                fld.jump)
    if cfg.record_mode == "full":
        terminal, nclamp, skeleton = _path_python(fld, cfg, path_index,
                                                  times, sizes, True)
        return Path(path_index, times, sizes, terminal, nclamp, 0, skeleton)
    offsets = np.array([0, times.size], dtype=np.int64)
    out_x, out_status, out_clamp = _run_kernel(fld, cfg, offsets, times, sizes)
    if out_status[0] != _k.OK:
        terminal, nclamp, _ = _path_python(fld, cfg, path_index, times,
                                           sizes, False)
        return Path(path_index, times, sizes, terminal, nclamp,
                    int(out_status[0]))
    return Path(path_index, times, sizes, float(out_x[0]),
                int(out_clamp[0]), 0)


def simulate_ensemble(fld, cfg, workers=None):
    """Terminal samples for all paths of the config.

    Results are a pure function of (field, config): the kernel/fallback
    split, the per-path streams and the output order do not depend on
    worker count.
    """
    t_start = time.perf_counter()
    _set_workers(workers)
    all_times = []
    all_sizes = []
    counts = np.empty(cfg.n_paths, dtype=np.int64)
    for p in range(cfg.n_paths):
        times, sizes = _draw_events(cfg.master_seed, p, cfg.horizon, fld.jump)
        all_times.append(times)
        all_sizes.append(sizes)
        counts[p] = times.size
    offsets = np.zeros(cfg.n_paths + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    flat_times = np.concatenate(all_times) if cfg.n_paths else np.empty(0)
    flat_sizes = np.concatenate(all_sizes)

    skeletons = []
    if cfg.record_mode == "full":
        terminals = np.empty(cfg.n_paths)
        statuses = np.zeros(cfg.n_paths, dtype=np.int64)
        nclamp = 0
        for p in range(cfg.n_paths):
            term, nc, skel = _path_python(fld, cfg, p, all_times[p],
                                          all_sizes[p], True)
            terminals[p] = term
            nclamp += nc
            skeletons.append(skel)
    else:
        terminals, statuses, clamps = _run_kernel(fld, cfg, offsets,
                                                  flat_times, flat_sizes)
        for p in np.nonzero(statuses != _k.OK)[0]:
            term, nc, _ = _path_python(fld, cfg, int(p), all_times[p],
                                       all_sizes[p], False)
            terminals[p] = term
            clamps[p] = nc
        nclamp = int(clamps.sum())

    return SampleSet(terminals=terminals, jump_counts=counts,
                     statuses=statuses, n_clamped=nclamp,
                     config=cfg.to_dict(),
                     elapsed=time.perf_counter() - t_start,
                     skeletons=skeletons)


# -- coupled truncation experiment -------------------------------------------

def _states_on_grid(fld, cfg, times, sizes, eval_times):
    """States at eval_times (post-jump at event times), one path."""
    kinks = fld.kinks
    out = np.empty(eval_times.size)
    x = cfg.x0
    tprev = 0.0
    gi = 0

    def advance(to_t, x):
        xn, _ = _flow_py(fld, x, to_t - tprev, cfg.ode_rel_tol,
                         cfg.ode_abs_tol, cfg.x_floor, kinks)
        return xn

    for tau, xi in zip(times, sizes):
        while gi < eval_times.size and eval_times[gi] < tau:
            x = advance(eval_times[gi], x)
            tprev = eval_times[gi]
            out[gi] = x
            gi += 1
        x = advance(tau, x) + xi
        tprev = tau
        while gi < eval_times.size and eval_times[gi] == tau:
            out[gi] = x
            gi += 1
    while gi < eval_times.size:
        x = advance(eval_times[gi], x)
        tprev = eval_times[gi]
        out[gi] = x
        gi += 1
    return out


def simulate_coupled_truncation(fld, cfg, n_levels, grid_points=513):
    """Sup distance between the process and its jump-truncated versions.

    All processes share each path's event times and raw jump sizes; level n
    replaces every size xi by max(xi, 1/n) and the drift by the matching
    truncated field.  Distances are measured on a dense time grid joined
    with the event times.  Returns a list of rows
    (level, sup_distance, mean_distance) aggregated over paths.
    """
    levels = [int(n) for n in n_levels]
    if not levels:
        raise ValueError("need at least one truncation level")
    if any(n < 1 for n in levels) or any(
            a >= b for a, b in zip(levels, levels[1:])):
        raise ValueError("truncation levels must be increasing positive ints")
    fields = {n: fld.truncated(n) for n in levels}
    base_grid = np.linspace(0.0, cfg.horizon, grid_points)
    sups = {n: [] for n in levels}
    for p in range(cfg.n_paths):
        times, sizes = _draw_events(cfg.master_seed, p, cfg.horizon, fld.jump)
        eval_times = np.union1d(base_grid, times)
        ref = _states_on_grid(fld, cfg, times, sizes, eval_times)
        for n in levels:
            lifted = np.maximum(sizes, 1.0 / n)
            got = _states_on_grid(fields[n], cfg, times, lifted, eval_times)
            sups[n].append(float(np.max(np.abs(got - ref))))
    return [(n, max(sups[n]), sum(sups[n]) / len(sups[n])) for n in levels]
