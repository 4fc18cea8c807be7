"""Run configuration: JSON file in, fully resolved and echoed dict out.

Every run must be reproducible from its echoed config alone, so defaults
are merged in before echoing and no module reads hidden parameters.
Unknown sections or keys are rejected, not ignored: a typo must fail the
run, silently dropping it would change results.
"""

import copy
import json
import math

from .drift import DriftField
from .jumps import make_jump
from .sampler import SimulationConfig
from .targets import Segment, TargetDensity, builtin_target, make_expr

__all__ = ["ConfigError", "RunConfig", "default_config", "config_from_dict",
           "load_config"]


class ConfigError(ValueError):
    """Invalid run configuration; message names the offending field."""


_DEFAULTS = {
    "target": {"builtin": "f3"},
    "jump": {"family": "lomax", "alpha": 1.0},
    "drift": {"exact_tol": 1e-9, "cache_nodes_per_decade": 64, "x_max": 1e6},
    "sim": {
        "x0": 1.0,
        "T": 15.0,
        "n_paths": 30000,
        "master_seed": 20240901,
        "ode_rel_tol": 1e-8,
        "ode_abs_tol": 1e-10,
        "x_floor": 1e-12,
        "record_mode": "terminal",
    },
    "output": {"bins": 60, "log_scale": True, "svg": True, "paths": False},
}

_NUMERIC = {
    "drift": {"exact_tol", "x_max"},
    "sim": {"x0", "T", "ode_rel_tol", "ode_abs_tol", "x_floor"},
}
_INTEGRAL = {
    "drift": {"cache_nodes_per_decade"},
    "sim": {"n_paths", "master_seed"},
    "output": {"bins"},
}
_BOOLEAN = {"output": {"log_scale", "svg", "paths"}}


def default_config():
    """Deep copy of the full default configuration."""
    return copy.deepcopy(_DEFAULTS)


def _check_scalar(section, key, value):
    if key in _BOOLEAN.get(section, ()):
        if not isinstance(value, bool):
            raise ConfigError(f"{section}.{key} must be a boolean")
    elif key in _INTEGRAL.get(section, ()):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{section}.{key} must be an integer")
    elif key in _NUMERIC.get(section, ()):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{section}.{key} must be a number")
    elif not isinstance(value, str):
        raise ConfigError(f"{section}.{key} must be a string")


def _merge_section(section, given):
    base = copy.deepcopy(_DEFAULTS[section])
    if given is None:
        return base
    if not isinstance(given, dict):
        raise ConfigError(f"section {section!r} must be an object")
    if section in ("target", "jump"):
        # free-form: semantic validation happens in the constructors
        return given
    for key, value in given.items():
        if key not in base:
            known = ", ".join(sorted(base))
            raise ConfigError(f"unknown key {section}.{key}; known: {known}")
        _check_scalar(section, key, value)
        base[key] = value
    return base


def _parse_bound(raw, where):
    if raw in ("inf", "Infinity"):
        return math.inf
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(f"{where} must be a number or \"inf\"")
    return float(raw)


class RunConfig:
    """Validated, fully resolved configuration for one run."""

    def __init__(self, target, jump, drift, sim, output):
        self.target = target
        self.jump = jump
        self.drift = drift
        self.sim = sim
        self.output = output

    def echo(self):
        """JSON-serializable dict that reproduces this run exactly."""
        out = {
            "target": copy.deepcopy(self.target),
            "jump": copy.deepcopy(self.jump),
            "drift": dict(self.drift),
            "sim": dict(self.sim),
            "output": dict(self.output),
        }
        for seg in out["target"].get("segments", []):
            if seg.get("upper") == math.inf:
                seg["upper"] = "inf"
        return out

    def echo_json(self):
        return json.dumps(self.echo(), indent=2, sort_keys=True) + "\n"

    # -- builders ------------------------------------------------------------

    def build_target(self):
        spec = self.target
        if "builtin" in spec:
            if set(spec) != {"builtin"}:
                raise ConfigError(
                    "target.builtin cannot be combined with other keys")
            try:
                return builtin_target(spec["builtin"])
            except Exception as exc:
                raise ConfigError(f"target.builtin: {exc}") from exc
        if "segments" not in spec:
            raise ConfigError("target needs either 'builtin' or 'segments'")
        extra = set(spec) - {"segments", "name"}
        if extra:
            raise ConfigError(f"unknown target keys: {sorted(extra)}")
        segments = []
        for i, raw in enumerate(spec["segments"]):
            if not isinstance(raw, dict):
                raise ConfigError(f"target.segments[{i}] must be an object")
            raw = dict(raw)
            try:
                lower = _parse_bound(raw.pop("lower"),
                                     f"target.segments[{i}].lower")
                upper = _parse_bound(raw.pop("upper"),
                                     f"target.segments[{i}].upper")
                form = raw.pop("form")
            except KeyError as exc:
                raise ConfigError(
                    f"target.segments[{i}] misses key {exc}") from None
            try:
                segments.append(Segment(lower, upper, make_expr(form, **raw)))
            except Exception as exc:
                raise ConfigError(f"target.segments[{i}]: {exc}") from exc
        try:
            return TargetDensity(segments, name=spec.get("name", "custom"))
        except Exception as exc:
            raise ConfigError(f"target: {exc}") from exc

    def build_jump(self):
        spec = dict(self.jump)
        family = spec.pop("family", None)
        if family is None:
            raise ConfigError("jump.family is required")
        try:
            return make_jump(family, **spec)
        except Exception as exc:
            raise ConfigError(f"jump: {exc}") from exc

    def build_sim(self):
        s = self.sim
        try:
            return SimulationConfig(
                x0=s["x0"], horizon=s["T"], n_paths=s["n_paths"],
                master_seed=s["master_seed"], ode_rel_tol=s["ode_rel_tol"],
                ode_abs_tol=s["ode_abs_tol"], x_floor=s["x_floor"],
                record_mode=s["record_mode"])
        except ValueError as exc:
            raise ConfigError(f"sim: {exc}") from exc

    def build_field(self, target, jump, validation_probes=None):
        d = self.drift
        kwargs = {}
        if validation_probes is not None:
            kwargs["validation_probes"] = validation_probes
        try:
            return DriftField(target, jump, exact_tol=d["exact_tol"],
                              nodes_per_decade=d["cache_nodes_per_decade"],
                              x_max=d["x_max"], **kwargs)
        except ValueError as exc:
            raise ConfigError(f"drift: {exc}") from exc

    def validate(self):
        """Cheap full validation: constructors for everything but the field."""
        self.build_target()
        self.build_jump()
        self.build_sim()
        d = self.drift
        if not d["exact_tol"] > 0:
            raise ConfigError("drift.exact_tol must be positive")
        if d["cache_nodes_per_decade"] < 4:
            raise ConfigError("drift.cache_nodes_per_decade must be >= 4")
        if not d["x_max"] > 0:
            raise ConfigError("drift.x_max must be positive")
        if self.output["bins"] < 2:
            raise ConfigError("output.bins must be at least 2")
        if self.output["paths"] and self.build_sim().record_mode != "full":
            raise ConfigError(
                "output.paths requires sim.record_mode = \"full\"")
        return self


def config_from_dict(data):
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    unknown = set(data) - set(_DEFAULTS)
    if unknown:
        known = ", ".join(sorted(_DEFAULTS))
        raise ConfigError(
            f"unknown config sections {sorted(unknown)}; known: {known}")
    merged = {name: _merge_section(name, data.get(name)) for name in _DEFAULTS}
    return RunConfig(**merged).validate()


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)
