"""Run configuration: defaults, strict merging, echo stability, builders."""

import json
import math

import pytest

from llmc.config import ConfigError, config_from_dict, load_config
from llmc.jumps import Lomax
from llmc.targets import TargetDensity


def test_defaults_round_trip():
    rc = config_from_dict({})
    echo = rc.echo_json()
    again = config_from_dict(json.loads(echo))
    assert again.echo_json() == echo
    d = json.loads(echo)
    assert d["target"] == {"builtin": "f3"}
    assert d["jump"] == {"family": "lomax", "alpha": 1.0}
    assert d["sim"]["T"] == 15.0
    assert d["sim"]["n_paths"] == 30000


def test_unknown_section_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"simulation": {}})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"sim": {"npaths": 10}})
    with pytest.raises(ConfigError):
        config_from_dict({"drift": {"tol": 1e-9}})


def test_type_checking():
    with pytest.raises(ConfigError):
        config_from_dict({"sim": {"n_paths": "many"}})
    with pytest.raises(ConfigError):
        config_from_dict({"sim": {"n_paths": 2.5}})
    with pytest.raises(ConfigError):
        config_from_dict({"output": {"svg": "yes"}})


def test_inf_bound_parsing():
    # the cache extent must stay finite, only segment bounds accept "inf"
    with pytest.raises(ConfigError):
        config_from_dict({"drift": {"x_max": "inf"}})
    rc = config_from_dict({"target": {"segments": [
        {"lower": 0.0, "upper": "inf", "form": "exp_decay", "rate": 1.0}]}})
    rc.build_target()
    echoed = json.loads(rc.echo_json())
    assert echoed["target"]["segments"][0]["upper"] == "inf"


def test_paths_output_needs_full_record():
    cfg = {"output": {"paths": True}}
    with pytest.raises(ConfigError):
        config_from_dict(cfg).validate()
    cfg["sim"] = {"record_mode": "full"}
    config_from_dict(cfg).validate()


def test_build_target_builtin_and_custom():
    rc = config_from_dict({})
    t = rc.build_target()
    assert isinstance(t, TargetDensity)
    assert t.name == "f3"
    custom = config_from_dict({"target": {"segments": [
        {"lower": 0.0, "upper": 4.0, "form": "exp_decay", "rate": 1.0},
        {"lower": 4.0, "upper": "inf", "form": "power",
         "exponent": -2.0, "offset": 0.0},
    ]}})
    t2 = custom.build_target()
    assert t2.cdf(math.inf) == 1.0
    assert len(t2.segments) == 2


def test_build_jump():
    rc = config_from_dict({"jump": {"family": "lomax", "alpha": 1.0}})
    assert isinstance(rc.build_jump(), Lomax)
    with pytest.raises(ConfigError):
        config_from_dict({"jump": {"family": "zeta", "s": 2.0}}).build_jump()


def test_build_sim_maps_horizon():
    rc = config_from_dict({"sim": {"T": 4.5, "n_paths": 7}})
    sim = rc.build_sim()
    assert sim.horizon == 4.5
    assert sim.n_paths == 7


def test_load_config(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"sim": {"master_seed": 99}}))
    rc = load_config(p)
    assert rc.build_sim().master_seed == 99
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
