"""Command line front end, driven in process through cli.main().

A cheap single-segment target with exponential jumps keeps each sampling
invocation under a couple of seconds while still exercising the full
artifact pipeline.
"""

import json
import os

import pytest

from llmc.cli import main
from llmc.config import default_config


SAMPLE_ARTIFACTS = ("run_config.json", "samples.csv", "histogram.csv",
                    "report.txt", "report.kv", "figure.svg")


def tiny_config(**sim_overrides):
    sim = {"x0": 1.0, "T": 3.0, "n_paths": 40, "master_seed": 77}
    sim.update(sim_overrides)
    return {
        "target": {"segments": [
            {"lower": 0.0, "upper": "inf", "form": "exp_decay", "rate": 1.0}],
            "name": "exp1"},
        "jump": {"family": "exponential", "rate": 2.0},
        "drift": {"exact_tol": 1e-7, "cache_nodes_per_decade": 16,
                  "x_max": 200.0},
        "sim": sim,
        "output": {"bins": 16},
    }


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def read_all(outdir, names):
    return {n: (outdir / n).read_bytes() for n in names}


@pytest.fixture(scope="module")
def sample_run(tmp_path_factory):
    """One completed `sample` invocation shared by the artifact tests."""
    tmp = tmp_path_factory.mktemp("cli_sample")
    cfg = write_config(tmp, tiny_config())
    out = tmp / "out"
    code = main(["sample", "--config", cfg, "--out", str(out)])
    return code, cfg, out


# -- defaults and usage -------------------------------------------------------

def test_print_defaults_round_trips(capsys):
    assert main(["--print-defaults"]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed == default_config()


def test_no_command_is_usage_error(capsys):
    assert main([]) == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["resample"])
    assert exc.value.code == 2


def test_sample_requires_config():
    with pytest.raises(SystemExit) as exc:
        main(["sample"])
    assert exc.value.code == 2


def test_example_rejects_id_5():
    with pytest.raises(SystemExit) as exc:
        main(["example", "5"])
    assert exc.value.code == 2


# -- sample -------------------------------------------------------------------

def test_sample_writes_all_artifacts(sample_run):
    code, _, out = sample_run
    assert code == 0
    for name in SAMPLE_ARTIFACTS:
        assert (out / name).is_file(), name


def test_sample_artifact_contents(sample_run):
    _, _, out = sample_run
    lines = (out / "samples.csv").read_text().splitlines()
    assert lines[0] == "path_index,terminal"
    assert len(lines) == 41
    assert all(float(ln.split(",")[1]) > 0 for ln in lines[1:])

    hist = (out / "histogram.csv").read_text().splitlines()
    assert hist[0] == "bin_left,bin_right,count,density"
    assert sum(int(ln.split(",")[2]) for ln in hist[1:]) == 40

    echoed = json.loads((out / "run_config.json").read_text())
    assert echoed["sim"]["n_paths"] == 40
    assert echoed["jump"] == {"family": "exponential", "rate": 2.0}
    assert echoed["target"]["segments"][0]["upper"] == "inf"

    svg = (out / "figure.svg").read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert "</svg>" in svg

    kv = (out / "report.kv").read_text()
    assert any(ln.startswith("ks_distance=") for ln in kv.splitlines())


def test_sample_rerun_is_byte_identical(sample_run, tmp_path):
    _, cfg, out = sample_run
    out2 = tmp_path / "out2"
    assert main(["sample", "--config", cfg, "--out", str(out2)]) == 0
    first = read_all(out, SAMPLE_ARTIFACTS)
    second = read_all(out2, SAMPLE_ARTIFACTS)
    assert first == second


def test_rebuild_from_echoed_config_matches(sample_run, tmp_path):
    # the echoed config is a complete record: feeding it back reproduces
    # the samples byte for byte
    _, _, out = sample_run
    cfg2 = tmp_path / "echo.json"
    cfg2.write_bytes((out / "run_config.json").read_bytes())
    out2 = tmp_path / "out_echo"
    assert main(["sample", "--config", str(cfg2), "--out", str(out2)]) == 0
    assert (out2 / "samples.csv").read_bytes() == \
        (out / "samples.csv").read_bytes()


def test_seed_flag_overrides_config(sample_run, tmp_path):
    _, cfg, out = sample_run
    out2 = tmp_path / "out_seeded"
    assert main(["sample", "--config", cfg, "--out", str(out2),
                 "--seed", "1234"]) == 0
    echoed = json.loads((out2 / "run_config.json").read_text())
    assert echoed["sim"]["master_seed"] == 1234
    assert (out2 / "samples.csv").read_bytes() != \
        (out / "samples.csv").read_bytes()


def test_seed_flag_range_checked(sample_run, tmp_path, capsys):
    _, cfg, _ = sample_run
    assert main(["sample", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--seed", str(2 ** 64)]) == 1
    assert "64 bits" in capsys.readouterr().err


def test_workers_flag_does_not_change_output(sample_run, tmp_path):
    _, cfg, out = sample_run
    out2 = tmp_path / "out_w2"
    assert main(["sample", "--config", cfg, "--out", str(out2),
                 "--workers", "2"]) == 0
    assert (out2 / "samples.csv").read_bytes() == \
        (out / "samples.csv").read_bytes()


def test_invalid_config_exits_1_without_artifacts(tmp_path, capsys):
    cfg = write_config(tmp_path, tiny_config(n_paths=0))
    out = tmp_path / "out"
    assert main(["sample", "--config", cfg, "--out", str(out)]) == 1
    assert "n_paths" in capsys.readouterr().err
    assert not out.exists()


def test_unreadable_config_exits_1(tmp_path, capsys):
    out = tmp_path / "out"
    missing = str(tmp_path / "nope.json")
    assert main(["sample", "--config", missing, "--out", str(out)]) == 1
    assert not out.exists()

    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["sample", "--config", str(bad), "--out", str(out)]) == 1
    assert not out.exists()


# -- check --------------------------------------------------------------------

def check_config(alpha):
    return {"target": {"builtin": "f3"},
            "jump": {"family": "lomax", "alpha": alpha}}


def test_check_lomax_f3_passes_by_tail_index(tmp_path, capsys):
    cfg = write_config(tmp_path, check_config(1.0))
    out = tmp_path / "out"
    assert main(["check", "--config", cfg, "--out", str(out)]) == 0
    kv = dict(ln.split("=", 1) for ln in
              (out / "report.kv").read_text().splitlines())
    assert kv["condition_x_hazard_to_inf"] == "fail"
    assert kv["route_subexponential"] == "fail"
    assert kv["route_rv"] == "pass"
    assert kv["overall"] == "pass"
    assert "overall: pass" in capsys.readouterr().out
    assert (out / "report.txt").read_text().strip()


def test_check_borderline_index_exits_3(tmp_path):
    # tail indices too close to call either way
    cfg = write_config(tmp_path, check_config(1.95))
    out = tmp_path / "out"
    assert main(["check", "--config", cfg, "--out", str(out)]) == 3
    kv = dict(ln.split("=", 1) for ln in
              (out / "report.kv").read_text().splitlines())
    assert kv["overall"] == "inconclusive"


def test_check_exponential_jumps_fail(tmp_path):
    cfg = write_config(tmp_path, {"target": {"builtin": "f3"},
                                  "jump": {"family": "exponential",
                                           "rate": 1.0}})
    out = tmp_path / "out"
    assert main(["check", "--config", cfg, "--out", str(out)]) == 1
    kv = dict(ln.split("=", 1) for ln in
              (out / "report.kv").read_text().splitlines())
    assert kv["overall"] == "fail"


# -- truncation ---------------------------------------------------------------

def test_truncation_writes_decreasing_table(tmp_path):
    data = tiny_config(n_paths=12)
    data["jump"] = {"family": "exponential", "rate": 1.0}
    cfg = write_config(tmp_path, data)
    out = tmp_path / "out"
    assert main(["truncation", "--config", cfg, "--levels", "2,8,64",
                 "--out", str(out)]) == 0
    lines = (out / "truncation.csv").read_text().splitlines()
    assert lines[0] == "level,sup_distance,mean_distance"
    rows = [ln.split(",") for ln in lines[1:]]
    assert [int(r[0]) for r in rows] == [2, 8, 64]
    sups = [float(r[1]) for r in rows]
    means = [float(r[2]) for r in rows]
    # every path has jumps below 1/2, few below 1/64: the lifted copies
    # drift apart less and less as the floor 1/n shrinks
    assert sups[0] > sups[1] > sups[2] > 0.0
    assert all(m <= s for s, m in zip(sups, means))
    assert (out / "run_config.json").is_file()


def test_truncation_levels_validated(tmp_path, capsys):
    cfg = write_config(tmp_path, tiny_config())
    out = tmp_path / "out"
    assert main(["truncation", "--config", cfg, "--levels", "2,oops",
                 "--out", str(out)]) == 1
    assert main(["truncation", "--config", cfg, "--levels", ",",
                 "--out", str(out)]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["truncation", "--config", cfg, "--out", str(out)])
    assert exc.value.code == 2
