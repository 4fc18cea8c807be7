"""Batch command line front end.

Commands: sample (run a config), example (built-in presets 1-4 with heavy
or exponential noise), check (jump-vs-target condition report), truncation
(coupled jump-truncation distance table).

Exit codes: 0 success; 1 invalid config or failed run; 2 usage errors;
3 from `check` when no route is decidable (inconclusive verdicts).
Artifacts are only written after the config has validated and the
computation finished, never on failure.
"""

import argparse
import json
import os
import sys

from . import diagnostics as dg
from . import svg as svgmod
from .config import ConfigError, config_from_dict, default_config, \
    load_config
from .jumps import GridSpec, check_conditions, INCONCLUSIVE, PASS
from .sampler import simulate_coupled_truncation, simulate_ensemble

__all__ = ["main"]

# presets: target and matched heavy-tailed jump law per example id
_EXAMPLE_JUMPS = {
    1: {"family": "weibull", "alpha": 0.5, "beta": 1.0},
    2: {"family": "lognormal", "m": 0.0, "sigma": 2.0},
    3: {"family": "lomax", "alpha": 1.0},
    4: {"family": "lomax", "alpha": 1.0},
}
# rate 2 keeps the light-noise runs clear of the u=20 tail marker at T=15
_EXPONENTIAL_BASELINE = {"family": "exponential", "rate": 2.0}


def _add_common(p, config_required=True):
    if config_required:
        p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--out", default="llmc_out", help="output directory")
    p.add_argument("--seed", type=int, default=None,
                   help="override sim.master_seed")
    p.add_argument("--workers", type=int, default=None,
                   help="compute threads (results do not depend on this)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="llmc",
        description="heavy-tailed sampling via jump-driven Langevin paths")
    parser.add_argument("--print-defaults", action="store_true",
                        help="print the default config as JSON and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("sample", help="run a sampling job from a config")
    _add_common(p)

    p = sub.add_parser("example", help="run a built-in example preset")
    p.add_argument("id", type=int, choices=(1, 2, 3, 4),
                   help="example number")
    p.add_argument("--noise", choices=("heavy", "exponential"),
                   default="heavy", help="jump law: matched heavy tail or "
                   "exponential baseline")
    _add_common(p, config_required=False)

    p = sub.add_parser("check", help="verify jump-law conditions for a pair")
    _add_common(p)

    p = sub.add_parser("truncation", help="coupled truncation distance table")
    p.add_argument("--levels", required=True,
                   help="comma-separated increasing truncation levels n")
    _add_common(p)
    return parser


def _apply_seed(rc, seed):
    if seed is not None:
        if not 0 <= seed < 2 ** 64:
            raise ConfigError("--seed must fit in 64 bits")
        rc.sim["master_seed"] = seed
    return rc


def _run_sampling(rc, outdir, workers):
    target = rc.build_target()
    jump = rc.build_jump()
    cfg = rc.build_sim()
    fld = rc.build_field(target, jump)
    sset = simulate_ensemble(fld, cfg, workers=workers)
    report = dg.run_diagnostics(
        sset.terminals, target, jump=jump, fld=fld,
        bins=rc.output["bins"], log_scale=rc.output["log_scale"])

    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "run_config.json"), "w",
              encoding="utf-8", newline="\n") as fh:
        fh.write(rc.echo_json())
    sset.to_csv(os.path.join(outdir, "samples.csv"))
    report.hist.to_csv(os.path.join(outdir, "histogram.csv"))
    with open(os.path.join(outdir, "report.txt"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(report.to_text())
    with open(os.path.join(outdir, "report.kv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(report.to_kv())
    if rc.output["svg"]:
        fig = svgmod.render_figure(
            report.hist, target.pdf,
            f"{target.name} target, {len(sset)} samples")
        with open(os.path.join(outdir, "figure.svg"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(fig)
    if rc.output["paths"] and sset.skeletons:
        with open(os.path.join(outdir, "skeleton.csv"), "w",
                  encoding="utf-8", newline="\n") as fh:
            fh.write("path_index,t,x\n")
            for p, (ts, xs) in enumerate(sset.skeletons):
                for t, x in zip(ts, xs):
                    fh.write(f"{p},{t:.17g},{x:.17g}\n")
    print(f"wrote {outdir}: {len(sset)} samples, "
          f"ks={report.ks:.4g}, clamps={sset.n_clamped}")
    return 0


def _cmd_sample(args):
    rc = _apply_seed(load_config(args.config), args.seed)
    return _run_sampling(rc, args.out, args.workers)


def _cmd_example(args):
    data = default_config()
    data["target"] = {"builtin": f"f{args.id}"}
    data["jump"] = dict(_EXAMPLE_JUMPS[args.id] if args.noise == "heavy"
                        else _EXPONENTIAL_BASELINE)
    rc = _apply_seed(config_from_dict(data), args.seed)
    return _run_sampling(rc, args.out, args.workers)


def _cmd_check(args):
    rc = load_config(args.config)
    target = rc.build_target()
    jump = rc.build_jump()
    report = check_conditions(jump, target, GridSpec())

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "report.txt"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(report.to_text())
    d = report.to_dict()
    lines = [f"jump={d['jump']}", f"target={d['target']}"]
    for name, verdict in d["verdicts"].items():
        lines.append(f"condition_{name}={verdict}")
    lines += [f"route_subexponential={d['subexponential_route']}",
              f"route_rv={d['rv_route']}", f"overall={d['overall']}"]
    with open(os.path.join(args.out, "report.kv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    print(f"overall: {d['overall']} "
          f"(subexponential {d['subexponential_route']}, "
          f"regular-variation {d['rv_route']})")
    if report.overall == PASS:
        return 0
    if report.overall == INCONCLUSIVE:
        return 3
    return 1


def _cmd_truncation(args):
    try:
        levels = [int(s) for s in args.levels.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"--levels must be integers, got {args.levels!r}")
    if not levels:
        raise ConfigError("--levels must name at least one level")
    rc = _apply_seed(load_config(args.config), args.seed)
    target = rc.build_target()
    jump = rc.build_jump()
    cfg = rc.build_sim()
    fld = rc.build_field(target, jump)
    table = simulate_coupled_truncation(fld, cfg, levels)

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "run_config.json"), "w",
              encoding="utf-8", newline="\n") as fh:
        fh.write(rc.echo_json())
    with open(os.path.join(args.out, "truncation.csv"), "w",
              encoding="utf-8", newline="\n") as fh:
        fh.write("level,sup_distance,mean_distance\n")
        for n, sup, mean in table:
            fh.write(f"{n},{sup:.17g},{mean:.17g}\n")
    for n, sup, mean in table:
        print(f"n={n}: sup {sup:.6g} mean {mean:.6g}")
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.print_defaults:
        print(json.dumps(default_config(), indent=2, sort_keys=True))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    handler = {"sample": _cmd_sample, "example": _cmd_example,
               "check": _cmd_check, "truncation": _cmd_truncation}
    try:
        return handler[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
