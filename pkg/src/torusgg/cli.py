"""Command-line front door: predictions, simulations, verification, exact volumes.

Exit codes: 0 success / all checks pass, 1 check failure or aborted run,
2 configuration or usage error.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from . import asymptotics as asym
from . import functionals as fn
from . import harness
from .config import ConfigError, load_config
from .euler_regime import RegimeInput, regime_report
from .graphs import format_graph, parse_graph
from .torus import WindowSpec
from .verify import CheckConfigError, run_checks


def _emit(payload):
    print(json.dumps(payload, indent=2, sort_keys=True))


def _rational(fr) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def cmd_predict(args) -> int:
    functional = fn.parse_functional(args.functional)
    if isinstance(functional, fn.MultiFunctional):
        functional = fn.diagonal_functional(functional)
    window = WindowSpec(d=args.d, b=args.b, lam=args.lam)
    profile = asym.support_profile(functional)
    scaling = asym.rho(profile, window)
    t = args.t
    t_prime = args.t_prime if args.t_prime is not None else t
    if t > t_prime:
        raise ValueError(f"--t {t} must not exceed --t-prime {t_prime}")
    K = args.K if args.K is not None else scaling.value
    limit = asym.poisson_intensity(profile, K, t)
    _emit({
        "functional": args.functional,
        "k0": profile.k0,
        "v_max": _rational(profile.v_max),
        "A_m": [format_graph(g) for g in profile.a_max_family],
        "sum_a": profile.sum_a,
        "sum_a2": profile.sum_a2,
        "rho": scaling.value,
        "log_rho": scaling.log,
        "rho_root": scaling.root,
        "t": t,
        "t_prime": t_prime,
        "mean": asym.predicted_mean(profile, scaling.value, t),
        "cov": asym.predicted_cov(profile, scaling.value, t, t_prime,
                                  args.convention),
        "convention": args.convention,
        "poisson_rate": limit.rates[0] if limit.rates else 0.0,
        "poisson_total_mean": limit.total_mean,
        "time_change": asym.brownian_time_change(profile, t),
    })
    return 0


def cmd_simulate(args) -> int:
    spec = load_config(args.config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        result = harness.run_replications(spec.experiment)
    except RuntimeError as err:
        print(f"simulation aborted: {err}", file=sys.stderr)
        return 1

    raw_path = out_dir / "raw.csv"
    with open(raw_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replication", "t", "value"])
        for row_idx, rep in enumerate(result.indices):
            for c, t in enumerate(spec.experiment.t_grid):
                writer.writerow([rep, repr(t), repr(float(result.values[row_idx, c]))])

    functional = spec.experiment.functional()
    profile = rho_value = None
    try:
        f_add = (fn.diagonal_functional(functional)
                 if isinstance(functional, fn.MultiFunctional) else functional)
        profile = asym.support_profile(f_add)
        rho_value = asym.rho(profile, spec.experiment.window).value
    except ValueError:
        pass  # functionals without support up to k_cap still simulate fine
    report = {
        "schema_version": 1,
        "experiment": {
            "functional": spec.experiment.functional_spec,
            "d": spec.experiment.window.d,
            "b": spec.experiment.window.b,
            "lambda": spec.experiment.window.lam,
            "t_grid": list(spec.experiment.t_grid),
            "replications": spec.experiment.replications,
            "master_seed": spec.experiment.master_seed,
            "convention": spec.experiment.convention,
        },
        "failures": [{"replication": r, "error": msg} for r, msg in result.failures],
    }
    is_multi = isinstance(functional, fn.MultiFunctional)
    if result.values.shape[0] >= 30 and not is_multi:
        report["moments"] = harness.summarize(result, spec.experiment,
                                              profile, rho_value)
        if profile is not None and len(spec.experiment.t_grid) >= 3:
            report["fclt"] = harness.fclt_check(result, spec.experiment, profile)
        if rho_value is not None and len(spec.experiment.t_grid) >= 2:
            report["chentsov"] = harness.chentsov_diagnostic(
                result, spec.experiment, rho_value)
    if profile is not None:
        report["rho"] = rho_value
        report["k0"] = profile.k0
        report["v_max"] = _rational(profile.v_max)
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True))
    print(raw_path)
    print(report_path)
    return 0


def cmd_verify(args) -> int:
    spec = load_config(args.config)
    report = run_checks(spec)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "verify.json").write_text(
            json.dumps(report, indent=2, sort_keys=True, default=str))
    _emit(report)
    return 0 if report["pass"] else 1


def cmd_vexact(args) -> int:
    g = parse_graph(args.graph)
    vol = asym.v_exact(g)
    _emit({"graph": format_graph(g), "v": _rational(vol),
           "v_float": float(vol)})
    return 0


def cmd_euler_regime(args) -> int:
    inp = RegimeInput(d=args.d, t=args.t, delta=args.delta,
                      epsilon=args.epsilon, k=args.k)
    _emit(regime_report(inp))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusgg",
        description="Sparse wrapped-metric random geometric graphs: simulation, "
                    "exact limit predictions, and statistical verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="limit-theory predictions for a functional")
    p.add_argument("--functional", required=True,
                   help="functional spec, e.g. subgraph:0-1 or betti:q=1")
    p.add_argument("--d", type=int, required=True, help="dimension")
    p.add_argument("--b", type=float, required=True, help="window side length")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="intensity parameter (process intensity is lambda^d)")
    p.add_argument("--t", type=float, default=1.0, help="threshold in (0, 1]")
    p.add_argument("--t-prime", type=float, default=None,
                   help="second threshold for the covariance (default: t)")
    p.add_argument("--K", type=float, default=None,
                   help="Poisson limit constant (default: rho)")
    p.add_argument("--convention", choices=list(asym.CONVENTIONS),
                   default="poisson_consistent",
                   help="covariance constant convention")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", help="run a config file, write raw CSV + report JSON")
    p.add_argument("config", help="experiment config file")
    p.add_argument("--out-dir", default="out", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the checks named in a config file")
    p.add_argument("config", help="experiment config file with [check:*] sections")
    p.add_argument("--out-dir", default=None, help="optional report directory")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("vexact", help="exact constraint-polytope volume of a graph")
    p.add_argument("graph", help="graph string, e.g. 0-1,1-2,2-0")
    p.set_defaults(func=cmd_vexact)

    p = sub.add_parser("euler-regime", help="face-count regime bounds and chi approximation")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_euler_regime)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return 2 if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (ConfigError, CheckConfigError, ValueError, OverflowError,
            FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
