"""Command-line front end.

Exit codes: 0 success, 1 numerical failure (or failed invariants for
``verify``), 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import FORMAT_VERSION, __version__
from .bounds import covariance_h2_bounds, gramian_trace_bounds
from .design import P1Config, P2Config, p1_solve, p2_objective, p2_solve
from .errors import InfeasibleMu, NumericError, UnstableStep, ValidationError
from .graph import degrees
from .h2 import h2_norm_squared, h2_report
from .network import Network
from .operators import Mode, ScaleWeightPair, edge_system
from .sim import SimConfig, simulate_edge_system, simulate_node_system, write_trajectory_csv
from .specfile import load, to_spec
from .verify import run_network, run_random_suite


def _parse_tree(text: str | None):
    if not text:
        return None
    pairs = []
    for item in text.split(","):
        try:
            u, v = item.strip().split("-")
            pairs.append((int(u), int(v)))
        except ValueError as exc:
            raise ValidationError(f"bad tree edge {item!r}; expected form 'u-v'") from exc
    return pairs


def _header(command: str, net: Network | None, seed=None) -> dict:
    out = {"tool": "h2consensus", "version": __version__, "format_version": FORMAT_VERSION, "command": command}
    if seed is not None:
        out["seed"] = seed
    if net is not None:
        out["input"] = to_spec(net)
    return out


def _tree_listing(real) -> dict:
    return {
        "tree_edges": [list(e) for e in real.ordering.tree_edges],
        "cycle_edges": [list(e) for e in real.ordering.cycle_edges],
    }


def cmd_analyze(args) -> dict:
    net = load(args.spec)
    real = net.realize(_parse_tree(args.tree))
    so, sv = net.noise.sigma_omega, net.noise.sigma_v
    report = _header("analyze", net)
    report["spanning_tree"] = _tree_listing(real)
    report["mode"] = args.mode
    h2 = h2_report(real.inc, real.cb, real.sw, so, sv)
    report["h2"] = h2.as_dict()
    report["h2"]["h2_squared"] = h2.h2_sigma_squared if args.mode == "sigma" else h2.h2_sigma_hat_squared
    if not real.noise.separable:
        report["h2_lyapunov"] = {
            m.value: h2_norm_squared(edge_system(real.inc, real.cb, real.sw, real.noise, m)) for m in Mode
        }
    return report


def cmd_bounds(args) -> dict:
    net = load(args.spec)
    real = net.realize(_parse_tree(args.tree))
    report = _header("bounds", net)
    report["spanning_tree"] = _tree_listing(real)
    report["mode"] = args.mode
    sys_ = edge_system(real.inc, real.cb, real.sw, real.noise, args.mode)
    report["gramian_trace_bounds"] = gramian_trace_bounds(sys_).as_dict()
    report["covariance_bounds"] = covariance_h2_bounds(
        real.inc, real.cb, real.sw, real.noise.omega(real.sw), real.noise.gamma(real.sw), args.mode
    ).as_dict()
    return report


def _assignment(net: Network, sol) -> list[dict]:
    deg = degrees(net.graph)
    return [
        {"node": i + 1, "degree": int(deg[i]), "epsilon": float(e), "constraint": tag.value}
        for i, (e, tag) in enumerate(zip(sol.epsilon, sol.active_constraints))
    ]


def cmd_design(args) -> dict:
    net = load(args.spec)
    real = net.realize()
    so, sv = net.noise.sigma_omega, net.noise.sigma_v
    report = _header("design", net)
    report["problem"] = args.problem
    if args.problem == "p1":
        if args.mu is None:
            raise ValidationError("p1 requires --mu")
        cfg = P1Config(eps_min=args.eps_min, eps_max=args.eps_max, mu=args.mu)
        sol = p1_solve(net.graph, real.sw, cfg, real.ordering)
        report["parameters"] = {"mu": cfg.mu, "eps_min": cfg.eps_min, "eps_max": cfg.eps_max}
        after = ScaleWeightPair(sol.epsilon, real.sw.weights)
        report["h2_before"] = h2_report(real.inc, real.cb, real.sw, so, sv).as_dict()
        report["h2_after"] = h2_report(real.inc, real.cb, after, so, sv).as_dict()
    else:
        cfg = P2Config(h=args.h, r=args.r, eps_min=args.eps_min, eps_max=args.eps_max)
        sol = p2_solve(net.graph, cfg)
        report["parameters"] = {"h": cfg.h, "r": cfg.r, "eps_min": cfg.eps_min, "eps_max": cfg.eps_max}
        report["objective_matrix_route"] = p2_objective(net.graph, real.inc, real.cb, sol.epsilon, cfg)
    report["objective"] = sol.objective
    report["assignment"] = _assignment(net, sol)
    return report


def cmd_simulate(args) -> dict:
    net = load(args.spec)
    real = net.realize(_parse_tree(args.tree))
    cfg = SimConfig(
        dt=args.dt,
        horizon=args.horizon,
        burn_in=args.burn_in,
        trials=args.trials,
        seed=args.seed,
        method=args.method,
        stride=args.stride if args.dump_csv else 0,
    )
    sys_ = edge_system(real.inc, real.cb, real.sw, real.noise, args.mode)
    if args.node_level:
        res = simulate_node_system(real.inc, real.cb, real.sw, real.noise, cfg, args.mode)
    else:
        res = simulate_edge_system(sys_, cfg)
    analytic = h2_norm_squared(sys_)
    report = _header("simulate", net, seed=cfg.seed)
    report["mode"] = args.mode
    report["config"] = {
        "dt": cfg.dt,
        "horizon": cfg.horizon,
        "burn_in": cfg.burn_in,
        "trials": cfg.trials,
        "method": cfg.method,
        "node_level": bool(args.node_level),
    }
    z = (res.h2_squared_estimate - analytic) / res.standard_error if res.standard_error > 0 else 0.0
    report["simulation"] = {
        "h2_squared_estimate": res.h2_squared_estimate,
        "standard_error": res.standard_error,
        "per_trial": res.per_trial,
        "h2_squared_analytic": analytic,
        "z_score": z,
    }
    if args.dump_csv:
        write_trajectory_csv(res, args.dump_csv)
        report["simulation"]["csv"] = str(args.dump_csv)
    return report


def cmd_verify(args) -> dict:
    if args.random is not None:
        n, count, seed = args.random
        battery = run_random_suite(n=n, count=count, seed=seed, p=args.edge_prob, tree_only=args.tree_only)
        report = _header("verify", None, seed=seed)
        report["suite"] = {"n": n, "count": count, "edge_prob": args.edge_prob, "tree_only": args.tree_only}
    else:
        if args.spec is None:
            raise ValidationError("verify needs a spec path or --random N COUNT SEED")
        net = load(args.spec)
        battery = run_network(net, seed=args.seed)
        report = _header("verify", net, seed=args.seed)
    for line in battery.lines():
        print(line, file=sys.stderr)
    report["invariants"] = battery.as_list()
    report["passed"] = battery.passed
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="h2consensus", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"h2consensus {__version__} (format {FORMAT_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_required=True):
        if spec_required:
            p.add_argument("spec", type=Path, help="network spec JSON")
        p.add_argument("--out", type=Path, help="write the report here instead of stdout")

    def mode_tree(p):
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.SIGMA.value)
        p.add_argument("--tree", help="spanning tree override, e.g. '1-2,2-3'")

    p = sub.add_parser("analyze", help="H2 norms, separated terms, cycle terms, K ratio")
    common(p)
    mode_tree(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", help="eigenvalue brackets on the squared H2 norm")
    common(p)
    mode_tree(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("design", help="time-scale design (p1: budgeted, p2: regularized)")
    common(p)
    p.add_argument("problem", choices=["p1", "p2"])
    p.add_argument("--mu", type=float)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--r", type=float, default=1)
    p.add_argument("--eps-min", type=float, default=0.01)
    p.add_argument("--eps-max", type=float, default=2.0)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the squared H2 norm")
    common(p)
    mode_tree(p)
    defaults = SimConfig()
    p.add_argument("--dt", type=float, default=defaults.dt)
    p.add_argument("--horizon", type=float, default=defaults.horizon)
    p.add_argument("--burn-in", type=float, default=defaults.burn_in)
    p.add_argument("--trials", type=int, default=defaults.trials)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--method", choices=["euler", "exact"], default=defaults.method)
    p.add_argument("--dump-csv", type=Path)
    p.add_argument("--stride", type=int, default=100, help="CSV sampling stride in steps")
    p.add_argument("--node-level", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the invariant battery")
    common(p, spec_required=False)
    p.add_argument("spec", type=Path, nargs="?")
    p.add_argument("--random", type=int, nargs=3, metavar=("N", "COUNT", "SEED"))
    p.add_argument("--edge-prob", type=float, default=0.15)
    p.add_argument("--tree-only", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="seed for random covariances and trees")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
        text = json.dumps(report, indent=2, allow_nan=False) + "\n"
    except InfeasibleMu as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"feasible mu range: [0, {exc.mu_max:g}]", file=sys.stderr)
        return 2
    except UnstableStep as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"maximal stable dt: {exc.dt_max:.6g}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # json refuses NaN/Inf
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and not report["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
