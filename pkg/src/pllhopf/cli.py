"""Command-line front end.

Subcommands print CSV (to ``--out`` or stdout). Exit codes: 0 success
(including a flagged BLOWUP run), 2 invalid arguments, 3 numerical failure.
"""

import argparse
import csv
import math
import sys

import numpy as np

from .errors import InvalidParams, PllHopfError
from .hopf import points_at, snap_to_curve
from .model import ModelParams, equilibrium
from .normalform import analyze_point, scan_lyapunov
from .sim import HistorySpec, integrate_dde, integrate_reduced

HOPF_COLUMNS = ["branch_id", "mu", "tau", "omega", "re_dlambda", "direction", "residual"]
LYAP_COLUMNS = ["branch_id", "mu", "tau", "omega", "a", "stability", "inconclusive_flag", "note"]


def fmt(x):
    if isinstance(x, (float, np.floating)):
        return "" if math.isnan(x) else format(float(x), ".17g")
    return str(x)


class UsageError(Exception):
    pass


def _positive(name, value):
    if not value > 0:
        raise UsageError(f"{name} must be > 0")


def _params(args, tau=0.0):
    try:
        return ModelParams(K=args.k, mu=getattr(args, "mu", 1.0), tau=tau, N=getattr(args, "N", 2),
                           branch=args.branch, n_index=args.n)
    except InvalidParams as exc:
        raise UsageError(str(exc)) from exc


def _mu_grid(args):
    if args.steps < 0:
        raise UsageError("--steps must be ≥ 0")
    if args.steps and not 0 < args.mu_min <= args.mu_max:
        raise UsageError("need 0 < --mu-min ≤ --mu-max")
    if args.j_max < 0:
        raise UsageError("--j-max must be ≥ 0")
    return np.linspace(args.mu_min, args.mu_max, args.steps)


def _curve_points(args):
    """Hopf points over the mu grid, grouped by (root, j) then mu ascending."""
    if args.k < 1.0:
        raise UsageError("K must be ≥ 1")
    groups = {}
    for mu in _mu_grid(args):
        params = ModelParams(K=args.k, mu=float(mu), branch=args.branch, n_index=args.n)
        for pt in points_at(params, args.j_max):
            groups.setdefault((pt.root, pt.j), []).append(pt)
    return [pt for key in sorted(groups) for pt in groups[key]]


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def cmd_equilibria(args, out):
    eq = equilibrium(_params(args))
    w = _writer(out)
    w.writerow(["branch", "n", "phi", "sin2phi", "cos2phi"])
    w.writerow([args.branch, args.n, fmt(eq.phi), fmt(eq.sin2phi), fmt(eq.cos2phi)])


def cmd_hopf(args, out):
    points = _curve_points(args)
    w = _writer(out)
    w.writerow(HOPF_COLUMNS)
    for pt in points:
        w.writerow([pt.branch_id, fmt(pt.mu), fmt(pt.tau), fmt(pt.omega), fmt(pt.re_dlambda),
                    pt.direction.value, fmt(pt.residual)])


def cmd_lyapunov(args, out):
    points = _curve_points(args)
    template = ModelParams(K=args.k, mu=1.0, branch=args.branch, n_index=args.n)
    w = _writer(out)
    w.writerow(LYAP_COLUMNS)
    for res in scan_lyapunov(points, template):
        if res.error:
            w.writerow([res.point.branch_id, fmt(res.mu), fmt(res.tau), fmt(res.omega),
                        "", "", "", res.error])
        else:
            w.writerow([res.point.branch_id, fmt(res.mu), fmt(res.tau), fmt(res.omega),
                        fmt(res.a), res.stability.value, int(res.inconclusive), ""])


def cmd_simulate(args, out):
    _positive("--t-end", args.t_end)
    if args.every < 1:
        raise UsageError("--every must be ≥ 1")
    params = _params(args, tau=args.tau)
    w = _writer(out)
    if args.mode == "reduced":
        _positive("--max-step", args.max_step)
        pt = snap_to_curve(params)
        if abs(pt.tau - args.tau) > 1e-12:
            print(f"note: tau snapped to Hopf curve {pt.branch_id}: {fmt(pt.tau)}", file=sys.stderr)
        pc = analyze_point(pt, params).cubic
        tr = integrate_reduced(pc, args.y10, args.y20, args.t_end, args.max_step,
                               args.rel_tol, args.abs_tol)
        w.writerow(["t", "y1", "y2"])
        rows = range(0, len(tr.times), args.every)
        for i in rows:
            w.writerow([fmt(tr.times[i]), fmt(tr.states[i, 0]), fmt(tr.states[i, 1])])
    else:
        _positive("--dt", args.dt)
        model = {"network": "full_network"}.get(args.mode, args.mode)
        history = HistorySpec(eps=args.eps)
        if model == "full_network" and args.spread:
            rng = np.random.default_rng(args.seed)
            offsets = args.eps + args.spread * rng.standard_normal(params.N)

            def samples(t, offsets=offsets):
                return np.concatenate([offsets, np.zeros_like(offsets)])
            history = HistorySpec(kind="custom-samples", eps=args.eps, samples=samples)
        tr = integrate_dde(params, model, history, args.dt, args.t_end, every=args.every)
        if model == "full_network":
            n = params.N
            phi = equilibrium(params).phi
            w.writerow(["t"] + [f"phi_{i + 1}" for i in range(n)] + [f"dphi_{i + 1}" for i in range(n)])
            for t, state in zip(tr.times, tr.states):
                w.writerow([fmt(t)] + [fmt(phi + x) for x in state[:n]] + [fmt(v) for v in state[n:]])
        else:
            w.writerow(["t", "x1", "x2"])
            for t, state in zip(tr.times, tr.states):
                w.writerow([fmt(t), fmt(state[0]), fmt(state[1])])
    status = "BLOWUP" if tr.blowup else "OK"
    print(f"{status} t={fmt(tr.t_final)}", file=sys.stderr)


COMMANDS = {
    "equilibria": cmd_equilibria,
    "hopf": cmd_hopf,
    "lyapunov": cmd_lyapunov,
    "simulate": cmd_simulate,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=float, default=1.05, help="coupling gain K (default: %(default)s)")
    common.add_argument("--branch", choices=["plus", "minus"], default="minus",
                        help="equilibrium branch (default: %(default)s)")
    common.add_argument("--n", type=int, default=0, help="equilibrium branch offset n (default: %(default)s)")
    common.add_argument("--out", default="-", help="output CSV path, '-' for stdout (default: %(default)s)")
    common.add_argument("--dump-config", action="store_true",
                        help="print the resolved configuration as key=value lines and exit")

    scan = argparse.ArgumentParser(add_help=False)
    scan.add_argument("--mu-min", type=float, default=0.05, help="(default: %(default)s)")
    scan.add_argument("--mu-max", type=float, default=1.0, help="(default: %(default)s)")
    scan.add_argument("--steps", type=int, default=500, help="mu grid points (default: %(default)s)")
    scan.add_argument("--j-max", type=int, default=2, help="highest delay branch index (default: %(default)s)")

    parser = argparse.ArgumentParser(prog="pllhopf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("equilibria", parents=[common], help="equilibrium phase and its trig values")
    sub.add_parser("hopf", parents=[common, scan], help="Hopf curves in (mu, tau)")
    sub.add_parser("lyapunov", parents=[common, scan], help="first Lyapunov coefficient along Hopf curves")

    sim = sub.add_parser("simulate", parents=[common], help="simulate reduced or delay dynamics")
    sim.add_argument("--mode", choices=["reduced", "fix_truncated", "fix_exact", "network"],
                     default="reduced", help="(default: %(default)s)")
    sim.add_argument("--mu", type=float, default=0.3, help="(default: %(default)s)")
    sim.add_argument("--tau", type=float, default=6.34,
                     help="delay; reduced mode snaps it to the nearest Hopf curve (default: %(default)s)")
    sim.add_argument("--N", type=int, default=2, help="network size (default: %(default)s)")
    sim.add_argument("--t-end", type=float, default=5e4, help="(default: %(default)s)")
    sim.add_argument("--y10", type=float, default=1e-5, help="(default: %(default)s)")
    sim.add_argument("--y20", type=float, default=1e-5, help="(default: %(default)s)")
    sim.add_argument("--max-step", type=float, default=0.05, help="(default: %(default)s)")
    sim.add_argument("--rel-tol", type=float, default=1e-6, help="(default: %(default)s)")
    sim.add_argument("--abs-tol", type=float, default=1e-12, help="(default: %(default)s)")
    sim.add_argument("--dt", type=float, default=0.05,
                     help="delay-model step, reduced to divide tau (default: %(default)s)")
    sim.add_argument("--eps", type=float, default=1e-3, help="history offset (default: %(default)s)")
    sim.add_argument("--spread", type=float, default=0.0,
                     help="network only: random per-node history offsets (default: %(default)s)")
    sim.add_argument("--seed", type=int, default=0, help="(default: %(default)s)")
    sim.add_argument("--every", type=int, default=1, help="write every k-th sample (default: %(default)s)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.dump_config:
        for key, value in sorted(vars(args).items()):
            if key != "dump_config":
                print(f"{key}={fmt(value)}")
        return 0

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.exit(2, f"pllhopf: error: {exc}\n")
    except (PllHopfError, ArithmeticError) as exc:
        parser.exit(3, f"pllhopf: numerical failure: {type(exc).__name__}: {exc}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
