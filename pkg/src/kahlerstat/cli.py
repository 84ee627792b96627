"""Command line front end: reproducible CSV/JSON tables for every module.

Exit codes: 0 success, 2 usage error, 3 domain or resource error,
4 convergence failure. Data go to stdout (or --out), errors to stderr.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, ResourceError, SaturationError
from .export import to_csv, to_json
from .geometry import Region2D, volume_area_integral, volume_boundary_integral
from .oscillator import (OscillatorSystem, classical_partition, ground_energy,
                         mc_partition_oracle, partition_ratio, quantum_partition)
from .particles import Statistics
from .planar import relative_field, relative_hessian, small_r_metric_coefficient
from .sphere import is_saturated, nparticle_volume
from .statmech import (ThermoState, classical_thermo, classical_thermo_exact,
                       double_limit_sweep)
from .vortex import VortexParams, solve_radial_vortex, statistics_parameter, vortex_volume

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4


class UsageError(Exception):
    pass


def _statistics(args):
    try:
        return Statistics.parse(args.statistics, args.nu)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def cmd_metric(args):
    stats = _statistics(args)
    if args.r_min < 0 or args.r_max < args.r_min or args.samples < 0:
        raise UsageError("need 0 <= --r-min <= --r-max and --samples >= 0")
    r = np.linspace(args.r_min, args.r_max, args.samples)
    m = relative_hessian(r * r, stats) if r.size else r
    rows = list(zip(r, args.hbar * m, 2.0 * args.hbar * m))
    extra = {"small_r_coefficient": small_r_metric_coefficient(stats, args.hbar)}
    return ["r", "f_imag", "metric"], rows, extra


def _volume_disk(args, stats):
    if args.n != 2:
        raise DomainError("disk volumes are two-particle relative-coordinate volumes (--n 2)")
    if args.radius is None or args.radius <= 0:
        raise UsageError("--radius > 0 is required for --geometry disk")
    field = relative_field(stats, args.hbar)
    region = Region2D.disk(args.radius, relative=True)
    area = volume_area_integral(field, region)
    boundary = volume_boundary_integral(field, region)
    R2 = args.radius ** 2
    return [
        ("area_integral", area.value),
        ("area_error", area.error),
        ("boundary_integral", boundary.value),
        ("boundary_error", boundary.error),
        ("large_R_formula", 0.5 * args.hbar * (math.pi * R2 - 2.0 * math.pi * stats.nu)),
    ]


def _volume_sphere(args, stats):
    if args.j is None:
        raise UsageError("--j is required for --geometry sphere")
    h = 2.0 * math.pi * args.hbar
    A = 2.0 * args.j * h
    saturated = is_saturated(A, args.n, stats.nu, h)
    try:
        value = nparticle_volume(A, args.n, stats.nu, h)
    except SaturationError as exc:
        if args.allow_saturation:
            value, saturated = exc.value, True
        else:
            raise
    return [("A", A), ("volume", value), ("volume_over_h^N", value / h ** args.n),
            ("saturated", saturated)]


def _volume_vortex(args):
    if args.mu is None:
        raise UsageError("--mu is required for --geometry vortex")
    h = 2.0 * math.pi * args.hbar
    if args.area is not None:
        A = args.area
    elif args.j is not None:
        A = 2.0 * args.j * h
    else:
        raise UsageError("--area or --j is required for --geometry vortex")
    alpha, g = statistics_parameter(args.mu, h)
    value = vortex_volume(A, args.n, args.mu, h)
    return [("A", A), ("g", g), ("alpha", alpha), ("volume", value),
            ("sphere_volume_same_g", nparticle_volume(A, args.n, g, h)),
            ("saturated", is_saturated(A, args.n, g, h))]


def cmd_volume(args):
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.geometry == "vortex":
        rows = _volume_vortex(args)
    else:
        stats = _statistics(args)
        rows = _volume_disk(args, stats) if args.geometry == "disk" else _volume_sphere(args, stats)
    return ["quantity", "value"], rows, None


def cmd_thermo(args):
    if args.area is None:
        raise UsageError("--area is required")
    h = 2.0 * math.pi * args.hbar
    state = ThermoState(N=args.n, A=args.area, alpha=args.alpha, beta=args.beta,
                        E=args.energy, h=h)
    res = classical_thermo_exact(state) if args.exact else classical_thermo(state)
    rows = [("rho", state.rho), ("alpha_rho", state.packing), ("F", res.F), ("S", res.S),
            ("P", res.P), ("betaP", res.betaP), ("log_Z", res.log_Z)]
    return ["quantity", "value"], rows, None


def cmd_limit_sweep(args):
    if args.alpha is None or args.rho is None:
        raise UsageError("--alpha and --rho are required")
    if args.steps < 1 or args.h0 <= 0:
        raise UsageError("need --steps >= 1 and --h0 > 0")
    hs = args.h0 / 2.0 ** np.arange(args.steps)
    res = double_limit_sweep(args.alpha, args.rho, hs, A=args.area or 1.0)
    return list(res.columns), res.rows(), None


def cmd_vortex(args):
    p = VortexParams(mu=args.mu if args.mu is not None else 1.0 / (4.0 * math.pi),
                     N=args.n, r_max=args.r_max, points=args.points)
    prof = solve_radial_vortex(p)
    if args.profile:
        return ["r", "rho", "B"], list(zip(prof.r, prof.rho, prof.B)), None
    alpha, g = statistics_parameter(p.mu, 2.0 * math.pi * args.hbar)
    rows = [("flux", prof.flux), ("flux_over_2piN", prof.flux / (2 * math.pi * p.N)),
            ("energy", prof.energy), ("energy_over_Npi", prof.energy / (math.pi * p.N)),
            ("core_exponent", prof.core_exponent()),
            ("constraint_residual", prof.constraint_residual()),
            ("newton_iterations", len(prof.history)), ("g", g), ("alpha", alpha)]
    return ["quantity", "value"], rows, None


def cmd_oscillator(args):
    osc = OscillatorSystem(N=args.n, nu=args.nu or 0.0, omega_c=args.omega_c,
                           omega_0=args.omega_0, beta=args.beta, hbar=args.hbar)
    rows = [("omega_t", osc.omega_t), ("omega", osc.omega), ("x", osc.x),
            ("ground_energy", ground_energy(osc)),
            ("Z_classical", classical_partition(osc)),
            ("Z_quantum", quantum_partition(osc)), ("ratio", partition_ratio(osc))]
    if args.mc:
        mc = mc_partition_oracle(osc, samples=args.mc, seed=args.seed)
        rows += [("Z_mc", mc.estimate), ("Z_mc_stderr", mc.stderr), ("mc_samples", mc.samples)]
    return ["quantity", "value"], rows, None


COMMANDS = {
    "metric": cmd_metric,
    "volume": cmd_volume,
    "thermo": cmd_thermo,
    "limit-sweep": cmd_limit_sweep,
    "vortex": cmd_vortex,
    "oscillator": cmd_oscillator,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default="-", help="output file, '-' for stdout")

    parser = argparse.ArgumentParser(prog="kahlerstat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", parents=[common], help="two-body symplectic form and metric")
    p.add_argument("--statistics", default="boson")
    p.add_argument("--nu", type=float)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=5.0)
    p.add_argument("--samples", type=int, default=51)

    p = sub.add_parser("volume", parents=[common], help="phase-space volumes")
    p.add_argument("--geometry", choices=("disk", "sphere", "vortex"), default="disk")
    p.add_argument("--statistics", default="boson")
    p.add_argument("--nu", type=float)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--radius", type=float)
    p.add_argument("--j", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--area", type=float)
    p.add_argument("--allow-saturation", action="store_true",
                   help="report an over-filled volume as 0 instead of failing")

    p = sub.add_parser("thermo", parents=[common], help="classical thermodynamics")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--area", type=float)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--energy", type=float, default=0.0)
    p.add_argument("--exact", action="store_true", help="keep N-1 (exact volume)")

    p = sub.add_parser("limit-sweep", parents=[common], help="classical double limit sweep")
    p.add_argument("--alpha", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--h0", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--area", type=float)

    p = sub.add_parser("vortex", parents=[common], help="self-dual vortex profile")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--mu", type=float)
    p.add_argument("--r-max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--profile", action="store_true", help="emit r, rho, B rows")

    p = sub.add_parser("oscillator", parents=[common], help="oscillator partition functions")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--nu", type=float)
    p.add_argument("--omega-c", type=float, default=0.0)
    p.add_argument("--omega-0", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--mc", type=int, default=0, help="Monte Carlo samples (0 = off)")
    return parser


def run(argv=None):
    """Parse and execute; returns (exit code, output text, output path)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {"command": args.command}
    config.update({k: v for k, v in sorted(vars(args).items()) if k != "command"})
    try:
        columns, rows, extra = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, ResourceError) as exc:
        print(f"kahlerstat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN, "", args.out
    except ConvergenceError as exc:
        print(f"kahlerstat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE, "", args.out
    if extra:
        config.update(extra)
    if args.format == "json":
        text = to_json(columns, rows, config)
    else:
        text = to_csv(columns, rows, config)
    return 0, text, args.out


def main(argv=None):
    try:
        code, text, out = run(argv)
    except SystemExit as exc:
        return exc.code
    if code == 0:
        if out == "-":
            sys.stdout.write(text)
        else:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
