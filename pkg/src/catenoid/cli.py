"""Command-line front end.

Exit codes: 0 success (and all verifications passed), 1 verification
failure, 2 usage error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import geometry, report, simons, spectrum, tables
from .errors import NonConvergenceError
from .profile import build_profile, make_spec


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=3, help="hypersurface dimension (>= 3)")
    p.add_argument("--phi0", type=float, default=1.0, help="waist radius")


def _add_output_args(p: argparse.ArgumentParser, formats=("json", "csv")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catenoid",
        description="construct higher dimensional catenoids and verify "
                    "their curvature, Simons-identity, and stability "
                    "properties")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="tabulate the profile curve")
    _add_spec_args(p)
    p.add_argument("--r-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_output_args(p, formats=("csv", "json"))

    p = sub.add_parser("geometry", help="tabulate principal curvatures and |A|^2")
    _add_spec_args(p)
    p.add_argument("--r-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=201)
    _add_output_args(p, formats=("csv", "json"))

    p = sub.add_parser("verify-simons", help="algebraic identity battery "
                                             "and catenoid equality check")
    _add_spec_args(p)
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--r-max", type=float, default=5.0)
    p.add_argument("--r-points", type=int, default=41)
    p.add_argument("--fd-step", type=float, default=1e-3)
    _add_output_args(p, formats=("json",))

    p = sub.add_parser("spectrum", help="Dirichlet eigenvalues of the "
                                        "mode-reduced stability operator")
    _add_spec_args(p)
    p.add_argument("--R", type=float, default=8.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--mode", type=int, default=0)
    p.add_argument("--count", type=int, default=2)
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--one-sided", action="store_true")
    p.add_argument("--r0", type=float, default=0.0)
    _add_output_args(p, formats=("json",))

    p = sub.add_parser("index", help="Morse index over sphere modes")
    _add_spec_args(p)
    p.add_argument("--R", type=float, default=8.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--l-max", type=int, default=6)
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--slack", type=float, default=spectrum.DEFAULT_SLACK)
    _add_output_args(p, formats=("json",))

    p = sub.add_parser("decay", help="annular decay functional F(R)")
    _add_spec_args(p)
    p.add_argument("--R", type=float, default=10.0)
    p.add_argument("--tol", type=float, default=1e-10)
    _add_output_args(p, formats=("json", "csv"))

    p = sub.add_parser("report", help="run all verification suites")
    _add_spec_args(p)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    _add_output_args(p, formats=("json",))
    return parser


def _cmd_profile(args) -> int:
    spec = make_spec(args.n, args.phi0)
    profile = build_profile(spec, args.r_max, tol=args.tol,
                            num_points=args.points)
    header = ("r", "s", "phi", "dphi_ds", "d2phi_ds2")
    cols = (profile.r, profile.s, profile.phi, profile.dphi_ds,
            profile.d2phi_ds2)
    if args.format == "csv":
        text = "\n".join(tables.csv_lines(header, zip(*cols))) + "\n"
    else:
        rows = [dict(zip(header, map(float, row))) for row in zip(*cols)]
        text = tables.json_dumps({"spec": {"n": spec.n, "phi0": spec.phi0},
                                  "rows": rows})
    tables.write_text(text, args.output)
    return 0


def _cmd_geometry(args) -> int:
    spec = make_spec(args.n, args.phi0)
    rs = np.linspace(0.0, args.r_max, args.points)
    r, lam_rad, lam_sph, normA2 = geometry.curvature_table(spec, rs)
    header = ("r", "lambda_rad", "lambda_sph", "normA2")
    if args.format == "csv":
        text = "\n".join(tables.csv_lines(header,
                                          zip(r, lam_rad, lam_sph, normA2))) + "\n"
    else:
        rows = [dict(zip(header, map(float, row)))
                for row in zip(r, lam_rad, lam_sph, normA2)]
        text = tables.json_dumps({"spec": {"n": spec.n, "phi0": spec.phi0},
                                  "rows": rows})
    tables.write_text(text, args.output)
    return 0


def _cmd_verify_simons(args) -> int:
    spec = make_spec(args.n, args.phi0)
    worst_alg = 0.0
    seeds = range(args.seed, args.seed + args.instances)
    for T in simons.random_admissible_batch(spec.n, seeds):
        b = simons.breakdown(T)
        worst_alg = max(worst_alg, b.identity_residual
                        / (b.sumH2 + b.gradNormA2))
    rs = np.linspace(-args.r_max * spec.phi0, args.r_max * spec.phi0,
                     args.r_points)
    profile = build_profile(spec, r_max=args.r_max * spec.phi0 + 1.0,
                            num_points=257)
    from .profile import eval_at_arclength
    worst_E = 0.0
    worst_eq = 0.0
    for r in rs:
        T = geometry.shape_tensor(spec, eval_at_arclength(profile, float(r)))
        b = simons.breakdown(T)
        a4 = float(T.h_diag @ T.h_diag) ** 2
        worst_E = max(worst_E, (b.E1 + b.E2 + b.E3) / a4)
        check = simons.catenoid_equality_check(spec, float(r),
                                               args.fd_step * spec.phi0)
        worst_eq = max(worst_eq, check.rel_residual)
    payload = {
        "algebraic": {"instances": args.instances,
                      "max_rel_residual": worst_alg},
        "catenoid": {"n": spec.n, "phi0": spec.phi0,
                     "r_values": [float(r) for r in rs],
                     "max_E_over_A4": worst_E,
                     "max_eq24_residual": worst_eq},
    }
    tables.write_text(tables.json_dumps(payload), args.output)
    ok = worst_alg <= 1e-12 and worst_E <= 1e-10 and worst_eq <= 1e-6
    return 0 if ok else 1


def _cmd_spectrum(args) -> int:
    spec = make_spec(args.n, args.phi0)
    problem = spectrum.SpectralProblem(
        spec=spec, delta=args.delta, half_width_R=args.R, mode_l=args.mode,
        grid_N=args.grid,
        domain_kind="one_sided" if args.one_sided else "two_sided",
        r0=args.r0)
    result = spectrum.eigenvalues(problem, k=args.count, tol=args.tol)
    payload = {
        "problem": {"n": spec.n, "phi0": spec.phi0, "delta": args.delta,
                    "R": args.R, "mode_l": args.mode, "grid_N": args.grid,
                    "domain_kind": problem.domain_kind, "r0": args.r0},
        "eigenvalues": [float(v) for v in result.eigenvalues],
        "grid_step": result.grid_step,
    }
    tables.write_text(tables.json_dumps(payload), args.output)
    return 0


def _cmd_index(args) -> int:
    spec = make_spec(args.n, args.phi0)
    rep = spectrum.morse_index(spec, args.delta, args.R, args.l_max,
                               tol=args.tol, slack=args.slack,
                               grid_N=args.grid)
    tables.write_text(tables.json_dumps(rep), args.output)
    return 0


def _cmd_decay(args) -> int:
    spec = make_spec(args.n, args.phi0)
    value = geometry.decay_functional(spec, args.R, tol=args.tol)
    if args.format == "csv":
        text = "\n".join(tables.csv_lines(("R", "F"), [(args.R, value)])) + "\n"
    else:
        text = tables.json_dumps({"spec": {"n": spec.n, "phi0": spec.phi0},
                                  "R": args.R, "F": value})
    tables.write_text(text, args.output)
    return 0


def _cmd_report(args) -> int:
    spec = make_spec(args.n, args.phi0)
    rep = report.full_report(spec, tol=args.tol, seed=args.seed,
                             threads=args.threads)
    tables.write_text(tables.json_dumps(rep), args.output)
    if any(s.non_convergence for s in rep.suites):
        return 3
    return 0 if rep.overall_passed else 1


_HANDLERS = {
    "profile": _cmd_profile,
    "geometry": _cmd_geometry,
    "verify-simons": _cmd_verify_simons,
    "spectrum": _cmd_spectrum,
    "index": _cmd_index,
    "decay": _cmd_decay,
    "report": _cmd_report,
}


def run(argv) -> int:
    """Parse argv (without the program name) and execute; returns exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _HANDLERS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
