"""Aggregated verification suites over one catenoid specification.

Each suite checks one family of identities at its contract tolerance and
reports its worst residual; full_report runs them all and aggregates an
overall pass flag.  Residual normalizations are scale-aware so the same
battery passes for any (n, phi0).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import geometry, simons, spectrum
from .errors import NonConvergenceError
from .profile import CatenoidSpec, build_profile, chart_for, \
    eval_at_arclength, make_spec


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_residual: float | None   # None when the suite never produced one
    tolerance: float
    wall_time: float
    non_convergence: bool = False
    note: str = ""


@dataclass(frozen=True)
class VerificationReport:
    n: int
    phi0: float
    suites: tuple[SuiteResult, ...]
    overall_passed: bool


def _suite_profile(spec: CatenoidSpec, tol, seed: int):
    profile = build_profile(spec, r_max=10.0 * spec.phi0, tol=1e-9,
                            num_points=2001)
    one = 1.0 + profile.dphi_ds ** 2
    first_integral = np.abs(
        profile.dphi_ds ** 2 - (spec.a * profile.phi ** (2 * (spec.n - 1)) - 1.0))
    ode = np.abs(profile.d2phi_ds2 * profile.phi - (spec.n - 1) * one)
    worst = max(float(np.max(first_integral / one)),
                float(np.max(ode / ((spec.n - 1) * one))))
    unit = make_spec(spec.n, 1.0)
    worst = max(worst, abs(spec.S - spec.phi0 * unit.S) / spec.S)
    p_pos = eval_at_arclength(profile, 1.5 * spec.phi0)
    p_neg = eval_at_arclength(profile, -1.5 * spec.phi0)
    if p_pos.phi != p_neg.phi or p_pos.s != -p_neg.s:
        worst = max(worst, 1.0)
    return worst, 1e-9


def _suite_curvature(spec: CatenoidSpec, tol, seed: int):
    rng = np.random.default_rng(seed)
    rs = rng.uniform(-8.0 * spec.phi0, 8.0 * spec.phi0, size=1000)
    _, lam_rad, lam_sph, normA2 = geometry.curvature_table(spec, rs)
    closed = spec.n * (spec.n - 1) * spec.phi0 ** (2 * (spec.n - 1)) \
        * chart_for(spec, 8.0 * spec.phi0).phi_at(rs) ** (-2 * spec.n)
    worst = max(
        float(np.max(np.abs(lam_rad + (spec.n - 1) * lam_sph)
                     / np.sqrt(normA2))),
        float(np.max(np.abs(normA2 - closed) / closed)))
    # shape tensor trace identities at a few points
    profile = build_profile(spec, r_max=8.0 * spec.phi0, num_points=257)
    for r in np.linspace(-6.0 * spec.phi0, 6.0 * spec.phi0, 13):
        T = geometry.shape_tensor(spec, eval_at_arclength(profile, float(r)))
        scale = max(float(np.max(np.abs(T.h3))), 1e-300)
        worst = max(worst,
                    abs(float(np.sum(T.h_diag))) / np.sqrt(float(T.h_diag @ T.h_diag)),
                    float(np.max(np.abs(np.einsum("iik->k", T.h3)))) / scale)
    return worst, 1e-10


def _suite_simons_equality(spec: CatenoidSpec, tol, seed: int):
    rs = np.linspace(-5.0 * spec.phi0, 5.0 * spec.phi0, 101)
    step = 1e-3 * spec.phi0
    worst = 0.0
    for r in rs:
        check = simons.catenoid_equality_check(spec, float(r), step)
        worst = max(worst, check.rel_residual)
    return worst, 1e-6


def _suite_simons_algebraic(spec: CatenoidSpec, tol, seed: int):
    worst = 0.0
    for T in simons.random_admissible_batch(spec.n, range(seed, seed + 1000)):
        b = simons.breakdown(T)
        if min(b.E1, b.E2, b.E3) < 0.0:
            return 1.0, 1e-12
        worst = max(worst, b.identity_residual / (b.sumH2 + b.gradNormA2))
    return worst, 1e-12


def _suite_catenoid_remainder(spec: CatenoidSpec, tol, seed: int):
    """E1 + E2 + E3 vanishes on catenoid shape tensors."""
    profile = build_profile(spec, r_max=5.0 * spec.phi0, num_points=129)
    worst = 0.0
    for r in np.linspace(-5.0 * spec.phi0, 5.0 * spec.phi0, 41):
        T = geometry.shape_tensor(spec, eval_at_arclength(profile, float(r)))
        b = simons.breakdown(T)
        a4 = float(T.h_diag @ T.h_diag) ** 2
        worst = max(worst, (b.E1 + b.E2 + b.E3) / a4)
    return worst, 1e-10


def _suite_jacobi(spec: CatenoidSpec, tol, seed: int):
    rs = np.linspace(-5.0 * spec.phi0, 5.0 * spec.phi0, 101)
    worst = 0.0
    for kind in spectrum.JACOBI_KINDS:
        resid, scale = spectrum.jacobi_residual(spec, kind, rs)
        worst = max(worst, resid / scale)
    return worst, 1e-7


def _suite_index(spec: CatenoidSpec, tol, seed: int):
    eig_tol = 1e-8 if tol is None else tol
    R = 8.0 * spec.phi0
    slack = 1e-6 / spec.phi0 ** 2
    report0 = spectrum.morse_index(spec, 0.0, R, l_max=6, tol=eig_tol,
                                   slack=slack)
    report2n = spectrum.morse_index(spec, 2.0 / spec.n, R, l_max=6,
                                    tol=eig_tol, slack=slack)
    problem = spectrum.SpectralProblem(spec=spec, delta=0.0, half_width_R=R,
                                       mode_l=0)
    pair = spectrum.eigenvalues(problem, k=2, tol=eig_tol)
    ok = (report0.total_index == 1 and report2n.total_index == 0
          and pair.eigenvalues[0] < 0.0 and pair.eigenvalues[1] >= -slack)
    return (0.0 if ok else 1.0), 0.5


def _suite_decay(spec: CatenoidSpec, tol, seed: int):
    values = [geometry.decay_functional(spec, R * spec.phi0)
              for R in (10.0, 100.0, 1000.0)]
    ok = values[0] > values[1] > values[2] > 0.0
    worst = 0.0 if ok else 1.0
    if spec.n == 3:
        closed = 8.0 * np.pi * 6 ** (1.0 / 3.0) * spec.phi0 ** (1.0 / 3.0) / 10.0
        worst = max(worst, abs(values[0] - closed) / closed)
    return worst, 1e-8


_SUITES = (
    ("profile_invariants", _suite_profile),
    ("curvature_identities", _suite_curvature),
    ("simons_equality", _suite_simons_equality),
    ("simons_algebraic", _suite_simons_algebraic),
    ("catenoid_remainder", _suite_catenoid_remainder),
    ("jacobi_fields", _suite_jacobi),
    ("morse_index", _suite_index),
    ("decay_functional", _suite_decay),
)


def _run_suite(name: str, fn, spec: CatenoidSpec, tol, seed: int) -> SuiteResult:
    start = time.perf_counter()
    try:
        worst, tolerance = fn(spec, tol, seed)
    except NonConvergenceError as exc:
        return SuiteResult(name=name, passed=False, max_residual=None,
                           tolerance=0.0,
                           wall_time=time.perf_counter() - start,
                           non_convergence=True, note=str(exc))
    return SuiteResult(name=name, passed=bool(worst <= tolerance),
                       max_residual=float(worst), tolerance=float(tolerance),
                       wall_time=time.perf_counter() - start)


def full_report(spec: CatenoidSpec, tol: float | None = None, seed: int = 1,
                threads: int = 1) -> VerificationReport:
    """Run every verification suite; individual failures do not abort."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_suite, name, fn, spec, tol, seed)
                       for name, fn in _SUITES]
            results = tuple(f.result() for f in futures)
    else:
        results = tuple(_run_suite(name, fn, spec, tol, seed)
                        for name, fn in _SUITES)
    return VerificationReport(n=spec.n, phi0=spec.phi0, suites=results,
                              overall_passed=all(s.passed for s in results))
