"""Mode-reduced spectra of the stability operator L = Lap + (1-delta)|A|^2.

Separating a degree-l sphere harmonic turns L f = -lambda f on the
rotationally symmetric hypersurface into the one-dimensional Dirichlet
problem

    u'' + (n-1)(phi_r/phi) u' + q(r) u = -lambda u,
    q(r) = (1-delta) |A|^2(r) - l(l+n-2) / phi(r)^2,

whose self-adjoint form  -(w u')' - w q u = lambda w u  with weight
w = phi^(n-1) is discretized by flux-conserving second-order differences
on a uniform arclength grid and symmetrized to a tridiagonal matrix.
Eigenvalues come from Sturm bisection with Richardson refinement (grid
doubling); the sign convention makes lambda > 0 the stable directions, so
the Morse index is the count of negative eigenvalues over all modes
weighted by the sphere-harmonic multiplicities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import NonConvergenceError
from .geometry import norm_A2_closed
from .profile import CatenoidSpec, chart_for
from .tridiag import count_below, eigenvalue_by_index, inverse_iteration, \
    smallest_eigenvalues

JACOBI_KINDS = ("vertical_translation", "horizontal_translation",
                "dilation", "two_n_stability")

DEFAULT_SLACK = 1e-6


@dataclass(frozen=True)
class SpectralProblem:
    """A mode-reduced Dirichlet eigenvalue problem on an arclength interval.

    two_sided problems live on (-R, R); one_sided problems on (r0, R)
    with r0 >= 0, the half-domain that is a graph over a hyperplane.
    """

    spec: CatenoidSpec
    delta: float
    half_width_R: float
    mode_l: int
    grid_N: int = 2048
    domain_kind: str = "two_sided"
    r0: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.delta <= 1.0):
            raise ValueError("delta must lie in [0, 1]")
        if not (self.half_width_R > 0.0):
            raise ValueError("half_width_R must be positive")
        if self.mode_l < 0:
            raise ValueError("mode_l must be nonnegative")
        if self.grid_N < 16:
            raise ValueError("grid_N must be at least 16")
        if self.domain_kind not in ("two_sided", "one_sided"):
            raise ValueError(f"unknown domain_kind {self.domain_kind!r}")
        if self.domain_kind == "one_sided":
            if not (0.0 <= self.r0 < self.half_width_R):
                raise ValueError("one_sided problems need 0 <= r0 < R")

    @property
    def interval(self) -> tuple[float, float]:
        if self.domain_kind == "one_sided":
            return (self.r0, self.half_width_R)
        return (-self.half_width_R, self.half_width_R)


@dataclass(frozen=True)
class Spectrum:
    """Converged eigenvalues (ascending) with optional eigenfunctions.

    eigenvalues are Richardson extrapolated; raw_eigenvalues are the plain
    grid values at grid_N (the eigenfunction samples, when present, pair
    with the raw values).
    """

    eigenvalues: np.ndarray
    grid_step: float
    grid_N: int
    raw_eigenvalues: np.ndarray | None = None
    r_grid: np.ndarray | None = None
    eigenfunctions: np.ndarray | None = None


@dataclass(frozen=True)
class ModeCount:
    mode_l: int
    negative_count: int
    multiplicity: int


@dataclass(frozen=True)
class IndexReport:
    """Negative-direction counts per sphere mode and the weighted total."""

    delta: float
    R: float
    per_mode: tuple[ModeCount, ...]
    total_index: int
    slack: float


@dataclass(frozen=True)
class JacobiField:
    """Value of a geometric zero mode with its mode number and delta."""

    value: float
    mode_l: int
    delta: float


def sphere_mode_multiplicity(n: int, l: int) -> int:
    """Dimension of degree-l spherical harmonics on S^(n-1)."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l < 2:
        return 1 if l == 0 else n
    return math.comb(n - 1 + l, l) - math.comb(n - 3 + l, l - 2)


def reduced_potential(spec: CatenoidSpec, delta: float, l: int,
                      r: float | np.ndarray):
    """q(r) = (1-delta)|A|^2(r) - l(l+n-2)/phi(r)^2 for the degree-l mode."""
    if not (0.0 <= delta <= 1.0):
        raise ValueError("delta must lie in [0, 1]")
    if l < 0:
        raise ValueError("l must be nonnegative")
    n, phi0 = spec.n, spec.phi0
    r_arr = np.asarray(r, dtype=float)
    chart = chart_for(spec, float(np.max(np.abs(r_arr))) if r_arr.size else 1.0)
    phi = chart.phi_at(r_arr)
    a2 = n * (n - 1) * phi0 ** (2 * (n - 1)) * np.asarray(phi) ** (-2 * n)
    q = (1.0 - delta) * a2 - l * (l + n - 2) / np.asarray(phi) ** 2
    return q if r_arr.ndim else float(q)


@lru_cache(maxsize=24)
def _geometry_arrays(n: int, phi0: float, lo: float, hi: float, N: int):
    """Weight and potential ingredients on the uniform interior grid."""
    spec = CatenoidSpec(n=n, phi0=phi0, a=phi0 ** (-2 * (n - 1)), S=math.nan)
    chart = chart_for(spec, max(abs(lo), abs(hi)) + 1.0)
    h = (hi - lo) / (N + 1)
    r = lo + h * np.arange(1, N + 1)
    r_mid = lo + h * (np.arange(0, N + 1) + 0.5)
    phi = np.asarray(chart.phi_at(r))
    phi_mid = np.asarray(chart.phi_at(r_mid))
    w = phi ** (n - 1)
    w_mid = phi_mid ** (n - 1)
    a2 = n * (n - 1) * phi0 ** (2 * (n - 1)) * phi ** (-2 * n)
    inv_phi2 = phi ** (-2.0)
    for arr in (r, w, w_mid, a2, inv_phi2):
        arr.setflags(write=False)
    return r, w, w_mid, a2, inv_phi2, h


def _assemble(problem: SpectralProblem, N: int):
    """Symmetric tridiagonal (d, e) for the problem at resolution N."""
    lo, hi = problem.interval
    spec = problem.spec
    r, w, w_mid, a2, inv_phi2, h = _geometry_arrays(
        spec.n, spec.phi0, lo, hi, N)
    l = problem.mode_l
    q = (1.0 - problem.delta) * a2 - l * (l + spec.n - 2) * inv_phi2
    d = (w_mid[:-1] + w_mid[1:]) / (h * h * w) - q
    e = -w_mid[1:-1] / (h * h * np.sqrt(w[:-1] * w[1:]))
    return d, e, h


def _assemble_generic(w_fn, q_fn, interval, N):
    lo, hi = interval
    h = (hi - lo) / (N + 1)
    r = lo + h * np.arange(1, N + 1)
    r_mid = lo + h * (np.arange(0, N + 1) + 0.5)
    w = np.asarray(w_fn(r), dtype=float)
    w_mid = np.asarray(w_fn(r_mid), dtype=float)
    q = np.asarray(q_fn(r), dtype=float)
    d = (w_mid[:-1] + w_mid[1:]) / (h * h * w) - q
    e = -w_mid[1:-1] / (h * h * np.sqrt(w[:-1] * w[1:]))
    return d, e, h


def _refine(assemble: Callable[[int], tuple], k: int, tol: float,
            grid_N: int, max_grid: int):
    """Grid-doubling Richardson loop on the k smallest eigenvalues.

    The second-order grid bias is removed by extrapolating each pair of
    consecutive grids; the loop stops once successive extrapolated values
    differ by at most tol.  (Raw values cannot be compared against tight
    tolerances: Sturm bisection resolves eigenvalues only to about
    eps * ||T||, and ||T|| grows like h^-2 under refinement, so the raw
    differences plateau while the extrapolated values keep improving.)

    Returns (extrapolated values, final N, d, e, h, raw values at final N).
    """
    N = grid_N
    d, e, h = assemble(N)
    prev = smallest_eigenvalues(d, e, k)
    ext_prev = None
    cur = prev
    while 2 * N <= max_grid:
        N2 = 2 * N
        d, e, h = assemble(N2)
        cur = smallest_eigenvalues(d, e, k)
        ext_cur = (4.0 * cur - prev) / 3.0
        if ext_prev is not None \
                and float(np.max(np.abs(ext_cur - ext_prev))) <= tol:
            return np.sort(ext_cur), N2, d, e, h, cur
        ext_prev, prev, N = ext_cur, cur, N2
    raise NonConvergenceError(
        f"eigenvalues did not settle to tol={tol:g} within grid budget "
        f"{max_grid}", last_estimates=(ext_prev, ext_cur))


def dirichlet_eigenvalues(w_fn, q_fn, interval, k: int, tol: float = 1e-8,
                          grid_N: int = 2048, max_grid: int = 2 ** 20,
                          compute_eigenfunctions: bool = False) -> Spectrum:
    """First k Dirichlet eigenvalues of -(w u')' - w q u = lambda w u.

    Generic driver; the flat case w = 1, q = 0 reproduces (k pi / L)^2 and
    serves as the discretizer oracle.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    assemble = lambda N: _assemble_generic(w_fn, q_fn, interval, N)
    extrap, N, d, e, h, raw = _refine(assemble, k, tol, grid_N, max_grid)
    r_grid = None
    funcs = None
    if compute_eigenfunctions:
        lo, hi = interval
        r_grid = lo + h * np.arange(0, N + 2)
        w = np.asarray(w_fn(r_grid[1:-1]), dtype=float)
        funcs = _eigenfunctions(d, e, raw, w, N)
    return Spectrum(eigenvalues=extrap, grid_step=h, grid_N=N,
                    raw_eigenvalues=raw, r_grid=r_grid, eigenfunctions=funcs)


def _eigenfunctions(d, e, raw_eigenvalues, w, N):
    cols = []
    for j, lam in enumerate(raw_eigenvalues, start=1):
        x = inverse_iteration(d, e, float(lam), mode_hint=j)
        u = x / np.sqrt(w)
        u = u / np.max(np.abs(u))
        cols.append(np.concatenate([[0.0], u, [0.0]]))
    return np.column_stack(cols)


def eigenvalues(problem: SpectralProblem, k: int, tol: float = 1e-8,
                max_grid: int = 2 ** 20,
                compute_eigenfunctions: bool = False) -> Spectrum:
    """First k Dirichlet eigenvalues of the mode-reduced stability operator.

    Positive values are stable directions.  Refines by grid doubling from
    problem.grid_N until consecutive values differ by at most tol, then
    returns the Richardson extrapolation.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    assemble = lambda N: _assemble(problem, N)
    extrap, N, d, e, h, raw = _refine(assemble, k, tol, problem.grid_N,
                                      max_grid)
    r_grid = None
    funcs = None
    if compute_eigenfunctions:
        lo, hi = problem.interval
        r_grid = lo + h * np.arange(0, N + 2)
        spec = problem.spec
        _, w, _, _, _, _ = _geometry_arrays(spec.n, spec.phi0, lo, hi, N)
        funcs = _eigenfunctions(d, e, raw, w, N)
    return Spectrum(eigenvalues=extrap, grid_step=h, grid_N=N,
                    raw_eigenvalues=raw, r_grid=r_grid, eigenfunctions=funcs)


def _mode_positive_analytically(spec: CatenoidSpec, delta: float,
                                l: int) -> bool:
    """q <= 0 everywhere iff l(l+n-2) >= (1-delta) n(n-1).

    |A|^2 phi^2 = n(n-1)(phi0/phi)^(2(n-1)) peaks at the waist with value
    n(n-1), so beyond this mode the potential is nonpositive and the form
    is strictly positive; no computation is needed.
    """
    n = spec.n
    return l * (l + n - 2) >= (1.0 - delta) * n * (n - 1)


def _certified_negative_count(problem: SpectralProblem, slack: float,
                              tol: float, max_grid: int) -> tuple[int, int]:
    """Count eigenvalues below -slack, certified against grid bias.

    Sturm counts at shift -slack on doubling grids; once two consecutive
    grids agree, the two eigenvalues straddling the shift are extracted on
    both grids and Richardson extrapolated to confirm the count (only that
    boundary pair is ever extracted).  A confirmation requires the margin
    from -slack to exceed both tol and twice the extrapolation's own
    uncertainty estimate |lambda(2N) - lambda(N)| / 3.
    """

    def _margin(d_p, e_p, d_c, e_c, index):
        val_p = eigenvalue_by_index(d_p, e_p, index)
        val_c = eigenvalue_by_index(d_c, e_c, index)
        extrap = (4.0 * val_c - val_p) / 3.0
        uncertainty = abs(val_c - val_p) / 3.0
        return extrap, max(tol, 2.0 * uncertainty)

    N = problem.grid_N
    d_prev, e_prev, _ = _assemble(problem, N)
    c_prev = count_below(d_prev, e_prev, -slack)
    c_cur = c_prev
    while 2 * N <= max_grid:
        N2 = 2 * N
        d_cur, e_cur, _ = _assemble(problem, N2)
        c_cur = count_below(d_cur, e_cur, -slack)
        if c_cur == c_prev:
            c = c_cur
            above, guard = _margin(d_prev, e_prev, d_cur, e_cur, c + 1)
            ok = above + slack > guard
            if ok and c > 0:
                below, guard = _margin(d_prev, e_prev, d_cur, e_cur, c)
                ok = -slack - below > guard
            if ok:
                return c, N2
        c_prev, d_prev, e_prev, N = c_cur, d_cur, e_cur, N2
    raise NonConvergenceError(
        f"negative count for mode l={problem.mode_l} did not certify within "
        f"grid budget {max_grid}", last_estimates=(c_prev, c_cur))


def morse_index(spec: CatenoidSpec, delta: float, R: float, l_max: int,
                tol: float = 1e-8, slack: float = DEFAULT_SLACK,
                grid_N: int = 2048, max_grid: int = 2 ** 20) -> IndexReport:
    """Morse index of the stability operator on (-R, R) x sphere.

    Counts negative Dirichlet eigenvalues per sphere mode (eigenvalues
    below -slack, certified by Richardson-extrapolated boundary
    eigenvalues) and weights by the mode multiplicities.  l_max must be
    large enough that the mode-l_max potential is everywhere nonpositive.
    """
    if l_max < 1:
        raise ValueError("l_max must be at least 1")
    if not (0.0 <= delta <= 1.0):
        raise ValueError("delta must lie in [0, 1]")
    if not (R > 0.0):
        raise ValueError("R must be positive")
    if not _mode_positive_analytically(spec, delta, l_max):
        needed = (1.0 - delta) * spec.n * (spec.n - 1)
        raise ValueError(
            f"l_max={l_max} is too small: need l_max(l_max+n-2) >= {needed:g} "
            "so that the highest mode potential is nonpositive")
    rows = []
    total = 0
    for l in range(l_max + 1):
        mult = sphere_mode_multiplicity(spec.n, l)
        if _mode_positive_analytically(spec, delta, l):
            count = 0
        else:
            problem = SpectralProblem(spec=spec, delta=delta,
                                      half_width_R=R, mode_l=l,
                                      grid_N=grid_N)
            count, _ = _certified_negative_count(problem, slack, tol, max_grid)
        rows.append(ModeCount(mode_l=l, negative_count=count,
                              multiplicity=mult))
        total += count * mult
    return IndexReport(delta=delta, R=R, per_mode=tuple(rows),
                       total_index=total, slack=slack)


def delta_sweep(spec: CatenoidSpec, R: float, deltas: Sequence[float],
                l_max: int = 6, tol: float = 1e-8,
                slack: float = DEFAULT_SLACK,
                grid_N: int = 2048) -> list[tuple[float, IndexReport]]:
    """Index reports over a sequence of delta values (order preserved)."""
    out = []
    for delta in deltas:
        out.append((float(delta),
                    morse_index(spec, float(delta), R, l_max, tol=tol,
                                slack=slack, grid_N=grid_N)))
    return out


def rayleigh_quotient(problem: SpectralProblem, f_samples) -> float:
    """Quadratic-form quotient of trial data sampled on the problem grid.

    f_samples include both interval endpoints, which must vanish.  The
    gradient term uses the staggered midpoint weight, which reproduces the
    discrete quadratic form exactly, so the value is a true upper bound
    for the lowest discrete eigenvalue.
    """
    f = np.asarray(f_samples, dtype=float)
    if f.ndim != 1 or len(f) < 4:
        raise ValueError("f_samples must be a 1-d array of length >= 4")
    peak = float(np.max(np.abs(f)))
    if peak == 0.0:
        raise ValueError("f_samples must not be identically zero")
    if max(abs(f[0]), abs(f[-1])) > 1e-12 * peak:
        raise ValueError("f_samples must vanish at both interval endpoints")
    N = len(f) - 2
    lo, hi = problem.interval
    spec = problem.spec
    r, w, w_mid, a2, inv_phi2, h = _geometry_arrays(
        spec.n, spec.phi0, lo, hi, N)
    l = problem.mode_l
    q = (1.0 - problem.delta) * a2 - l * (l + spec.n - 2) * inv_phi2
    grad = float(np.sum(w_mid * np.diff(f) ** 2)) / h
    pot = float(np.sum(w * q * f[1:-1] ** 2)) * h
    den = float(np.sum(w * f[1:-1] ** 2)) * h
    if den <= 0.0:
        raise ValueError("trial function has zero weighted norm")
    return (grad - pot) / den


def _jacobi_value(spec: CatenoidSpec, kind: str, r: float | np.ndarray):
    n = spec.n
    r_arr = np.asarray(r, dtype=float)
    chart = chart_for(spec, float(np.max(np.abs(r_arr))) + 1.0 if r_arr.size else 1.0)
    _, s, phi, dphi_ds, _ = chart.fields(r_arr)
    v = np.sqrt(1.0 + np.asarray(dphi_ds) ** 2)
    if kind == "vertical_translation":
        u = -np.asarray(dphi_ds) / v
    elif kind == "horizontal_translation":
        u = 1.0 / v
    elif kind == "dilation":
        u = (np.asarray(phi) - np.asarray(s) * np.asarray(dphi_ds)) / v
    elif kind == "two_n_stability":
        normA = np.sqrt(n * (n - 1)) * spec.phi0 ** (n - 1) \
            * np.asarray(phi) ** (-n)
        u = normA ** ((n - 2.0) / n)
    else:
        raise ValueError(f"unknown Jacobi field kind {kind!r}; "
                         f"expected one of {JACOBI_KINDS}")
    return u if r_arr.ndim else float(u)


def jacobi_field(spec: CatenoidSpec, kind: str, r: float) -> JacobiField:
    """Geometric zero mode of the reduced operator at arclength r.

    vertical/horizontal translations and dilations are the ambient
    symmetries (delta = 0, modes 0/1/0); two_n_stability is the positive
    radial solution |A|^((n-2)/n) annihilated at delta = 2/n.
    """
    value = _jacobi_value(spec, kind, float(r))
    if kind == "horizontal_translation":
        return JacobiField(value=value, mode_l=1, delta=0.0)
    if kind == "two_n_stability":
        return JacobiField(value=value, mode_l=0, delta=2.0 / spec.n)
    if kind in ("vertical_translation", "dilation"):
        return JacobiField(value=value, mode_l=0, delta=0.0)
    raise ValueError(f"unknown Jacobi field kind {kind!r}")


def jacobi_residual(spec: CatenoidSpec, kind: str, rs,
                    fd_step: float | None = None):
    """Max reduced-operator residual of a Jacobi field over sample points.

    Fourth-order finite differences; returns (max_residual, scale) where
    scale = max |A|^2 |u| over the samples, the natural comparison size.
    """
    rs = np.atleast_1d(np.asarray(rs, dtype=float))
    if fd_step is None:
        fd_step = 2e-3 * spec.phi0
    field = jacobi_field(spec, kind, float(rs[0]))
    l, delta = field.mode_l, field.delta
    n = spec.n
    chart = chart_for(spec, float(np.max(np.abs(rs))) + 3.0 * fd_step)
    u = lambda x: np.asarray(_jacobi_value(spec, kind, x))
    u0 = u(rs)
    up2, up1, um1, um2 = u(rs + 2 * fd_step), u(rs + fd_step), \
        u(rs - fd_step), u(rs - 2 * fd_step)
    d1 = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * fd_step)
    d2 = (-up2 + 16 * up1 - 30 * u0 + 16 * um1 - um2) / (12 * fd_step ** 2)
    phi = np.asarray(chart.phi_at(rs))
    rate = np.asarray(chart.dphi_dr_at(rs)) / phi
    a2 = n * (n - 1) * spec.phi0 ** (2 * (n - 1)) * phi ** (-2 * n)
    q = (1.0 - delta) * a2 - l * (l + n - 2) / phi ** 2
    resid = d2 + (n - 1) * rate * d1 + q * u0
    return float(np.max(np.abs(resid))), float(np.max(a2 * np.abs(u0)))
