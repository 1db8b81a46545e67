"""Catenoid profile curves in arclength parametrization.

The generating curve phi solves  phi'' * phi = (n-1) * (1 + phi'^2)  with
phi(0) = phi0 > 0, phi'(0) = 0 (primes are derivatives in the axis
coordinate s), and carries the first integral

    phi'^2 = a * phi^(2(n-1)) - 1,      a = phi0^(-2(n-1)).

Everything here is parametrized by the substitution phi = phi0 * (1 + t^2),
which removes the inverse-square-root waist singularity: with

    psi(t) = ((1 + t^2)^(2(n-1)) - 1) / t^2        (smooth, psi(0) = 2(n-1))

one gets exact closed forms

    phi'        = sign(r) * t * sqrt(psi)
    1 + phi'^2  = (1 + t^2)^(2(n-1))
    dr/dt       = 2 phi0 (1 + t^2)^(n-1) / sqrt(psi)
    ds/dt       = 2 phi0 / sqrt(psi)

where r is signed arclength from the waist.  Only the monotone maps r(t)
and s(t) require quadrature; every pointwise field is then exact in t, so
the first-integral and profile-equation identities hold to round-off by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonConvergenceError
from .quadrature import cumulative_table, integrate_doubling, panel_integrals

_CHART_TOL = 1e-13


def _psi(t2: np.ndarray, n: int) -> np.ndarray:
    """((1+t^2)^(2(n-1)) - 1) / t^2, stable for all t (t2 = t^2)."""
    t2 = np.asarray(t2, dtype=float)
    safe = np.where(t2 == 0.0, 1.0, t2)
    out = np.expm1(2 * (n - 1) * np.log1p(t2)) / safe
    return np.where(t2 == 0.0, 2.0 * (n - 1), out)


def _dr_dt(t: np.ndarray, n: int, phi0: float) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return 2.0 * phi0 * (1.0 + t * t) ** (n - 1) / np.sqrt(_psi(t * t, n))


def _ds_dt(t: np.ndarray, n: int, phi0: float) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return 2.0 * phi0 / np.sqrt(_psi(t * t, n))


def _check_dimension(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"dimension n must be an integer, got {n!r}")
    n = int(n)
    if n < 3:
        raise ValueError(f"dimension n must be at least 3, got {n}")
    return n


def _check_waist(phi0) -> float:
    phi0 = float(phi0)
    if not math.isfinite(phi0) or phi0 <= 0.0:
        raise ValueError(f"waist radius phi0 must be positive, got {phi0!r}")
    return phi0


def safe_arclength_limit(n: int, phi0: float) -> float:
    """Largest arclength for which phi^(2(n-1)) stays within float range."""
    return 0.5 * phi0 * 10.0 ** (300.0 / (2 * (n - 1)))


@dataclass(frozen=True)
class CatenoidSpec:
    """Dimension and waist radius, with the derived constants.

    a is the first-integral constant phi0^(-2(n-1)); S is the finite
    half-height of the axis interval the surface projects onto.
    """

    n: int
    phi0: float
    a: float
    S: float


@dataclass(frozen=True)
class ProfilePoint:
    """Profile data at one signed arclength r from the waist."""

    r: float
    s: float
    phi: float
    dphi_ds: float
    d2phi_ds2: float


def max_axis_height(spec: CatenoidSpec, tol: float = 1e-12) -> float:
    """Half-height S = integral_{phi0}^inf (a tau^(2(n-1)) - 1)^(-1/2) dtau.

    Evaluated by two independent strategies and cross-checked to tol:

    * inverse substitution tau = phi0/v, then v = 1 - w^2, which turns the
      endpoint singularity and the infinite tail into one smooth integral
      on [0, 1];
    * waist substitution tau = phi0 (1 + t^2) split at t = 1 with u = 1/t
      on the tail, both pieces smooth on [0, 1].

    The geometric-sum factorizations 1 - v^m = (1-v) sum v^j and
    (u^2+1)^m - u^(2m) = sum (u^2+1)^j u^(2(m-1-j)) keep both integrands
    cancellation-free.
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    n, phi0 = spec.n, spec.phi0
    m = 2 * (n - 1)

    def inverse_form(w):
        v = 1.0 - w * w
        geom = np.zeros_like(v)
        for j in range(m - 1, -1, -1):
            geom = geom * v + 1.0
        return 2.0 * v ** (n - 3) / np.sqrt(geom)

    def waist_form(t):
        return 2.0 / np.sqrt(_psi(t * t, n))

    def tail_form(u):
        u2 = u * u
        b = np.zeros_like(u)
        for j in range(m):
            b = b + (u2 + 1.0) ** j * u2 ** (m - 1 - j)
        return 2.0 * u ** (2 * n - 5) / np.sqrt(b)

    s_inverse = phi0 * integrate_doubling(inverse_form, 0.0, 1.0, tol / 4)
    s_waist = phi0 * (integrate_doubling(waist_form, 0.0, 1.0, tol / 4)
                      + integrate_doubling(tail_form, 0.0, 1.0, tol / 4))
    if abs(s_inverse - s_waist) > tol * abs(s_inverse):
        raise NonConvergenceError(
            "axis-height quadrature strategies disagree: "
            f"{s_inverse!r} vs {s_waist!r} at tol={tol:g}",
            last_estimates=(s_inverse, s_waist))
    return s_inverse


def make_spec(n: int, phi0: float, tol: float = 1e-12) -> CatenoidSpec:
    """Build a CatenoidSpec, computing a = phi0^(-2(n-1)) and S."""
    n = _check_dimension(n)
    phi0 = _check_waist(phi0)
    a = phi0 ** (-2 * (n - 1))
    if not math.isfinite(a) or a == 0.0:
        raise ValueError(f"phi0={phi0!r} is outside the representable range for n={n}")
    partial = CatenoidSpec(n=n, phi0=phi0, a=a, S=math.nan)
    return CatenoidSpec(n=n, phi0=phi0, a=a, S=max_axis_height(partial, tol))


class ArclengthChart:
    """Monotone map t -> (r, s) for the half-profile r >= 0, with inversion.

    Stores cumulative quadrature tables on a fixed t-mesh; inversion of
    r(t) is a vectorized Newton iteration using exact dr/dt, so evaluation
    at arbitrary arclength is accurate to the table tolerance.
    """

    __slots__ = ("n", "phi0", "t_edges", "r_edges", "s_edges", "r_max")

    def __init__(self, n: int, phi0: float, r_max: float):
        self.n = n
        self.phi0 = phi0
        limit = safe_arclength_limit(n, phi0)
        if r_max > limit:
            raise ValueError(
                f"r_max={r_max:g} exceeds the floating-point range of the "
                f"profile; largest safe r_max is about {limit:.3e}")
        t_hi = math.sqrt(max(r_max, phi0) / phi0) + 1.0
        fr = lambda t: _dr_dt(t, n, phi0)
        while True:
            panels = max(64, int(8 * t_hi))
            edges = np.linspace(0.0, t_hi, panels + 1)
            rc = cumulative_table(fr, edges)
            if rc[-1] >= r_max:
                break
            t_hi *= 1.3
        # one panel doubling as an error check on the cumulative tables
        edges2 = np.linspace(0.0, t_hi, 2 * panels + 1)
        rc2 = cumulative_table(fr, edges2)
        if abs(rc2[-1] - rc[-1]) > _CHART_TOL * (1.0 + rc2[-1]):
            edges2 = np.linspace(0.0, t_hi, 4 * panels + 1)
            rc2 = cumulative_table(fr, edges2)
        self.t_edges = edges2
        self.r_edges = rc2
        self.s_edges = cumulative_table(lambda t: _ds_dt(t, n, phi0), edges2)
        self.r_max = float(rc2[-1])

    def t_from_r(self, r_abs: np.ndarray) -> np.ndarray:
        """Invert r(t) for nonnegative arclengths (vectorized Newton)."""
        r_abs = np.asarray(r_abs, dtype=float)
        if np.any(r_abs > self.r_max * (1.0 + 1e-12)):
            raise ValueError(
                f"arclength {float(np.max(r_abs)):g} outside chart range "
                f"[0, {self.r_max:g}]")
        scalar = r_abs.ndim == 0
        r = np.atleast_1d(np.minimum(r_abs, self.r_max))
        fr = lambda t: _dr_dt(t, self.n, self.phi0)
        t = np.interp(r, self.r_edges, self.t_edges)
        k = np.clip(np.searchsorted(self.r_edges, r, side="right") - 1,
                    0, len(self.t_edges) - 2)
        a = self.t_edges[k]
        ra = self.r_edges[k]
        for _ in range(60):
            resid = ra + panel_integrals(fr, a, t) - r
            step = resid / fr(t)
            t = np.maximum(t - step, 0.0)
            if np.max(np.abs(step)) <= 1e-16 * (1.0 + np.max(t)):
                break
        return t[0] if scalar else t

    def fields(self, r: np.ndarray):
        """(t, s, phi, dphi_ds, d2phi_ds2) at signed arclengths r."""
        r = np.asarray(r, dtype=float)
        sign = np.sign(r)
        t = self.t_from_r(np.abs(r))
        t = np.atleast_1d(t)
        sign = np.atleast_1d(sign)
        n, phi0 = self.n, self.phi0
        one = 1.0 + t * t
        psi = _psi(t * t, n)
        phi = phi0 * one
        dphi_ds = sign * t * np.sqrt(psi)
        d2phi_ds2 = (n - 1) * one ** (2 * n - 3) / phi0
        k = np.clip(np.searchsorted(self.t_edges, t, side="right") - 1,
                    0, len(self.t_edges) - 2)
        s = self.s_edges[k] + panel_integrals(
            lambda x: _ds_dt(x, n, phi0), self.t_edges[k], t)
        s = sign * s
        if r.ndim == 0:
            return t[0], s[0], phi[0], dphi_ds[0], d2phi_ds2[0]
        return t, s, phi, dphi_ds, d2phi_ds2

    def phi_at(self, r: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(self.t_from_r(np.abs(np.asarray(r, dtype=float))))
        out = self.phi0 * (1.0 + t * t)
        return out if np.asarray(r).ndim else out[0]

    def dphi_dr_at(self, r: np.ndarray) -> np.ndarray:
        """dphi/dr = phi' / sqrt(1 + phi'^2), signed."""
        r = np.asarray(r, dtype=float)
        t = np.atleast_1d(self.t_from_r(np.abs(r)))
        v = t * np.sqrt(_psi(t * t, self.n)) / (1.0 + t * t) ** (self.n - 1)
        out = np.atleast_1d(np.sign(r)) * v
        return out if r.ndim else out[0]


@lru_cache(maxsize=32)
def _cached_chart(n: int, phi0: float, r_ceil: float) -> ArclengthChart:
    return ArclengthChart(n, phi0, r_ceil)


def chart_for(spec: CatenoidSpec, r_max: float) -> ArclengthChart:
    """Shared chart covering [0, r_max]; cached with r_max rounded up."""
    r_ceil = spec.phi0 * 2.0 ** math.ceil(
        math.log2(max(r_max / spec.phi0, 1.0)) + 1e-12)
    return _cached_chart(spec.n, spec.phi0, r_ceil)


@dataclass(frozen=True)
class Profile:
    """Tabulated half-profile on a uniform arclength grid [0, r_max].

    Evaluation extends to [-r_max, r_max] by the even/odd symmetry of the
    fields.  tol is the advertised relative error bound of evaluation.
    """

    spec: CatenoidSpec
    r: np.ndarray
    s: np.ndarray
    phi: np.ndarray
    dphi_ds: np.ndarray
    d2phi_ds2: np.ndarray
    tol: float
    chart: ArclengthChart

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    @property
    def grid_step(self) -> float:
        return float(self.r[1] - self.r[0])


def build_profile(spec: CatenoidSpec, r_max: float, tol: float = 1e-9,
                  num_points: int = 4097) -> Profile:
    """Tabulate the profile on a uniform grid of num_points over [0, r_max]."""
    if not (r_max > 0.0):
        raise ValueError("r_max must be positive")
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    if num_points < 2:
        raise ValueError("num_points must be at least 2")
    chart = chart_for(spec, r_max)
    r = np.linspace(0.0, r_max, num_points)
    _, s, phi, dphi_ds, d2phi_ds2 = chart.fields(r)
    for arr in (r, s, phi, dphi_ds, d2phi_ds2):
        arr.setflags(write=False)
    return Profile(spec=spec, r=r, s=s, phi=phi, dphi_ds=dphi_ds,
                   d2phi_ds2=d2phi_ds2, tol=tol, chart=chart)


def eval_at_arclength(profile: Profile, r: float) -> ProfilePoint:
    """Profile point at signed arclength r, |r| <= r_max.

    Mirror symmetry is exact: the fields are computed from |r| and signed
    afterwards, so phi(-r) is bit-identical to phi(r) and s, phi' are odd.
    """
    r = float(r)
    if abs(r) > profile.r_max * (1.0 + 1e-12):
        raise ValueError(
            f"arclength {r:g} outside profile range [-{profile.r_max:g}, "
            f"{profile.r_max:g}]")
    _, s, phi, dphi_ds, d2phi_ds2 = profile.chart.fields(np.float64(r))
    return ProfilePoint(r=r, s=float(s), phi=float(phi),
                        dphi_ds=float(dphi_ds), d2phi_ds2=float(d2phi_ds2))


def embed(spec: CatenoidSpec, p: ProfilePoint, omega: np.ndarray):
    """Embed a profile point: position (phi * omega, s) in R^(n+1).

    Returns (position, unit normal); the normal is (omega, -phi') up to
    normalization.  omega must be a unit vector in R^n.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (spec.n,):
        raise ValueError(f"omega must have shape ({spec.n},), got {omega.shape}")
    if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
        raise ValueError("omega must be a unit vector (within 1e-12)")
    position = np.concatenate([p.phi * omega, [p.s]])
    v = math.sqrt(1.0 + p.dphi_ds ** 2)
    normal = np.concatenate([omega, [-p.dphi_ds]]) / v
    return position, normal
