"""Curvature, Laplacian, and integral quantities on the catenoid.

Principal curvatures in the rotational frame are

    lambda_rad = -phi'' / (1 + phi'^2)^(3/2)         (profile direction)
    lambda_sph =  1 / (phi (1 + phi'^2)^(1/2))       (multiplicity n-1)

with lambda_rad + (n-1) lambda_sph = 0 (minimality) and the closed form
|A|^2 = n(n-1) phi0^(2(n-1)) phi^(-2n).  The induced metric in arclength
is the warped product dr^2 + phi(r)^2 g_sphere, so the Laplacian of a
radial function is f'' + (n-1)(phi_r/phi) f'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import simons
from .profile import (CatenoidSpec, Profile, ProfilePoint, _dr_dt, chart_for)
from .quadrature import integrate_doubling

# centered stencils: (first derivative, second derivative) coefficients
_STENCILS = {
    2: (np.array([-0.5, 0.0, 0.5]), np.array([1.0, -2.0, 1.0])),
    4: (np.array([1, -8, 0, 8, -1]) / 12.0,
        np.array([-1, 16, -30, 16, -1]) / 12.0),
}


@dataclass(frozen=True)
class CurvatureFrame:
    """Principal curvatures, |A|^2, and d|A|/dr at one profile point."""

    lambda_rad: float
    lambda_sph: float
    normA2: float
    dnormA_dr: float


@dataclass(frozen=True)
class BallIntegralResult:
    """Integral of |A|^p over the annular region R1 < |r| < R2."""

    R1: float
    R2: float
    exponent: float
    value: float
    omega_factor: float


def unit_sphere_area(n: int) -> float:
    """Area of the unit sphere S^(n-1): 2 pi^(n/2) / Gamma(n/2).

    Gamma at integer and half-integer arguments by downward recursion, so
    the value is exact up to round-off without special functions.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    g = 1.0
    x = 0.5 * n
    while x > 1.0:
        x -= 1.0
        g *= x
    if x == 0.5:
        g *= math.sqrt(math.pi)
    return 2.0 * math.pi ** (0.5 * n) / g


def norm_A2_closed(spec: CatenoidSpec, phi: float) -> float:
    """|A|^2 = n(n-1) phi0^(2(n-1)) phi^(-2n); requires phi >= phi0."""
    phi = float(phi)
    if phi < spec.phi0 * (1.0 - 1e-12):
        raise ValueError(f"phi={phi:g} is below the waist radius {spec.phi0:g}")
    n = spec.n
    return n * (n - 1) * spec.phi0 ** (2 * (n - 1)) * phi ** (-2 * n)


def principal_curvatures(spec: CatenoidSpec, p: ProfilePoint) -> CurvatureFrame:
    """Curvature frame at a profile point."""
    n = spec.n
    one = 1.0 + p.dphi_ds ** 2
    lam_rad = -p.d2phi_ds2 / one ** 1.5
    lam_sph = 1.0 / (p.phi * math.sqrt(one))
    normA2 = lam_rad ** 2 + (n - 1) * lam_sph ** 2
    # |A| = sqrt(n(n-1)) phi0^(n-1) phi^(-n), so d|A|/dr = -n |A| phi_r / phi
    phi_r = p.dphi_ds / math.sqrt(one)
    dnormA_dr = -n * math.sqrt(normA2) * phi_r / p.phi
    return CurvatureFrame(lambda_rad=lam_rad, lambda_sph=lam_sph,
                          normA2=normA2, dnormA_dr=dnormA_dr)


def shape_tensor(spec: CatenoidSpec, p: ProfilePoint) -> "simons.ShapeTensor3":
    """Diagonalized second fundamental form and its covariant derivative.

    In the orthonormal frame (profile direction, sphere directions) the
    only nonzero derivative components up to index symmetry are

        h_111 = d(lambda_rad)/dr
        h_1ii = (phi_r/phi) (lambda_rad - lambda_sph)     for i >= 2

    which satisfy the differentiated-minimality trace condition exactly.
    """
    n = spec.n
    frame = principal_curvatures(spec, p)
    phi_r = p.dphi_ds / math.sqrt(1.0 + p.dphi_ds ** 2)
    rate = phi_r / p.phi
    h_diag = np.full(n, frame.lambda_sph)
    h_diag[0] = frame.lambda_rad
    h3 = np.zeros((n, n, n))
    d_mu = rate * (frame.lambda_rad - frame.lambda_sph)   # = d(lambda_sph)/dr
    h3[0, 0, 0] = -(n - 1) * d_mu                          # = d(lambda_rad)/dr
    for i in range(1, n):
        h3[0, i, i] = h3[i, 0, i] = h3[i, i, 0] = d_mu
    return simons.ShapeTensor3(n=n, h_diag=h_diag, h3=h3)


def radial_laplacian(profile: Profile, f: np.ndarray, r: float,
                     order: int = 4) -> float:
    """Laplacian f'' + (n-1)(phi_r/phi) f' of grid-sampled radial data.

    f must be sampled on the profile's uniform grid and r must be a grid
    node far enough from both grid ends for the centered stencil.
    """
    if order not in _STENCILS:
        raise ValueError(f"unsupported stencil order {order}; use 2 or 4")
    f = np.asarray(f, dtype=float)
    if f.shape != profile.r.shape:
        raise ValueError("f must be sampled on the profile grid")
    h = profile.grid_step
    i = int(round(r / h))
    if abs(r - i * h) > 1e-9 * max(h, 1.0):
        raise ValueError(f"r={r:g} is not a grid node of the profile")
    half = order // 2
    if i - half < 0 or i + half >= len(f):
        raise ValueError(
            f"stencil of order {order} does not fit at r={r:g} "
            "(too close to a grid boundary)")
    c1, c2 = _STENCILS[order]
    window = f[i - half:i + half + 1]
    f1 = float(c1 @ window) / h
    f2 = float(c2 @ window) / (h * h)
    n = profile.spec.n
    rate = profile.chart.dphi_dr_at(r) / profile.chart.phi_at(r)
    return f2 + (n - 1) * rate * f1


def _ball_integrand(spec: CatenoidSpec, p: float):
    n, phi0 = spec.n, spec.phi0
    norm_scale = math.sqrt(n * (n - 1)) * phi0 ** (n - 1)

    def integrand(t):
        phi = phi0 * (1.0 + t * t)
        normA = norm_scale * phi ** (-n)
        return normA ** p * phi ** (n - 1) * _dr_dt(t, n, phi0)

    return integrand


def ball_integral(spec: CatenoidSpec, p_exponent: float, R1: float, R2: float,
                  tol: float = 1e-10) -> BallIntegralResult:
    """Integral of |A|^p over the shell R1 < |r| < R2 (arclength balls).

    The region is a pair of annuli, so the value is
    2 * area(S^(n-1)) * integral_{R1}^{R2} |A|(r)^p phi(r)^(n-1) dr,
    computed in the regular t parameter where the integrand is smooth.
    """
    if not (0.0 <= R1 <= R2):
        raise ValueError("need 0 <= R1 <= R2")
    omega = unit_sphere_area(spec.n)
    if R1 == R2:
        return BallIntegralResult(R1=R1, R2=R2, exponent=p_exponent,
                                  value=0.0, omega_factor=omega)
    chart = chart_for(spec, R2)
    t1, t2 = chart.t_from_r(np.array([R1, R2]))
    integrand = _ball_integrand(spec, p_exponent)
    raw = integrate_doubling(integrand, float(t1), float(t2), tol / 2)
    return BallIntegralResult(R1=R1, R2=R2, exponent=p_exponent,
                              value=2.0 * omega * raw, omega_factor=omega)


def decay_functional(spec: CatenoidSpec, R: float, tol: float = 1e-10) -> float:
    """F(R) = R^(-2) * integral of |A|^(2(n-2)/n) over the shell R < |r| < 2R."""
    if not (R > 0.0):
        raise ValueError("R must be positive")
    p = 2.0 * (spec.n - 2) / spec.n
    shell = ball_integral(spec, p, R, 2.0 * R, tol)
    return shell.value / R ** 2


def curvature_table(spec: CatenoidSpec, rs: np.ndarray):
    """Arrays (r, lambda_rad, lambda_sph, normA2) sampled along arclength."""
    rs = np.asarray(rs, dtype=float)
    chart = chart_for(spec, float(np.max(np.abs(rs))) if rs.size else 1.0)
    _, _, phi, dphi_ds, d2phi_ds2 = chart.fields(rs)
    one = 1.0 + dphi_ds ** 2
    lam_rad = -d2phi_ds2 / one ** 1.5
    lam_sph = 1.0 / (phi * np.sqrt(one))
    normA2 = lam_rad ** 2 + (spec.n - 1) * lam_sph ** 2
    return rs, lam_rad, lam_sph, normA2
