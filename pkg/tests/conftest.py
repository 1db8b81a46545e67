"""Shared fixtures and independent numerical oracles.

Oracles deliberately avoid the package's own code paths: axis heights come
from 40-digit tanh-sinh quadrature (cross-checked against Gauss-Legendre),
and curvature data comes from finite differences of the explicit embedding.
"""

import numpy as np
import pytest

import catenoid
from catenoid.profile import chart_for

# 40-digit values of the unit-waist axis height, from two independent
# mpmath quadrature rules on the regularized integral (and, for n = 3,
# the lemniscatic closed form); frozen here so the suite stays fast.
AXIS_HEIGHT_ORACLE = {
    3: 1.311028777146059905232,
    4: 0.7010910526627271305875,
    5: 0.4819758240751886645635,
}


@pytest.fixture(scope="session")
def spec3():
    return catenoid.make_spec(3, 1.0)


@pytest.fixture(scope="session")
def spec4():
    return catenoid.make_spec(4, 1.0)


@pytest.fixture(scope="session")
def spec5():
    return catenoid.make_spec(5, 1.0)


@pytest.fixture(scope="session")
def profile3(spec3):
    return catenoid.build_profile(spec3, r_max=12.0, num_points=2401)


def spec_for(n, phi0=1.0):
    return catenoid.make_spec(n, phi0)


def embedding_curvatures(spec, r, h=1e-3):
    """Principal curvatures at arclength r from the embedded patch.

    Second fundamental form entries b_xy = -<F_xy, N> by centered finite
    differences of the explicit embedding F(r, theta) in the plane of the
    first two coordinates, divided by the metric (g_rr = 1, g_tt = phi^2).
    """
    n = spec.n
    chart = chart_for(spec, abs(r) + 3 * h)

    def F(rr, th):
        _, s, phi, _, _ = chart.fields(np.float64(rr))
        out = np.zeros(n + 1)
        out[0] = phi * np.cos(th)
        out[1] = phi * np.sin(th)
        out[-1] = s
        return out

    _, _, phi, dphi, _ = chart.fields(np.float64(r))
    v = np.sqrt(1.0 + dphi ** 2)
    normal = np.zeros(n + 1)
    normal[0] = 1.0 / v
    normal[-1] = -dphi / v
    F_rr = (F(r + h, 0.0) - 2.0 * F(r, 0.0) + F(r - h, 0.0)) / h ** 2
    F_tt = (F(r, h) - 2.0 * F(r, 0.0) + F(r, -h)) / h ** 2
    lam_rad = -float(F_rr @ normal)
    lam_sph = -float(F_tt @ normal) / float(phi) ** 2
    return lam_rad, lam_sph
