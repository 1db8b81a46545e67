"""Symmetric tridiagonal eigenvalue tools: Sturm counts and bisection.

The Sturm sequence of leading-principal-minor ratios of T - sigma*I gives
the number of eigenvalues below sigma in one O(N) pass; bisection on that
count extracts individual eigenvalues to machine precision.  The inner
loops are jitted with numba when available (pure-python fallback keeps
identical arithmetic).
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

try:
    from numba import njit
except ImportError:                                   # pragma: no cover
    njit = None

_TINY = 1e-300


def _count_below_py(d, e2, sigma):
    count = 0
    q = d[0] - sigma
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        if q == 0.0:
            q = _TINY
        q = d[i] - sigma - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def _bisect_eigenvalue_py(d, e2, index, lo, hi, count_fn):
    # smallest x with count(x) >= index, i.e. eigenvalue number `index`
    a, b = lo, hi
    for _ in range(210):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        if count_fn(d, e2, mid) >= index:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


if njit is not None:
    _count_below = njit(cache=True)(_count_below_py)

    @njit(cache=True)
    def _bisect_jit(d, e2, index, lo, hi):
        a, b = lo, hi
        for _ in range(210):
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            count = 0
            q = d[0] - mid
            if q < 0.0:
                count += 1
            for i in range(1, d.shape[0]):
                if q == 0.0:
                    q = _TINY
                q = d[i] - mid - e2[i - 1] / q
                if q < 0.0:
                    count += 1
            if count >= index:
                b = mid
            else:
                a = mid
        return 0.5 * (a + b)
else:                                                 # pragma: no cover
    _count_below = _count_below_py
    _bisect_jit = None


def count_below(d: np.ndarray, e: np.ndarray, sigma: float) -> int:
    """Number of eigenvalues of tridiag(d, e) strictly below sigma."""
    d = np.ascontiguousarray(d, dtype=float)
    e2 = np.ascontiguousarray(e, dtype=float) ** 2
    return int(_count_below(d, e2, float(sigma)))


def gershgorin_bounds(d: np.ndarray, e: np.ndarray):
    """Interval certainly containing the whole spectrum."""
    radius = np.zeros_like(d)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    return float(np.min(d - radius)), float(np.max(d + radius))


def eigenvalue_by_index(d: np.ndarray, e: np.ndarray, index: int,
                        lo: float | None = None,
                        hi: float | None = None) -> float:
    """The index-th smallest eigenvalue (1-based) by Sturm bisection."""
    if not (1 <= index <= len(d)):
        raise ValueError(f"eigenvalue index {index} out of range 1..{len(d)}")
    d = np.ascontiguousarray(d, dtype=float)
    e2 = np.ascontiguousarray(e, dtype=float) ** 2
    if lo is None or hi is None:
        glo, ghi = gershgorin_bounds(d, np.asarray(e, dtype=float))
        lo = glo if lo is None else lo
        hi = ghi if hi is None else hi
    if _bisect_jit is not None:
        return float(_bisect_jit(d, e2, index, lo, hi))
    return float(_bisect_eigenvalue_py(d, e2, index, lo, hi, _count_below))


def smallest_eigenvalues(d: np.ndarray, e: np.ndarray, k: int) -> np.ndarray:
    """The k smallest eigenvalues, ascending, by Sturm bisection."""
    if not (1 <= k <= len(d)):
        raise ValueError(f"k={k} out of range 1..{len(d)}")
    lo, hi = gershgorin_bounds(np.asarray(d, float), np.asarray(e, float))
    out = np.empty(k)
    for j in range(1, k + 1):
        lo_j = lo if j == 1 else out[j - 2]
        out[j - 1] = eigenvalue_by_index(d, e, j, lo_j, hi)
    return out


def inverse_iteration(d: np.ndarray, e: np.ndarray, shift: float,
                      mode_hint: int = 1, tol: float = 1e-10,
                      max_iters: int = 50) -> np.ndarray:
    """Eigenvector for the eigenvalue nearest shift, by inverse iteration.

    The start vector is a half-period sine with mode_hint arches, which is
    deterministic and already close for Sturm-Liouville discretizations.
    Converges when the residual ||T v - rho v||_inf falls below
    tol * ||T||_inf; the vector is normalized to unit maximum with its
    first sizable component positive.
    """
    n = len(d)
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    scale = float(np.max(np.abs(d)) + 2.0 * (np.max(np.abs(e)) if n > 1 else 0.0))
    band = np.zeros((3, n))
    band[0, 1:] = e
    band[1, :] = d - shift
    band[2, :-1] = e
    # tiny diagonal regularization keeps the factorization well defined
    # when shift hits an eigenvalue to round-off
    band[1, :] += 1e-14 * scale
    x = np.sin(np.arange(1, n + 1) * (np.pi * mode_hint / (n + 1)))
    x /= np.linalg.norm(x)
    rho = shift
    for _ in range(max_iters):
        x = solve_banded((1, 1), band, x)
        x /= np.linalg.norm(x)
        tx = d * x
        tx[:-1] += e * x[1:]
        tx[1:] += e * x[:-1]
        rho = float(x @ tx)
        if float(np.max(np.abs(tx - rho * x))) <= tol * scale:
            break
    else:
        raise RuntimeError("inverse iteration did not converge")
    peak = np.flatnonzero(np.abs(x) > 0.1 * np.max(np.abs(x)))[0]
    if x[peak] < 0:
        x = -x
    return x / np.max(np.abs(x))
