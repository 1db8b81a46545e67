"""Pointwise second-fundamental-form identities for minimal hypersurfaces.

For a trace-free diagonalized shape operator h_ij = lambda_i delta_ij with
fully symmetric, trace-free derivative tensor h_ijk, the purely algebraic
identity

    sum_{ijk} h_ijk^2 - G = (2/n) G + E1 + E2 + E3,
    G = |A|^(-2) sum_k ( sum_i lambda_i h_iik )^2          ( = |grad |A||^2 )

holds with the three nonnegative remainders

    E1 = sum over ordered triples of pairwise distinct (i,j,k) of h_ijk^2
    E2 = (2/n) sum_i sum_{unordered pairs {j,k}, j,k != i} (h_kki - h_jji)^2
    E3 = (1 + 2/n) |A|^(-2) sum_k sum_{unordered {i,j}}
                                 (lambda_i h_jjk - lambda_j h_iik)^2.

The pair sums are over unordered pairs; making them ordered double counts
and breaks the identity.  On a rotationally symmetric minimal hypersurface
each remainder vanishes identically, which is what catenoid tensors must
reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .profile import CatenoidSpec, chart_for

_ADMISSIBILITY_TOL = 1e-13


@lru_cache(maxsize=None)
def _distinct_mask(n: int) -> np.ndarray:
    i, j, k = np.indices((n, n, n))
    mask = (i != j) & (j != k) & (i != k)
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True)
class ShapeTensor3:
    """Diagonalized shape operator eigenvalues plus derivative tensor."""

    n: int
    h_diag: np.ndarray
    h3: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h_diag", np.asarray(self.h_diag, dtype=float))
        object.__setattr__(self, "h3", np.asarray(self.h3, dtype=float))


@dataclass(frozen=True)
class SimonsBreakdown:
    """The nonnegative remainders and gradient term of the identity."""

    E1: float
    E2: float
    E3: float
    gradNormA2: float
    sumH2: float
    identity_residual: float


@dataclass(frozen=True)
class EqualityCheck:
    """One-point check of |A| Lap|A| + |A|^4 = (2/n) |grad |A||^2."""

    lhs: float
    rhs: float
    residual: float
    rel_residual: float
    fd_constant: float


def validate_shape_tensor(T: ShapeTensor3, tol: float = 1e-12) -> None:
    """Raise if the admissibility invariants fail beyond tol (relative)."""
    n = T.n
    if T.h_diag.shape != (n,) or T.h3.shape != (n, n, n):
        raise ValueError("shape tensor arrays have inconsistent dimensions")
    scale_d = max(float(np.max(np.abs(T.h_diag))), 1e-300)
    scale_3 = max(float(np.max(np.abs(T.h3))), 1e-300)
    if abs(float(np.sum(T.h_diag))) > tol * n * scale_d:
        raise ValueError("h_diag is not trace-free")
    for perm in ((0, 2, 1), (1, 0, 2), (2, 1, 0)):
        if float(np.max(np.abs(T.h3 - T.h3.transpose(perm)))) > tol * scale_3:
            raise ValueError("h3 is not fully symmetric")
    if float(np.max(np.abs(np.einsum("iik->k", T.h3)))) > tol * n * scale_3:
        raise ValueError("h3 traces do not vanish")


def _diag_slices(T: ShapeTensor3):
    """(lambda, M) with M[j, k] = h3[j, j, k]."""
    idx = np.arange(T.n)
    return T.h_diag, T.h3[idx, idx, :]


def breakdown(T: ShapeTensor3) -> SimonsBreakdown:
    """Remainders E1, E2, E3 and |grad |A||^2 for an admissible tensor."""
    validate_shape_tensor(T)
    n = T.n
    lam, M = _diag_slices(T)
    normA2 = float(lam @ lam)
    if normA2 <= 0.0:
        raise ValueError("|A| vanishes; the identity requires |A| > 0")
    sumH2 = float(np.sum(T.h3 ** 2))

    E1 = float(np.sum(T.h3[_distinct_mask(n)] ** 2))

    # E2: for each i, spread of {h_jji : j != i} as a sum over unordered pairs
    iu, ju = np.triu_indices(n, k=1)
    E2 = 0.0
    for i in range(n):
        keep = (iu != i) & (ju != i)
        E2 += float(np.sum((M[iu[keep], i] - M[ju[keep], i]) ** 2))
    E2 *= 2.0 / n

    # E3: explicit unordered pair sum (kept as squares for nonnegativity)
    cross = lam[iu, None] * M[ju, :] - lam[ju, None] * M[iu, :]
    E3 = (1.0 + 2.0 / n) / normA2 * float(np.sum(cross ** 2))

    g = lam @ M                                # sum_i lambda_i h_iik
    grad = float(g @ g) / normA2
    residual = abs(sumH2 - grad - (2.0 / n) * grad - E1 - E2 - E3)
    return SimonsBreakdown(E1=E1, E2=E2, E3=E3,
                           gradNormA2=grad, sumH2=sumH2,
                           identity_residual=residual)


def algebraic_residual(T: ShapeTensor3) -> float:
    """Residual of the algebraic identity; vanishes to round-off when
    the admissibility invariants hold."""
    return breakdown(T).identity_residual


def _project_admissible(h3: np.ndarray) -> np.ndarray:
    """Alternately symmetrize and trace-project a batch (B, n, n, n) of
    3-tensors until both residuals fall below 1e-14 relative.

    The iteration count is fixed (well past convergence for Gaussian
    input) so that the output for a given seed does not depend on which
    batch it was generated in.
    """
    n = h3.shape[-1]
    eye = np.eye(n)
    for _ in range(80):
        h3 = (h3 + h3.transpose(0, 1, 3, 2) + h3.transpose(0, 2, 1, 3)
              + h3.transpose(0, 2, 3, 1) + h3.transpose(0, 3, 1, 2)
              + h3.transpose(0, 3, 2, 1)) / 6.0
        trace = np.einsum("biik->bk", h3)
        h3 = h3 - np.einsum("ij,bk->bijk", eye, trace / n)
    scale = max(float(np.max(np.abs(h3))), 1e-300)
    sym_resid = max(
        float(np.max(np.abs(h3 - h3.transpose(perm))))
        for perm in ((0, 1, 3, 2), (0, 2, 1, 3), (0, 3, 2, 1)))
    tr_resid = float(np.max(np.abs(np.einsum("biik->bk", h3))))
    if max(sym_resid, tr_resid) > 0.5 * _ADMISSIBILITY_TOL * scale:
        raise RuntimeError("admissibility projection failed to converge")
    return h3


def random_admissible_batch(n: int, seeds) -> list[ShapeTensor3]:
    """Admissible tensors for many seeds at once (identical per-seed output
    to random_admissible_tensor; the projection loop is shared)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    diags = []
    raw = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        h_diag = rng.standard_normal(n)
        diags.append(h_diag - h_diag.mean())
        raw.append(rng.standard_normal((n, n, n)))
    h3 = _project_admissible(np.stack(raw))
    return [ShapeTensor3(n=n, h_diag=d, h3=h)
            for d, h in zip(diags, h3)]


def random_admissible_tensor(n: int, seed: int) -> ShapeTensor3:
    """Deterministic random tensor satisfying all admissibility invariants.

    Gaussian entries are projected onto the constraint set: the diagonal
    is recentered, and h3 is alternately symmetrized over all index
    permutations and trace-projected until both residuals fall below
    1e-14 relative.
    """
    return random_admissible_batch(n, [seed])[0]


def catenoid_equality_check(spec: CatenoidSpec, r: float, fd_step: float,
                            order: int = 4) -> EqualityCheck:
    """Check |A| Lap|A| + |A|^4 = (2/n) |grad |A||^2 at arclength r.

    Derivatives of |A| are centered finite differences of step fd_step
    (4th order by default).  rel_residual divides by the magnitude of the
    identity's terms, |A|^4 + ||A| Lap|A|| + rhs, which is the resolution
    floating point grants once the terms cancel; fd_constant reports
    residual / (fd_step^2 |A|^4).
    """
    if not (fd_step > 0.0):
        raise ValueError("fd_step must be positive")
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    n, phi0 = spec.n, spec.phi0
    half = order // 2
    chart = chart_for(spec, abs(r) + (half + 1) * fd_step)
    offsets = np.arange(-half, half + 1)
    rs = r + fd_step * offsets
    _, _, phi, _, _ = chart.fields(rs)
    normA = math.sqrt(n * (n - 1)) * phi0 ** (n - 1) * phi ** (-n)
    if order == 2:
        d1 = (normA[2] - normA[0]) / (2 * fd_step)
        d2 = (normA[2] - 2 * normA[1] + normA[0]) / fd_step ** 2
        A0 = normA[1]
    else:
        d1 = (-normA[4] + 8 * normA[3] - 8 * normA[1] + normA[0]) / (12 * fd_step)
        d2 = (-normA[4] + 16 * normA[3] - 30 * normA[2] + 16 * normA[1]
              - normA[0]) / (12 * fd_step ** 2)
        A0 = normA[2]
    rate = chart.dphi_dr_at(r) / chart.phi_at(r)
    lap = d2 + (n - 1) * rate * d1
    lhs = A0 * lap + A0 ** 4
    rhs = (2.0 / n) * d1 ** 2
    residual = abs(lhs - rhs)
    scale = A0 ** 4 + abs(A0 * lap) + abs(rhs)
    return EqualityCheck(lhs=lhs, rhs=rhs, residual=residual,
                         rel_residual=residual / scale,
                         fd_constant=residual / (fd_step ** 2 * A0 ** 4))
