"""Protection criterion and its cross-checks.

A real lam is *protected* for a pair (A, B) -- A symmetric, B PSD and nonzero
-- when lam stays in the resolvent set of A + tB for every real t.  This is
equivalent to lam lying in a spectral gap of A with B (A - lam)^{-1} B = 0.
This module computes the (relative) residual of that condition, enumerates all
protected points gap by gap via a Herglotz probe, and provides the equivalent
characterizations used as cross-checks: the explicit shifted inverse formula,
nilpotency of the resolvent-perturbation product, the pseudo-resolvent
identity, the two-sided distance bounds, and eigenvalue-flow sampling.
"""

from __future__ import annotations

import dataclasses
from typing import NamedTuple

import numpy as np

from .errors import DegeneratePerturbationError, NotProtectedError
from .herglotz import HerglotzScalar, gap_root, herglotz_from
from .linalg import (
    POLE_RTOL,
    SpectralDecomposition,
    SpectralGap,
    SymmetricMatrix,
    dist_to_spectrum,
    eigh,
    ensure_psd,
    frobenius,
    gaps,
    operator_norm,
    resolvent_matrix,
)

DEFAULT_TOL = 1e-8
ZERO_B_RTOL = 1e-12
UNRESOLVABLE_GAP_RTOL = 1e-12


@dataclasses.dataclass(frozen=True)
class ProtectedPoint:
    value: float
    residual: float
    gap: SpectralGap


@dataclasses.dataclass(frozen=True)
class GapDiagnostic:
    """Per-bounded-gap outcome of the probe search."""

    gap: SpectralGap
    status: str                  # protected | no-root | rejected | unresolvable
    root: float | None = None
    residual: float | None = None


@dataclasses.dataclass(frozen=True)
class ProtectionReport:
    protected_points: list[ProtectedPoint]
    gap_diagnostics: list[GapDiagnostic]
    tol: float
    probe_index: int


@dataclasses.dataclass(frozen=True)
class FlowSample:
    """Sorted eigenvalue branches of A + tB over a t grid."""

    t_values: np.ndarray
    branches: np.ndarray  # shape (len(t_values), n), rows ascending


class ProtectionVerdict(NamedTuple):
    protected: bool
    residual: float


class DistanceBounds(NamedTuple):
    lower: float
    upper: float | None
    actual: float


def _check_nonzero_psd(a: SymmetricMatrix, b: SymmetricMatrix) -> None:
    if frobenius(b) <= ZERO_B_RTOL * max(1.0, frobenius(a)):
        raise DegeneratePerturbationError()
    ensure_psd(b)


def protection_residual(
    a: SymmetricMatrix,
    b: SymmetricMatrix,
    lam: float,
    dec: SpectralDecomposition | None = None,
) -> float:
    """Dimensionless residual of the condition B (A - lam)^{-1} B = 0.

    Normalized by ||B||_F^2 / dist(lam, spec A) so that the value is invariant
    under joint rescaling of A and B; exactly zero iff the product vanishes.
    """
    if dec is None:
        dec = eigh(a)
    res = resolvent_matrix(dec, lam)  # raises PoleError inside the spectrum
    numerator = float(np.linalg.norm(b.mat @ res @ b.mat))
    dist = dist_to_spectrum(dec, lam)
    denominator = max(1e-300, frobenius(b) ** 2 / dist)
    return numerator / denominator


def is_protected(
    a: SymmetricMatrix,
    b: SymmetricMatrix,
    lam: float,
    tol: float = DEFAULT_TOL,
    dec: SpectralDecomposition | None = None,
) -> ProtectionVerdict:
    """Certify lam in rho(A + tB) for all real t.

    True iff lam lies in a spectral gap of A and the protection residual is
    at most ``tol``.  B must be PSD and non-zero (a zero B makes every point
    off spec(A) trivially protected and is rejected).
    """
    _check_nonzero_psd(a, b)
    if dec is None:
        dec = eigh(a)
    if dist_to_spectrum(dec, lam) <= POLE_RTOL * dec.source_scale:
        return ProtectionVerdict(False, float("inf"))
    residual = protection_residual(a, b, lam, dec=dec)
    return ProtectionVerdict(residual <= tol, residual)


def protected_set(
    a: SymmetricMatrix, b: SymmetricMatrix, tol: float = DEFAULT_TOL
) -> ProtectionReport:
    """Enumerate all protected points of (A, B).

    Per bounded gap of A: probe with y = B e_i* (i* the largest column of B),
    isolate the unique root of <y, (A - lam)^{-1} y> in the gap, and certify
    it with the full-matrix residual.  Any protected point must be that root:
    protection forces every diagonal resolvent element of the form
    <B v, (A - lam)^{-1} B v> to vanish, and each such element is strictly
    increasing across the gap.
    """
    _check_nonzero_psd(a, b)
    dec = eigh(a)
    column_norms = np.linalg.norm(b.mat, axis=0)
    probe_index = int(np.argmax(column_norms))
    y = b.mat[:, probe_index]
    h = herglotz_from(dec, y)
    points: list[ProtectedPoint] = []
    diagnostics: list[GapDiagnostic] = []
    for gap in gaps(dec):
        if not gap.bounded:
            continue
        if gap.width <= UNRESOLVABLE_GAP_RTOL * dec.source_scale:
            diagnostics.append(GapDiagnostic(gap, "unresolvable"))
            continue
        root = gap_root(h, gap)
        if root is None:
            diagnostics.append(GapDiagnostic(gap, "no-root"))
            continue
        residual = protection_residual(a, b, root, dec=dec)
        if residual <= tol:
            points.append(ProtectedPoint(root, residual, gap))
            diagnostics.append(GapDiagnostic(gap, "protected", root, residual))
        else:
            diagnostics.append(GapDiagnostic(gap, "rejected", root, residual))
    return ProtectionReport(points, diagnostics, tol, probe_index)


def shifted_inverse_formula(
    a: SymmetricMatrix, b: SymmetricMatrix, lam: float, t: float
) -> tuple[SymmetricMatrix, float]:
    """Candidate inverse M = R - t R B R for (A + tB - lam), with its defect.

    R = (A - lam)^{-1}.  The defect ||(A + tB - lam) M - I||_F is at the
    round-off level whenever lam is protected and grows large otherwise.
    """
    dec = eigh(a)
    res = resolvent_matrix(dec, lam)
    m = res - t * (res @ b.mat @ res)
    m = 0.5 * (m + m.T)
    shifted = a.mat + t * b.mat - lam * np.eye(a.n)
    defect = float(np.linalg.norm(shifted @ m - np.eye(a.n)))
    return SymmetricMatrix(m), defect


def nilpotency_index(
    a: SymmetricMatrix, b: SymmetricMatrix, lam: float
) -> int | None:
    """Smallest k <= n with ((A - lam)^{-1} B)^k vanishing, else None.

    Vanishing is judged relative to ||N||_F^k.  Index 1 occurs only for
    B = 0; index 2 exactly at protected shifts with B != 0.
    """
    dec = eigh(a)
    nmat = resolvent_matrix(dec, lam) @ b.mat
    base = float(np.linalg.norm(nmat))
    power = np.eye(a.n)
    for k in range(1, a.n + 1):
        power = power @ nmat
        if float(np.linalg.norm(power)) <= 1e-10 * base**k:
            return k
    return None


def pseudo_resolvent_defect(
    a: SymmetricMatrix,
    b: SymmetricMatrix,
    lam: float,
    z: float,
    w: float,
) -> float:
    """Defect of the resolvent identity for R(s) = (R_0 - s R_0 B R_0) B.

    With R_0 = (A - lam)^{-1}, the family G(s) = (A - lam + sB)^{-1} B obeys
    G(z) - G(w) = (w - z) G(z) G(w); at protected shifts R(s) equals G(s), so
    ||R(z) - R(w) - (w - z) R(z) R(w)||_F vanishes for all z, w.
    """
    dec = eigh(a)
    res = resolvent_matrix(dec, lam)
    rbr = res @ b.mat @ res

    def family(s: float) -> np.ndarray:
        return (res - s * rbr) @ b.mat

    rz = family(z)
    rw = family(w)
    return float(np.linalg.norm(rz - rw - (w - z) * (rz @ rw)))


def distance_bounds(
    a: SymmetricMatrix, b: SymmetricMatrix, t: float, tol: float = DEFAULT_TOL
) -> DistanceBounds:
    """Two-sided bounds on dist(0, spec(A + tB)) at a protected origin.

    lower = 1 / (|t| nu + eta) with nu = ||A^{-1} B A^{-1}||_2 and
    eta = ||A^{-1}||_2; upper = 1 / (|t| nu - eta) once |t| nu > eta.
    Requires 0 to be protected for (A, B).
    """
    verdict = is_protected(a, b, 0.0, tol=tol)
    if not verdict.protected:
        raise NotProtectedError(0.0, verdict.residual)
    dec = eigh(a)
    ainv = resolvent_matrix(dec, 0.0)
    nu = operator_norm(SymmetricMatrix(ainv @ b.mat @ ainv))
    eta = 1.0 / dist_to_spectrum(dec, 0.0)
    lower = 1.0 / (abs(t) * nu + eta)
    upper = 1.0 / (abs(t) * nu - eta) if abs(t) * nu > eta else None
    shifted = SymmetricMatrix(a.mat + t * b.mat)
    actual = dist_to_spectrum(eigh(shifted), 0.0)
    return DistanceBounds(lower, upper, actual)


def spectral_flow(a: SymmetricMatrix, b: SymmetricMatrix, t_grid) -> FlowSample:
    """Sorted eigenvalues of A + tB at every grid point (ascending t)."""
    t_values = np.asarray(t_grid, dtype=float)
    if t_values.size == 0:
        raise ValueError("t grid must be non-empty")
    if np.any(np.diff(t_values) <= 0):
        raise ValueError("t grid must be strictly increasing")
    branches = np.empty((t_values.size, a.n))
    for i, t in enumerate(t_values):
        dec = eigh(SymmetricMatrix(a.mat + t * b.mat))
        branches[i] = dec.eigenvalues
    branches.setflags(write=False)
    t_values = t_values.copy()
    t_values.setflags(write=False)
    return FlowSample(t_values, branches)


def standard_t_grid(
    min_exp: float = -2.0,
    max_exp: float = 6.0,
    per_decade: int = 25,
    symmetric: bool = True,
    include_zero: bool = True,
) -> np.ndarray:
    """Log-spaced t grid, 25 points per decade by default, plus t = 0."""
    count = int(round((max_exp - min_exp) * per_decade)) + 1
    positive = np.logspace(min_exp, max_exp, count)
    parts = [positive]
    if symmetric:
        parts.append(-positive)
    if include_zero:
        parts.append(np.zeros(1))
    return np.unique(np.concatenate(parts))


def brute_force_unprotected(
    a: SymmetricMatrix,
    b: SymmetricMatrix,
    lam_grid,
    t_grid,
    hit_tol: float,
) -> set[int]:
    """Grid-scan oracle: indices of lam-grid points never hit by the flow.

    A lam is counted as hit at t when some eigenvalue of A + tB comes within
    hit_tol / (1 + |t|).  The window shrinks with |t| because the flow
    approaches protected points at rate ~ 1/|t| without ever reaching them;
    a fixed window would report false hits on every protected point once
    |t| is large enough.

    Deliberately independent of the Jacobi path: eigenvalues come from
    numpy.linalg.eigvalsh.  Intended as a test oracle, not a certificate.
    """
    lam_grid = np.asarray(lam_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if lam_grid.size == 0 or t_grid.size == 0:
        raise ValueError("grids must be non-empty")
    if hit_tol <= 0:
        raise ValueError("hit_tol must be positive")
    hit = np.zeros(lam_grid.size, dtype=bool)
    for t in t_grid:
        evs = np.linalg.eigvalsh(a.mat + t * b.mat)
        dists = np.min(np.abs(evs[None, :] - lam_grid[:, None]), axis=1)
        hit |= dists <= hit_tol / (1.0 + abs(t))
    return set(np.nonzero(~hit)[0].tolist())
