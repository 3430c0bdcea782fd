"""Dense real symmetric linear algebra.

Everything the upper layers consume lives here: a validated symmetric matrix
type, a deterministic Jacobi eigensolver, shifted resolvent solves, PSD square
roots, norms, and spectral-gap extraction.  All tolerances are relative to
``source_scale = max(1, ||.||_F)``; absolute tolerances are never applied to
user data.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import ConvergenceError, NotPSDError, PoleError

# Relative tolerances (see module docstring for the scaling convention).
SYMMETRY_RTOL = 1e-12
POLE_RTOL = 1e-12
PSD_FLOOR_RTOL = 1e-10
OFFDIAG_RTOL = 1e-14
CLUSTER_RTOL = 1e-9
MAX_SWEEPS = 60


class SymmetricMatrix:
    """Immutable dense real symmetric n-by-n matrix.

    Input may carry asymmetry up to ``1e-12 * (1 + max|entry|)`` (file
    round-off); it is symmetrized on construction and frozen.
    """

    __slots__ = ("mat",)

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("expected a square matrix with n >= 1")
        amax = float(np.max(np.abs(a)))
        if float(np.max(np.abs(a - a.T))) > SYMMETRY_RTOL * (1.0 + amax):
            raise ValueError("matrix is not symmetric within tolerance")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self.mat = a

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def __repr__(self):
        return f"SymmetricMatrix(n={self.n})"

    @classmethod
    def diag(cls, values) -> "SymmetricMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))


@dataclasses.dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and an orthonormal eigenvector frame."""

    eigenvalues: np.ndarray
    frame: np.ndarray
    source_scale: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


@dataclasses.dataclass(frozen=True)
class SpectralGap:
    """Maximal open interval of the real resolvent set of A.

    ``lower``/``upper`` are -inf/+inf on the unbounded rays.
    """

    lower: float
    upper: float

    @property
    def kind(self) -> str:
        if math.isinf(self.lower):
            return "left-unbounded"
        if math.isinf(self.upper):
            return "right-unbounded"
        return "bounded"

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.lower) or math.isinf(self.upper))

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, lam: float) -> bool:
        return self.lower < lam < self.upper


def frobenius(m: SymmetricMatrix) -> float:
    return float(np.linalg.norm(m.mat))


def source_scale_of(m: SymmetricMatrix) -> float:
    return max(1.0, frobenius(m))


def eigh(a: SymmetricMatrix) -> SpectralDecomposition:
    """Eigendecomposition by cyclic Jacobi rotations.

    Deterministic: row-major sweep order, ascending eigenvalue sort with a
    stable tie-break, and the sign of each eigenvector fixed so its first
    non-negligible component is positive.  Convergence is declared when the
    off-diagonal Frobenius mass drops below 1e-14 * source_scale; after 60
    sweeps without convergence a ConvergenceError is raised.
    """
    mat = np.array(a.mat, dtype=float)
    n = mat.shape[0]
    scale = max(1.0, float(np.linalg.norm(mat)))
    frame = np.eye(n)
    if n > 1:
        target = OFFDIAG_RTOL * scale
        # Rotations below this threshold cannot matter for the target and are
        # skipped; sqrt(2)*n*skip stays below target.
        skip = 0.1 * target / n
        converged = False
        off = 0.0
        for _sweep in range(MAX_SWEEPS):
            off = float(np.linalg.norm(mat - np.diag(np.diag(mat))))
            if off <= target:
                converged = True
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = mat[p, q]
                    if abs(apq) <= skip:
                        continue
                    app = mat[p, p]
                    aqq = mat[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.hypot(theta, 1.0)
                    )
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    s = t * c
                    cp = mat[:, p].copy()
                    cq = mat[:, q].copy()
                    mat[:, p] = c * cp - s * cq
                    mat[:, q] = s * cp + c * cq
                    rp = mat[p, :].copy()
                    rq = mat[q, :].copy()
                    mat[p, :] = c * rp - s * rq
                    mat[q, :] = s * rp + c * rq
                    # Exact zeroing of the target entry reduces round-off.
                    mat[p, q] = 0.0
                    mat[q, p] = 0.0
                    mat[p, p] = app - t * apq
                    mat[q, q] = aqq + t * apq
                    vp = frame[:, p].copy()
                    vq = frame[:, q].copy()
                    frame[:, p] = c * vp - s * vq
                    frame[:, q] = s * vp + c * vq
        if not converged:
            off = float(np.linalg.norm(mat - np.diag(np.diag(mat))))
            if off > OFFDIAG_RTOL * scale:
                raise ConvergenceError(off, MAX_SWEEPS)
    values = np.diag(mat).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    frame = frame[:, order]
    for j in range(n):
        col = frame[:, j]
        support = np.nonzero(np.abs(col) > 1e-12 * np.max(np.abs(col)))[0]
        if col[support[0]] < 0.0:
            frame[:, j] = -col
    values.setflags(write=False)
    frame.setflags(write=False)
    return SpectralDecomposition(values, frame, scale)


def dist_to_spectrum(d: SpectralDecomposition, lam: float) -> float:
    return float(np.min(np.abs(d.eigenvalues - lam)))


def operator_norm(m: SymmetricMatrix) -> float:
    d = eigh(m)
    return float(np.max(np.abs(d.eigenvalues)))


def _pole_check(d: SpectralDecomposition, lam: float) -> None:
    idx = int(np.argmin(np.abs(d.eigenvalues - lam)))
    if abs(d.eigenvalues[idx] - lam) <= POLE_RTOL * d.source_scale:
        raise PoleError(lam, float(d.eigenvalues[idx]))


def resolvent_apply(d: SpectralDecomposition, lam: float, y) -> np.ndarray:
    """Solve (A - lam) x = y in the eigenbasis."""
    _pole_check(d, lam)
    y = np.asarray(y, dtype=float)
    coeffs = d.frame.T @ y
    return d.frame @ (coeffs / (d.eigenvalues - lam))


def resolvent_matrix(d: SpectralDecomposition, lam: float) -> np.ndarray:
    """The full matrix (A - lam)^{-1}."""
    _pole_check(d, lam)
    inv = 1.0 / (d.eigenvalues - lam)
    return (d.frame * inv) @ d.frame.T


def psd_sqrt(b: SymmetricMatrix) -> SymmetricMatrix:
    """PSD square root; eigenvalues slightly below zero are clamped.

    The clamping floor is -1e-10 * max(1, ||B||_F); anything below it raises
    NotPSDError.
    """
    d = eigh(b)
    floor = -PSD_FLOOR_RTOL * max(1.0, frobenius(b))
    min_eig = float(d.eigenvalues[0])
    if min_eig < floor:
        raise NotPSDError(min_eig)
    clamped = np.maximum(d.eigenvalues, 0.0)
    root = (d.frame * np.sqrt(clamped)) @ d.frame.T
    return SymmetricMatrix(0.5 * (root + root.T))


def ensure_psd(b: SymmetricMatrix) -> float:
    """Check PSD-ness of ``b``; returns its smallest eigenvalue."""
    d = eigh(b)
    floor = -PSD_FLOOR_RTOL * max(1.0, frobenius(b))
    min_eig = float(d.eigenvalues[0])
    if min_eig < floor:
        raise NotPSDError(min_eig)
    return min_eig


def cluster_points(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group ascending values whose consecutive spacing is <= tol."""
    groups: list[list[int]] = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.asarray(g, dtype=int) for g in groups]


def gaps(d: SpectralDecomposition, cluster_tol: float | None = None) -> list[SpectralGap]:
    """Spectral gaps of A: two unbounded rays plus one bounded gap per
    consecutive pair of distinct (clustered) eigenvalues."""
    if cluster_tol is None:
        cluster_tol = CLUSTER_RTOL * d.source_scale
    if cluster_tol <= 0.0:
        raise ValueError("cluster_tol must be positive")
    groups = cluster_points(d.eigenvalues, cluster_tol)
    reps = [float(np.mean(d.eigenvalues[g])) for g in groups]
    out = [SpectralGap(-math.inf, reps[0])]
    for lo, hi in zip(reps, reps[1:]):
        out.append(SpectralGap(lo, hi))
    out.append(SpectralGap(reps[-1], math.inf))
    return out


def clustered_eigenvalues(
    d: SpectralDecomposition, cluster_tol: float | None = None
) -> np.ndarray:
    if cluster_tol is None:
        cluster_tol = CLUSTER_RTOL * d.source_scale
    groups = cluster_points(d.eigenvalues, cluster_tol)
    return np.array([float(np.mean(d.eigenvalues[g])) for g in groups])
