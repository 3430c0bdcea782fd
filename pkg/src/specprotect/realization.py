"""Constructions whose protected set is prescribed.

Two routes:

* the *cyclic* (arrowhead) construction: given a finite set P, border the
  diagonal matrix K = diag(P) with a strictly positive unit vector v and one
  extra zero diagonal entry, and perturb only that last coordinate.  The
  protected set of the resulting pair is exactly P, and every lam outside P
  is reached at an explicitly solvable parameter t*.

* the *pole* construction: a diagonal A with prescribed poles and a rank-one
  projection B whose vector has all entries non-zero; the protected set is
  then the root set of the associated pole/weight function, one point strictly
  inside each bounded gap.

The solve-for-t formula comes from the Schur-complement determinant identity
det(A + tB - lam) = det(K - lam) * ((t - lam) - v^T (K - lam)^{-1} v), which
is affine in t for the rank-one perturbation used here.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import PoleError
from .herglotz import HerglotzScalar, gap_root
from .linalg import SymmetricMatrix
from .protection import DEFAULT_TOL, protection_residual


@dataclasses.dataclass(frozen=True)
class RealizedPair:
    """Arrowhead pair (A, B) with prescribed protected set P."""

    points: np.ndarray   # ascending, distinct; this is P = diag of K
    v: np.ndarray        # strictly positive unit vector of weights
    a: SymmetricMatrix   # (m+1) x (m+1) arrowhead [[K, v], [v^T, 0]]
    b: SymmetricMatrix   # diag(0, ..., 0, 1)

    @property
    def m(self) -> int:
        return self.points.shape[0]


@dataclasses.dataclass(frozen=True)
class PolePair:
    """Diagonal-plus-rank-one-projection pair with its protected points."""

    mu: np.ndarray       # ascending distinct poles
    y: np.ndarray        # unit vector, every entry non-zero
    a: SymmetricMatrix
    b: SymmetricMatrix
    protected_points: np.ndarray   # one per bounded pole gap
    residuals: np.ndarray


def realize(points, weights=None) -> RealizedPair:
    """Build the arrowhead pair whose protected set is exactly ``points``.

    ``weights`` (optional, all > 0) sets the border vector before
    normalization; the default is uniform.  All weights must be strictly
    positive: that is what makes the border vector cyclic for K and the
    construction exact.
    """
    pts = np.sort(np.asarray(points, dtype=float))
    m = pts.size
    if m < 1:
        raise ValueError("need at least one prescribed point")
    if np.any(np.diff(pts) == 0.0):
        raise ValueError("prescribed points must be distinct")
    if weights is None:
        w = np.full(m, 1.0 / np.sqrt(m))
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (m,):
            raise ValueError("weights must match the number of points")
        if np.any(w <= 0.0):
            raise ValueError("weights must be strictly positive")
        w = w / np.linalg.norm(w)
    amat = np.zeros((m + 1, m + 1))
    amat[:m, :m] = np.diag(pts)
    amat[:m, m] = w
    amat[m, :m] = w
    bmat = np.zeros((m + 1, m + 1))
    bmat[m, m] = 1.0
    return RealizedPair(pts, w, SymmetricMatrix(amat), SymmetricMatrix(bmat))


def solve_t(pair: RealizedPair, lam: float) -> float:
    """The parameter t* with lam in spec(A + t* B), for lam outside P.

    t* = lam + sum_k beta_k^2 / (P_k - lam); at lam in P no finite t exists
    (those are precisely the protected points) and a PoleError is raised.
    """
    scale = max(1.0, float(np.max(np.abs(pair.points))))
    idx = int(np.argmin(np.abs(pair.points - lam)))
    if abs(pair.points[idx] - lam) <= 1e-10 * scale:
        raise PoleError(lam, float(pair.points[idx]))
    return float(lam + np.sum(pair.v**2 / (pair.points - lam)))


def realize_via_poles(mu, y=None, tol: float = DEFAULT_TOL) -> PolePair:
    """Diagonal A = diag(mu) with rank-one projection B = y y^T.

    Protected points are the roots of sum_k y_k^2 / (mu_k - lam): exactly one
    strictly inside each bounded gap between consecutive poles.  Each root is
    re-certified with the full-matrix residual before being reported.
    """
    mu = np.sort(np.asarray(mu, dtype=float))
    m = mu.size
    if m < 2:
        raise ValueError("need at least two poles")
    if np.any(np.diff(mu) == 0.0):
        raise ValueError("poles must be distinct")
    if y is None:
        yv = np.full(m, 1.0 / np.sqrt(m))
    else:
        yv = np.asarray(y, dtype=float)
        if yv.shape != (m,):
            raise ValueError("y must match the number of poles")
        if np.any(yv == 0.0):
            raise ValueError("every entry of y must be non-zero")
        yv = yv / np.linalg.norm(yv)
    a = SymmetricMatrix(np.diag(mu))
    b = SymmetricMatrix(np.outer(yv, yv))
    h = HerglotzScalar(mu, yv**2)
    roots = []
    residuals = []
    for gap in h.gaps():
        if not gap.bounded:
            continue
        root = gap_root(h, gap)
        if root is None:
            # All weights are positive, so every bounded gap has a root.
            raise AssertionError(f"missing root in gap {gap}")
        res = protection_residual(a, b, root)
        if res > tol:
            raise AssertionError(
                f"root {root} failed certification (residual {res:.3e})"
            )
        roots.append(root)
        residuals.append(res)
    return PolePair(mu, yv, a, b, np.asarray(roots), np.asarray(residuals))


def _det_sign(a: np.ndarray) -> float:
    sign, _ = np.linalg.slogdet(a)
    return float(sign)


def pencil_spectrum(
    a: SymmetricMatrix,
    b: SymmetricMatrix,
    search: tuple[float, float],
    resolution: int = 512,
) -> list[float]:
    """Real pencil spectrum {mu : det(A - mu B) = 0} inside ``search``.

    Scans det signs on a uniform grid and bisects every sign change to 1e-12
    relative.  Only sign-change roots are found; tangential even-multiplicity
    roots can be missed (documented limitation).  On the rank-one pairs built
    here the determinant is affine in mu, so sign-change detection is exact up
    to grid resolution.
    """
    lo, hi = float(search[0]), float(search[1])
    if not (lo < hi):
        raise ValueError("search interval must be non-degenerate")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    grid = np.linspace(lo, hi, resolution)
    signs = np.array([_det_sign(a.mat - mu * b.mat) for mu in grid])
    roots: list[float] = []
    for i, mu in enumerate(grid):
        if signs[i] == 0.0:
            roots.append(float(mu))
    for i in range(resolution - 1):
        if signs[i] * signs[i + 1] < 0.0:
            x0, x1 = float(grid[i]), float(grid[i + 1])
            s0 = signs[i]
            tol = 1e-12 * max(1.0, abs(x0), abs(x1))
            while x1 - x0 > tol:
                mid = 0.5 * (x0 + x1)
                smid = _det_sign(a.mat - mid * b.mat)
                if smid == 0.0:
                    x0 = x1 = mid
                    break
                if smid == s0:
                    x0 = mid
                else:
                    x1 = mid
            roots.append(0.5 * (x0 + x1))
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-10 * max(1.0, abs(r)):
            deduped.append(r)
    return deduped


def pencil_spectrum_log_scan(
    a: SymmetricMatrix,
    b: SymmetricMatrix,
    max_abs: float = 1e6,
    inner: float = 1e-2,
    resolution_per_chunk: int = 64,
) -> list[float]:
    """Pencil spectrum over [-max_abs, max_abs] in log-sized chunks.

    A uniform grid over a huge interval misses O(1)-sized features; scanning
    decade by decade (plus a small central interval) keeps the grid locally
    proportionate.
    """
    chunks: list[tuple[float, float]] = [(-inner, inner)]
    lo = inner
    while lo < max_abs:
        hi = min(lo * 10.0, max_abs)
        chunks.append((lo, hi))
        chunks.append((-hi, -lo))
        lo = hi
    roots: list[float] = []
    for interval in chunks:
        roots.extend(pencil_spectrum(a, b, interval, resolution_per_chunk))
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-10 * max(1.0, abs(r)):
            deduped.append(r)
    return deduped
