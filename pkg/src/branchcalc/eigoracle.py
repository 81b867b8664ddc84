"""Brute-force spectral oracle for desk-scale matrices.

Eigenvalues come from LAPACK's shifted-QR solver (``numpy.linalg.eigvals``)
with deflation; algebraic multiplicities and spectral projectors are then
recovered by resolvent quadrature over small circles around each eigenvalue
cluster.  Computing projectors by contour rather than eigenvector assembly
means defective (Jordan) clusters need no special path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contours import Circle, QuadratureConfig, build_contour, integrate
from .errors import ClusterOverlapError, NoConvergenceError
from .linalg import as_complex_matrix

MAX_ORACLE_DIM = 64

#: Minimum admissible enclosing-circle radius, relative to spectral radius.
MIN_CIRCLE_FRACTION = 1e-8


@dataclass(frozen=True)
class EigenCluster:
    """One eigenvalue cluster: location, algebraic multiplicity, projector."""

    eigenvalue: complex
    multiplicity: int
    projector: np.ndarray


def eigenvalues(a) -> np.ndarray:
    """Raw eigenvalues (shifted-QR); NoConvergenceError on LAPACK failure."""
    a = as_complex_matrix(a)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # iteration cap inside LAPACK
        raise NoConvergenceError(f"eigenvalue iteration failed: {exc}") from exc


def _cluster(vals: np.ndarray, tol: float) -> list[np.ndarray]:
    """Union-find grouping of eigenvalues closer than ``tol``."""
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(idx) for idx in groups.values()]


def eig_oracle(
    a,
    config: QuadratureConfig | None = None,
    cluster_tol: float | None = None,
) -> list[EigenCluster]:
    """Eigenvalue clusters with contour-quadrature spectral projectors.

    Projectors are ``(i/2pi) * integral of (A - z)^{-1} dz`` over small
    counterclockwise circles around each cluster; they satisfy P^2 = P,
    disjoint products vanish, and the sum over clusters is the identity.
    Raises :class:`ClusterOverlapError` when two clusters cannot be
    separated by disjoint circles of radius >= 1e-8 * spectral radius.
    """
    a = as_complex_matrix(a)
    n = a.shape[0]
    if n > MAX_ORACLE_DIM:
        raise ValueError(f"eig_oracle is desk-scale only (dim <= {MAX_ORACLE_DIM})")
    config = config or QuadratureConfig(rel_tol=1e-11)

    vals = eigenvalues(a)
    rho = float(np.max(np.abs(vals))) if n else 0.0
    scale = max(rho, 1.0)
    if cluster_tol is None:
        # Jordan blocks of size k scatter their eigenvalue by ~eps^(1/k);
        # 5e-5 * scale regroups blocks up to size ~4 at desk scale.
        cluster_tol = 5e-5 * scale
    groups = _cluster(vals, cluster_tol)
    centers = np.array([vals[idx].mean() for idx in groups])
    spreads = np.array(
        [float(np.max(np.abs(vals[idx] - c))) if len(idx) > 1 else 0.0
         for idx, c in zip(groups, centers)]
    )

    min_radius = MIN_CIRCLE_FRACTION * scale
    clusters = []
    eye = np.eye(n, dtype=complex)

    def resolvent(z_batch):
        shifted = a[None, :, :] - z_batch[:, None, None] * eye[None, :, :]
        return np.linalg.solve(shifted, np.broadcast_to(eye, shifted.shape))

    order = np.lexsort((centers.imag, centers.real))
    for gi in order:
        center = centers[gi]
        others = np.delete(np.arange(len(centers)), gi)
        if len(others):
            gap = float(
                np.min(np.abs(centers[others] - center) - spreads[others]) - spreads[gi]
            )
            upper = 0.45 * gap
        else:
            gap = np.inf
            upper = 0.75 * scale
        lower = max(4.0 * spreads[gi], min_radius)
        if upper < lower:
            raise ClusterOverlapError(
                f"cannot separate cluster at {center:.6g} from its neighbours "
                f"(gap {gap:.3e}, needed radius {lower:.3e})"
            )
        target = 0.25 * gap if np.isfinite(gap) else 0.25 * scale
        radius = min(upper, max(lower, target))

        circle = build_contour(Circle(center, radius), config)
        proj = (1j / (2.0 * np.pi)) * integrate(circle, resolvent, config, vectorized=True)
        mult = int(round(proj.trace().real))
        clusters.append(EigenCluster(complex(center), mult, proj))
    return clusters
