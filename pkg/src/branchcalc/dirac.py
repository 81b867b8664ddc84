"""First-order Dirac-type system on the half-space, at frozen tangential
covariable.

The 4x4 symbol has eigenvalues ``+-i |xi|``, so the system is
parameter-elliptic on every ray off the imaginary axis and the upper
half-plane spectral projection symbol is a residue at ``i |xi|``.  The
boundary realization imposes ``u1 + u3 = u2 + u4 = 0`` at ``x_n = 0``; its
resolvent splits into the whole-line kernel plus a singular-Green
correction proportional to ``exp(-sigma (x_n + y_n))`` with
``sigma = (|xi'|^2 + lambda^2)^(1/2)``.  Integrating that correction over
real ``lambda`` yields the sector projection's boundary kernel, whose
entries blow up logarithmically as ``x_n + y_n -> 0`` -- the example of a
projection falling outside the standard boundary calculus.  The blow-up
certificate is :func:`divergence_probe`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import exp1

from .contours import Circle, QuadratureConfig, build_contour, integrate
from .errors import BranchViolationError, NoConvergenceError, PoleHitError
from .halfline import HalfLineGrid, SymbolKernel, TangentialCovariable, as_covariable

TWO_PI = 2.0 * np.pi

#: Normal-covariable coefficient matrix of the symbol (d p / d xi_4).
GAMMA_N = np.array(
    [[0, 0, -1, 0],
     [0, 0, 0, -1],
     [1, 0, 0, 0],
     [0, 1, 0, 0]], dtype=complex
)

#: Boundary condition rows: u1 + u3 = u2 + u4 = 0 at x_n = 0.
TRACE_CONDITION = np.array([[1, 0, 1, 0], [0, 1, 0, 1]], dtype=complex)

#: Margin for rejecting lambda too close to the cuts +-i [|xi'|, inf).
SIGMA_MARGIN = 1e-6


def dirac_symbol(xi) -> np.ndarray:
    """The 4x4 first-order symbol ``p(xi)`` with ``p(xi)^2 = -|xi|^2 I``."""
    x1, x2, x3, x4 = np.asarray(xi, dtype=float)
    return np.array(
        [[0, 0, 1j * x1 - x4, x2 + 1j * x3],
         [0, 0, -x2 + 1j * x3, -1j * x1 - x4],
         [1j * x1 + x4, x2 + 1j * x3, 0, 0],
         [-x2 + 1j * x3, -1j * x1 + x4, 0, 0]], dtype=complex
    )


def dirac_resolvent_symbol(xi, lam) -> np.ndarray:
    """Closed-form resolvent symbol ``(p(xi) - lambda)^(-1)``.

    Poles sit at ``lambda = +-i |xi|``; hitting one raises
    :class:`PoleHitError`.
    """
    xi = np.asarray(xi, dtype=float)
    lam = complex(lam)
    norm2 = float(np.dot(xi, xi))
    den = norm2 + lam**2
    if abs(den) <= 1e-14 * max(1.0, norm2 + abs(lam) ** 2):
        raise PoleHitError(f"lambda = {lam} hits a pole +-i|xi| = +-{np.sqrt(norm2)}i")
    x1, x2, x3, x4 = xi
    return np.array(
        [[-lam, 0, -1j * x1 + x4, -x2 - 1j * x3],
         [0, -lam, x2 - 1j * x3, 1j * x1 + x4],
         [-1j * x1 - x4, -x2 - 1j * x3, -lam, 0],
         [x2 - 1j * x3, 1j * x1 - x4, 0, -lam]], dtype=complex
    ) / den


@dataclass(frozen=True)
class ProjectionSymbol:
    """Upper half-plane projection symbol by both routes."""

    closed: np.ndarray
    quadrature: np.ndarray

    @property
    def route_gap(self) -> float:
        return float(np.max(np.abs(self.closed - self.quadrature)))


def dirac_projection_symbol(xi, config: QuadratureConfig | None = None) -> ProjectionSymbol:
    """Projection symbol onto the ``+i|xi|`` eigenspace, closed and quadrature.

    The closed form is minus the resolvent-symbol residue at ``i |xi|``;
    the quadrature route integrates the resolvent symbol over a small
    counterclockwise circle around that pole, weighted with ``i/(2 pi)``.
    Requires ``xi != 0``.
    """
    xi = np.asarray(xi, dtype=float)
    norm = float(np.linalg.norm(xi))
    if norm == 0.0:
        raise ValueError("projection symbol requires xi != 0")
    x1, x2, x3, x4 = xi
    closed = np.array(
        [[norm, 0, x1 + 1j * x4, -1j * x2 + x3],
         [0, norm, 1j * x2 + x3, -x1 + 1j * x4],
         [x1 - 1j * x4, -1j * x2 + x3, norm, 0],
         [1j * x2 + x3, -x1 - 1j * x4, 0, norm]], dtype=complex
    ) / (2.0 * norm)

    config = config or QuadratureConfig(rel_tol=1e-11)
    circle = build_contour(Circle(1j * norm, 0.5 * norm), config)

    def sampler(lams):
        return np.stack([dirac_resolvent_symbol(xi, z) for z in lams])

    quad = (1j / TWO_PI) * integrate(circle, sampler, config, vectorized=True)
    return ProjectionSymbol(closed=closed, quadrature=quad)


def sigma_branch(xi_prime, lam) -> complex:
    """``sigma = (|xi'|^2 + lambda^2)^(1/2)`` with ``Re sigma > 0``.

    Holomorphic off the cuts ``+-i [|xi'|, inf)``; samples within
    ``SIGMA_MARGIN`` of them (where the real part degenerates) raise
    :class:`BranchViolationError`.
    """
    xi = as_covariable(xi_prime)
    lam = complex(lam)
    sigma = np.sqrt(xi.homogeneous_norm**2 + lam**2 + 0j)
    if sigma.real <= SIGMA_MARGIN * max(1.0, abs(sigma)):
        raise BranchViolationError(
            f"Re sigma = {sigma.real:.3e} too small: lambda = {lam} is within "
            f"the margin of the cuts +-i[{xi.homogeneous_norm:g}, inf)"
        )
    return complex(sigma)


def _correction_numerator(xi: TangentialCovariable, lam: complex, sigma: complex) -> np.ndarray:
    x1, x2, x3 = (list(xi.xi_prime) + [0.0, 0.0])[:3]
    return np.array(
        [[-1j * x1 + 1j * sigma, -x2 - 1j * x3, -lam, 0],
         [x2 - 1j * x3, 1j * x1 + 1j * sigma, 0, -lam],
         [-lam, 0, -1j * x1 - 1j * sigma, -x2 - 1j * x3],
         [0, -lam, x2 - 1j * x3, 1j * x1 - 1j * sigma]], dtype=complex
    )


def dirac_sg_kernel(xi_prime, lam, grid: HalfLineGrid) -> SymbolKernel:
    """Singular-Green correction kernel of the boundary realization.

    ``g(x, y) = -(1/(2 sigma)) * N(xi', lambda, sigma) * exp(-sigma (x+y))``
    where the numerator matrix has the constant/linear-in-lambda/sigma
    block structure of the model system.  The overall sign is pinned by
    the boundary condition: the whole-line kernel plus this correction
    must annihilate ``TRACE_CONDITION`` rows at ``x = 0``, which the tests
    verify against an independent two-point BVP solve.
    """
    xi = as_covariable(xi_prime)
    lam = complex(lam)
    sigma = sigma_branch(xi, lam)
    numerator = _correction_numerator(xi, lam, sigma)
    coeff = -numerator / (2.0 * sigma)

    def fn(x, y):
        envelope = np.exp(-sigma * (np.asarray(x) + np.asarray(y)))
        return envelope[..., None, None] * coeff

    xg = grid.nodes[:, None]
    yg = grid.nodes[None, :]
    return SymbolKernel(grid, xi, fn(xg, yg),
                        metadata={"family": "dirac-sg", "lam": lam, "sigma": sigma},
                        fn=fn)


def dirac_free_kernel(xi_prime, lam):
    """Whole-line resolvent kernel ``K(x - y)`` of the model system.

    ``K(z) = -((p'(xi') + lambda) / (2 sigma) + (i sgn z / 2) Gamma_n)
    * exp(-sigma |z|)``; it solves the symbol ODE off the diagonal and has
    the jump ``K(0+) - K(0-) = -i Gamma_n``.
    """
    xi = as_covariable(xi_prime)
    lam = complex(lam)
    sigma = sigma_branch(xi, lam)
    full_xi = np.zeros(4)
    full_xi[: xi.xi_prime.size] = xi.xi_prime
    pprime = dirac_symbol(full_xi)
    even = -(pprime + lam * np.eye(4)) / (2.0 * sigma)

    def fn(x, y):
        z = np.asarray(x) - np.asarray(y)
        envelope = np.exp(-sigma * np.abs(z))
        odd = np.sign(z)[..., None, None] * (-0.5j) * GAMMA_N
        return envelope[..., None, None] * (even + odd)

    return fn


@dataclass(frozen=True)
class BoundaryCheck:
    """Agreement between the kernel solution and the BVP collocation oracle."""

    bc_residual: float
    oracle_gap: float
    solution_scale: float


def boundary_condition_check(xi_prime, lam, x_max: float = 14.0,
                             n_cells: int = 1200) -> BoundaryCheck:
    """Solve the model boundary problem two ways and compare.

    Route one applies the closed-form kernel (whole-line part plus
    singular-Green correction) to a smooth decaying forcing by panel
    quadrature.  Route two is an independent box-scheme two-point BVP
    solve with the trace condition at 0 and the decay condition (no
    growing modes) at ``x_max``, Richardson-extrapolated.  Returns the
    boundary-condition residual of the kernel solution and the sup gap
    between the routes.
    """
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    xi = as_covariable(xi_prime)
    lam = complex(lam)
    sigma = sigma_branch(xi, lam)
    full_xi = np.zeros(4)
    full_xi[: xi.xi_prime.size] = xi.xi_prime
    pprime = dirac_symbol(full_xi)

    rate = 0.7
    amplitude = np.array([1.0, 0.5 - 0.2j, -0.3, 0.8j])

    def forcing(y):
        return np.exp(-rate * np.asarray(y))[..., None] * amplitude

    free_fn = dirac_free_kernel(xi, lam)
    grid = HalfLineGrid(x_max, n_panels=48, nodes_per_panel=10, grading=None)
    sg = dirac_sg_kernel(xi, lam, grid)

    def kernel_solution(x):
        # split the y-quadrature at y = x where the free kernel has a kink
        total = np.zeros(4, dtype=complex)
        g, gw = np.polynomial.legendre.leggauss(12)
        splits = np.unique(np.concatenate((grid.edges, [x])))
        for lo, hi in zip(splits[:-1], splits[1:]):
            if hi <= lo:
                continue
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            y = mid + half * g
            w = half * gw
            kern = free_fn(np.full_like(y, x), y) + sg.fn(np.full_like(y, x), y)
            total += np.einsum("k,kab,kb->a", w, kern, forcing(y))
        return total

    bc_residual = float(np.max(np.abs(TRACE_CONDITION @ kernel_solution(0.0))))

    # growing-mode rows at x_max from the layer matrix C = i Gamma_n (p' - lam)
    layer = 1j * GAMMA_N @ (pprime - lam * np.eye(4))
    w, v = np.linalg.eig(layer)
    v_inv = np.linalg.inv(v)
    grow_rows = v_inv[np.abs(w - sigma) < 1e-8 * max(1.0, abs(sigma))]

    def bvp_solve(cells):
        h = x_max / cells
        xs = np.linspace(0.0, x_max, cells + 1)
        n_unknown = 4 * (cells + 1)
        rows, cols, vals = [], [], []
        rhs = np.zeros(n_unknown, dtype=complex)
        # box scheme: -i Gamma_n (u_{j+1}-u_j)/h + (p'-lam)(u_{j+1}+u_j)/2 = f(mid)
        left = 1j * GAMMA_N / h + 0.5 * (pprime - lam * np.eye(4))
        right = -1j * GAMMA_N / h + 0.5 * (pprime - lam * np.eye(4))
        for j in range(cells):
            mid = 0.5 * (xs[j] + xs[j + 1])
            f_mid = forcing(mid)
            for a in range(4):
                r = 4 * j + a
                rhs[r] = f_mid[a]
                for b in range(4):
                    if left[a, b] != 0:
                        rows.append(r); cols.append(4 * j + b); vals.append(left[a, b])
                    if right[a, b] != 0:
                        rows.append(r); cols.append(4 * (j + 1) + b); vals.append(right[a, b])
        base = 4 * cells
        for i in range(2):
            for b in range(4):
                rows.append(base + i); cols.append(b)
                vals.append(TRACE_CONDITION[i, b])
                rows.append(base + 2 + i); cols.append(4 * cells + b)
                vals.append(grow_rows[i, b])
        matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n_unknown, n_unknown))
        return xs, spla.spsolve(matrix, rhs).reshape(cells + 1, 4)

    xs1, u1 = bvp_solve(n_cells)
    xs2, u2 = bvp_solve(2 * n_cells)
    u_extrap = (4.0 * u2[::2] - u1) / 3.0  # second-order box scheme

    probe_idx = [0, n_cells // 8, n_cells // 3, n_cells // 2]
    gap = 0.0
    scale = float(np.max(np.abs(u_extrap)))
    for idx in probe_idx:
        diff = kernel_solution(xs1[idx]) - u_extrap[idx]
        gap = max(gap, float(np.max(np.abs(diff))))
    return BoundaryCheck(bc_residual=bc_residual, oracle_gap=gap, solution_scale=scale)


def dirac_sectorial_kernel(xi_prime, grid: HalfLineGrid,
                           config: QuadratureConfig | None = None) -> SymbolKernel:
    """Upper half-plane projection boundary kernel by real-line quadrature.

    The sectorial contour is homotopic to the real lambda-line here, so
    the kernel is ``(i/2pi) * integral over t of g(x, y, xi', t)``, with
    the exponential factor ``exp(-sigma(t) (x+y))`` providing the cutoff.
    Entries are finite for ``x + y > 0`` but grow like ``log(1/(x+y))``
    toward the diagonal corner; see :func:`divergence_probe`.
    """
    xi = as_covariable(xi_prime)
    config = config or QuadratureConfig()
    a = xi.homogeneous_norm
    if a <= 0:
        raise ValueError("sectorial kernel needs |xi'| > 0")

    x = grid.nodes
    iu, ju = np.triu_indices(x.size)
    r = x[iu] + x[ju]
    r_min, r_max = float(np.min(r)), float(np.max(r))
    t_cap = np.sqrt(max((46.0 / r_min) ** 2 - a * a, 1.0))

    def panel_edges():
        edges = [0.0, 0.5 * a, a]
        width = max(0.5 * a, 4.0 / r_max)
        t = a
        while t < t_cap:
            t = t + width
            edges.append(min(t, t_cap))
            width *= 1.5
        return np.asarray(edges)

    def evaluate(nodes_per_panel, points):
        g, gw = np.polynomial.legendre.leggauss(nodes_per_panel)
        total = np.zeros((points.size, 4, 4), dtype=complex)
        edges = panel_edges()
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            t = mid + half * g
            w = half * gw
            sig = np.sqrt(a * a + t * t)
            # +t and -t nodes together; the lambda-odd block integrates to 0
            for tt, ss in ((t, sig), (-t, sig)):
                numer = np.stack(
                    [_correction_numerator(xi, complex(ti), complex(si))
                     for ti, si in zip(tt, ss)]
                )
                coeff = -numer / (2.0 * sig)[:, None, None] * w[:, None, None]
                total += np.einsum("pk,kab->pab", np.exp(-np.outer(points, sig)), coeff)
        return (1j / TWO_PI) * total

    fine = evaluate(config.nodes_per_panel + 4, r)
    probe = r[:: max(1, r.size // 40)]
    coarse = evaluate(config.nodes_per_panel, probe)
    gap = float(np.max(np.abs(fine[:: max(1, r.size // 40)] - coarse)))
    if gap > max(100 * config.rel_tol * float(np.max(np.abs(fine))), 1e-12):
        raise NoConvergenceError(
            f"real-line kernel quadrature rules disagree by {gap:.3e}", diff=gap
        )
    values = np.empty((x.size, x.size, 4, 4), dtype=complex)
    values[iu, ju] = fine
    values[ju, iu] = fine
    return SymbolKernel(grid, xi, values,
                        metadata={"family": "dirac-sectorial"}, fn=None)


def dirac_sectorial_closed(xi_prime, r):
    """Bessel closed form of the sectorial boundary kernel (test oracle).

    ``-(i/2pi) [M_const K0(|xi'| r) + i |xi'| M_sigma K1(|xi'| r)]`` with
    the constant and sigma-linear blocks of the correction numerator.
    """
    from scipy.special import k0, k1

    xi = as_covariable(xi_prime)
    a = xi.homogeneous_norm
    x1, x2, x3 = (list(xi.xi_prime) + [0.0, 0.0])[:3]
    m_const = np.array(
        [[-1j * x1, -x2 - 1j * x3, 0, 0],
         [x2 - 1j * x3, 1j * x1, 0, 0],
         [0, 0, -1j * x1, -x2 - 1j * x3],
         [0, 0, x2 - 1j * x3, 1j * x1]], dtype=complex
    )
    m_sigma = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    r = np.asarray(r, dtype=float)
    return -(1j / TWO_PI) * (
        k0(a * r)[..., None, None] * m_const
        + 1j * a * k1(a * r)[..., None, None] * m_sigma
    )


@dataclass(frozen=True)
class DivergenceProbe:
    """Certificate of logarithmic blow-up of the projection kernel entry."""

    a: float
    r_list: np.ndarray
    f_values: np.ndarray
    slope: float
    decade_increments: np.ndarray
    lower_bound_ok: bool
    log_divergent: bool


def divergence_probe(xi_prime, r_list, nodes_per_panel: int = 16) -> DivergenceProbe:
    """Quadrature study of ``f(r) = integral (a^2+t^2)^(-1/2) e^{-r sqrt(a^2+t^2)} dt``.

    Substituting ``t = a sinh v`` turns the half-line integral into
    ``integral of exp(-r a cosh v) dv``, which is integrated on panels up
    to the cutoff.  The probe fits the slope of ``f`` against
    ``log(1/r)`` (the entry diverges like ``log(1/r)``, slope -> 1),
    reports per-decade increments (-> log 10), and checks the pointwise
    exponential-integral lower bound ``f(r) >= E1(a r)``.
    """
    xi = as_covariable(xi_prime)
    a = xi.homogeneous_norm
    if a <= 0:
        raise ValueError("divergence probe needs |xi'| > 0")
    r_list = np.asarray(sorted(r_list, reverse=True), dtype=float)

    g, gw = np.polynomial.legendre.leggauss(nodes_per_panel)

    def f_of(r):
        v_max = np.arccosh(46.0 / (r * a)) if r * a < 46.0 else 1.0
        edges = np.linspace(0.0, v_max, max(6, int(np.ceil(v_max * 3))) + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        v = (mid[:, None] + half[:, None] * g[None, :]).ravel()
        w = (half[:, None] * gw[None, :]).ravel()
        return float(np.sum(w * np.exp(-r * a * np.cosh(v))))

    f_values = np.array([f_of(r) for r in r_list])
    logs = np.log(1.0 / r_list)
    design = np.stack([np.ones_like(logs), logs], axis=1)
    (_, slope), *_ = np.linalg.lstsq(design, f_values, rcond=None)

    increments = np.diff(f_values)
    lower_ok = bool(np.all(f_values >= exp1(a * r_list) - 1e-12))
    log_divergent = bool(
        increments.size and np.all(increments > 0.8 * np.diff(logs))
    )
    return DivergenceProbe(
        a=a,
        r_list=r_list,
        f_values=f_values,
        slope=float(slope),
        decade_increments=increments,
        lower_bound_ok=lower_ok,
        log_divergent=log_divergent,
    )


def probe_report(probe: DivergenceProbe) -> dict:
    """JSON-ready probe summary."""
    return {
        "a": probe.a,
        "r_list": [float(r) for r in probe.r_list],
        "f_values": [float(v) for v in probe.f_values],
        "slope": probe.slope,
        "lower_bound_ok": probe.lower_bound_ok,
    }
