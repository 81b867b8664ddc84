"""Holomorphic functional calculus for matrices via contour quadrature.

Sectorial spectral projections and branch-cut logarithms are computed as
resolvent integrals over the contours in :mod:`branchcalc.contours`.  Each
operation evaluates its defining integral on a family of truncation radii
and removes the algebraic tail (powers of 1/R, with log(R)/R terms for the
logarithm) by least-squares extrapolation; the extrapolation increment is
reported as the truncation estimate.

Two independent routes exist for every projection:

* the direct sectorial integral (with its equivalent improper-integral
  form, computed and compared on every call), and
* the difference of two branch logarithms divided by ``-2*pi*i``,

plus a brute-force eigenprojector sum at desk scale.  Tests pit all three
against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .branches import SectorPair, arg_branch, as_sector
from .contours import (
    Contour,
    LaurentLoop,
    QuadratureConfig,
    RadialLeg,
    Sectorial,
    build_contour,
    integrate,
)
from .eigoracle import eig_oracle, eigenvalues
from .errors import (
    FormsDisagreeError,
    OnCutError,
    SingularOperatorError,
    SpectrumOnCutError,
)
from .linalg import as_complex_matrix, opnorm2

TWO_PI = 2.0 * np.pi

#: Default angular margin between spectrum and cut rays, radians.  Below
#: this the quadrature error bounds degrade like 1/margin.
ANGLE_MARGIN = 1e-3

#: Relative threshold under which an eigenvalue counts as zero.
ZERO_TOL = 1e-10

#: Base truncation radius, as a multiple of the spectral scale.  The tail
#: left after extrapolation over doubled radii is O(log R / R^3).
TRUNCATION_FACTOR = 1e3

DEFAULT_CONFIG = QuadratureConfig(nodes_per_panel=12, max_panel_doublings=7, rel_tol=1e-10)


@dataclass(frozen=True)
class CalculusReport:
    """Result of a contour-calculus operation with its error bookkeeping."""

    value: np.ndarray
    contour: object
    quadrature_residual: float
    truncation_estimate: float


def _spectral_layout(a):
    vals = eigenvalues(a)
    rho = float(np.max(np.abs(vals)))
    scale = max(rho, 1.0)
    nonzero = vals[np.abs(vals) > ZERO_TOL * scale]
    return vals, scale, nonzero


def _check_cut_margin(vals, scale, cut_angles, margin):
    nonzero = vals[np.abs(vals) > ZERO_TOL * scale]
    for theta in cut_angles:
        offset = np.mod(np.angle(nonzero) - theta, TWO_PI)
        dist = np.minimum(offset, TWO_PI - offset)
        if len(dist) and np.min(dist) <= margin:
            raise SpectrumOnCutError(
                f"eigenvalue within {margin:g} rad of the cut at angle {theta:g}"
            )


def _radii(nonzero, scale):
    """Inner radius below the nonzero spectrum, base truncation radius above."""
    if len(nonzero):
        r0 = 0.5 * float(np.min(np.abs(nonzero)))
    else:
        r0 = 0.5 * scale
    return r0, TRUNCATION_FACTOR * scale


def _resolvent_sampler(a):
    a = np.asarray(a, dtype=complex)
    eye = np.eye(a.shape[0], dtype=complex)

    def sample(lams):
        shifted = a[None, :, :] - lams[:, None, None] * eye[None, :, :]
        return np.linalg.solve(shifted, np.broadcast_to(eye, shifted.shape))

    return sample


def _extrapolate(values, radii, tail_terms):
    """Remove algebraic truncation tails by least squares.

    Fits ``value(R) = limit + sum_j c_j * tail_terms[j](R)`` over the given
    radii and returns ``(limit, increment)`` where the increment measures
    how much extrapolation moved the finest-radius value.
    """
    rows = [np.concatenate(([1.0], [t(r) for t in tail_terms])) for r in radii]
    design = np.array(rows)
    col_scale = np.max(np.abs(design), axis=0)
    design = design / col_scale
    stack = np.stack([np.asarray(v).ravel() for v in values])
    coef, *_ = np.linalg.lstsq(design, stack, rcond=None)
    limit = (coef[0] / col_scale[0]).reshape(np.shape(values[-1]))
    increment = float(np.max(np.abs(limit - values[-1])))
    return limit, increment


_SECTOR_TAILS = (lambda r: 1.0 / r, lambda r: 1.0 / r**2)
_LOG_TAILS = (
    lambda r: np.log(r) / r,
    lambda r: 1.0 / r,
    lambda r: np.log(r) / r**2,
    lambda r: 1.0 / r**2,
)


def sectorial_projection(a, sector, config: QuadratureConfig | None = None,
                         margin: float = ANGLE_MARGIN) -> CalculusReport:
    """Spectral projection onto eigenvalue arguments inside ``sector``.

    Evaluates ``(i/2pi) * integral of lambda^{-1} A (A-lambda)^{-1}`` over
    the truncated sectorial contour, together with the equivalent improper
    form ``(i/2pi) * integral of (A-lambda)^{-1} + (phi-theta)/(2pi) * I``.
    The two must agree; a larger discrepancy means bad contour parameters
    and raises :class:`FormsDisagreeError`.  The first form is returned.
    """
    a = as_complex_matrix(a)
    sector = as_sector(sector)
    config = config or DEFAULT_CONFIG
    vals, scale, nonzero = _spectral_layout(a)
    _check_cut_margin(vals, scale, (sector.theta, sector.phi), margin)
    r0, r_base = _radii(nonzero, scale)

    eye = np.eye(a.shape[0], dtype=complex)
    sample = _resolvent_sampler(a)
    prefactor = 1j / TWO_PI
    offset = (sector.opening / TWO_PI) * eye

    radii = [r_base, 2.0 * r_base, 4.0 * r_base]
    direct, improper = [], []
    residual = 0.0
    contour_kind = None
    for radius in radii:
        contour_kind = Sectorial(sector.theta, sector.phi, r0, radius)
        contour = build_contour(contour_kind, config)

        def both(lams):
            x = sample(lams)
            ax = np.einsum("ij,kjl->kil", a, x)
            form_direct = ax / lams[:, None, None]
            return np.stack([form_direct, x], axis=1)

        stacked, info = integrate(contour, both, config, vectorized=True, full_output=True)
        residual = max(residual, info["residual"])
        direct.append(prefactor * stacked[0])
        improper.append(prefactor * stacked[1] + offset)

    value, inc_direct = _extrapolate(direct, radii, _SECTOR_TAILS)
    other, inc_improper = _extrapolate(improper, radii, _SECTOR_TAILS)

    disagreement = opnorm2(value - other) / max(opnorm2(value), 1.0)
    if disagreement > 10.0 * config.rel_tol:
        raise FormsDisagreeError(
            f"sectorial projection forms differ by {disagreement:.3e} "
            f"(> 10 * rel_tol = {10 * config.rel_tol:.1e}); contour parameters "
            f"r0={r0:.3g}, R={radii[0]:.3g} are unsuitable",
            difference=disagreement,
        )
    return CalculusReport(
        value=value,
        contour=contour_kind,
        quadrature_residual=residual,
        truncation_estimate=max(inc_direct, inc_improper, disagreement),
    )


def log_theta(a, theta: float, config: QuadratureConfig | None = None,
              margin: float = ANGLE_MARGIN) -> CalculusReport:
    """Branch-cut logarithm of an invertible matrix.

    Computes ``(i/2pi) * integral of lambda^{-1} log lambda * A (A-lambda)^{-1}``
    over the truncated Laurent loop at cut angle ``theta``, taking the
    boundary values of the logarithm on the two legs that lie on the cut.
    Requires invertibility: a zero eigenvalue raises
    :class:`SingularOperatorError`.
    """
    a = as_complex_matrix(a)
    config = config or DEFAULT_CONFIG
    vals, scale, nonzero = _spectral_layout(a)
    if len(nonzero) < len(vals):
        raise SingularOperatorError("log_theta requires an invertible matrix")
    _check_cut_margin(vals, scale, (theta,), margin)
    r0, r_base = _radii(nonzero, scale)

    sample = _resolvent_sampler(a)
    prefactor = 1j / TWO_PI

    radii = [r_base * 2.0**k for k in range(5)]
    results = []
    residual = 0.0
    contour_kind = None
    for radius in radii:
        contour_kind = LaurentLoop(theta, r0, radius)
        contour = build_contour(contour_kind, config)

        def integrand(lams, args):
            x = sample(lams)
            ax = np.einsum("ij,kjl->kil", a, x)
            logs = np.log(np.abs(lams)) + 1j * args
            return ax * (logs / lams)[:, None, None]

        value, info = integrate(
            contour, integrand, config, vectorized=True, with_arg=True, full_output=True
        )
        residual = max(residual, info["residual"])
        results.append(prefactor * value)

    value, increment = _extrapolate(results, radii, _LOG_TAILS)
    return CalculusReport(
        value=value,
        contour=contour_kind,
        quadrature_residual=residual,
        truncation_estimate=increment,
    )


def log_difference_projection(a, sector, config: QuadratureConfig | None = None,
                              margin: float = ANGLE_MARGIN) -> CalculusReport:
    """Projection from the two-logarithm route.

    Returns ``(i/2pi) * (log_theta(A) - log_phi(A))``, which must agree
    with :func:`sectorial_projection` on admissible inputs; that agreement
    is the cross-check exercised by the tests, not enforced here.
    """
    sector = as_sector(sector)
    top = log_theta(a, sector.theta, config, margin)
    bottom = log_theta(a, sector.phi, config, margin)
    prefactor = 1j / TWO_PI
    return CalculusReport(
        value=prefactor * (top.value - bottom.value),
        contour=(top.contour, bottom.contour),
        quadrature_residual=max(top.quadrature_residual, bottom.quadrature_residual),
        truncation_estimate=top.truncation_estimate + bottom.truncation_estimate,
    )


def projection_eigoracle(a, sector) -> np.ndarray:
    """Brute-force reference projection: sum of eigenprojectors in sector.

    Sums the spectral projectors of the eigenvalue clusters whose argument,
    reduced to ``(theta, theta + 2*pi)``, lies strictly inside the sector.
    Zero eigenvalues are always excluded (the projection's kernel contains
    the generalized null space).
    """
    a = as_complex_matrix(a)
    sector = as_sector(sector)
    clusters = eig_oracle(a)
    scale = max(max(abs(c.eigenvalue) for c in clusters), 1.0)
    total = np.zeros_like(a)
    for cluster in clusters:
        if abs(cluster.eigenvalue) <= ZERO_TOL * scale:
            continue
        try:
            reduced = arg_branch(cluster.eigenvalue, sector.theta) + TWO_PI
        except OnCutError as exc:
            raise SpectrumOnCutError(str(exc)) from exc
        if sector.theta < reduced < sector.phi:
            total = total + cluster.projector
    return total


def verify_keyhole(f, sector, config: QuadratureConfig | None = None, *,
                   r0: float = 0.05, radius: float = 1e3,
                   vectorized: bool = False) -> float:
    """Residual of the double-keyhole identity for a single-valued ``f``.

    Computes ``||int_{loop(theta)} log f - int_{loop(phi)} log f
    + 2*pi*i * int_{sector} f||`` with all three contours truncated at the
    same radii, where the combination is exactly zero for integrable
    single-valued integrands; what remains is pure quadrature error.
    """
    sector = as_sector(sector)
    config = config or DEFAULT_CONFIG

    def log_weighted(lams, args):
        base = f(lams) if vectorized else np.asarray([f(z) for z in lams])
        logs = np.log(np.abs(lams)) + 1j * args
        return base * logs.reshape((-1,) + (1,) * (base.ndim - 1))

    def plain(lams, args):
        return f(lams) if vectorized else np.asarray([f(z) for z in lams])

    loop_top = build_contour(LaurentLoop(sector.theta, r0, radius), config)
    loop_bottom = build_contour(LaurentLoop(sector.phi, r0, radius), config)
    gamma = build_contour(Sectorial(sector.theta, sector.phi, r0, radius), config)

    i_top = integrate(loop_top, log_weighted, config, vectorized=True, with_arg=True)
    i_bottom = integrate(loop_bottom, log_weighted, config, vectorized=True, with_arg=True)
    i_sector = integrate(gamma, plain, config, vectorized=True, with_arg=True)

    combo = i_top - i_bottom + 2j * np.pi * i_sector
    return _norm_any(combo)


def _norm_any(value) -> float:
    value = np.asarray(value)
    if value.ndim == 2 and value.shape[0] == value.shape[1]:
        return opnorm2(value)
    return float(np.max(np.abs(value))) if value.ndim else float(abs(value))


def loop_limit_closed_form(s: float, theta: float, n: float) -> complex:
    """Endpoint evaluation of the antiderivative of ``lam^{-s-1} log lam``.

    The truncated Laurent loop at cut angle ``theta`` starts at
    ``n * exp(i*theta)`` and ends at ``n * exp(i*(theta - 2*pi))`` on the
    other side of the cut; the integral equals the antiderivative
    ``-(1/s^2) lam^{-s} (1 + s log lam)`` at the end point minus the start
    point, with the branch's boundary arguments.  Both terms vanish like
    ``n^{-s} log n`` as ``n`` grows.
    """

    def anti(arg):
        log_lam = np.log(n) + 1j * arg
        return -(1.0 / s**2) * np.exp(-s * log_lam) * (1.0 + s * log_lam)

    return complex(anti(theta - TWO_PI) - anti(theta))


def truncated_loop_limit_check(s: float, theta: float, n_list,
                               r0: float = 0.5,
                               config: QuadratureConfig | None = None) -> list[complex]:
    """Quadrature of ``lam^{-s-1} log lam`` over truncated loops.

    Returns one value per truncation radius in ``n_list``; each matches
    :func:`loop_limit_closed_form` to quadrature accuracy and the sequence
    tends to zero as the truncation radius grows (at fixed ``s > 0``).
    """
    if s <= 0:
        raise ValueError("s must be positive")
    config = config or DEFAULT_CONFIG

    def integrand(lams, args):
        logs = np.log(np.abs(lams)) + 1j * args
        return np.exp((-s - 1.0) * logs) * logs

    out = []
    for n in n_list:
        loop = build_contour(LaurentLoop(theta, r0, float(n)), config)
        out.append(complex(integrate(loop, integrand, config, vectorized=True, with_arg=True)))
    return out


def segment_pair_contour(theta: float, r_inner: float, r_outer: float,
                         config: QuadratureConfig | None = None) -> Contour:
    """The two radial extensions of a Laurent loop between two truncations.

    Integrating over this contour gives exactly the difference between the
    loops truncated at ``r_outer`` and ``r_inner`` (additivity of the
    integral over legs).
    """
    legs = (
        RadialLeg(theta, r_outer, r_inner),
        RadialLeg(theta - TWO_PI, r_inner, r_outer),
    )
    return Contour(("segment-pair", theta, r_inner, r_outer), legs,
                   config or DEFAULT_CONFIG)
