"""Resolvent-trace expansions and zeta/residue invariants of model realizations.

A model realization is described either by an analytic eigenvalue law
``lambda_k = c * k^p`` (plus optional zero modes), by an explicit finite
spectrum, or by a matrix.  Traces of resolvent powers are summed with
Euler-Maclaurin tail corrections so the large-``lambda`` expansion
coefficients can be fitted over several decades; the basic zeta value is
the coefficient of ``(-lambda)^{-N}`` in that expansion and the residue of
the log-realization is ``-m`` times it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IllConditionedFitError,
    SpectrumHitError,
    TailUnknownError,
)
from .linalg import as_complex_matrix, lu_solve


@dataclass
class ModelRealization:
    """Spectral or matrix description of a boundary realization.

    ``power_law = (c, p)`` declares the analytic eigenvalue law
    ``lambda_k = c * k**p`` for ``k >= 1`` (p in {1, 2} supported by the
    tail machinery); ``nu0`` appends that many zero modes.  Explicit
    spectra must be sorted ascending; ``spectrum_complete=False`` marks a
    truncation without a tail law, usable only when the tail provably does
    not matter.  ``zeta_at_zero`` optionally supplies the analytic value
    of the spectral zeta function at 0 for cross-checks.
    """

    order_m: int
    dim_n: int
    nu0: int = 0
    power_law: tuple | None = None
    spectrum: np.ndarray | None = None
    spectrum_complete: bool = True
    matrix: np.ndarray | None = None
    zeta_at_zero: float | None = None

    def __post_init__(self):
        if self.order_m <= 0 or self.dim_n <= 0:
            raise ValueError("order and dimension must be positive")
        if self.nu0 < 0:
            raise ValueError("nu0 must be nonnegative")
        sources = sum(x is not None for x in (self.power_law, self.spectrum, self.matrix))
        if sources != 1:
            raise ValueError("exactly one of power_law, spectrum, matrix required")
        if self.spectrum is not None:
            self.spectrum = np.asarray(self.spectrum, dtype=float)
            if np.any(np.diff(self.spectrum) < 0):
                raise ValueError("explicit spectrum must be sorted ascending")
            zeros = int(np.sum(self.spectrum == 0.0))
            if zeros != self.nu0:
                raise ValueError(
                    f"nu0 = {self.nu0} inconsistent with {zeros} zero eigenvalues"
                )
        if self.power_law is not None:
            c, p = self.power_law
            if c <= 0 or int(p) not in (1, 2):
                raise ValueError("power law requires c > 0 and p in {1, 2}")
        if self.matrix is not None:
            self.matrix = as_complex_matrix(self.matrix)


def interval_dirichlet_model() -> ModelRealization:
    """Dirichlet second-derivative realization on an interval of length pi.

    Eigenvalues ``k^2``; its spectral zeta function at 0 equals the
    Riemann value -1/2.
    """
    return ModelRealization(order_m=2, dim_n=1, power_law=(1.0, 2), zeta_at_zero=-0.5)


def integer_spectrum_model() -> ModelRealization:
    """Synthetic first-order model with eigenvalues ``k``; zeta(0) = -1/2."""
    return ModelRealization(order_m=1, dim_n=1, power_law=(1.0, 1), zeta_at_zero=-0.5)


# ---------------------------------------------------------------------------
# resolvent traces


def _power_tail_integral(c: float, p: int, lam: complex, n_pow: int, a: float) -> complex:
    """Closed form of ``integral_a^inf (c t^p - lambda)^(-N) dt``."""
    if p == 1:
        if n_pow < 2:
            raise ValueError("p = 1 tail integral needs N >= 2")
        return (c * a - lam) ** (1 - n_pow) / (c * (n_pow - 1))
    # p == 2: reduce to x = sqrt(-lambda/c) with Re x > 0
    mu = lam / c
    x = np.sqrt(-mu + 0j)
    vals = [(np.pi / 2 - np.arctan(a / x)) / x]
    for k in range(2, n_pow + 1):
        prev = vals[-1]
        vals.append(
            (-(a * (a**2 - mu) ** (1 - k)) + (2 * k - 3) * prev) / (2 * (k - 1) * (-mu))
        )
    return complex(vals[n_pow - 1] * c ** (-n_pow))


def _power_tail_derivatives(c: float, p: int, lam: complex, n_pow: int, t: float):
    """f, f', f''' of ``f(t) = (c t^p - lambda)^(-N)`` at ``t``."""
    n = n_pow
    u = c * t**p - lam
    f = u ** (-n)
    if p == 1:
        f1 = -n * c * u ** (-n - 1)
        f3 = -n * (n + 1) * (n + 2) * c**3 * u ** (-n - 3)
    else:
        up = 2 * c * t
        f1 = -n * u ** (-n - 1) * up
        f3 = (
            -n * (n + 1) * (n + 2) * u ** (-n - 3) * up**3
            + 3 * n * (n + 1) * u ** (-n - 2) * up * (2 * c)
        )
    return f, f1, f3


def resolvent_trace(model: ModelRealization, lam: complex, n_pow: int,
                    n_terms: int = 200_000, rel_tol: float = 1e-12) -> complex:
    """Trace of the ``N``-th resolvent power at ``lambda``.

    Requires the trace-class condition ``N * m > n``.  Spectral models sum
    ``(lambda_k - lambda)^(-N)`` directly, with an Euler-Maclaurin tail
    correction when the spectrum is given by a power law; matrix models
    apply the resolvent ``N`` times by LU solves and take the trace.
    """
    if n_pow * model.order_m <= model.dim_n:
        raise ValueError(
            f"trace-class condition N*m > n violated: {n_pow}*{model.order_m} "
            f"<= {model.dim_n}"
        )
    lam = complex(lam)

    if model.matrix is not None:
        a = model.matrix
        vals = np.linalg.eigvals(a)
        if np.min(np.abs(vals - lam)) <= 1e-12 * max(1.0, float(np.max(np.abs(vals)))):
            raise SpectrumHitError(f"lambda = {lam} hits the spectrum")
        x = np.eye(a.shape[0], dtype=complex)
        shifted = a - lam * np.eye(a.shape[0])
        for _ in range(n_pow):
            x = lu_solve(shifted, x)
        return complex(np.trace(x))

    if model.spectrum is not None:
        gaps = np.abs(model.spectrum - lam)
        if np.min(gaps) <= 1e-12 * max(1.0, float(np.max(np.abs(model.spectrum)))):
            raise SpectrumHitError(f"lambda = {lam} hits the spectrum")
        terms = (model.spectrum - lam) ** (-float(n_pow))
        total = complex(np.sum(terms))
        if not model.spectrum_complete:
            # crude tail bound: the next 10*K eigenvalues at the last size
            bound = abs(terms[-1]) * 10 * len(terms)
            if bound > rel_tol * max(abs(total), 1e-300):
                raise TailUnknownError(
                    f"truncated spectrum without a tail law; bound {bound:.3e} "
                    f"exceeds rel_tol * |trace|"
                )
        return total

    c, p = model.power_law
    p = int(p)
    if lam.imag == 0.0 and lam.real > 0.0:
        k_star = (lam.real / c) ** (1.0 / p)
        near = round(k_star)
        if near >= 1 and abs(lam.real - c * near**p) <= 1e-10 * max(1.0, lam.real):
            raise SpectrumHitError(f"lambda = {lam} hits eigenvalue index {near}")
    k = np.arange(1, n_terms + 1, dtype=float)
    total = complex(np.sum((c * k**p - lam) ** (-float(n_pow))))
    a = float(n_terms + 1)
    f, f1, f3 = _power_tail_derivatives(c, p, lam, n_pow, a)
    tail = _power_tail_integral(c, p, lam, n_pow, a) + f / 2.0 - f1 / 12.0 + f3 / 720.0
    total += complex(tail)
    if model.nu0:
        total += model.nu0 * (-lam) ** (-float(n_pow))
    return total


# ---------------------------------------------------------------------------
# expansion fits


@dataclass
class TraceExpansionFit:
    """Weighted least-squares fit of the resolvent-trace expansion."""

    n_pow: int
    exponents: np.ndarray
    coefficients: np.ndarray
    residual: float
    condition: float
    log_term_suspected: bool = False

    @property
    def basic_coefficient(self) -> complex:
        """Coefficient of ``(-lambda)^{-N}`` (the last exponent)."""
        return complex(self.coefficients[-1])


def fit_trace_expansion(model: ModelRealization, n_pow: int, ray_angle: float,
                        radii, cond_threshold: float = 1e10,
                        **trace_kwargs) -> TraceExpansionFit:
    """Fit ``Tr R^N`` against the basis ``(-lambda)^((n-l)/m - N)``.

    Samples on the ray ``lambda = r * exp(i * ray_angle)`` with weights
    ``|lambda|^N`` so all basis columns carry comparable magnitude across
    decades.  Exactly ``n + 1`` coefficients are fitted, ``l = 0 .. n``.
    A residual that correlates strongly with ``log|lambda|`` sets the
    ``log_term_suspected`` flag (fitting log terms is out of contract).
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < model.dim_n + 2:
        raise ValueError("need more sample radii than coefficients")
    lams = radii * np.exp(1j * ray_angle)
    traces = np.array(
        [resolvent_trace(model, lam, n_pow, **trace_kwargs) for lam in lams]
    )
    ells = np.arange(model.dim_n + 1)
    exponents = (model.dim_n - ells) / model.order_m - n_pow
    minus_lam = -lams
    design = np.power.outer(minus_lam, exponents)
    weights = np.abs(lams) ** float(n_pow)

    wd = design * weights[:, None]
    col_scale = np.max(np.abs(wd), axis=0)
    if np.any(col_scale == 0.0):
        raise IllConditionedFitError("degenerate basis column")
    wd_scaled = wd / col_scale
    condition = float(np.linalg.cond(wd_scaled))
    if condition > cond_threshold:
        raise IllConditionedFitError(
            f"basis condition number {condition:.3e} exceeds {cond_threshold:.1e}"
        )
    coef_scaled, *_ = np.linalg.lstsq(wd_scaled, traces * weights, rcond=None)
    coefficients = coef_scaled / col_scale

    fitted = design @ coefficients
    weighted_residual = np.abs(fitted - traces) * weights
    scale = float(np.max(np.abs(traces) * weights))
    residual = float(np.max(weighted_residual)) / max(scale, 1e-300)

    log_flag = False
    res = weighted_residual - np.mean(weighted_residual)
    logs = np.log(radii) - np.mean(np.log(radii))
    denom = np.linalg.norm(res) * np.linalg.norm(logs)
    if denom > 0 and residual > 1e-6:
        log_flag = bool(abs(np.dot(res, logs)) / denom > 0.95)

    return TraceExpansionFit(
        n_pow=n_pow,
        exponents=exponents,
        coefficients=coefficients,
        residual=residual,
        condition=condition,
        log_term_suspected=log_flag,
    )


@dataclass(frozen=True)
class BasicZetaValue:
    """The basic zeta value with its optional analytic cross-check."""

    value: complex
    expected: complex | None
    not_applicable: bool = False

    @property
    def identity_gap(self) -> float | None:
        if self.expected is None:
            return None
        return float(abs(self.value - self.expected))


def basic_zeta_value(model: ModelRealization, fit: TraceExpansionFit) -> BasicZetaValue:
    """Coefficient of ``(-lambda)^{-N}``, plus the zeta identity check.

    When the model's spectral zeta value at 0 is supplied analytically the
    expected value is ``zeta(0) + nu0``.  For matrix models the expansion
    semantics do not apply and the result is flagged not applicable (the
    coefficient merely counts dimensions there).
    """
    value = fit.basic_coefficient
    expected = None
    if model.zeta_at_zero is not None:
        expected = complex(model.zeta_at_zero + model.nu0)
    return BasicZetaValue(
        value=value,
        expected=expected,
        not_applicable=model.matrix is not None,
    )


def residue_log(model: ModelRealization, fit: TraceExpansionFit) -> complex:
    """Residue of the log-realization: ``-m`` times the basic zeta value."""
    return -model.order_m * basic_zeta_value(model, fit).value


# ---------------------------------------------------------------------------
# residue integrals over sphere x box patches


def sphere_quadrature(sphere_dim: int, resolution: int = 64):
    """Nodes (rows) and weights for the unit sphere ``S^d``, d in {0, 1, 2}."""
    if sphere_dim == 0:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if sphere_dim == 1:
        ang = 2.0 * np.pi * np.arange(resolution) / resolution
        pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        return pts, np.full(resolution, 2.0 * np.pi / resolution)
    if sphere_dim == 2:
        n_polar = max(resolution // 2, 8)
        mu, wmu = np.polynomial.legendre.leggauss(n_polar)
        ang = 2.0 * np.pi * np.arange(resolution) / resolution
        waz = 2.0 * np.pi / resolution
        sin_t = np.sqrt(1.0 - mu**2)
        pts = np.stack(
            [
                np.outer(sin_t, np.cos(ang)).ravel(),
                np.outer(sin_t, np.sin(ang)).ravel(),
                np.repeat(mu, resolution),
            ],
            axis=1,
        )
        return pts, np.repeat(wmu * waz, resolution)
    raise ValueError(f"sphere dimension {sphere_dim} not supported (0, 1, 2 only)")


def _box_quadrature(dim: int, points: int):
    if dim == 0:
        return np.zeros((1, 0)), np.array([1.0])
    g, gw = np.polynomial.legendre.leggauss(points)
    x1 = 0.5 * (g + 1.0)
    w1 = 0.5 * gw
    grids = np.meshgrid(*([x1] * dim), indexing="ij")
    wgrids = np.meshgrid(*([w1] * dim), indexing="ij")
    pts = np.stack([g_.ravel() for g_ in grids], axis=1)
    weights = np.ones(pts.shape[0])
    for wg in wgrids:
        weights = weights * wg.ravel()
    return pts, weights


def residue_integrals(interior_term, boundary_term, dim_n: int,
                      box_points: int = 6, sphere_resolution: int = 64):
    """The interior and boundary residue integrals over a unit patch.

    Interior: ``integral over [0,1]^n x S^(n-1) of tr interior_term(x, xi)``;
    boundary: ``integral over [0,1]^(n-1) x S^(n-2) of tr boundary_term(x', xi')``.
    Either term may be None (contributing 0).  Terms may return scalars or
    square matrices (traced automatically).
    """

    def product_integral(fn, box_dim, sphere_dim):
        if fn is None:
            return 0.0 + 0.0j
        xs, wx = _box_quadrature(box_dim, box_points)
        ss, ws = sphere_quadrature(sphere_dim, sphere_resolution)
        total = 0.0 + 0.0j
        for x, wxi in zip(xs, wx):
            for s, wsi in zip(ss, ws):
                val = fn(x, s)
                val = np.trace(val) if np.ndim(val) == 2 else complex(val)
                total += wxi * wsi * val
        return total

    interior = product_integral(interior_term, dim_n, dim_n - 1)
    if boundary_term is not None and dim_n < 2:
        raise ValueError("boundary integral needs n >= 2")
    boundary = product_integral(boundary_term, dim_n - 1, dim_n - 2)
    return interior, boundary


def fit_report(fit: TraceExpansionFit) -> dict:
    """JSON-ready summary of a trace-expansion fit."""
    return {
        "N": fit.n_pow,
        "exponents": [float(e) for e in fit.exponents],
        "coefficients": [[float(c.real), float(c.imag)] for c in fit.coefficients],
        "residual": fit.residual,
    }
