"""Oriented integration contours and composite Gauss-Legendre quadrature.

Three contour shapes are built from oriented legs (radial rays and circular
arcs):

``LaurentLoop(theta, r0, radius)``
    Runs inward along the cut ray at angle ``theta`` from ``radius`` down to
    ``r0``, once clockwise around ``|lambda| = r0`` from ``theta`` to
    ``theta - 2*pi``, then back out to ``radius`` along the same geometric
    ray, now carrying argument ``theta - 2*pi``.  Traversed this way (and
    weighted with ``i/(2*pi)`` by callers) it encircles everything outside
    the small circle and off the cut in the positive direction.

``Sectorial(theta, phi, r0, radius)``
    Inward along the ray at ``phi``, clockwise along ``|lambda| = r0`` from
    ``phi`` down to ``theta``, outward along the ray at ``theta``.  This is
    the positively-oriented boundary of the truncated sector minus its
    outer arc.

``Circle(center, radius)``
    Counterclockwise.

Radial legs are parameterized by log-radius, so node spacing is geometric
and concentrates points near ``r0`` where the integrands vary fastest.
Weights absorb ``d lambda``: ``sum(f(node) * weight)`` approximates the
contour integral.  Every node also carries the traversal argument, which is
what lets branch-cut integrands be evaluated with the correct boundary
values on legs that lie exactly on a cut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BadParametersError, NoConvergenceError
from .linalg import opnorm2

#: Target panel widths for the base discretization.
_RADIAL_PANEL_EFOLDS = 1.0
_ARC_PANEL_RADIANS = np.pi / 4


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for adaptive contour quadrature.

    ``rel_tol`` controls the panel-doubling stop criterion of
    :func:`integrate`; panel counts double at most ``max_panel_doublings``
    times beyond the base discretization.
    """

    nodes_per_panel: int = 12
    max_panel_doublings: int = 7
    rel_tol: float = 1e-10

    def __post_init__(self):
        if self.nodes_per_panel < 2:
            raise ValueError("nodes_per_panel must be >= 2")
        if self.max_panel_doublings < 0:
            raise ValueError("max_panel_doublings must be >= 0")
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=64)
def _gauss_rule(n: int):
    return np.polynomial.legendre.leggauss(n)


def _composite_gauss(a: float, b: float, n_panels: int, nodes_per_panel: int):
    """Composite Gauss-Legendre nodes/weights on [a, b]; b < a flips signs."""
    g, gw = _gauss_rule(nodes_per_panel)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * g[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    return x, w


@dataclass(frozen=True)
class RadialLeg:
    """Straight leg along ``exp(i*angle) * [r, R]`` in log-radius parameter.

    Traversal goes from ``r_start`` to ``r_end``; the sign of the weights
    encodes the direction.
    """

    angle: float
    r_start: float
    r_end: float

    def base_panels(self) -> int:
        span = abs(np.log(self.r_end) - np.log(self.r_start))
        return max(2, int(np.ceil(span / _RADIAL_PANEL_EFOLDS)))

    def discretize(self, nodes_per_panel: int, multiplier: int = 1):
        u, w = _composite_gauss(
            np.log(self.r_start),
            np.log(self.r_end),
            self.base_panels() * multiplier,
            nodes_per_panel,
        )
        phase = np.exp(1j * self.angle)
        lam = np.exp(u) * phase
        weights = w * lam  # d(lambda) = lambda du along the ray
        args = np.full_like(u, self.angle)
        return lam, weights, args


@dataclass(frozen=True)
class ArcLeg:
    """Circular arc ``center + radius * exp(i*omega)``, omega_start -> omega_end."""

    radius: float
    omega_start: float
    omega_end: float
    center: complex = 0.0

    def base_panels(self) -> int:
        span = abs(self.omega_end - self.omega_start)
        return max(2, int(np.ceil(span / _ARC_PANEL_RADIANS)))

    def discretize(self, nodes_per_panel: int, multiplier: int = 1):
        om, w = _composite_gauss(
            self.omega_start,
            self.omega_end,
            self.base_panels() * multiplier,
            nodes_per_panel,
        )
        rim = self.radius * np.exp(1j * om)
        lam = self.center + rim
        weights = w * 1j * rim  # d(lambda) = i * radius * e^{i om} d om
        return lam, weights, om


@dataclass(frozen=True)
class LaurentLoop:
    theta: float
    r0: float
    radius: float


@dataclass(frozen=True)
class Sectorial:
    theta: float
    phi: float
    r0: float
    radius: float


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float


@dataclass(frozen=True)
class Contour:
    """A discretizable oriented contour.

    ``nodes``, ``weights`` and ``node_args`` expose the base discretization;
    :func:`integrate` rebuilds finer versions through ``discretize``.
    """

    kind: object
    legs: tuple
    config: QuadratureConfig = field(default=DEFAULT_CONFIG, compare=False)

    def discretize(self, multiplier: int = 1):
        parts = [leg.discretize(self.config.nodes_per_panel, multiplier) for leg in self.legs]
        lam = np.concatenate([p[0] for p in parts])
        w = np.concatenate([p[1] for p in parts])
        args = np.concatenate([p[2] for p in parts])
        return lam, w, args

    @property
    def nodes(self) -> np.ndarray:
        return self.discretize()[0]

    @property
    def weights(self) -> np.ndarray:
        return self.discretize()[1]

    @property
    def node_args(self) -> np.ndarray:
        return self.discretize()[2]

    def reversed(self) -> "Contour":
        flipped = []
        for leg in reversed(self.legs):
            if isinstance(leg, RadialLeg):
                flipped.append(RadialLeg(leg.angle, leg.r_end, leg.r_start))
            else:
                flipped.append(
                    ArcLeg(leg.radius, leg.omega_end, leg.omega_start, leg.center)
                )
        return Contour(("reversed", self.kind), tuple(flipped), self.config)


def build_contour(kind, config: QuadratureConfig | None = None) -> Contour:
    """Construct the oriented quadrature contour for ``kind``.

    Raises :class:`BadParametersError` for nonpositive radii, ``radius <=
    r0`` or sector angles violating ``theta < phi < theta + 2*pi``.
    """
    config = config or DEFAULT_CONFIG
    if isinstance(kind, LaurentLoop):
        _check_radii(kind.r0, kind.radius)
        th = kind.theta
        legs = (
            RadialLeg(th, kind.radius, kind.r0),
            ArcLeg(kind.r0, th, th - 2.0 * np.pi),
            RadialLeg(th - 2.0 * np.pi, kind.r0, kind.radius),
        )
    elif isinstance(kind, Sectorial):
        _check_radii(kind.r0, kind.radius)
        if not kind.theta < kind.phi < kind.theta + 2.0 * np.pi:
            raise BadParametersError(
                f"sector angles must satisfy theta < phi < theta + 2*pi, "
                f"got ({kind.theta}, {kind.phi})"
            )
        legs = (
            RadialLeg(kind.phi, kind.radius, kind.r0),
            ArcLeg(kind.r0, kind.phi, kind.theta),
            RadialLeg(kind.theta, kind.r0, kind.radius),
        )
    elif isinstance(kind, Circle):
        if kind.radius <= 0:
            raise BadParametersError("circle radius must be positive")
        legs = (ArcLeg(kind.radius, 0.0, 2.0 * np.pi, complex(kind.center)),)
    else:
        raise BadParametersError(f"unknown contour kind {kind!r}")
    return Contour(kind, legs, config)


def _check_radii(r0: float, radius: float):
    if r0 <= 0:
        raise BadParametersError(f"r0 must be positive, got {r0}")
    if radius <= r0:
        raise BadParametersError(f"outer radius {radius} must exceed r0 {r0}")


def _result_norm(value) -> float:
    value = np.asarray(value)
    if value.ndim == 2:
        return opnorm2(value)
    return float(np.linalg.norm(value.ravel()))


def integrate(
    contour: Contour,
    f,
    config: QuadratureConfig | None = None,
    *,
    vectorized: bool = False,
    with_arg: bool = False,
    full_output: bool = False,
):
    """Quadrature of ``f`` along ``contour`` with panel-count doubling.

    ``f`` maps a complex point to a scalar or complex matrix.  With
    ``vectorized=True`` it receives the whole node array at once (shape
    ``(k,)`` in, ``(k, ...)`` out).  With ``with_arg=True`` it also receives
    the traversal argument of each node, which is how integrands built from
    branch logarithms get the correct boundary values on the cut legs.

    Panel counts double until two successive results differ by less than
    ``rel_tol`` in spectral norm (absolute floor taken from the quadrature
    mass, so integrals that cancel to zero still converge).  Raises
    :class:`NoConvergenceError` with the last two iterates otherwise.
    """
    config = config or contour.config
    previous = None
    current = None
    diff = np.inf
    multiplier = 1
    for step in range(config.max_panel_doublings + 1):
        lam, w, args = contour.discretize(multiplier)
        values = _sample(f, lam, args, vectorized, with_arg)
        previous = current
        current = np.tensordot(w, values, axes=(0, 0))
        mass = float(
            np.tensordot(np.abs(w), np.abs(values).reshape(len(w), -1).max(axis=1), axes=(0, 0))
        )
        if previous is not None:
            diff = _result_norm(current - previous)
            scale = max(_result_norm(current), 1e-2 * mass, 1e-300)
            if diff <= config.rel_tol * scale:
                if full_output:
                    info = {
                        "residual": diff / scale,
                        "n_nodes": len(lam),
                        "doublings": step,
                    }
                    return current, info
                return current
        multiplier *= 2
    raise NoConvergenceError(
        f"contour quadrature did not converge within "
        f"{config.max_panel_doublings} panel doublings (last diff {diff:.3e})",
        last=current,
        previous=previous,
        diff=diff,
    )


def _sample(f, lam, args, vectorized, with_arg):
    if vectorized:
        return np.asarray(f(lam, args) if with_arg else f(lam))
    if with_arg:
        return np.asarray([f(z, a) for z, a in zip(lam, args)])
    return np.asarray([f(z) for z in lam])
