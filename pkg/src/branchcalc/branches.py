"""Branch-cut argument, logarithm and powers.

The cut for angle ``theta`` is the closed ray ``exp(i*theta) * [0, inf)``.
The argument is taken in the *open* interval ``(theta - 2*pi, theta)``;
points on the cut (within ``cut_margin`` radians) are rejected with
:class:`OnCutError` rather than silently assigned to one side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OnCutError

TWO_PI = 2.0 * np.pi

#: Default angular rejection margin around a cut ray, in radians.
CUT_MARGIN = 1e-12


@dataclass(frozen=True)
class SectorPair:
    """An open sector ``theta < arg(lambda) < phi`` between two cut rays."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (np.isfinite(self.theta) and np.isfinite(self.phi)):
            raise ValueError("sector angles must be finite")
        if not self.theta < self.phi < self.theta + TWO_PI:
            raise ValueError(
                f"sector requires theta < phi < theta + 2*pi, got "
                f"({self.theta}, {self.phi})"
            )

    @property
    def opening(self) -> float:
        return self.phi - self.theta


def as_sector(sector) -> SectorPair:
    if isinstance(sector, SectorPair):
        return sector
    theta, phi = sector
    return SectorPair(float(theta), float(phi))


def arg_branch(lam, theta: float, cut_margin: float = CUT_MARGIN):
    """Argument of ``lam`` in the open interval ``(theta - 2*pi, theta)``.

    Accepts scalars or arrays.  Raises :class:`OnCutError` for 0 and for
    points whose angular distance from the cut ray is <= ``cut_margin``.
    """
    lam = np.asarray(lam, dtype=complex)
    if np.any(lam == 0):
        raise OnCutError("lambda = 0 lies on every cut ray")
    # offset in [0, 2*pi) measured clockwise from the cut
    offset = np.mod(np.angle(lam) - theta, TWO_PI)
    dist = np.minimum(offset, TWO_PI - offset)
    if np.any(dist <= cut_margin):
        raise OnCutError(
            f"argument within {cut_margin:g} rad of the cut at angle {theta:g}"
        )
    result = theta - TWO_PI + offset
    return result if result.ndim else float(result)


def log_branch(lam, theta: float, cut_margin: float = CUT_MARGIN):
    """Logarithm with branch cut along ``exp(i*theta) * [0, inf)``."""
    lam = np.asarray(lam, dtype=complex)
    result = np.log(np.abs(lam)) + 1j * arg_branch(lam, theta, cut_margin)
    return result if result.ndim else complex(result)


def pow_branch(lam, s, theta: float, cut_margin: float = CUT_MARGIN):
    """``lam ** s`` defined through :func:`log_branch` at cut angle theta."""
    result = np.exp(np.asarray(s, dtype=complex) * log_branch(lam, theta, cut_margin))
    return result if np.ndim(result) else complex(result)
