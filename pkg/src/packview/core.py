"""
Shared parameter, grid and field types.

Everything here is an immutable value. The default unit system is
hbar = m = 1; physical units only enter through :class:`PhysConsts`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidField

__all__ = [
    "PhysConsts",
    "PacketParams",
    "SpatialGrid",
    "WaveField",
    "WaveField2D",
    "natural_units",
    "norm",
    "integrate",
]


@dataclass(frozen=True)
class PhysConsts:
    """Reduced Planck constant and particle mass."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise DomainError(f"hbar and mass must be positive, got {self}")


def natural_units() -> PhysConsts:
    """Return the default unit system, hbar = m = 1."""
    return PhysConsts(1.0, 1.0)


@dataclass(frozen=True)
class PacketParams:
    """
    Parameters of a p=0 Gaussian packet family.

    Parameters
    ----------
    beta : float
        Initial Gaussian width parameter; the single-packet density is
        ``exp(-(x - x0)**2 / beta**2)`` at t=0.
    d : float
        Packet separation, or well width for the infinite-well geometry.
    phi : float
        Relative phase between the two packets, in [0, 2*pi).
    consts : PhysConsts
    """

    beta: float
    d: float = 0.0
    phi: float = 0.0
    consts: PhysConsts = field(default_factory=natural_units)

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not self.d >= 0:
            raise DomainError(f"d must be nonnegative, got {self.d}")
        if not 0 <= self.phi < 2 * np.pi:
            raise DomainError(f"phi must lie in [0, 2*pi), got {self.phi}")

    @property
    def t0(self) -> float:
        """Spreading time m * beta**2 / hbar."""
        return self.consts.mass * self.beta**2 / self.consts.hbar


@dataclass(frozen=True)
class SpatialGrid:
    """
    Uniform grid of ``n_points`` samples from ``x_min`` to ``x_max``,
    both endpoints included.

    ``n_points`` must be a power of two (at least 16) so any field on the
    grid can go straight through an FFT.
    """

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        n = self.n_points
        if int(n) != n or n < 16 or (int(n) & (int(n) - 1)):
            raise DomainError(f"n_points must be a power of two >= 16, got {n}")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)


def _check_amplitudes(amplitudes, shape):
    amplitudes = np.array(amplitudes, dtype=complex)
    if amplitudes.shape != shape:
        raise InvalidField(f"amplitudes have shape {amplitudes.shape}, grid needs {shape}")
    amplitudes.setflags(write=False)
    return amplitudes


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex amplitudes of a 1D wavefunction on a grid at one instant."""

    grid: SpatialGrid
    time: float
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "amplitudes", _check_amplitudes(self.amplitudes, (self.grid.n_points,))
        )

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class WaveField2D:
    """Complex amplitudes on a tensor grid; ``amplitudes[i, j]`` sits at (x_i, y_j)."""

    grid_x: SpatialGrid
    grid_y: SpatialGrid
    time: float
    amplitudes: np.ndarray

    def __post_init__(self):
        shape = (self.grid_x.n_points, self.grid_y.n_points)
        object.__setattr__(self, "amplitudes", _check_amplitudes(self.amplitudes, shape))

    def mesh(self):
        """Return ``(X, Y)`` coordinate arrays with ``indexing='ij'``."""
        return np.meshgrid(self.grid_x.points, self.grid_y.points, indexing="ij")

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def integrate(values, *grids) -> float:
    """Trapezoidal quadrature of ``values`` over one or two uniform grids."""
    result = np.asarray(values)
    for g in reversed(grids):
        result = np.trapezoid(result, dx=g.dx, axis=-1)
    return float(result)


def norm(field) -> float:
    """
    Total probability of a field, the trapezoidal quadrature of ``|psi|**2``.

    Accepts :class:`WaveField` or :class:`WaveField2D`. Raises
    :class:`InvalidField` for non-finite amplitudes.
    """
    if not np.all(np.isfinite(field.amplitudes)):
        raise InvalidField("field contains non-finite amplitudes")
    if isinstance(field, WaveField2D):
        return integrate(field.density, field.grid_x, field.grid_y)
    return integrate(field.density, field.grid)
