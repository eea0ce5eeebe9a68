"""
Infinite-well eigenbasis: projection, phase evolution, autocorrelation and
the characteristic time scales of an expanding packet.

The well is fixed to ``[-d, 0]`` with eigenstates

    phi_n(x) = sqrt(2/d) sin(n pi (x + d) / d),   E_n = n**2 pi**2 hbar**2 / (2 m d**2),

n = 1, 2, ... Because E_n is proportional to n**2, every expansion returns
to itself (up to a global phase) after ``T_rev = 4 m d**2 / (pi hbar)``.
States odd about the well center have even n; a packet centered in the
well only populates odd n, and since n**2 = 1 (mod 8) for odd n it
revives fully already at ``T_rev / 8``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import PacketParams, PhysConsts, SpatialGrid, WaveField, natural_units
from .errors import DomainError, InsufficientBasis, TimeDomainError

__all__ = [
    "EigenExpansion",
    "TimeScales",
    "eigen_energy",
    "eigenstate",
    "project_packet",
    "evolve_eigenbasis",
    "autocorrelation",
    "timescales",
    "revival_time",
    "DEFAULT_N_MAX",
    "MIN_CAPTURED",
]

DEFAULT_N_MAX = 200
MIN_CAPTURED = 0.999


def eigen_energy(n, d: float, consts: PhysConsts | None = None):
    """Energy of level ``n`` (1-based) in a well of width ``d``."""
    consts = consts or natural_units()
    n = np.asarray(n)
    if np.any(n < 1):
        raise DomainError("levels start at n = 1")
    if not d > 0:
        raise DomainError(f"well width must be positive, got {d}")
    return n**2 * math.pi**2 * consts.hbar**2 / (2.0 * consts.mass * d**2)


def revival_time(d: float, consts: PhysConsts | None = None) -> float:
    """Full revival period 4 m d**2 / (pi hbar) = 2 pi hbar / E_1."""
    consts = consts or natural_units()
    return 4.0 * consts.mass * d**2 / (math.pi * consts.hbar)


def eigenstate(n: int, d: float, x):
    """phi_n on the well [-d, 0]; zero outside."""
    x = np.asarray(x, dtype=float)
    inside = (x >= -d) & (x <= 0)
    return np.where(inside, math.sqrt(2.0 / d) * np.sin(n * math.pi * (x + d) / d), 0.0)


@dataclass(frozen=True, eq=False)
class EigenExpansion:
    """Coefficients c_n, n = 1..n_max, of a state in the well [-d, 0]."""

    well_width: float
    coeffs: np.ndarray
    consts: PhysConsts = field(default_factory=natural_units)

    @property
    def n_max(self) -> int:
        return len(self.coeffs)

    @property
    def levels(self) -> np.ndarray:
        return np.arange(1, self.n_max + 1)

    @property
    def energies(self) -> np.ndarray:
        return eigen_energy(self.levels, self.well_width, self.consts)

    @property
    def captured(self) -> float:
        """Probability carried by the retained levels, sum |c_n|**2."""
        return float(np.sum(np.abs(self.coeffs) ** 2))

    @property
    def revival_time(self) -> float:
        return revival_time(self.well_width, self.consts)

    def phases(self, t: float) -> np.ndarray:
        """exp(-i E_n t / hbar), with E_1 t / hbar reduced mod 2 pi first."""
        if t < 0:
            raise TimeDomainError(f"negative time t={t} is not modeled")
        # E_n t / hbar = n**2 * theta and n**2 is an exact integer
        theta = math.fmod(float(self.energies[0]) * t / self.consts.hbar, 2 * math.pi)
        n2 = self.levels.astype(np.int64) ** 2
        return np.exp(-1j * np.fmod(n2 * theta, 2 * math.pi))


def project_packet(wave: WaveField, n_max: int = DEFAULT_N_MAX, d: float | None = None,
                   consts: PhysConsts | None = None,
                   min_captured: float = MIN_CAPTURED) -> EigenExpansion:
    """
    Project a field onto the first ``n_max`` eigenstates of the well [-d, 0].

    ``d`` defaults to ``-wave.grid.x_min``, i.e. a grid spanning the well.
    The overlaps are trapezoidal quadratures over the grid points inside
    the well.

    Raises
    ------
    DomainError
        If the field does not vanish (to 1e-10) at the walls.
    InsufficientBasis
        If the expansion captures less than ``min_captured`` of the probability.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    grid = wave.grid
    if d is None:
        d = -grid.x_min
    if not d > 0:
        raise DomainError(f"well width must be positive, got {d}")
    x = grid.points
    psi = wave.amplitudes
    outside = (x < -d) | (x > 0)
    wall = np.isclose(x, -d, atol=1e-12 * d) | np.isclose(x, 0.0, atol=1e-12 * d)
    if np.any(np.abs(psi[outside | wall]) > 1e-10):
        raise DomainError("field must vanish at and beyond the well walls")
    n = np.arange(1, n_max + 1)
    basis = math.sqrt(2.0 / d) * np.sin(np.outer(n, np.pi * (x + d) / d))
    basis[:, outside] = 0.0
    coeffs = np.trapezoid(basis * psi, dx=grid.dx, axis=1)
    exp = EigenExpansion(d, coeffs, consts or natural_units())
    if exp.captured < min_captured:
        raise InsufficientBasis(
            f"{n_max} levels capture only {exp.captured:.6f} of the probability"
        )
    return exp


def evolve_eigenbasis(exp: EigenExpansion, t: float, grid: SpatialGrid) -> WaveField:
    """psi(x, t) = sum_n c_n phi_n(x) exp(-i E_n t / hbar) sampled on ``grid``."""
    d = exp.well_width
    x = grid.points
    inside = (x >= -d) & (x <= 0)
    weights = exp.coeffs * exp.phases(t)
    basis = np.sin(np.outer(exp.levels, np.pi * (x + d) / d))
    psi = math.sqrt(2.0 / d) * (weights @ basis)
    return WaveField(grid, t, np.where(inside, psi, 0.0))


def autocorrelation(exp: EigenExpansion, t):
    """
    A(t) = sum_n |c_n|**2 exp(-i E_n t / hbar), the overlap of the evolved
    state with the initial one. ``t`` may be a scalar or an array.
    """
    weights = np.abs(exp.coeffs) ** 2
    if np.ndim(t) == 0:
        return complex(np.sum(weights * exp.phases(float(t))))
    return np.array([np.sum(weights * exp.phases(float(ti))) for ti in np.asarray(t)])


@dataclass(frozen=True)
class TimeScales:
    t0: float
    T_overlap: float
    T_rev: float
    ratio_rev_overlap: float
    ratio_overlap_t0_sq: float


def timescales(params: PacketParams) -> TimeScales:
    """
    Spreading time, overlap time, revival time and their ratios.

    ``T_overlap = sqrt(2) d m beta / hbar`` is the time for momentum
    components of order hbar / (beta sqrt 2) to cross the separation d;
    ``T_rev`` is the revival period of a well of width d.
    """
    if not (params.beta > 0 and params.d > 0):
        raise DomainError("timescales need beta > 0 and d > 0")
    hbar, m = params.consts.hbar, params.consts.mass
    beta, d = params.beta, params.d
    dx0 = beta / math.sqrt(2.0)
    return TimeScales(
        t0=m * beta**2 / hbar,
        T_overlap=math.sqrt(2.0) * d * m * beta / hbar,
        T_rev=4.0 * m * d**2 / (hbar * math.pi),
        ratio_rev_overlap=2.0 * d / (math.pi * dx0),
        ratio_overlap_t0_sq=2.0 * (d / beta) ** 2,
    )
