"""
Brute-force numerical propagators for the free Schroedinger equation.

These never touch the closed forms in :mod:`packview.analytic`; they only
take an initial field and integrate forward, so agreement between the two
is a genuine cross-check.

* :func:`propagate_free` -- spectral (FFT) propagation on a periodic grid.
* :func:`propagate_dirichlet` -- Crank-Nicolson in time with a compact
  fourth-order (Numerov) Laplacian and hard zeros at both grid ends.
* :func:`propagate_dirichlet_2d` -- Crank-Nicolson with the five-point
  Laplacian on an arbitrary masked region (zero outside the mask).
* :func:`propagate_dirichlet_box_2d` -- exact sine-series propagation in a
  rectangular box, for walls aligned with the grid.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.fft
from scipy import sparse
from scipy.sparse.linalg import splu

from .analytic import WedgeGeometry
from .core import PhysConsts, SpatialGrid, WaveField, WaveField2D, integrate, natural_units, norm
from .errors import DomainError, UnstableRun

__all__ = [
    "PropagatorConfig",
    "propagate_free",
    "propagate_dirichlet",
    "propagate_dirichlet_2d",
    "propagate_dirichlet_box_2d",
    "momentum_density",
    "wedge_mask",
    "l2_error",
    "BOUNDARIES",
]

BOUNDARIES = ("free", "dirichlet", "dirichlet-mask-2d")

# allowed norm drift per run
FREE_NORM_TOL = 1e-8
DIRICHLET_NORM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PropagatorConfig:
    """
    Time stepping for a propagation run.

    ``mask`` (2D only) marks the allowed region with True; grid points
    outside it, and the outer rows and columns of the grid, are held at zero.
    """

    dt: float
    n_steps: int
    boundary: str = "free"
    consts: PhysConsts = field(default_factory=natural_units)
    mask: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise DomainError(f"n_steps must be a nonnegative integer, got {self.n_steps}")
        if self.boundary not in BOUNDARIES:
            raise DomainError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")

    @property
    def duration(self) -> float:
        return self.dt * self.n_steps

    @classmethod
    def spanning(cls, t: float, dt: float, **kw) -> "PropagatorConfig":
        """Config reaching time ``t`` with a step no larger than ``dt``."""
        n = max(1, int(math.ceil(t / dt - 1e-9))) if t > 0 else 0
        return cls(dt=t / n if n else dt, n_steps=n, **kw)


def _check_norm(before, after, tol, what):
    if not np.isfinite(after) or abs(after - before) > tol:
        raise UnstableRun(
            f"{what}: norm drifted from {before:.15g} to {after:.15g} (tolerance {tol:g})"
        )


def propagate_free(initial: WaveField, cfg: PropagatorConfig) -> WaveField:
    """
    Evolve under the free Hamiltonian on the periodic FFT grid.

    With no potential the Strang split-operator step is just the kinetic
    phase ``exp(-i hbar k**2 dt / 2m)`` in momentum space, and ``n_steps``
    of them compose into one exact phase, which is what is applied. The
    field must stay negligible near the grid edges for the whole run, since
    anything reaching an edge wraps around; a RuntimeWarning is issued if
    more than 1e-10 of the probability ends up in the outer 2% of the grid.
    """
    c = cfg.consts
    grid = initial.grid
    if cfg.n_steps == 0:
        return WaveField(grid, initial.time, initial.amplitudes)
    k = 2 * np.pi * np.fft.fftfreq(grid.n_points, grid.dx)
    omega = c.hbar * k**2 / (2 * c.mass)
    psi = np.fft.ifft(np.fft.fft(initial.amplitudes) * np.exp(-1j * omega * cfg.duration))
    out = WaveField(grid, initial.time + cfg.duration, psi)
    _check_norm(norm(initial), norm(out), FREE_NORM_TOL, "propagate_free")
    edge = max(1, grid.n_points // 50)
    leaked = integrate(out.density[:edge], grid) + integrate(out.density[-edge:], grid)
    if leaked > 1e-10:
        warnings.warn(
            f"probability {leaked:.2e} near the periodic grid edges; widen the grid",
            RuntimeWarning,
            stacklevel=2,
        )
    return out


def momentum_density(wave: WaveField, consts: PhysConsts | None = None):
    """
    Momentum-space density from the discrete Fourier transform of a field.

    Returns ``(p, density)`` sorted by ``p``, with
    ``phi(p) = dx / sqrt(2 pi hbar) * sum_j psi_j exp(-i p x_j / hbar)``.
    """
    hbar = (consts or natural_units()).hbar
    grid = wave.grid
    p = np.fft.fftshift(2 * np.pi * hbar * np.fft.fftfreq(grid.n_points, grid.dx))
    phi = np.fft.fftshift(np.fft.fft(wave.amplitudes)) * grid.dx / math.sqrt(2 * np.pi * hbar)
    return p, np.abs(phi) ** 2


def _second_difference(n, h):
    return sparse.diags(
        [np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)], [-1, 0, 1], format="csr"
    ) / h**2


def propagate_dirichlet(initial: WaveField, cfg: PropagatorConfig) -> WaveField:
    """
    Evolve with hard walls at both ends of the grid.

    Crank-Nicolson in time with the compact fourth-order Laplacian
    ``B^-1 D2`` (``B = I + h**2 D2 / 12``), i.e. each step solves

        (B - i c D2) psi_new = (B + i c D2) psi,   c = hbar dt / (4 m)

    on the interior points. ``B`` and ``D2`` commute, so the step is
    unitary and the norm is conserved to rounding. Boundary values stay
    exactly zero.
    """
    grid = initial.grid
    psi0 = initial.amplitudes
    if max(abs(psi0[0]), abs(psi0[-1])) > 1e-10:
        raise DomainError("initial field must vanish at the walls")
    if cfg.n_steps == 0:
        return WaveField(grid, initial.time, psi0)
    c = cfg.consts.hbar * cfg.dt / (4.0 * cfg.consts.mass)
    m = grid.n_points - 2
    d2 = _second_difference(m, grid.dx)
    b = sparse.identity(m, format="csr") + grid.dx**2 / 12.0 * d2
    lhs = splu((b - 1j * c * d2).tocsc())
    rhs = (b + 1j * c * d2).tocsr()
    psi = psi0[1:-1].astype(complex)
    for _ in range(cfg.n_steps):
        psi = lhs.solve(rhs @ psi)
    out = np.zeros(grid.n_points, dtype=complex)
    out[1:-1] = psi
    result = WaveField(grid, initial.time + cfg.duration, out)
    _check_norm(norm(initial), norm(result), DIRICHLET_NORM_TOL, "propagate_dirichlet")
    return result


def wedge_mask(geom: WedgeGeometry, grid_x: SpatialGrid, grid_y: SpatialGrid) -> np.ndarray:
    """Grid points strictly inside the wedge, the rest being wall or forbidden."""
    x, y = np.meshgrid(grid_x.points, grid_y.points, indexing="ij")
    return geom.contains(x, y, strict=True)


def propagate_dirichlet_2d(initial: WaveField2D, cfg: PropagatorConfig) -> WaveField2D:
    """
    Evolve on a masked 2D region with the field pinned to zero elsewhere.

    The allowed unknowns are the grid points where ``cfg.mask`` is True,
    minus the outer frame of the grid. The five-point Laplacian restricted
    to them is symmetric, so the Crank-Nicolson step
    ``(I + i dt H / 2 hbar) psi_new = (I - i dt H / 2 hbar) psi`` is unitary.
    Walls that do not follow grid lines are represented as staircases.
    """
    gx, gy = initial.grid_x, initial.grid_y
    nx, ny = gx.n_points, gy.n_points
    allowed = np.zeros((nx, ny), dtype=bool)
    allowed[1:-1, 1:-1] = True
    if cfg.mask is not None:
        if cfg.mask.shape != (nx, ny):
            raise DomainError(f"mask shape {cfg.mask.shape} does not match grid {(nx, ny)}")
        allowed &= cfg.mask
    psi0 = initial.amplitudes
    if np.any(np.abs(psi0[~allowed]) > 1e-8):
        raise DomainError("initial field must vanish outside the allowed region")
    if cfg.n_steps == 0:
        return WaveField2D(gx, gy, initial.time, psi0)

    hb, m = cfg.consts.hbar, cfg.consts.mass
    lap = sparse.kron(_second_difference(nx, gx.dx), sparse.identity(ny)) + sparse.kron(
        sparse.identity(nx), _second_difference(ny, gy.dx)
    )
    idx = np.flatnonzero(allowed.ravel())
    lap = lap.tocsr()[idx][:, idx]
    ham = -(hb**2) / (2.0 * m) * lap
    eye = sparse.identity(len(idx), format="csr")
    a = 1j * cfg.dt / (2.0 * hb)
    lhs = splu((eye + a * ham).tocsc())
    rhs = (eye - a * ham).tocsr()
    psi = psi0.ravel()[idx].astype(complex)
    for _ in range(cfg.n_steps):
        psi = lhs.solve(rhs @ psi)
    out = np.zeros(nx * ny, dtype=complex)
    out[idx] = psi
    result = WaveField2D(gx, gy, initial.time + cfg.duration, out.reshape(nx, ny))
    _check_norm(norm(initial), norm(result), DIRICHLET_NORM_TOL, "propagate_dirichlet_2d")
    return result


def propagate_dirichlet_box_2d(initial: WaveField2D, cfg: PropagatorConfig) -> WaveField2D:
    """
    Exact Dirichlet propagation in the rectangle spanned by the grid.

    Expands the interior samples in the box's sine eigenmodes (type-I DST),
    advances each mode by its phase for ``cfg.duration`` and transforms
    back. Spectrally accurate in space and exact in time, but limited to
    walls on the grid's outer frame.
    """
    gx, gy = initial.grid_x, initial.grid_y
    psi0 = initial.amplitudes
    frame = np.ones(psi0.shape, dtype=bool)
    frame[1:-1, 1:-1] = False
    if np.any(np.abs(psi0[frame]) > 1e-8):
        raise DomainError("initial field must vanish on the box walls")
    hb, m = cfg.consts.hbar, cfg.consts.mass
    lx = gx.x_max - gx.x_min
    ly = gy.x_max - gy.x_min
    kx = np.pi * np.arange(1, gx.n_points - 1) / lx
    ky = np.pi * np.arange(1, gy.n_points - 1) / ly
    omega = hb * (kx[:, None] ** 2 + ky[None, :] ** 2) / (2 * m)
    coeffs = scipy.fft.dstn(psi0[1:-1, 1:-1], type=1)
    inner = scipy.fft.idstn(coeffs * np.exp(-1j * omega * cfg.duration), type=1)
    out = np.zeros(psi0.shape, dtype=complex)
    out[1:-1, 1:-1] = inner
    result = WaveField2D(gx, gy, initial.time + cfg.duration, out)
    _check_norm(norm(initial), norm(result), DIRICHLET_NORM_TOL, "propagate_dirichlet_box_2d")
    return result


def l2_error(a, b) -> float:
    """
    L2 distance between two fields after removing the best global phase.

    Both fields must share grids and (to 1e-9 relative) times.
    """
    if type(a) is not type(b):
        raise DomainError("cannot compare 1D and 2D fields")
    if isinstance(a, WaveField2D):
        grids = (a.grid_x, a.grid_y)
        if grids != (b.grid_x, b.grid_y):
            raise DomainError("fields live on different grids")
    else:
        grids = (a.grid,)
        if a.grid != b.grid:
            raise DomainError("fields live on different grids")
    if not math.isclose(a.time, b.time, rel_tol=1e-9, abs_tol=1e-12):
        raise DomainError(f"fields are at different times ({a.time} vs {b.time})")
    ab = np.conj(a.amplitudes) * b.amplitudes
    for g in reversed(grids):
        ab = np.trapezoid(ab, dx=g.dx, axis=-1)
    overlap = complex(ab)
    phase = np.conj(overlap) / abs(overlap) if abs(overlap) > 0 else 1.0
    diff = a.amplitudes - phase * b.amplitudes
    return math.sqrt(max(integrate(np.abs(diff) ** 2, *grids), 0.0))
