"""
Closed-form free-particle Gaussian packets and their image constructions.

All functions broadcast over ``x`` (and ``y``) and evaluate at a single
time ``t >= 0``. A single packet centered at ``c`` is

    G(x; c, t) = exp(-(x - c)**2 / (2 beta**2 s)) / (pi**0.25 * sqrt(beta * s)),
    s = 1 + i t / t0,  t0 = m beta**2 / hbar,

which is unit-normalized and solves the free Schroedinger equation.
Hard-wall geometries (half-line, box, corner, wedge) are built as signed
sums of such packets over the reflection group of the walls. Their
normalization comes from the t=0 overlaps
``<G(c)|G(c')> = exp(-|c - c'|**2 / (4 beta**2))``; for a finite group,
the norm over the allowed region is ``sum_g sign(g) <G(c)|G(g c)>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import PacketParams
from .errors import DegenerateSuperposition, DomainError, TimeDomainError

__all__ = [
    "EPS_NORM",
    "GaussianTerm",
    "GaussianTerm2D",
    "WidthSchedule",
    "WedgeGeometry",
    "gaussian_packet",
    "gaussian_packet_2d",
    "two_bec_norm",
    "two_bec_wavefunction",
    "two_bec_density",
    "two_bec_momentum_density",
    "fringe_wavenumber",
    "fringe_wavelength_farfield",
    "multi_packet_norm",
    "multi_packet_wavefunction",
    "mirror_norm",
    "mirror_wavefunction",
    "well_image_norm",
    "well_image_count",
    "well_image_wavefunction",
    "corner_norm",
    "corner_wavefunction",
    "wedge_norm",
    "wedge_wavefunction",
]

#: Superpositions whose squared norm falls below this are treated as vanishing.
EPS_NORM = 1e-12


@dataclass(frozen=True)
class GaussianTerm:
    """A single p=0 Gaussian packet released at ``center``."""

    center: float
    params: PacketParams


@dataclass(frozen=True)
class GaussianTerm2D:
    """Isotropic 2D Gaussian packet released at ``center = (x0, y0)``."""

    center: tuple[float, float]
    params: PacketParams


@dataclass(frozen=True)
class WidthSchedule:
    """Width of a single spreading packet, beta_t = beta * sqrt(1 + (t/t0)**2)."""

    beta0: float
    t0: float

    def __post_init__(self):
        if not (self.beta0 > 0 and self.t0 > 0):
            raise DomainError("beta0 and t0 must be positive")

    @classmethod
    def from_params(cls, params: PacketParams) -> "WidthSchedule":
        return cls(params.beta, params.t0)

    def beta_t(self, t):
        return self.beta0 * np.sqrt(1.0 + (np.asarray(t) / self.t0) ** 2)

    def delta_x(self, t):
        """Position spread, beta_t / sqrt(2)."""
        return self.beta_t(t) / math.sqrt(2.0)

    def delta_p(self, hbar: float = 1.0) -> float:
        """Momentum spread hbar / (beta sqrt 2); constant for a free packet."""
        return hbar / (self.beta0 * math.sqrt(2.0))


def _check_time(t):
    if t < 0:
        raise TimeDomainError(f"negative time t={t} is not modeled")


def _spread_factor(params: PacketParams, t: float) -> complex:
    _check_time(t)
    return 1.0 + 1j * t / params.t0


def _gauss(x, center, beta, s):
    # s = 1 + i t/t0 carries all time dependence
    x = np.asarray(x, dtype=float)
    return np.exp(-((x - center) ** 2) / (2.0 * beta**2 * s)) / (
        np.pi**0.25 * np.sqrt(beta * s)
    )


def gaussian_packet(term: GaussianTerm, x, t: float):
    """Amplitude of a single freely spreading Gaussian packet."""
    s = _spread_factor(term.params, t)
    return _gauss(x, term.center, term.params.beta, s)


def gaussian_packet_2d(term: GaussianTerm2D, x, y, t: float):
    s = _spread_factor(term.params, t)
    beta = term.params.beta
    x0, y0 = term.center
    return _gauss(x, x0, beta, s) * _gauss(y, y0, beta, s)


# ---------------------------------------------------------------- two packets


def two_bec_norm(params: PacketParams) -> float:
    """
    Normalization constant of the two-packet state,
    ``(1/sqrt 2) * (1 + cos(phi) exp(-d**2 / 4 beta**2))**-0.5``.

    Raises
    ------
    DegenerateSuperposition
        If the bracket is at most ``EPS_NORM`` (phi = pi with coincident packets).
    """
    q = 1.0 + math.cos(params.phi) * math.exp(-(params.d**2) / (4.0 * params.beta**2))
    if q <= EPS_NORM:
        raise DegenerateSuperposition(
            f"two-packet state vanishes (phi={params.phi}, d={params.d}, beta={params.beta})"
        )
    return 1.0 / math.sqrt(2.0 * q)


def two_bec_wavefunction(params: PacketParams, x, t: float):
    """Packets at +d/2 and -d/2, the second carrying the relative phase phi."""
    n = two_bec_norm(params)
    s = _spread_factor(params, t)
    beta, half = params.beta, params.d / 2.0
    return n * (_gauss(x, half, beta, s) + np.exp(1j * params.phi) * _gauss(x, -half, beta, s))


def two_bec_density(params: PacketParams, x, t: float):
    """
    Closed-form probability density of :func:`two_bec_wavefunction`.

    The cross term ``2 exp(-(d**2 + 4x**2) / 4 beta_t**2) cos(phi + t d x / (t0 beta_t**2))``
    carries the interference fringes.
    """
    n = two_bec_norm(params)
    _check_time(t)
    x = np.asarray(x, dtype=float)
    d, t0 = params.d, params.t0
    bt2 = params.beta**2 * (1.0 + (t / t0) ** 2)
    direct = np.exp(-((x - d / 2) ** 2) / bt2) + np.exp(-((x + d / 2) ** 2) / bt2)
    cross = 2.0 * np.exp(-(d**2 + 4.0 * x**2) / (4.0 * bt2)) * np.cos(
        params.phi + t * d * x / (t0 * bt2)
    )
    return n**2 / (math.sqrt(math.pi * bt2)) * (direct + cross)


def two_bec_momentum_density(params: PacketParams, p):
    """
    Momentum-space density ``(4 N**2 alpha / sqrt pi) cos**2(p d / 2 hbar + phi/2) exp(-alpha**2 p**2)``
    with ``alpha = beta / hbar``. Free evolution only adds a phase in momentum
    space, so there is no time argument. For phi = 0 the zeros sit at
    ``p = (2k + 1) pi hbar / d``.
    """
    n = two_bec_norm(params)
    hbar = params.consts.hbar
    alpha = params.beta / hbar
    p = np.asarray(p, dtype=float)
    return (
        4.0 * n**2 * alpha / math.sqrt(math.pi)
        * np.cos(p * params.d / (2.0 * hbar) + params.phi / 2.0) ** 2
        * np.exp(-(alpha**2) * p**2)
    )


def _check_fringe_args(params, t):
    if not t > 0:
        raise DomainError(f"fringes need t > 0, got {t}")
    if not params.d > 0:
        raise DomainError("fringes need a nonzero separation d")


def fringe_wavenumber(params: PacketParams, t: float) -> float:
    """Exact fringe wavenumber t d / (t0 beta_t**2), read off the density's cosine."""
    _check_fringe_args(params, t)
    bt2 = params.beta**2 * (1.0 + (t / params.t0) ** 2)
    return t * params.d / (params.t0 * bt2)


def fringe_wavelength_farfield(params: PacketParams, t: float) -> float:
    """
    Far-field fringe spacing ``2 pi hbar t / (m d)``.

    Only meaningful once ``(t/t0)**2 >> 1``; checking that is up to the caller.
    """
    _check_fringe_args(params, t)
    c = params.consts
    return 2.0 * math.pi * c.hbar * t / (c.mass * params.d)


# -------------------------------------------------------------- many packets


def multi_packet_norm(terms: Sequence[tuple[float, float]], params: PacketParams) -> float:
    """
    Normalization of ``sum_k exp(i phi_k) G(x; x_k)`` from the analytic Gram matrix.

    ``terms`` is a sequence of ``(center, phase)`` pairs.
    """
    if len(terms) == 0:
        raise DomainError("need at least one packet")
    centers = np.array([c for c, _ in terms], dtype=float)
    phases = np.array([ph for _, ph in terms], dtype=float)
    gram = np.exp(-((centers[:, None] - centers[None, :]) ** 2) / (4.0 * params.beta**2))
    gram = gram * np.exp(1j * (phases[None, :] - phases[:, None]))
    total = float(np.real(gram.sum()))
    if total <= EPS_NORM:
        raise DegenerateSuperposition("multi-packet superposition vanishes")
    return 1.0 / math.sqrt(total)


def multi_packet_wavefunction(terms, params: PacketParams, x, t: float):
    n = multi_packet_norm(terms, params)
    s = _spread_factor(params, t)
    out = np.zeros(np.shape(x), dtype=complex)
    for center, phase in terms:
        out = out + np.exp(1j * phase) * _gauss(x, center, params.beta, s)
    return n * out


# ------------------------------------------------------------- single mirror


def mirror_norm(base: GaussianTerm) -> float:
    """Normalization for a packet at x0 < 0 and its image at -x0, 1/sqrt(1 - exp(-x0**2/beta**2))."""
    c = base.center
    if c > 0:
        raise DomainError(f"packet must start in the allowed region x <= 0, got {c}")
    q = -math.expm1(-(c**2) / base.params.beta**2)
    if q <= EPS_NORM:
        raise DegenerateSuperposition("packet sits on the wall; the mirror state vanishes")
    return 1.0 / math.sqrt(q)


def mirror_wavefunction(base: GaussianTerm, x, t: float):
    """
    Packet reflecting from a hard wall at x = 0, confined to x <= 0.

    Built as ``Ntilde * (psi(x, t) - psi(-x, t))``; with the packet at
    ``-d/2`` this is the two-packet state at phi = pi and ``Ntilde = sqrt(2) N``.
    Returns exactly zero for x > 0 and at the wall.
    """
    n = mirror_norm(base)
    s = _spread_factor(base.params, t)
    x = np.asarray(x, dtype=float)
    beta, c = base.params.beta, base.center
    psi = n * (_gauss(x, c, beta, s) - _gauss(x, -c, beta, s))
    return np.where(x <= 0, psi, 0.0)


# ------------------------------------------------------------- infinite well


def _check_well(base: GaussianTerm, well):
    a, b = float(well[0]), float(well[1])
    if not a < b:
        raise DomainError(f"well must be an interval (a, b) with a < b, got {well}")
    if not a < base.center < b:
        raise DomainError(f"packet center {base.center} is not inside the well {well}")
    return a, b


def _well_images(c, a, b, n_images):
    width = b - a
    n = np.arange(-n_images, n_images + 1)
    shifted = c + 2.0 * n * width
    reflected = 2.0 * b - c + 2.0 * n * width
    return shifted, reflected


def well_image_norm(base: GaussianTerm, well) -> float:
    """Normalization of the image sum in the well, from the full (infinite) image group."""
    a, b = _check_well(base, well)
    beta, c = base.params.beta, base.center
    width = b - a
    # terms beyond this index are below exp(-1600)
    n_max = int(math.ceil(40.0 * beta / width)) + 2
    shifted, reflected = _well_images(c, a, b, n_max)
    total = np.sum(np.exp(-((c - shifted) ** 2) / (4 * beta**2))) - np.sum(
        np.exp(-((c - reflected) ** 2) / (4 * beta**2))
    )
    if total <= EPS_NORM:
        raise DegenerateSuperposition("well image sum vanishes")
    return 1.0 / math.sqrt(total)


def well_image_count(base: GaussianTerm, well, t: float, tol: float) -> int:
    """
    Number of image periods kept on each side so that the omitted images
    contribute less than ``tol`` to the amplitude anywhere in the well.

    Starts from ``ceil((L + 6 beta_t) / 2L) + 2`` and grows until a tail
    bound is met. Images with period index ``|n|`` lie at least
    ``2 (|n| - 1) L`` from any point in the well.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    a, b = _check_well(base, well)
    width = b - a
    beta_t = float(WidthSchedule.from_params(base.params).beta_t(t))
    amp = well_image_norm(base, well) / math.sqrt(math.sqrt(math.pi) * beta_t)

    def tail(n_img):
        total, n = 0.0, n_img + 1
        while True:
            term = 4.0 * amp * math.exp(-((2.0 * (n - 1) * width) ** 2) / (2.0 * beta_t**2))
            total += term
            if term < 1e-3 * tol or term == 0.0:
                return total
            n += 1

    n_img = math.ceil((width + 6.0 * beta_t) / (2.0 * width)) + 2
    while tail(n_img) >= tol:
        n_img += 1
    return n_img


def well_image_wavefunction(base: GaussianTerm, well, x, t: float, tol: float = 1e-12,
                            n_images: int | None = None):
    """
    Packet in an infinite well ``well = (a, b)`` as a truncated image sum.

    Images sit at ``c + 2nL`` (sign +) and ``2b - c + 2nL`` (sign -) with
    ``L = b - a``. The truncation is picked by :func:`well_image_count`
    unless ``n_images`` is given. Points outside the well get zero.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    a, b = _check_well(base, well)
    if n_images is None:
        n_images = well_image_count(base, well, t, tol)
    s = _spread_factor(base.params, t)
    beta = base.params.beta
    x = np.asarray(x, dtype=float)
    shifted, reflected = _well_images(base.center, a, b, n_images)
    psi = np.zeros(x.shape, dtype=complex)
    for cs, cr in zip(shifted, reflected):
        psi += _gauss(x, cs, beta, s) - _gauss(x, cr, beta, s)
    psi *= well_image_norm(base, well)
    return np.where((x >= a) & (x <= b), psi, 0.0)


# ------------------------------------------------------------ corner / wedge


def corner_norm(base: GaussianTerm2D) -> float:
    """Four-image normalization; it factorizes into two mirror constants."""
    x0, y0 = base.center
    if x0 < 0 or y0 < 0:
        raise DomainError(f"corner packet must start in the first quadrant, got {base.center}")
    beta = base.params.beta
    q = math.expm1(-(x0**2) / beta**2) * math.expm1(-(y0**2) / beta**2)
    if q <= EPS_NORM:
        raise DegenerateSuperposition("packet sits on a wall of the corner")
    return 1.0 / math.sqrt(q)


def corner_wavefunction(base: GaussianTerm2D, x, y, t: float):
    """
    Packet in the 90 degree corner x > 0, y > 0:
    ``N [psi(x, y) - psi(-x, y) - psi(x, -y) + psi(-x, -y)]``, zero outside.
    """
    n = corner_norm(base)
    s = _spread_factor(base.params, t)
    beta = base.params.beta
    x0, y0 = base.center
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gx = _gauss(x, x0, beta, s) - _gauss(-x, x0, beta, s)
    gy = _gauss(y, y0, beta, s) - _gauss(-y, y0, beta, s)
    psi = n * gx * gy
    return np.where((x >= 0) & (y >= 0), psi, 0.0)


_EXACT = np.array([0.0, 0.5, 1.0, -0.5, -1.0])


def _snap(m):
    # cos/sin of multiples of 45 or 60 degrees: make the rational entries exact
    out = m.copy()
    for v in _EXACT:
        out[np.abs(out - v) < 1e-14] = v
    return out


@dataclass(frozen=True)
class WedgeGeometry:
    """
    Wedge 0 <= theta <= angle between two hard walls through the origin.

    The walls generate a dihedral group of ``2 * 180 / angle`` elements:
    rotations by multiples of ``2 * angle`` (sign +1) and reflections across
    the lines at multiples of ``angle`` (sign -1).
    """

    angle: float

    SUPPORTED = (90, 60, 45)

    def __post_init__(self):
        if self.angle not in self.SUPPORTED:
            raise DomainError(f"wedge angle must be one of {self.SUPPORTED} degrees, got {self.angle}")

    @property
    def order(self) -> int:
        return int(round(180 / self.angle))

    @property
    def image_count(self) -> int:
        return 2 * self.order

    @property
    def matrices(self) -> np.ndarray:
        th = math.radians(self.angle)
        mats = []
        for k in range(self.order):
            g = 2 * k * th
            mats.append([[math.cos(g), -math.sin(g)], [math.sin(g), math.cos(g)]])
        for k in range(self.order):
            g = 2 * k * th
            mats.append([[math.cos(g), math.sin(g)], [math.sin(g), -math.cos(g)]])
        return _snap(np.array(mats))

    @property
    def signs(self) -> np.ndarray:
        return np.concatenate([np.ones(self.order), -np.ones(self.order)])

    def contains(self, x, y, strict=False):
        """Whether points lie in the wedge (closed, or open with ``strict``)."""
        th = math.radians(self.angle)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        upper = math.sin(th) * x - math.cos(th) * y
        if strict:
            return (y > 0) & (upper > 0)
        scale = 1e-12 * (np.abs(x) + np.abs(y) + 1.0)
        return (y >= -scale) & (upper >= -scale)


def _wedge_centers(geom: WedgeGeometry, base: GaussianTerm2D):
    c = np.asarray(base.center, dtype=float)
    return geom.matrices @ c


def wedge_norm(geom: WedgeGeometry, base: GaussianTerm2D) -> float:
    x0, y0 = base.center
    if not geom.contains(x0, y0):
        raise DomainError(f"packet center {base.center} lies outside the {geom.angle} degree wedge")
    centers = _wedge_centers(geom, base)
    c = np.asarray(base.center, dtype=float)
    dist2 = np.sum((centers - c) ** 2, axis=1)
    total = float(np.sum(geom.signs * np.exp(-dist2 / (4 * base.params.beta**2))))
    if total <= EPS_NORM:
        raise DegenerateSuperposition("packet sits on a wedge wall")
    return 1.0 / math.sqrt(total)


def wedge_wavefunction(geom: WedgeGeometry, base: GaussianTerm2D, x, y, t: float):
    """Signed image sum over the wedge's reflection group; zero outside the wedge."""
    n = wedge_norm(geom, base)
    s = _spread_factor(base.params, t)
    beta = base.params.beta
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    psi = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for sign, (cx, cy) in zip(geom.signs, _wedge_centers(geom, base)):
        psi += sign * _gauss(x, cx, beta, s) * _gauss(y, cy, beta, s)
    return np.where(geom.contains(x, y), n * psi, 0.0)
