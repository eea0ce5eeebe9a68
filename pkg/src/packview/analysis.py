"""
Measurements on sampled profiles: fringe spacing and visibility of a
density, and revival peaks of an autocorrelation trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoFringes

__all__ = ["FringeReport", "RevivalReport", "extract_fringes", "detect_revivals"]


@dataclass(frozen=True, eq=False)
class FringeReport:
    time: float
    local_wavelength: float
    visibility: float
    peak_positions: np.ndarray


@dataclass(frozen=True, eq=False)
class RevivalReport:
    times_of_maxima: np.ndarray
    magnitudes: np.ndarray


def _vertex(x0, x1, x2, y0, y1, y2):
    """Abscissa of the parabola through three points (x1 is the middle one)."""
    d0, d2 = x0 - x1, x2 - x1
    num = d0**2 * (y1 - y2) - d2**2 * (y1 - y0)
    den = d0 * (y1 - y2) - d2 * (y1 - y0)
    if den == 0:
        return x1
    return x1 + 0.5 * num / den


def _local_maxima(y, lo, hi, floor):
    # candidates in [lo, hi); strict on the left, non-strict on the right so
    # a two-sample plateau counts once
    i = np.arange(max(lo, 1), min(hi, len(y) - 1))
    keep = (y[i] > y[i - 1]) & (y[i] >= y[i + 1]) & (y[i] >= floor)
    return i[keep]


def _peaks(x, y, lo, hi, floor):
    idx = _local_maxima(y, lo, hi, floor)
    pos = np.array([_vertex(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1]) for i in idx])
    return idx, pos


def extract_fringes(x, density, window_center: float, half_width: float | None = None,
                    time: float = 0.0, min_relative_height: float = 1e-3,
                    flatten_envelope: bool = True) -> FringeReport:
    """
    Local fringe spacing and visibility of a sampled density near ``window_center``.

    Maxima inside ``window_center +/- half_width`` are located by three-point
    parabolic interpolation; maxima lower than ``min_relative_height`` times
    the window maximum are ignored. If ``half_width`` is None it is set to
    twice the spacing of the two raw maxima nearest the center.

    A smooth envelope drags every maximum toward the envelope peak by
    roughly ``2 (ln env)' / k**2``, which biases the spacing low (by about
    ``4 beta**2 / d**2`` for two expanding packets). With
    ``flatten_envelope`` the log of the maximum heights is fitted by a
    polynomial of degree <= 2, the density is divided by that envelope and
    the maxima are located again.

    The local wavelength is the mean adjacent-peak spacing. Visibility is
    ``(max - min) / (max + min)`` for the maximum nearest the center and the
    deepest sample between it and its nearest neighbouring maximum.

    Raises
    ------
    NoFringes
        If fewer than three maxima are found.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(density, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and density must be 1D arrays of equal length")
    if np.any(y < 0):
        raise DomainError("density must be nonnegative")

    if half_width is None:
        idx, pos = _peaks(x, y, 0, len(x), min_relative_height * y.max())
        if len(pos) < 2:
            raise NoFringes("fewer than two maxima in the whole profile")
        nearest = np.sort(pos[np.argsort(np.abs(pos - window_center))[:2]])
        half_width = 2.0 * (nearest[1] - nearest[0])
    if not half_width > 0:
        raise DomainError("half_width must be positive")

    lo = int(np.searchsorted(x, window_center - half_width, side="left"))
    hi = int(np.searchsorted(x, window_center + half_width, side="right"))
    if hi - lo < 3:
        raise NoFringes("analysis window holds fewer than three samples")
    floor = min_relative_height * y[lo:hi].max()
    idx, pos = _peaks(x, y, lo, hi, floor)
    if len(pos) < 3:
        raise NoFringes(f"found {len(pos)} maxima near x={window_center}, need at least 3")

    if flatten_envelope:
        u = pos - window_center
        deg = min(2, len(pos) - 1)
        for _ in range(2):
            heights = np.interp(pos, x, y)
            coef = np.polyfit(u, np.log(heights), deg)
            a, b = max(lo - 1, 0), min(hi + 1, len(y))
            flat = np.zeros_like(y)
            flat[a:b] = y[a:b] / np.exp(np.polyval(coef, x[a:b] - window_center))
            idx2, pos2 = _peaks(x, flat, lo, hi, min_relative_height * flat[lo:hi].max())
            if len(pos2) < 3:
                break
            idx, pos = idx2, pos2
            u = pos - window_center

    wavelength = float((pos[-1] - pos[0]) / (len(pos) - 1))

    c = int(np.argmin(np.abs(pos - window_center)))
    nb = c + 1 if c + 1 < len(pos) else c - 1
    if c > 0 and c + 1 < len(pos) and abs(pos[c - 1] - pos[c]) < abs(pos[c + 1] - pos[c]):
        nb = c - 1
    a, b = sorted((idx[c], idx[nb]))
    ymax = y[idx[c]]
    ymin = y[a:b + 1].min()
    visibility = float((ymax - ymin) / (ymax + ymin)) if ymax + ymin > 0 else 0.0
    return FringeReport(time, wavelength, visibility, pos)


def detect_revivals(t, trace, threshold: float) -> RevivalReport:
    """
    Local maxima of an autocorrelation magnitude trace above ``threshold``.

    Interior maxima get parabolic-interpolated times; a flat-topped maximum
    is reported at its earliest sample. The first and last samples are not
    treated as maxima, except that a trace that is one single plateau
    reports one maximum at its first sample. Magnitudes are sample values.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(trace, dtype=float)
    if t.shape != y.shape or t.ndim != 1 or len(t) < 1:
        raise DomainError("t and trace must be 1D arrays of equal nonzero length")
    if np.any(np.diff(t) <= 0):
        raise DomainError("t must be strictly increasing")
    if not 0 < threshold < 1:
        raise DomainError("threshold must lie in (0, 1)")

    # collapse runs of equal samples into plateaus
    starts = np.flatnonzero(np.concatenate(([True], y[1:] != y[:-1])))
    ends = np.concatenate((starts[1:] - 1, [len(y) - 1]))
    if len(starts) == 1:
        if y[0] > threshold:
            return RevivalReport(np.array([t[0]]), np.array([y[0]]))
        return RevivalReport(np.array([]), np.array([]))

    times, mags = [], []
    for k, (s, e) in enumerate(zip(starts, ends)):
        if k == 0 or k == len(starts) - 1:
            continue
        v = y[s]
        if not (y[s - 1] < v and y[e + 1] < v and v > threshold):
            continue
        if s == e:
            tm = _vertex(t[s - 1], t[s], t[s + 1], y[s - 1], y[s], y[s + 1])
        else:
            tm = t[s]
        times.append(tm)
        mags.append(v)
    return RevivalReport(np.array(times), np.array(mags))
