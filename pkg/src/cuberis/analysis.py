"""Beam metrics from pattern grids: peaks, cuts, HPBW, SLL, directivity.

No-signal cases are signalled, not raised: an all-zero grid has no peak
(None), a cut that never falls 3 dB below its max has unbounded beamwidth
(inf), a single-lobe cut has sidelobe level -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import PatternGrid
from .geometry import Direction

DB_FLOOR = -100.0


@dataclass(frozen=True)
class Cut:
    """One-dimensional pattern cut, normalized so the cut max is 0 dB."""

    angles: np.ndarray  # radians, ascending
    db: np.ndarray
    circular: bool = False  # angles cover a full circle


@dataclass(frozen=True)
class BeamReport:
    peak: Direction
    peak_mag_db: float  # absolute 20*log10 of the peak field magnitude
    hpbw_deg: float
    sll_db: float
    directivity_dbi: float | None


def peak_direction(grid: PatternGrid, pol: int):
    """Grid sample of maximum magnitude, or None for an all-zero grid.

    Ties break toward the lowest theta index, then the lowest phi index.
    """
    mag = grid.magnitude(pol)
    flat = int(np.argmax(mag))
    if mag.flat[flat] == 0.0:
        return None
    i, k = np.unravel_index(flat, mag.shape)
    return Direction(float(grid.theta_axis[i]), float(grid.phi_axis[k])), float(mag[i, k])


def _axis_index(axis: np.ndarray, value: float) -> int:
    hits = np.nonzero(np.abs(axis - value) <= 1e-12)[0]
    if hits.size == 0:
        raise ValueError(f"requested plane {value} is not on a grid line (no interpolation)")
    return int(hits[0])


def to_db(mag: np.ndarray) -> np.ndarray:
    """Normalize to the max and convert, flooring zeros at -100 dB."""
    peak = mag.max()
    if peak == 0.0:
        return np.full(mag.shape, DB_FLOOR)
    with np.errstate(divide="ignore"):
        return np.maximum(20.0 * np.log10(mag / peak), DB_FLOOR)


def cut(grid: PatternGrid, pol: int, theta: float | None = None,
        phi: float | None = None) -> Cut:
    """Constant-theta or constant-phi cut; the plane must lie on a grid line."""
    if (theta is None) == (phi is None):
        raise ValueError("specify exactly one of theta or phi")
    mag = grid.magnitude(pol)
    if theta is not None:
        row = mag[_axis_index(grid.theta_axis, theta), :]
        axis = grid.phi_axis
        step = axis[1] - axis[0] if axis.size > 1 else 0.0
        circular = axis.size > 2 and abs((axis[-1] - axis[0]) + step - 2 * np.pi) < 1e-9
    else:
        row = mag[:, _axis_index(grid.phi_axis, phi)]
        axis = grid.theta_axis
        circular = False
    return Cut(axis.copy(), to_db(row), circular)


def _extended(c: Cut):
    """Cut samples with circular continuation unrolled on both sides."""
    if not c.circular:
        return c.angles, c.db, 0
    span = 2 * np.pi
    ang = np.concatenate([c.angles - span, c.angles, c.angles + span])
    db = np.tile(c.db, 3)
    return ang, db, c.angles.size


def _cross_3db(ang: np.ndarray, db: np.ndarray, peak: int, side: int) -> float | None:
    """Angle of the first -3 dB crossing walking from the peak, or None."""
    j = peak
    while 0 <= j + side < ang.size:
        j += side
        if db[j] <= -3.0:
            a, b = db[j - side], db[j]
            frac = (-3.0 - a) / (b - a)
            return float(ang[j - side] + frac * (ang[j] - ang[j - side]))
    return None


def hpbw(c: Cut) -> float:
    """Half-power width in degrees between the first -3 dB crossings.

    Returns inf when the cut never falls 3 dB below its peak.
    """
    ang, db, offset = _extended(c)
    peak = offset + int(np.argmax(c.db))
    lo = _cross_3db(ang, db, peak, -1)
    hi = _cross_3db(ang, db, peak, +1)
    if lo is None or hi is None:
        return math.inf
    return math.degrees(hi - lo)


def _main_lobe_edge(db: np.ndarray, peak: int, side: int) -> int:
    """Index of the main-lobe delimiter: first local min below -20 dB,
    falling back to the first strict local min, else the array edge."""
    fallback = None
    j = peak
    while 0 < j + side < db.size - 1:
        j += side
        if db[j] < db[j - 1] and db[j] < db[j + 1]:
            if db[j] <= -20.0:
                return j
            if fallback is None:
                fallback = j
    if fallback is not None:
        return fallback
    return 0 if side < 0 else db.size - 1


def sidelobe_level(c: Cut) -> float:
    """Highest local maximum outside the main lobe, dB relative to the peak.

    Endpoint samples of a non-circular cut count as lobes when they top
    their inner neighbor.  Returns -inf when no secondary lobe exists.
    """
    _, db, offset = _extended(c)
    n = c.angles.size
    peak = offset + int(np.argmax(c.db))
    left = _main_lobe_edge(db, peak, -1)
    right = _main_lobe_edge(db, peak, +1)
    best = -math.inf
    if c.circular:
        # scan the single unrolled period between the lobe edges
        for j in range(right + 1, left + n):
            if db[j] >= db[j - 1] and db[j] >= db[j + 1]:
                best = max(best, float(db[j]))
    else:
        for j in range(db.size):
            if left <= j <= right:
                continue
            lo_ok = j == 0 or db[j] >= db[j - 1]
            hi_ok = j == db.size - 1 or db[j] >= db[j + 1]
            if lo_ok and hi_ok:
                best = max(best, float(db[j]))
    return best


def sphere_weights(theta_axis: np.ndarray, phi_axis: np.ndarray) -> np.ndarray:
    """Quadrature weights (n_theta, n_phi): trapezoid in theta with sin(theta),
    midpoint in phi.  Integrating 1 returns ~4*pi on a full-sphere grid."""
    if theta_axis.size < 2 or phi_axis.size < 1:
        raise ValueError("grid too small for sphere quadrature")
    w_theta = np.zeros(theta_axis.size)
    dt = np.diff(theta_axis)
    w_theta[:-1] += dt / 2.0
    w_theta[1:] += dt / 2.0
    if phi_axis.size > 1:
        dphi = float(phi_axis[1] - phi_axis[0])
    else:
        dphi = 2.0 * np.pi
    return np.outer(w_theta * np.sin(theta_axis), np.full(phi_axis.size, dphi))


def _check_full_sphere(grid: PatternGrid) -> None:
    th, ph = grid.theta_axis, grid.phi_axis
    if th[0] > 1e-9 or th[-1] < np.pi - 1e-9:
        raise ValueError("directivity needs a grid spanning theta in [0, pi]")
    if ph.size > 1:
        step = ph[1] - ph[0]
        if abs((ph[-1] - ph[0]) + step - 2.0 * np.pi) > 1e-9:
            raise ValueError("directivity needs phi covering a full circle")


def _nearest(axis: np.ndarray, value: float) -> int:
    return int(np.argmin(np.abs(axis - value)))


def directivity(grid: PatternGrid, pol: int, u: Direction) -> float | None:
    """Directivity 4*pi*|E(u)|^2 / integral(|E|^2 dOmega) in dBi.

    Evaluated at the grid sample nearest to u; None when the pattern
    carries no power.
    """
    _check_full_sphere(grid)
    mag2 = grid.magnitude(pol) ** 2
    total = float(np.sum(mag2 * sphere_weights(grid.theta_axis, grid.phi_axis)))
    if total == 0.0:
        return None
    i = _nearest(grid.theta_axis, u.theta)
    k = _nearest(grid.phi_axis, u.phi)
    d = 4.0 * np.pi * mag2[i, k] / total
    return -math.inf if d == 0.0 else 10.0 * math.log10(d)


def state_contrast(grid_a: PatternGrid, grid_b: PatternGrid, pol: int, u: Direction) -> float:
    """20*log10(|E_a(u)| / |E_b(u)|); +inf when only b vanishes at u."""
    if not (np.array_equal(grid_a.theta_axis, grid_b.theta_axis)
            and np.array_equal(grid_a.phi_axis, grid_b.phi_axis)):
        raise ValueError("grids must share axes")
    i = _nearest(grid_a.theta_axis, u.theta)
    k = _nearest(grid_a.phi_axis, u.phi)
    a = abs(grid_a.samples[pol, i, k])
    b = abs(grid_b.samples[pol, i, k])
    if b == 0.0:
        return math.inf if a > 0.0 else 0.0
    return 20.0 * math.log10(a / b)


def beam_report(grid: PatternGrid, pol: int) -> BeamReport | None:
    """Peak, beamwidth, sidelobe level and directivity for one channel.

    HPBW and SLL come from the constant-theta cut through the peak;
    directivity is computed when the grid spans the full sphere.
    """
    found = peak_direction(grid, pol)
    if found is None:
        return None
    peak, mag = found
    c = cut(grid, pol, theta=peak.theta)
    try:
        d = directivity(grid, pol, peak)
    except ValueError:
        d = None
    return BeamReport(peak, 20.0 * math.log10(mag), hpbw(c), sidelobe_level(c), d)
