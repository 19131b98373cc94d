"""Control-state search: offset optimization and beam-switching codebooks.

The offset search is exhaustive on its grid (a handful of subarrays times
at most 72 steps), which makes it exact there and lets an independent
re-enumeration serve as its own oracle.  Candidate fields are assembled
from per-subarray basis patterns; this is valid because the total field is
linear in the per-subarray weights.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .analysis import BeamReport, beam_report
from .control import ControlState
from .field import Scene, pattern_grid
from .geometry import Direction


@dataclass(frozen=True)
class SearchResult:
    offsets: dict  # (face, p) -> radians, first enabled pinned to 0
    achieved: Direction
    magnitude: float
    angular_error: float  # radians, great-circle


@dataclass(frozen=True)
class CodebookEntry:
    target: Direction
    config: str  # "single", "pair" or "all_on"
    state: ControlState
    report: BeamReport | None


@dataclass(frozen=True)
class Codebook:
    entries: tuple
    target_axis: tuple
    cut_step: float  # radians, evaluation resolution of the achieved reports


def angular_distance(a: Direction, b: Direction) -> float:
    """Great-circle angle between two directions."""
    return float(np.arccos(np.clip(np.dot(a.unit_vector(), b.unit_vector()), -1.0, 1.0)))


def _full_state(scene: Scene, face: int, gates: dict, offsets: dict) -> ControlState:
    """State with explicit zero gates/offsets for every subarray on the face."""
    g = {s.key: 0 for s in scene.subarrays_on(face)}
    o = {s.key: 0.0 for s in scene.subarrays_on(face)}
    g.update(gates)
    o.update(offsets)
    return ControlState(illuminated_face=face, gates=g, offsets=o)


def _cut_axis(step: float) -> np.ndarray:
    return np.arange(0.0, 2.0 * np.pi - step / 2.0, step)


def _cut_rows(scene: Scene, state: ControlState, phi_axis: np.ndarray) -> np.ndarray:
    grid = pattern_grid(scene, state, [np.pi / 2.0], phi_axis)
    return grid.samples[:, 0, :]


def _peak_of(rows: np.ndarray, phi_axis: np.ndarray) -> tuple[Direction, float]:
    mag = np.abs(rows)
    pol, k = np.unravel_index(int(np.argmax(mag)), mag.shape)
    return Direction(np.pi / 2.0, float(phi_axis[k])), float(mag[pol, k])


def phase_offset_search(scene: Scene, gates: dict, target: Direction,
                        offset_step: float, cut_step: float = math.radians(0.5)) -> SearchResult:
    """Exhaustive per-subarray offset search steering the cut peak to target.

    The first enabled subarray is pinned to zero offset (a common shift
    leaves the magnitude pattern unchanged).  Ties in achieved angular
    error break toward higher peak magnitude, then lexicographically
    smaller offsets.
    """
    enabled = sorted(k for k, bit in gates.items() if bit)
    if not enabled:
        raise ValueError("no enabled gates to search over")
    steps = 2.0 * np.pi / offset_step
    if abs(steps - round(steps)) > 1e-9:
        raise ValueError("offset_step must divide 2*pi")
    face = enabled[0][0]
    phi_axis = _cut_axis(cut_step)

    basis = {}
    for key in enabled:
        state = _full_state(scene, face, {key: 1}, {})
        basis[key] = _cut_rows(scene, state, phi_axis)

    grid = np.arange(int(round(steps))) * offset_step
    best = None
    for combo in itertools.product(grid, repeat=len(enabled) - 1):
        offs = (0.0,) + combo
        rows = sum(np.exp(1j * o) * basis[k] for k, o in zip(enabled, offs))
        achieved, mag = _peak_of(rows, phi_axis)
        err = angular_distance(achieved, target)
        cand = (err, -mag, offs)
        if best is None or cand < best[0]:
            best = (cand, achieved, mag)
    (err, neg_mag, offs), achieved, mag = best
    return SearchResult(dict(zip(enabled, offs)), achieved, mag, err)


def codebook_generate(scene: Scene, targets: list[Direction], *,
                      illuminated_face: int = 0,
                      offset_step: float = math.radians(5.0),
                      cut_step: float = math.radians(0.5),
                      accept_tol: float = math.radians(3.0)) -> Codebook:
    """Best control state per target: single subarrays first, then offset
    pairs, then the all-on wide state as fallback."""
    if not targets:
        raise ValueError("targets must be non-empty")
    keys = sorted(s.key for s in scene.subarrays_on(illuminated_face))
    phi_axis = _cut_axis(cut_step)
    entries = []
    for target in targets:
        chosen = None
        best_single = None
        for key in keys:
            state = _full_state(scene, illuminated_face, {key: 1}, {})
            achieved, mag = _peak_of(_cut_rows(scene, state, phi_axis), phi_axis)
            err = angular_distance(achieved, target)
            cand = (err, -mag, key)
            if best_single is None or cand < best_single[0]:
                best_single = (cand, state)
        if best_single is not None and best_single[0][0] <= accept_tol:
            chosen = ("single", best_single[1])
        if chosen is None and len(keys) >= 2:
            best_pair = None
            for a, b in itertools.combinations(keys, 2):
                res = phase_offset_search(scene, {a: 1, b: 1}, target, offset_step, cut_step)
                cand = (res.angular_error, -res.magnitude, (a, b))
                if best_pair is None or cand < best_pair[0]:
                    state = _full_state(scene, illuminated_face, {a: 1, b: 1},
                                        {a: res.offsets[a], b: res.offsets[b]})
                    best_pair = (cand, state)
            if best_pair is not None and best_pair[0][0] <= accept_tol:
                chosen = ("pair", best_pair[1])
        if chosen is None:
            state = _full_state(scene, illuminated_face, {k: 1 for k in keys}, {})
            chosen = ("all_on", state)
        config, state = chosen
        grid = pattern_grid(scene, state, [np.pi / 2.0], phi_axis)
        pol = int(np.argmax([np.abs(grid.samples[p]).max() for p in (0, 1)]))
        entries.append(CodebookEntry(target, config, state, beam_report(grid, pol)))
    return Codebook(tuple(entries), tuple(targets), cut_step)


@dataclass(frozen=True)
class CoverageReport:
    fraction: float
    angles: np.ndarray  # radians, sector sample points
    best_entry: np.ndarray  # per-direction index of the best codebook entry
    level: np.ndarray  # per-direction best normalized level, dB


def coverage_report(scene: Scene, codebook: Codebook, phi_lo: float, phi_hi: float,
                    level_db: float, *, theta: float = np.pi / 2.0) -> CoverageReport:
    """Fraction of a phi sector covered above level_db by the best entry.

    Each entry is normalized to its own full-circle cut maximum before the
    sector comparison.
    """
    if not codebook.entries:
        raise ValueError("empty codebook")
    if not phi_hi > phi_lo:
        raise ValueError("empty sector")
    step = codebook.cut_step
    phi_axis = _cut_axis(step)
    sector = np.arange(phi_lo, phi_hi + step / 2.0, step)
    levels = np.full((len(codebook.entries), sector.size), -np.inf)
    for i, entry in enumerate(codebook.entries):
        grid = pattern_grid(scene, entry.state, [theta], np.sort(np.mod(sector, 2 * np.pi)))
        full = pattern_grid(scene, entry.state, [theta], phi_axis)
        peak = max(np.abs(full.samples[p]).max() for p in (0, 1))
        if peak == 0.0:
            continue
        mag = np.abs(grid.samples).max(axis=0)[0]
        order = np.argsort(np.argsort(np.mod(sector, 2 * np.pi)))
        with np.errstate(divide="ignore"):
            levels[i] = np.maximum(20.0 * np.log10(mag[order] / peak), -300.0)
    best_entry = np.argmax(levels, axis=0)
    level = levels[best_entry, np.arange(sector.size)]
    fraction = float(np.mean(level >= level_db))
    return CoverageReport(fraction, sector, best_entry, level)
