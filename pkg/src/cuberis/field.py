"""Array factor and total far field of the cube over directions and grids.

The field of a control state is the per-face coherent sum of element
phasors, weighted by that face's patch pattern evaluated in its local
frame and masked to zero for directions behind the face.  Subarrays tagged
with different polarizations accumulate into separate channels that never
mix.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import phasor_sum
from .control import ControlState, Pol, SubarraySpec, participating_faces, subarray_phases, validate_state
from .element import ElementModel, element_field
from .geometry import CubeLayout, Direction, element_positions

POL_INDEX = {Pol.P1: 0, Pol.P2: 1}

_CHUNK = 4096  # directions per kernel call; fixed so results never depend on worker count


@dataclass(eq=False)
class Scene:
    """Geometry plus element model: everything a control state acts on."""

    layout: CubeLayout
    subarrays: list[SubarraySpec]
    element: ElementModel

    def subarrays_on(self, face_id: int) -> list[SubarraySpec]:
        return [s for s in self.subarrays if s.face_id == face_id]


@dataclass(eq=False)
class PatternGrid:
    """Complex field samples per polarization over a (theta, phi) lattice."""

    theta_axis: np.ndarray
    phi_axis: np.ndarray
    samples: np.ndarray  # shape (2, n_theta, n_phi)

    def magnitude(self, pol: int) -> np.ndarray:
        return np.abs(self.samples[pol])


def _require_valid(scene: Scene, state: ControlState) -> None:
    violations = validate_state(state, scene.layout, scene.subarrays)
    if violations:
        raise ValueError("invalid control state: " + "; ".join(violations))


def _active_groups(scene: Scene, state: ControlState):
    """Per participating face and channel: concatenated positions and weights."""
    k0 = scene.element.k0
    groups = {}
    u_inc = state.incident.unit_vector() if state.incident is not None else None
    for face in sorted(participating_faces(state)):
        frame = scene.layout.faces[face]
        per_pol = {0: ([], []), 1: ([], [])}
        for sub in scene.subarrays_on(face):
            if state.gates[sub.key] == 0:
                continue
            w = np.exp(1j * (state.offsets[sub.key] + subarray_phases(sub, k0)))
            if face != state.illuminated_face:
                w = w * state.transfer.get((state.illuminated_face, face), 1.0 + 0.0j)
            pos = element_positions(frame, sub)
            if u_inc is not None:
                w = w * np.exp(1j * k0 * (pos @ u_inc))
            bucket = per_pol[POL_INDEX[sub.polarization]]
            bucket[0].append(pos)
            bucket[1].append(w)
        groups[face] = {
            pol: (np.ascontiguousarray(np.vstack(b[0])), np.concatenate(b[1]))
            for pol, b in per_pol.items()
            if b[0]
        }
    return groups


def _accumulate(scene: Scene, groups, dirs: np.ndarray, out: np.ndarray,
                with_element: bool) -> None:
    """Sum face contributions for a direction block into out (2, n)."""
    k0 = scene.element.k0
    scratch = np.empty(dirs.shape[0], dtype=complex)
    for face in sorted(groups):
        frame = scene.layout.faces[face]
        if with_element:
            local = dirs @ frame.rotation
            mask = local[:, 0] >= 0.0
            theta_s = np.arccos(np.clip(local[:, 2], -1.0, 1.0))
            phi_s = np.arctan2(local[:, 1], local[:, 0])
            taper = element_field(scene.element, theta_s, phi_s) * mask
        else:
            taper = None
        for pol, (pos, weights) in groups[face].items():
            phasor_sum(dirs, pos, weights, k0, scratch)
            out[pol] += scratch * taper if taper is not None else scratch


def _evaluate(scene: Scene, state: ControlState, dirs: np.ndarray,
              with_element: bool, workers: int = 1) -> np.ndarray:
    _require_valid(scene, state)
    groups = _active_groups(scene, state)
    dirs = np.ascontiguousarray(dirs, dtype=float)
    out = np.zeros((2, dirs.shape[0]), dtype=complex)
    spans = [(i, min(i + _CHUNK, dirs.shape[0])) for i in range(0, dirs.shape[0], _CHUNK)]
    if workers <= 1 or len(spans) <= 1:
        for a, b in spans:
            _accumulate(scene, groups, dirs[a:b], out[:, a:b], with_element)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_accumulate, scene, groups, dirs[a:b], out[:, a:b], with_element)
                for a, b in spans
            ]
            for f in futures:
                f.result()
    return out


def array_factor(scene: Scene, state: ControlState, u: Direction) -> np.ndarray:
    """Raw phasor sum per polarization channel, no element pattern or mask."""
    return _evaluate(scene, state, u.unit_vector()[None, :], with_element=False)[:, 0]


def far_field(scene: Scene, state: ControlState, u: Direction) -> np.ndarray:
    """Total field per polarization channel at one direction."""
    return _evaluate(scene, state, u.unit_vector()[None, :], with_element=True)[:, 0]


def direction_grid(theta_axis: np.ndarray, phi_axis: np.ndarray) -> np.ndarray:
    """Unit vectors for the grid, theta-major."""
    tt, pp = np.meshgrid(theta_axis, phi_axis, indexing="ij")
    st = np.sin(tt)
    return np.stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)], axis=-1).reshape(-1, 3)


def pattern_grid(scene: Scene, state: ControlState, theta_axis, phi_axis,
                 workers: int = 1) -> PatternGrid:
    """Far field sampled on a (theta, phi) lattice, both channels.

    Evaluation is deterministic: identical inputs give bit-identical
    samples for any worker count.
    """
    theta_axis = np.atleast_1d(np.asarray(theta_axis, dtype=float))
    phi_axis = np.atleast_1d(np.asarray(phi_axis, dtype=float))
    if theta_axis.size == 0 or phi_axis.size == 0:
        raise ValueError("grid axes must be non-empty")
    if theta_axis.size > 1 and not np.all(np.diff(theta_axis) > 0):
        raise ValueError("theta_axis must be strictly ascending")
    if phi_axis.size > 1 and not np.all(np.diff(phi_axis) > 0):
        raise ValueError("phi_axis must be strictly ascending")
    dirs = direction_grid(theta_axis, phi_axis)
    flat = _evaluate(scene, state, dirs, with_element=True, workers=workers)
    samples = flat.reshape(2, theta_axis.size, phi_axis.size)
    return PatternGrid(theta_axis, phi_axis, samples)
