"""Control state of the cube: subarray gates, phase offsets and routing.

Each subarray is a beamforming primitive driven by one binary amplitude
gate and one fixed phase offset.  Steering angles are given in the
normal-polar sense: ``steer_theta`` is the angle off the face normal and
``steer_phi`` selects the scan plane, measured from the local y axis
toward the local z axis.  Broadside is steer_theta = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from .geometry import CubeLayout, Direction, symmetric_indices


class Region(Enum):
    RECEIVE = "receive"
    REFLECT = "reflect"


class Pol(Enum):
    P1 = "p1"
    P2 = "p2"


class StateIncompleteError(LookupError):
    """A gate or offset entry required for weight evaluation is missing."""


@dataclass(eq=False)
class SubarraySpec:
    """One n x n block of elements driven as a unit."""

    face_id: int
    subarray_id: int
    n: int
    d1: float
    d2: float
    center: np.ndarray
    steer_theta: float
    steer_phi: float
    region: Region
    polarization: Pol

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("subarray must have at least one element per side")
        if self.d1 <= 0 or self.d2 <= 0:
            raise ValueError("element spacings must be positive")
        self.center = np.asarray(self.center, dtype=float)

    @property
    def key(self) -> tuple[int, int]:
        return (self.face_id, self.subarray_id)


@dataclass
class ControlState:
    """Gates A, offsets Phi, and inter-face routing bits b(s->t).

    ``transfer`` optionally assigns a complex coefficient to an enabled
    routing edge (default 1+0j, lossless).  ``incident`` optionally enables
    a plane-wave excitation taper exp(j k0 u_inc . r) on every active
    element; it is off (None) by default.
    """

    illuminated_face: int
    gates: dict = dc_field(default_factory=dict)
    offsets: dict = dc_field(default_factory=dict)
    routing: dict = dc_field(default_factory=dict)
    transfer: dict = dc_field(default_factory=dict)
    incident: Direction | None = None


def wrap_phase(psi: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    return math.pi - (math.pi - psi) % (2.0 * math.pi)


def progressive_phase(sub: SubarraySpec, n: float, m: float, k0: float) -> float:
    """Steering phase of element (n, m), wrapped to (-pi, pi].

    psi = -k0 (n d1 sin(st) cos(sp) + m d2 sin(st) sin(sp)) with the
    subarray's normal-polar steering angles (st, sp); the two trig products
    are the in-plane components of the steering direction along the local
    y and z axes.
    """
    st = math.sin(sub.steer_theta)
    psi = -k0 * (
        n * sub.d1 * st * math.cos(sub.steer_phi)
        + m * sub.d2 * st * math.sin(sub.steer_phi)
    )
    return wrap_phase(psi)


def subarray_phases(sub: SubarraySpec, k0: float) -> np.ndarray:
    """Progressive phases for the whole block, row-major over (n, m)."""
    idx = symmetric_indices(sub.n)
    nn, mm = np.meshgrid(idx, idx, indexing="ij")
    st = math.sin(sub.steer_theta)
    psi = -k0 * (
        nn.ravel() * sub.d1 * st * math.cos(sub.steer_phi)
        + mm.ravel() * sub.d2 * st * math.sin(sub.steer_phi)
    )
    return np.pi - np.mod(np.pi - psi, 2.0 * np.pi)


def element_weight(state: ControlState, sub: SubarraySpec, n: float, m: float, k0: float) -> complex:
    """Excitation w = A * exp(j Phi) * exp(j psi(n, m)); |w| is 0 or 1."""
    key = sub.key
    if key not in state.gates:
        raise StateIncompleteError(f"no gate for face {key[0]} subarray {key[1]}")
    if key not in state.offsets:
        raise StateIncompleteError(f"no offset for face {key[0]} subarray {key[1]}")
    gate = state.gates[key]
    if gate == 0:
        return 0j
    psi = progressive_phase(sub, n, m, k0)
    return gate * complex(math.cos(state.offsets[key] + psi), math.sin(state.offsets[key] + psi))


def participating_faces(state: ControlState) -> set[int]:
    """The illuminated face plus every face reached by an enabled switch."""
    faces = {state.illuminated_face}
    for (s, t), bit in state.routing.items():
        if s == state.illuminated_face and bit:
            faces.add(t)
    return faces


def validate_state(state: ControlState, layout: CubeLayout, subarrays: list[SubarraySpec]) -> list[str]:
    """Check a control state against a layout; returns all violations."""
    violations = []
    by_key = {sub.key: sub for sub in subarrays}
    n_faces = len(layout.faces)
    if not 0 <= state.illuminated_face < n_faces:
        violations.append(f"illuminated_face {state.illuminated_face} is not a face id")

    for key, gate in state.gates.items():
        if key not in by_key:
            violations.append(f"gate key {key} refers to no subarray")
        if gate not in (0, 1):
            violations.append(f"gate {key} not binary: {gate}")
        if key not in state.offsets:
            violations.append(f"gate key {key} has no matching offset")
    for key, off in state.offsets.items():
        if key not in by_key:
            violations.append(f"offset key {key} refers to no subarray")
        if not 0.0 <= off < 2.0 * math.pi:
            violations.append(f"offset {key} outside [0, 2*pi): {off}")

    for (s, t), bit in state.routing.items():
        if bit not in (0, 1):
            violations.append(f"routing bit ({s}, {t}) not binary: {bit}")
        if not (0 <= s < n_faces and 0 <= t < n_faces) or not layout.adjacent(s, t):
            violations.append(f"routing pair ({s}, {t}) is not an adjacent face pair")
        elif bit and s == state.illuminated_face:
            if not any(sub.face_id == t and sub.region is Region.REFLECT for sub in subarrays):
                violations.append(f"routing target face {t} has no reflect subarrays")
    for key in state.transfer:
        if key not in state.routing:
            violations.append(f"transfer coefficient for undeclared routing pair {key}")

    # every subarray on a participating face needs a gate and an offset
    for face in sorted(participating_faces(state)):
        for sub in subarrays:
            if sub.face_id != face:
                continue
            if sub.key not in state.gates:
                violations.append(f"participating face {face} subarray {sub.subarray_id} has no gate")
            if sub.key not in state.offsets:
                violations.append(f"participating face {face} subarray {sub.subarray_id} has no offset")
    return violations
