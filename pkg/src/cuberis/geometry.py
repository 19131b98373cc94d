"""Coordinate frames for the cube faces and element placement.

Global spherical convention: theta is measured from global +z, phi from
global +x in the xy-plane.  Each face carries a local right-handed frame
whose first axis is the outward normal; the face plane is spanned by the
two tangent axes.  Local observation angles reuse the same convention
relative to the local axes: theta_s from the local z axis, phi_s from the
local x axis (the normal), so a direction along the normal has
(theta_s, phi_s) = (90 deg, 0 deg).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Opposite-face pairs for the canonical enumeration 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z.
_OPPOSITE = ((0, 1), (2, 3), (4, 5))

_FACE_NORMALS = np.array(
    [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ]
)

# Local z axis per face.  Side faces use the horizontal (azimuth-plane)
# tangent z_s = z_global x normal; top/bottom use global +x.  y_s completes
# the right-handed triad.
_FACE_ZS = np.array(
    [
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [-1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
    ]
)


@dataclass(frozen=True)
class Direction:
    """Unit observation direction given by spherical angles in radians."""

    theta: float
    phi: float

    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array(
            [st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)]
        )


def direction_from_vector(v: np.ndarray) -> Direction:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    v = v / n
    return Direction(float(np.arccos(np.clip(v[2], -1.0, 1.0))), float(np.arctan2(v[1], v[0])) % (2 * np.pi))


@dataclass(eq=False)
class FaceFrame:
    """Rotation (global <- local, columns are the local axes) plus origin.

    Column 0 of ``rotation`` is the outward face normal.
    """

    face_id: int
    rotation: np.ndarray
    origin: np.ndarray

    @property
    def normal(self) -> np.ndarray:
        return self.rotation[:, 0]


def face_frame(face_id: int, edge_length: float = 0.0) -> FaceFrame:
    """Canonical frame for one cube face; origin at the face center.

    Enumeration is fixed: 0:+x, 1:-x, 2:+y, 3:-y, 4:+z, 5:-z normals.
    """
    if not 0 <= face_id <= 5:
        raise ValueError(f"face_id must be in 0..5, got {face_id}")
    x = _FACE_NORMALS[face_id]
    z = _FACE_ZS[face_id]
    y = np.cross(z, x)
    rotation = np.column_stack([x, y, z])
    origin = (edge_length / 2.0) * x
    return FaceFrame(face_id, rotation, origin)


@dataclass(eq=False)
class CubeLayout:
    """Six face frames plus the cube edge length and face adjacency."""

    faces: list[FaceFrame]
    edge_length: float
    adjacency: frozenset = field(default_factory=frozenset)

    def adjacent(self, s: int, t: int) -> bool:
        return frozenset((s, t)) in self.adjacency


def cube_layout(edge_length: float) -> CubeLayout:
    if edge_length <= 0:
        raise ValueError("edge_length must be positive")
    faces = [face_frame(i, edge_length) for i in range(6)]
    opposite = {frozenset(p) for p in _OPPOSITE}
    adjacency = frozenset(
        frozenset((s, t))
        for s in range(6)
        for t in range(s + 1, 6)
        if frozenset((s, t)) not in opposite
    )
    return CubeLayout(faces, edge_length, adjacency)


def global_to_local_direction(frame: FaceFrame, u: Direction) -> tuple[float, float, bool]:
    """Map a global direction into a face's local angles.

    Returns (theta_s, phi_s, visible); a direction is visible when its
    projection onto the outward normal is non-negative.
    """
    ul = frame.rotation.T @ u.unit_vector()
    theta_s = float(np.arccos(np.clip(ul[2], -1.0, 1.0)))
    phi_s = float(np.arctan2(ul[1], ul[0]))
    return theta_s, phi_s, bool(ul[0] >= 0.0)


def symmetric_indices(n: int) -> np.ndarray:
    """Element indices centered on the subarray center, e.g. -1.5..1.5 for n=4."""
    return np.arange(n) - (n - 1) / 2.0


def element_positions(frame: FaceFrame, sub) -> np.ndarray:
    """Global element positions of a subarray, row-major over (n, m).

    Each element sits at center + R @ [0, n*d1, m*d2]; the symmetric index
    set keeps the centroid of the block exactly at the subarray center.
    """
    if sub.d1 <= 0 or sub.d2 <= 0:
        raise ValueError("element spacings must be positive")
    idx = symmetric_indices(sub.n)
    nn, mm = np.meshgrid(idx, idx, indexing="ij")
    local = np.stack(
        [np.zeros(nn.size), nn.ravel() * sub.d1, mm.ravel() * sub.d2], axis=1
    )
    return np.asarray(sub.center, dtype=float) + local @ frame.rotation.T


def rotated_layout(layout: CubeLayout, q: np.ndarray) -> CubeLayout:
    """Rigidly rotate every face frame by the orthonormal matrix q."""
    q = np.asarray(q, dtype=float)
    faces = [
        FaceFrame(f.face_id, q @ f.rotation, q @ f.origin) for f in layout.faces
    ]
    return CubeLayout(faces, layout.edge_length, layout.adjacency)
