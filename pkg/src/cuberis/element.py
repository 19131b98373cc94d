"""Cavity-model radiation pattern of a rectangular microstrip patch.

The patch sits in the face plane with its normal along the local x axis;
the two equivalent magnetic current slots are separated by ``l_e`` along
the local y axis and the radiating aperture width ``w`` runs along the
local z axis.  The field is evaluated in local angles (theta_s from local
z, phi_s from the normal) and peaks at broadside (90 deg, 0 deg).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class ElementModel:
    """Patch parameters; defaults match the 26 GHz reference design."""

    frequency: float = 26e9
    h: float = 0.787e-3
    w: float = 2.85e-3
    l_e: float = 2.85e-3
    e0: float = 1.0

    def __post_init__(self):
        if self.frequency <= 0:
            raise ValueError("frequency must be positive")
        if self.h <= 0 or self.w <= 0 or self.l_e <= 0 or self.e0 <= 0:
            raise ValueError("h, w, l_e and e0 must be positive")

    @property
    def k0(self) -> float:
        """Free-space wavenumber 2*pi*f/c."""
        return 2.0 * np.pi * self.frequency / SPEED_OF_LIGHT

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency


def _sinc(x):
    # sin(x)/x with the continuous extension sinc(0) = 1
    return np.sinc(np.asarray(x) / np.pi)


def element_field(model: ElementModel, theta_s, phi_s):
    """Real field amplitude of the patch at local angles (radians).

    E = e0 * sin(theta) * sinc(k0 h/2 sin(theta) cos(phi))
        * sinc(k0 w/2 cos(theta)) * cos(k0 l_e/2 sin(theta) sin(phi))

    Accepts scalars or arrays; total on the whole sphere (the caller masks
    directions behind the face).
    """
    theta_s = np.asarray(theta_s, dtype=float)
    phi_s = np.asarray(phi_s, dtype=float)
    st = np.sin(theta_s)
    x = (model.k0 * model.h / 2.0) * st * np.cos(phi_s)
    z = (model.k0 * model.w / 2.0) * np.cos(theta_s)
    slot = np.cos((model.k0 * model.l_e / 2.0) * st * np.sin(phi_s))
    out = model.e0 * st * _sinc(x) * _sinc(z) * slot
    return out if out.ndim else float(out)
