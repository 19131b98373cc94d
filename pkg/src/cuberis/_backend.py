"""Kernel backend selection: compiled extension if built, numpy otherwise.

Both backends fill ``out[i] = sum_e w[e] * exp(j k0 dirs[i] . pos[e])`` and
are interchangeable; the choice is fixed at import time so repeated runs in
one environment stay bit-identical.
"""

from __future__ import annotations

import numpy as np


def phasor_sum_numpy(dirs: np.ndarray, pos: np.ndarray, weights: np.ndarray,
                     k0: float, out: np.ndarray) -> None:
    out[:] = np.exp(1j * k0 * (dirs @ pos.T)) @ weights


try:
    from cuberis._kernels import phasor_sum as phasor_sum_cython

    phasor_sum = phasor_sum_cython
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    phasor_sum_cython = None
    phasor_sum = phasor_sum_numpy
    BACKEND = "numpy"


def backend_name() -> str:
    return BACKEND
