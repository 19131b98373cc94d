# cython: boundscheck=False, wraparound=False, cdivision=True
"""Hot loop: weighted phasor sums over element positions per direction."""

from libc.math cimport cos, sin


def phasor_sum(double[:, ::1] dirs, double[:, ::1] pos,
               double complex[::1] weights, double k0,
               double complex[::1] out):
    """out[i] = sum_e weights[e] * exp(j k0 dirs[i] . pos[e])."""
    cdef Py_ssize_t n_dir = dirs.shape[0]
    cdef Py_ssize_t n_el = pos.shape[0]
    cdef Py_ssize_t i, e
    cdef double ux, uy, uz, ph, c, s, wr, wi, re, im
    with nogil:
        for i in range(n_dir):
            ux = dirs[i, 0]
            uy = dirs[i, 1]
            uz = dirs[i, 2]
            re = 0.0
            im = 0.0
            for e in range(n_el):
                ph = k0 * (ux * pos[e, 0] + uy * pos[e, 1] + uz * pos[e, 2])
                c = cos(ph)
                s = sin(ph)
                wr = weights[e].real
                wi = weights[e].imag
                re += wr * c - wi * s
                im += wr * s + wi * c
            out[i] = re + 1j * im
