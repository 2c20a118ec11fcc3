# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled collapsed-state evolution kernel.

Same contract as :mod:`thqaoa._evolve_py` (see there for the layer
algebra); this version runs the layer loop as straight C over the class
arrays, which removes the per-layer temporary allocations of the numpy
fallback and dominates it on small spectra where call overhead matters.
"""

from libc.math cimport cos, sin

BACKEND_NAME = "compiled"


def evolve(
    double[::1] w not None,
    double[::1] q not None,
    double[::1] betas not None,
    double[::1] gammas not None,
    double complex[::1] v not None,
):
    """Apply all layers in place to the complex amplitude vector ``v``."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t r = betas.shape[0]
    cdef Py_ssize_t i, j
    cdef double beta, gamma
    cdef double complex rot, mix, overlap

    if w.shape[0] != n or q.shape[0] != n or gammas.shape[0] != r:
        raise ValueError("array length mismatch in evolve kernel")

    for j in range(r):
        beta = betas[j]
        gamma = gammas[j]
        overlap = 0.0
        for i in range(n):
            rot = cos(gamma * q[i]) + 1j * sin(gamma * q[i])
            v[i] = v[i] * rot
            overlap = overlap + w[i] * v[i]
        mix = (cos(beta) - 1.0) + 1j * sin(beta)
        for i in range(n):
            v[i] = v[i] + mix * overlap * w[i]
