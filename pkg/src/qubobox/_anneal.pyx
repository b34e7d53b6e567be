# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled single-bit-flip Metropolis chain. Mirrors _anneal_py.anneal_chain."""
from libc.math cimport exp


def anneal_chain(const double[:, ::1] Q, const double[::1] betas,
                 signed char[::1] state, const double[:, ::1] uniforms,
                 signed char[::1] best_state, double[::1] sweep_energy):
    cdef Py_ssize_t n = Q.shape[0]
    cdef Py_ssize_t sweeps = betas.shape[0]
    cdef Py_ssize_t s, i, j
    cdef double beta, de, delta, acc
    cdef double energy = 0.0
    cdef double best
    cdef double[::1] field
    import numpy as np
    field = np.zeros(n, dtype=np.float64)

    for i in range(n):
        acc = 0.0
        for j in range(n):
            if state[j]:
                acc = acc + Q[i, j]
        field[i] = acc
    for i in range(n):
        if state[i]:
            energy = energy + field[i]
    energy = 0.5 * energy
    best = energy
    best_state[:] = state

    for s in range(sweeps):
        beta = betas[s]
        for i in range(n):
            delta = 1.0 - 2.0 * state[i]
            de = delta * field[i] + 0.5 * Q[i, i]
            if de <= 0.0 or uniforms[s, i] < exp(-beta * de):
                state[i] = 1 - state[i]
                for j in range(n):
                    field[j] = field[j] + delta * Q[i, j]
                energy = energy + de
                if energy < best:
                    best = energy
                    best_state[:] = state
        sweep_energy[s] = energy
    return best
