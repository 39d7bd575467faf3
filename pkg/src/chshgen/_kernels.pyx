# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled hot loops for grid sweeps.

Must stay operation-for-operation identical to ``_kernels_py`` so both backends
produce bit-identical floats.
"""
import numpy as np


def scoring_mass(const double[:, :, ::1] cells, const unsigned char[:, ::1] gbits):
    """mass[q, k, j] = sum of cells[q, k, c] over c with gbits[j, c] == 1 (c ascending)."""
    cdef Py_ssize_t Q = cells.shape[0], K = cells.shape[1], C = cells.shape[2]
    cdef Py_ssize_t G = gbits.shape[0]
    cdef Py_ssize_t q, k, j, c
    cdef double acc
    if gbits.shape[1] != C:
        raise ValueError("cell count mismatch between distributions and tables")
    out = np.empty((Q, K, G), dtype=np.float64)
    cdef double[:, :, ::1] m = out
    with nogil:
        for q in range(Q):
            for k in range(K):
                for j in range(G):
                    acc = 0.0
                    for c in range(C):
                        if gbits[j, c]:
                            acc = acc + cells[q, k, c]
                    m[q, k, j] = acc
    return out


def win_surfaces(const double[:, :, ::1] mass, const unsigned char[::1] fbits):
    """out[k, j] = mean over the four questions of the winning mass."""
    cdef Py_ssize_t K = mass.shape[1], G = mass.shape[2]
    cdef Py_ssize_t k, j
    cdef double c0, c1, c2, c3
    cdef unsigned char f0, f1, f2, f3
    if mass.shape[0] != 4 or fbits.shape[0] != 4:
        raise ValueError("expected four questions")
    f0, f1, f2, f3 = fbits[0], fbits[1], fbits[2], fbits[3]
    out = np.empty((K, G), dtype=np.float64)
    cdef double[:, ::1] s = out
    with nogil:
        for k in range(K):
            for j in range(G):
                c0 = mass[0, k, j] if f0 else 1.0 - mass[0, k, j]
                c1 = mass[1, k, j] if f1 else 1.0 - mass[1, k, j]
                c2 = mass[2, k, j] if f2 else 1.0 - mass[2, k, j]
                c3 = mass[3, k, j] if f3 else 1.0 - mass[3, k, j]
                s[k, j] = (((c0 + c1) + c2) + c3) / 4.0
    return out


def max_ties(const double[:, ::1] surfaces, double tol):
    """Column maxima plus CSR lists of the rows within ``tol`` of each maximum."""
    cdef Py_ssize_t K = surfaces.shape[0], G = surfaces.shape[1]
    cdef Py_ssize_t k, j, n = 0
    maxes_arr = np.full(G, -np.inf)
    counts_arr = np.zeros(G + 1, dtype=np.int64)
    cdef double[::1] maxes = maxes_arr
    cdef long long[::1] offsets = counts_arr
    with nogil:
        for k in range(K):
            for j in range(G):
                if surfaces[k, j] > maxes[j]:
                    maxes[j] = surfaces[k, j]
        for k in range(K):
            for j in range(G):
                if surfaces[k, j] >= maxes[j] - tol:
                    offsets[j + 1] += 1
        for j in range(G):
            offsets[j + 1] += offsets[j]
    idx_arr = np.empty(counts_arr[G], dtype=np.int64)
    fill_arr = counts_arr[:G].copy()
    cdef long long[::1] idx = idx_arr
    cdef long long[::1] fill = fill_arr
    with nogil:
        for j in range(G):
            for k in range(K):
                if surfaces[k, j] >= maxes[j] - tol:
                    idx[fill[j]] = k
                    fill[j] += 1
    return maxes_arr, counts_arr, idx_arr
