# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled row-band kernels. See _fallback.py for the reference numerics."""

from libc.stdlib cimport free, malloc


def sobel_band(double[:, ::1] padded, double[:, ::1] gx, double[:, ::1] gy,
               Py_ssize_t r0, Py_ssize_t r1):
    cdef Py_ssize_t w = gx.shape[1]
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(r0, r1):
            for j in range(w):
                gx[i, j] = (padded[i, j + 2] + 2 * padded[i + 1, j + 2] + padded[i + 2, j + 2]) - \
                           (padded[i, j] + 2 * padded[i + 1, j] + padded[i + 2, j])
                gy[i, j] = (padded[i + 2, j] + 2 * padded[i + 2, j + 1] + padded[i + 2, j + 2]) - \
                           (padded[i, j] + 2 * padded[i, j + 1] + padded[i, j + 2])


def median_band(double[:, ::1] padded, double[:, ::1] out, Py_ssize_t radius,
                Py_ssize_t r0, Py_ssize_t r1):
    cdef Py_ssize_t w = out.shape[1]
    cdef Py_ssize_t k = 2 * radius + 1
    cdef Py_ssize_t n = k * k
    cdef Py_ssize_t i, j, di, dj, m, pos
    cdef double v
    cdef double* buf = <double*> malloc(n * sizeof(double))
    if buf == NULL:
        raise MemoryError
    try:
        with nogil:
            for i in range(r0, r1):
                for j in range(w):
                    m = 0
                    for di in range(k):
                        for dj in range(k):
                            # insertion into sorted prefix
                            v = padded[i + di, j + dj]
                            pos = m
                            while pos > 0 and buf[pos - 1] > v:
                                buf[pos] = buf[pos - 1]
                                pos -= 1
                            buf[pos] = v
                            m += 1
                    out[i, j] = buf[n // 2]
    finally:
        free(buf)
